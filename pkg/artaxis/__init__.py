import os

# sweep workers own the parallelism
os.environ.setdefault("OMP_NUM_THREADS", "1")

__version__ = '1.0.0'
