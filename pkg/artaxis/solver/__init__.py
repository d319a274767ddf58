from .state import SimState, NormSeries, Verdict, VerdictKind
from .stepper import step, adapt_dt
from .callback import SimulationCallback, NormMonitorCallback, SnapshotCallback, GronwallCallback, gronwall_check
from .runner import RunnerArguments, SimulationRunner, run_simulation
