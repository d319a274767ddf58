import math
import os


def rank0_print(*args):
    if int(os.getenv("LOCAL_PROCESS_RANK", os.getenv("LOCAL_RANK", 0))) == 0:
        print(*args)


def smart_float(num):
    """Format a float for reports: `repr` precision, but integers stay short."""
    if isinstance(num, float) and math.isfinite(num) and num.is_integer() and abs(num) < 1e15:
        return f'{num:.1f}'
    return repr(float(num)) if isinstance(num, (int, float)) else str(num)


def within_ulps(lhs, rhs, ulps=4):
    # lhs <= rhs up to `ulps` units in the last place of the larger magnitude
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return lhs <= rhs + ulps * math.ulp(scale)


def comment_header(entries=()):
    """`# artaxis <version>` followed by `# key = value` lines, one per entry."""
    from artaxis.util.constants import ARTIFACT_NAME, ARTIFACT_VERSION
    lines = [f'# {ARTIFACT_NAME} {ARTIFACT_VERSION}']
    items = entries.items() if isinstance(entries, dict) else entries
    for key, value in items:
        lines.append(f'# {key} = {value}')
    return '\n'.join(lines) + '\n'
