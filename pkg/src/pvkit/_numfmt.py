import math


def format_float(x: float) -> str:
    """17 significant digits; signed zero collapses to ``0``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, ".17g")
