"""Parameter checks shared by the public modules."""
import numbers

import numpy as np


def within_limits(val, lower_bound=None, upper_bound=None,
                  inclusive_lower=False, inclusive_upper=False):
    """Elementwise test of ``lower_bound < val < upper_bound``.

    Parameters
    ----------
    val : float or array_like
    lower_bound : float, optional
        No lower limit if None.
    upper_bound : float, optional
        No upper limit if None.
    inclusive_lower : bool, default False
        Accept values equal to `lower_bound`.
    inclusive_upper : bool, default False
        Accept values equal to `upper_bound`.

    Returns
    -------
    bool or ndarray of bool
        False wherever `val` is NaN.
    """
    val = np.asarray(val, dtype=float)
    inside = ~np.isnan(val)
    if lower_bound is not None:
        inside &= (val > lower_bound) | (inclusive_lower
                                         & (val == lower_bound))
    if upper_bound is not None:
        inside &= (val < upper_bound) | (inclusive_upper
                                         & (val == upper_bound))
    return inside


def require_limits(name, val, lower_bound=None, upper_bound=None,
                   inclusive_lower=False, inclusive_upper=False):
    """Raise ValueError unless every value of `val` is within limits.

    Parameters are the same as :py:func:`within_limits`, with `name`
    used in the error message.

    Returns
    -------
    val
        The input, unchanged.

    Raises
    ------
    ValueError
        If any value of `val` is outside the limits or is NaN.
    """
    if not np.all(within_limits(val, lower_bound, upper_bound,
                                inclusive_lower, inclusive_upper)):
        left = '[' if inclusive_lower else '('
        right = ']' if inclusive_upper else ')'
        lower = '-inf' if lower_bound is None else lower_bound
        upper = 'inf' if upper_bound is None else upper_bound
        raise ValueError(
            f"{name}={val!r} is outside the admissible range "
            f"{left}{lower}, {upper}{right}"
        )
    return val


def require_integer(name, val, minimum):
    """Raise ValueError unless `val` is an integer >= `minimum`."""
    if isinstance(val, bool) or not isinstance(val, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {val!r}")
    if val < minimum:
        raise ValueError(f"{name} set to {val}, must be at least {minimum}")
    return int(val)
