"""
Closed-form bound expressions for reporting.

The logarithmic bounds are evaluated in 60-digit decimal arithmetic and
rounded to 40 significant digits. Hidden asymptotic constants are not known, so
these values are tabulated next to the oracle's m*, never asserted against it.
"""

from decimal import Decimal, localcontext
from fractions import Fraction

from ..core.rational import as_time
from ..schedulers.hybrid import HybridConfig, PoolConstants

WORKING_PRECISION = 60
REPORTED_DIGITS = 40

UNBOUNDED = Decimal("Infinity")


def _ln(value: Fraction) -> Decimal:
    return (Decimal(value.numerator) / Decimal(value.denominator)).ln()


def _report(value: Decimal) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = REPORTED_DIGITS
        return +value


def _open_unit(name: str, value: Fraction) -> Fraction:
    value = as_time(value)
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value


def implied_lower_bound(mu: int, beta, alpha) -> Decimal:
    """mu / log_{1/(1-alpha)}(1/beta); Infinity as beta approaches 1."""
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    beta = _open_unit("beta", beta)
    alpha = _open_unit("alpha", alpha)
    with localcontext() as ctx:
        ctx.prec = WORKING_PRECISION
        denominator = _ln(1 / beta)
        if denominator == 0:
            return UNBOUNDED
        value = Decimal(mu) * _ln(1 / (1 - alpha)) / denominator
    return _report(value)


def basic_lower_bound(mu: int, beta) -> Decimal:
    """mu / log2(1/beta), the bound before the tightness refinement."""
    return implied_lower_bound(mu, beta, Fraction(1, 2))


def sjf_machine_bound(l1, l2) -> Decimal:
    """log_{1/l2}(5 * l2 / l1): SJF's machine factor on laxities in [l1, l2]."""
    l1, l2 = as_time(l1), as_time(l2)
    if not 0 < l1 <= l2 <= Fraction(1, 2):
        raise ValueError(f"need 0 < l1 <= l2 <= 1/2, got l1={l1}, l2={l2}")
    with localcontext() as ctx:
        ctx.prec = WORKING_PRECISION
        value = _ln(5 * l2 / l1) / _ln(1 / l2)
    return _report(value)


def edf_machine_bound(rho) -> Fraction:
    """1/rho^2: EDF's machine factor when every relative laxity is at least rho."""
    rho = as_time(rho)
    if not 0 < rho <= 1:
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    return 1 / rho**2


def loose_edf_machine_bound(alpha) -> Fraction:
    """1/(1-alpha)^2: EDF's machine factor on alpha-loose jobs."""
    alpha = as_time(alpha)
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    return 1 / (1 - alpha) ** 2


def hybrid_machine_budget(m_star: int, constants: PoolConstants = PoolConstants()) -> int:
    return HybridConfig(m_star=m_star, **constants.model_dump()).total_machines
