"""Closed-form thermal quantities: flip probability, fidelity, setting
expectations, error bounds, sample sizes, and temperature inversion.

Conventions. k_B = 1, so beta = 1/T; the zero-temperature limit is the
sentinel beta = math.inf, under which every expression below is exact
(exp(-2*beta) evaluates to 0.0). Writing x = exp(-2*beta):

    flip probability      p = x / (1 + x)
    fidelity              F = 1 / (1 + x)^n
    weight-wt expectation E = sum_m bracket(n, wt, m) x^m / (1 + x)^n
    half-weight case      E = (1 - x^2)^(n/2) / (1 + x)^n

The bracket coefficients are exact integers (identities module); they are
combined with the x^m weights in log space, term by compensated term, so the
alternating-sign sum stays accurate up to n = 1024 where the coefficients
reach ~2^n and naive evaluation would lose every significant digit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .identities import signed_pattern_count

MAX_GENERAL_N = 1024


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"inverse temperature must be >= 0 (inf means T=0), got {beta}")
    return beta


def beta_from_temperature(temperature: float) -> float:
    """Map a temperature (k_B = 1) to beta; T = 0 maps to the inf sentinel."""
    temperature = float(temperature)
    if math.isnan(temperature) or temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return math.inf
    return 1.0 / temperature


@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature and its derived phase-flip probability."""

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _check_beta(self.beta))

    @classmethod
    def from_temperature(cls, temperature: float) -> "ThermalParams":
        return cls(beta_from_temperature(temperature))

    @property
    def p_flip(self) -> float:
        return flip_probability(self.beta)

    @property
    def temperature(self) -> float:
        if math.isinf(self.beta):
            return 0.0
        if self.beta == 0.0:
            return math.inf
        return 1.0 / self.beta

    def to_dict(self) -> dict:
        return {
            "beta": "infinity" if math.isinf(self.beta) else self.beta,
            "p_flip": self.p_flip,
        }


@dataclass(frozen=True)
class BoundReport:
    """Error-budget summary for a weight-wt single-setting estimate.

    fine_bound is the temperature-dependent guarantee (deviation term plus
    the statistical epsilon), coarse_bound its temperature-free relaxation
    2/n + epsilon; fine_bound <= coarse_bound for even n >= 4.
    """

    fine_bound: float
    coarse_bound: float
    union_bound: float
    leading_coefficient: int


def flip_probability(beta: float) -> float:
    """Phase-flip probability exp(-2b)/(1 + exp(-2b)); in [0, 1/2], with the
    endpoints at beta = inf and beta = 0."""
    beta = _check_beta(beta)
    x = math.exp(-2.0 * beta)
    return x / (1.0 + x)


def fidelity(n: int, beta: float) -> float:
    """Overlap of the thermal state with the ideal state: (1 - p)^n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    beta = _check_beta(beta)
    x = math.exp(-2.0 * beta)
    return math.exp(-n * math.log1p(x))


def setting_expectation(n: int, wt: int, beta: float) -> float:
    """Infinite-sample mean of a weight-wt setting on the thermal state.

    Depends on the selector only through its Hamming weight. Each term
    bracket * x^m / (1+x)^n has magnitude at most the binomial pmf of m
    errors, so the compensated log-space sum carries no cancellation
    beyond what is inherent in the value itself.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > MAX_GENERAL_N:
        raise ValueError(f"general expectation supports n <= {MAX_GENERAL_N}, got {n}")
    if not 0 <= wt <= n:
        raise ValueError(f"need 0 <= wt <= n, got wt={wt}, n={n}")
    beta = _check_beta(beta)
    if math.isinf(beta) or wt == 0:
        return 1.0
    x = math.exp(-2.0 * beta)
    log_denom = n * math.log1p(x)
    terms = [math.exp(-log_denom)]  # m = 0
    for m in range(1, n + 1):
        coeff = signed_pattern_count(n, wt, m)
        if coeff == 0:
            continue
        magnitude = math.exp(math.log(abs(coeff)) - 2.0 * m * beta - log_denom)
        terms.append(math.copysign(magnitude, coeff))
    return math.fsum(terms)


def half_weight_expectation(n: int, beta: float) -> float:
    """Closed form of setting_expectation at wt = n/2: (1-x^2)^(n/2)/(1+x)^n."""
    if n < 1 or n % 2:
        raise ValueError(f"need even n >= 2, got {n}")
    beta = _check_beta(beta)
    if math.isinf(beta):
        return 1.0
    x = math.exp(-2.0 * beta)
    if x == 1.0:
        return 0.0
    return math.exp((n // 2) * math.log1p(-x * x) - n * math.log1p(x))


def union_bound(n: int, beta: float) -> float:
    """All-settings union lower bound 1 - n*p; valid but loose, may go negative."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return 1.0 - n * flip_probability(beta)


def deviation_leading_order(n: int, wt: int, beta: float) -> float:
    """Small-x leading deviation |n - 2*wt| * x / (1+x)^n of the estimate
    from the fidelity; vanishes at the half-weight choice."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= wt <= n:
        raise ValueError(f"need 0 <= wt <= n, got wt={wt}, n={n}")
    beta = _check_beta(beta)
    coeff = abs(n - 2 * wt)
    if coeff == 0 or math.isinf(beta):
        return 0.0
    x = math.exp(-2.0 * beta)
    return math.exp(math.log(coeff) - 2.0 * beta - n * math.log1p(x))


def error_bounds(n: int, beta: float, epsilon: float, wt: int | None = None) -> BoundReport:
    """Both guarantees for the half-weight protocol on even n >= 4.

    fine_bound = n*x^2 / (2*(1+x)^n) + epsilon, coarse_bound = 2/n + epsilon.
    The leading coefficient |n - 2*wt| is reported for the supplied setting
    weight (default n/2, where it vanishes).
    """
    if n < 4 or n % 2:
        raise ValueError(f"bounds require even n >= 4, got {n}")
    beta = _check_beta(beta)
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"need 0 <= epsilon < 1, got {epsilon}")
    if wt is None:
        wt = n // 2
    if not 0 <= wt <= n:
        raise ValueError(f"need 0 <= wt <= n, got wt={wt}, n={n}")
    if math.isinf(beta):
        fine = epsilon
    else:
        x = math.exp(-2.0 * beta)
        fine = math.exp(math.log(n / 2.0) - 4.0 * beta - n * math.log1p(x)) + epsilon
    coarse = 2.0 / n + epsilon
    if fine > coarse + 1e-15:
        raise RuntimeError(
            f"fine bound {fine} exceeded coarse bound {coarse} at n={n}, beta={beta}"
        )
    return BoundReport(fine, coarse, union_bound(n, beta), abs(n - 2 * wt))


def sample_size(epsilon: float, delta: float) -> int:
    """Measurement count ceil(2/eps^2 * ln(2/delta)) for accuracy eps with
    failure probability delta (natural logarithm)."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"need 0 < epsilon <= 1, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"need 0 < delta < 1, got {delta}")
    return math.ceil(2.0 / (epsilon * epsilon) * math.log(2.0 / delta))


def invert_temperature(n: int, observed: float, from_fidelity: bool = False,
                       tol: float = 1e-10) -> float:
    """Inverse temperature at which the protocol's infinite-sample estimate
    equals `observed` (default), or at which the fidelity does.

    The default inverts the half-weight expectation, i.e. the quantity the
    estimator actually converges to; pass from_fidelity=True to invert the
    fidelity instead. observed = 1 returns the T = 0 sentinel (math.inf).
    """
    observed = float(observed)
    if not 0.0 < observed <= 1.0:
        raise ValueError(f"observed value must be in (0, 1], got {observed}")
    if observed == 1.0:
        return math.inf
    if from_fidelity:
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        floor = fidelity(n, 0.0)
        if observed < floor:
            raise ValueError(
                f"fidelity {observed} below the infinite-temperature value {floor}"
            )
        x = math.expm1(-math.log(observed) / n)  # observed^(-1/n) - 1
        if x == 0.0:
            return math.inf
        return -math.log(x) / 2.0
    if n < 2 or n % 2:
        raise ValueError(f"expectation inversion requires even n >= 2, got {n}")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if half_weight_expectation(n, hi) >= observed:
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"failed to bracket observed value {observed}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if half_weight_expectation(n, mid) < observed:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
