"""Statistical-theory multiplicity law for multi-exciton generation.

The probability of producing n carriers (n even, counting electrons and
holes) from one absorbed photon is the normalized phase-space weight

    ln w(n) = n ln g + (3n/2 - 1) ln(eps - n/2) - ln Gamma(3n/2)

up to an n-independent additive constant that cancels on normalization.
Here g is the dimensionless coupling and eps the photon-to-gap energy
ratio.  All arithmetic stays in log space: Gamma(3n/2) overflows double
precision past n ~ 110.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import DiscreteDistribution, ReducedStatParams, moments
from .errors import DegenerateChannel, DomainError, NoChannel, Unreachable

__all__ = [
    "log_stat_weight",
    "multiplicity_distribution",
    "exciton_yield",
    "CalibrationResult",
    "calibrate_coupling",
    "deviation_scan",
    "open_channels",
]


def open_channels(energy_ratio: float) -> np.ndarray:
    """Even n >= 2 with residual energy eps - n/2 strictly positive."""
    if energy_ratio <= 1:
        return np.empty(0, dtype=np.int64)
    # largest even n with n/2 < eps
    n_max = 2 * int(math.ceil(energy_ratio) - 1)
    if energy_ratio > math.floor(energy_ratio):  # non-integer eps
        n_max = 2 * int(math.floor(energy_ratio))
    return np.arange(2, n_max + 1, 2, dtype=np.int64)


def log_stat_weight(n: int, params: ReducedStatParams) -> float:
    """Log of the reduced statistical weight for the n-carrier channel."""
    if n < 2 or n % 2 != 0:
        raise DomainError(f"n must be an even integer >= 2, got {n}")
    residual = params.energy_ratio - n / 2.0
    if residual <= 0:
        raise DomainError(
            f"channel n={n} closed: residual energy {residual} not positive")
    k = 3 * n // 2
    return n * math.log(params.coupling) + (k - 1) * math.log(residual) - float(gammaln(k))


def multiplicity_distribution(params: ReducedStatParams) -> DiscreteDistribution:
    """Normalized multiplicity law over all energetically open channels."""
    support = open_channels(params.energy_ratio)
    if len(support) == 0:
        raise NoChannel(
            f"energy_ratio {params.energy_ratio} opens no channel (need > 1)")
    logw = np.array([log_stat_weight(int(n), params) for n in support])
    return DiscreteDistribution.from_log_weights(support, logw)


def exciton_yield(d: DiscreteDistribution) -> float:
    """Mean exciton count: half the mean carrier multiplicity."""
    return d.mean() / 2.0


@dataclass(frozen=True)
class CalibrationResult:
    coupling: float
    achieved_mean: float
    iterations: int
    bracket: tuple


def _mean_at(log_g: float, energy_ratio: float) -> float:
    params = ReducedStatParams(coupling=math.exp(log_g), energy_ratio=energy_ratio)
    return multiplicity_distribution(params).mean()


def calibrate_coupling(
    energy_ratio: float,
    target_mean: float,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> CalibrationResult:
    """Find the coupling g whose multiplicity law has the requested mean.

    The mean is strictly increasing in g (high-n channels gain weight), so
    a bracket found by doubling on ln g makes bisection safe.
    """
    channels = open_channels(energy_ratio)
    if len(channels) < 2:
        raise DegenerateChannel(
            f"energy_ratio {energy_ratio} opens {len(channels)} channel(s); "
            "the mean is constant and cannot be calibrated")
    n_max = int(channels[-1])
    if not (2.0 < target_mean < n_max):
        raise Unreachable(
            f"target mean {target_mean} outside the reachable range (2, {n_max})")

    lo = hi = 0.0
    step = 1.0
    iterations = 0
    while _mean_at(lo, energy_ratio) >= target_mean:
        lo -= step
        step *= 2.0
        iterations += 1
    step = 1.0
    while _mean_at(hi, energy_ratio) <= target_mean:
        hi += step
        step *= 2.0
        iterations += 1
    bracket = (math.exp(lo), math.exp(hi))

    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        m = _mean_at(mid, energy_ratio)
        iterations += 1
        if abs(m - target_mean) <= tol:
            break
        if m < target_mean:
            lo = mid
        else:
            hi = mid
    else:
        raise Unreachable(
            f"bisection failed to reach mean {target_mean} within {max_iter} iterations")
    return CalibrationResult(
        coupling=math.exp(mid),
        achieved_mean=_mean_at(mid, energy_ratio),
        iterations=iterations,
        bracket=bracket,
    )


def deviation_scan(coupling: float, energy_ratios) -> list:
    """Poisson-deviation mean^2 + mean - <n^2> at each energy ratio."""
    out = []
    for eps in energy_ratios:
        params = ReducedStatParams(coupling=coupling, energy_ratio=eps)
        d = multiplicity_distribution(params)
        out.append((float(eps), moments(d).poisson_deviation))
    return out
