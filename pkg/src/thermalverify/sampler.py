"""Monte-Carlo execution of the single-setting estimation protocol.

The simulator never touches statevectors: under independent phase-flip noise
the outcome of measuring a signed Pauli word depends on the error pattern
only through the parity of its overlap with the word's X/Y sites, so each
sample costs O(n). Samples are drawn in fixed-size chunks from per-worker
child streams of one seed sequence, which makes runs reproducible for a
given (seed, worker count) regardless of scheduling.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .pauli import PauliString
from .thermal import BoundReport, ThermalParams, error_bounds, sample_size

_CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class ProtocolConfig:
    """Accuracy target, failure probability, sample budget, and seed.

    n_samples = None derives the budget from (epsilon, delta).
    """

    epsilon: float
    delta: float
    n_samples: int | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"need 0 < epsilon <= 1, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"need 0 < delta < 1, got {self.delta}")
        if self.n_samples is not None and self.n_samples < 1:
            raise ValueError(f"need n_samples >= 1, got {self.n_samples}")
        if self.workers < 1:
            raise ValueError(f"need workers >= 1, got {self.workers}")

    def resolved_samples(self) -> int:
        if self.n_samples is not None:
            return self.n_samples
        return sample_size(self.epsilon, self.delta)


@dataclass(frozen=True)
class VerificationReport:
    """Record of one protocol run.

    beta_used is simulation-side ground truth: it exists so tests can compare
    against exact values, and no bound-checking code reads it.
    """

    f_est: float
    n_samples: int
    plus_count: int
    minus_count: int
    setting: str
    beta_used: ThermalParams
    bound_report: BoundReport | None
    epsilon: float
    delta: float
    seed: int
    workers: int

    def __post_init__(self):
        if self.plus_count + self.minus_count != self.n_samples:
            raise ValueError("outcome counts do not add up to the sample count")
        expected = (self.plus_count - self.minus_count) / self.n_samples
        if abs(self.f_est - expected) > 1e-15:
            raise ValueError("f_est does not match the outcome counts")

    def to_dict(self) -> dict:
        bounds = None
        if self.bound_report is not None:
            bounds = {
                "fine_bound": self.bound_report.fine_bound,
                "coarse_bound": self.bound_report.coarse_bound,
                "union_bound": self.bound_report.union_bound,
                "leading_coefficient": self.bound_report.leading_coefficient,
            }
        return {
            "f_est": self.f_est,
            "n_samples": self.n_samples,
            "plus_count": self.plus_count,
            "minus_count": self.minus_count,
            "setting": self.setting,
            "beta_used": self.beta_used.to_dict(),
            "bound_report": bounds,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "seed": self.seed,
            "workers": self.workers,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def sample_error_pattern(n: int, p_flip: float, rng: np.random.Generator) -> int:
    """One n-bit error pattern, each bit set independently with p_flip.

    Bit i-1 of the returned integer is the error on site i.
    """
    if not 0.0 <= p_flip <= 0.5:
        raise ValueError(f"need 0 <= p_flip <= 1/2, got {p_flip}")
    bits = rng.random(n) < p_flip
    mask = 0
    for pos in np.flatnonzero(bits):
        mask |= 1 << int(pos)
    return mask


def measure_outcome(pattern: int, setting: PauliString) -> int:
    """Outcome of measuring `setting` after the errors in `pattern`:
    (-1)^(overlap of the pattern with the setting's X/Y sites)."""
    if pattern < 0 or pattern >> setting.n:
        raise ValueError(f"pattern {bin(pattern)} does not fit {setting.n} sites")
    return -1 if (pattern & setting.x_mask).bit_count() & 1 else 1


def _count_minus(n: int, columns: np.ndarray, p: float, count: int,
                 child: np.random.SeedSequence) -> int:
    """Number of -1 outcomes among `count` samples from one child stream."""
    rng = np.random.default_rng(child)
    minus = 0
    done = 0
    while done < count:
        rows = min(_CHUNK_ROWS, count - done)
        errors = rng.random((rows, n)) < p
        overlap = errors[:, columns].sum(axis=1)
        minus += int(np.count_nonzero(overlap & 1))
        done += rows
    return minus


def run_protocol(target, setting: PauliString, beta, config: ProtocolConfig) -> VerificationReport:
    """Run the estimation protocol: draw error patterns, convert to outcomes
    of `setting`, and aggregate the empirical mean with its error budget.

    The parity model is exact when `setting` stabilizes the noiseless target;
    standard callers obtain it from stabilizer_product (graphs) or
    optimal_setting (restricted hypergraphs).
    """
    if not isinstance(setting, PauliString):
        raise ValueError(
            "setting must be a signed Pauli word; reduce a StabilizerProduct "
            "with try_to_pauli first"
        )
    n = target.n
    if setting.n != n:
        raise ValueError(f"setting acts on {setting.n} sites but the state has {n}")
    params = beta if isinstance(beta, ThermalParams) else ThermalParams(beta)
    p = params.p_flip
    total = config.resolved_samples()
    columns = np.array(setting.xy_sites(), dtype=np.intp) - 1

    base = total // config.workers
    counts = [base + (1 if w < total % config.workers else 0)
              for w in range(config.workers)]
    children = np.random.SeedSequence(config.seed).spawn(config.workers)
    if config.workers == 1:
        minus = _count_minus(n, columns, p, counts[0], children[0])
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_count_minus, n, columns, p, c, child)
                       for c, child in zip(counts, children)]
            minus = sum(f.result() for f in futures)
    plus = total - minus
    bounds = None
    if n % 2 == 0 and n >= 4:
        bounds = error_bounds(n, params.beta, config.epsilon, wt=setting.xy_support)
    return VerificationReport(
        f_est=(plus - minus) / total,
        n_samples=total,
        plus_count=plus,
        minus_count=minus,
        setting=str(setting),
        beta_used=params,
        bound_report=bounds,
        epsilon=config.epsilon,
        delta=config.delta,
        seed=config.seed,
        workers=config.workers,
    )


def check_error_bound(report: VerificationReport, true_fidelity: float) -> bool:
    """Did the run satisfy |fidelity - f_est| <= fine bound?

    The fine bound already includes the statistical epsilon, so with the
    prescribed sample budget this holds with probability at least 1 - delta.
    """
    if report.bound_report is None:
        raise ValueError("report carries no bound evaluations (n odd or < 4)")
    return abs(true_fidelity - report.f_est) <= report.bound_report.fine_bound
