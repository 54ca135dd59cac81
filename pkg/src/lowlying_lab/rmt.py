"""Haar random matrices from the classical compact groups and their zero statistics.

Dictionary between families and ensembles: a matrix of size M plays the role of
a form whose analytic conductor has log(q^r) = 2 pi (mean zero spacing 1 after
scaling). An eigenphase theta in (-pi, pi] becomes the zero x = theta M / (2 pi).
The forced eigenvalue 1 of odd orthogonal matrices is the trivial zero x_0 = 0.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .kernels import SymmetryClass
from .testfn import TestFunction

logger = logging.getLogger(__name__)

PAIRING_TOL = 1e-6
MIN_SAMPLES = 100
MAX_MOMENT = 6


class Statistic(str, Enum):
    D1 = "d1"
    D2 = "d2"


class TwoLevelMethod(str, Enum):
    DIRECT = "direct"
    VIA_IDENTITY = "via_identity"


def _haar_special_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs[None, :]
    if np.linalg.det(q) < 0:
        q[0, :] *= -1.0
    return q


def _quaternion_dual(v: np.ndarray) -> np.ndarray:
    """[x; y] -> [-conj(y); conj(x)], the quaternionic partner of a column."""
    half = v.shape[0] // 2
    return np.concatenate([-np.conj(v[half:]), np.conj(v[:half])])


def _haar_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar USp(2n) by Gram-Schmidt on Gaussian quaternion columns.

    Column j of the quaternion matrix is stored as the complex pair
    [z1; -conj(z2)], its partner column being [z2; conj(z1)].
    """
    z1 = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    z2 = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    columns = np.vstack([z1, -np.conj(z2)])
    basis = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        v = columns[:, j].copy()
        done = np.hstack([basis[:, :j], basis[:, n : n + j]])
        # Two passes keep the basis orthonormal to rounding error.
        for _ in range(2):
            v -= done @ (done.conj().T @ v)
        v /= np.linalg.norm(v)
        basis[:, j] = v
        basis[:, n + j] = _quaternion_dual(v)
    return basis


def sample_matrix(
    cls: SymmetryClass | str, N: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw one Haar matrix from the group attached to a symmetry class.

    Args:
        cls: SOeven -> SO(2N), SOodd -> SO(2N+1), O -> fair mixture of both,
            Sp -> USp(2N).
        N: Rank parameter, >= 2.
        rng: Random generator.

    Returns:
        A real orthogonal or complex unitary symplectic matrix.
    """
    cls = SymmetryClass(cls)
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if cls is SymmetryClass.O:
        cls = SymmetryClass.SO_EVEN if rng.random() < 0.5 else SymmetryClass.SO_ODD
    if cls is SymmetryClass.SO_EVEN:
        return _haar_special_orthogonal(2 * N, rng)
    if cls is SymmetryClass.SO_ODD:
        return _haar_special_orthogonal(2 * N + 1, rng)
    return _haar_symplectic(N, rng)


def symplectic_form(n: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]] of size 2n."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class ZeroSample:
    """Scaled eigenphases of one matrix, symmetric under negation.

    Attributes:
        cls: Group of the matrix (O samples are resolved to SOeven/SOodd).
        dim: Matrix size M.
        zeros: Scaled zeros sorted increasingly.
        index: Signed index j of each zero; 0 marks the trivial zero.
    """

    cls: SymmetryClass
    dim: int
    zeros: np.ndarray
    index: np.ndarray

    @property
    def has_trivial_zero(self) -> bool:
        return bool(np.any(self.index == 0))


def eigenphases_to_zeros(u: np.ndarray, cls: SymmetryClass | str) -> ZeroSample:
    """Scaled, sign-paired eigenphases of a unitary matrix.

    Raises:
        RuntimeError: If the eigenphases are not symmetric to within 1e-6.
    """
    cls = SymmetryClass(cls)
    u = np.asarray(u)
    dim = u.shape[0]
    if cls is SymmetryClass.O:
        cls = SymmetryClass.SO_ODD if dim % 2 else SymmetryClass.SO_EVEN
    if (dim % 2 == 1) != (cls is SymmetryClass.SO_ODD):
        raise ValueError(f"matrix size {dim} does not fit class {cls.value}")

    angles = np.sort(np.angle(np.linalg.eigvals(u)))
    mismatch = float(np.max(np.abs(angles + angles[::-1])))
    if mismatch > PAIRING_TOL:
        raise RuntimeError(
            f"eigenphases do not pair under negation (gap {mismatch:.3g})"
        )
    # Exact antisymmetry; the middle angle of an odd matrix becomes exactly 0.
    paired = 0.5 * (angles - angles[::-1])
    half = dim // 2
    positions = np.arange(dim)
    if dim % 2:
        index = positions - half
    else:
        index = np.where(positions < half, positions - half, positions - half + 1)
    zeros = paired * dim / (2.0 * np.pi)
    return ZeroSample(cls, dim, zeros, index)


def one_level_stat(zs: ZeroSample, tf: TestFunction) -> float:
    """D_1: sum of Phi over all zeros, the trivial one included."""
    return float(np.sum(tf.phi(zs.zeros)))


def two_level_stat(
    zs: ZeroSample,
    tf1: TestFunction,
    tf2: TestFunction,
    method: TwoLevelMethod | str = TwoLevelMethod.DIRECT,
) -> float:
    """D_2: sum of Phi1(x_j1) Phi2(x_j2) over index pairs with j1 != +-j2."""
    p1 = np.asarray(tf1.phi(zs.zeros))
    p2 = np.asarray(tf2.phi(zs.zeros))
    if TwoLevelMethod(method) is TwoLevelMethod.DIRECT:
        level = np.abs(zs.index)
        keep = level[:, None] != level[None, :]
        return float(np.sum(np.outer(p1, p2)[keep]))
    value = p1.sum() * p2.sum() - 2.0 * np.dot(p1, p2)
    if zs.has_trivial_zero:
        value += tf1.phi_at_zero * tf2.phi_at_zero
    return float(value)


@dataclass(frozen=True)
class MonteCarloReport:
    """Summary of one statistic over independent samples.

    ``moments`` holds centered moments of orders 2..6 and ``stderr`` the
    standard errors of the mean, the variance and each moment.
    """

    statistic: str
    samples: int
    mean: float
    variance: float
    moments: dict[int, float] = field(default_factory=dict)
    stderr: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_values(cls, statistic: str, values: np.ndarray) -> MonteCarloReport:
        values = np.asarray(values, dtype=float)
        n = values.size
        mean = float(values.mean())
        centered = values - mean
        powers = {k: centered**k for k in range(2, MAX_MOMENT + 1)}
        moments = {k: float(p.mean()) for k, p in powers.items()}
        variance = float(values.var(ddof=1))
        root_n = np.sqrt(n)
        m2, m4 = moments[2], moments[4]
        stderr = {
            "mean": float(np.sqrt(variance) / root_n),
            "variance": float(np.sqrt(max(m4 - m2 * m2, 0.0) / n)),
        }
        for k, p in powers.items():
            stderr[f"moment{k}"] = float(p.std(ddof=1) / root_n)
        return cls(statistic, n, mean, variance, moments, stderr)


@dataclass(frozen=True)
class _WorkerTask:
    cls: SymmetryClass
    N: int
    count: int
    tf1: TestFunction
    tf2: TestFunction
    statistics: tuple[Statistic, ...]
    seed: np.random.SeedSequence


def _simulate(task: _WorkerTask) -> dict[Statistic, np.ndarray]:
    rng = np.random.Generator(np.random.Philox(task.seed))
    out = {stat: np.empty(task.count) for stat in task.statistics}
    for i in range(task.count):
        u = sample_matrix(task.cls, task.N, rng)
        zs = eigenphases_to_zeros(u, task.cls)
        for stat in task.statistics:
            if stat is Statistic.D1:
                out[stat][i] = one_level_stat(zs, task.tf1)
            else:
                out[stat][i] = two_level_stat(
                    zs, task.tf1, task.tf2, TwoLevelMethod.VIA_IDENTITY
                )
    return out


def split_counts(samples: int, workers: int) -> list[int]:
    """Deterministic share of samples per worker."""
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def monte_carlo(
    cls: SymmetryClass | str,
    N: int,
    samples: int,
    tf: TestFunction | tuple[TestFunction, TestFunction],
    statistics: Iterable[Statistic | str] = (Statistic.D1,),
    seed: int = 0,
    workers: int = 1,
) -> dict[str, MonteCarloReport]:
    """Estimate one- and two-level statistics by Haar sampling.

    Each worker draws from its own Philox stream spawned from ``seed``; values
    are concatenated in worker order, so results depend only on
    ``(seed, workers)``.

    Returns:
        Map statistic name -> report.
    """
    cls = SymmetryClass(cls)
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}, got {samples}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    tf1, tf2 = tf if isinstance(tf, tuple) else (tf, tf)
    stats = tuple(dict.fromkeys(Statistic(s) for s in statistics))
    seeds = np.random.SeedSequence(seed).spawn(workers)
    tasks = [
        _WorkerTask(cls, N, count, tf1, tf2, stats, ss)
        for count, ss in zip(split_counts(samples, workers), seeds)
    ]
    logger.debug(
        "monte carlo %s N=%d samples=%d workers=%d", cls.value, N, samples, workers
    )
    if workers == 1:
        parts = [_simulate(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate, tasks))
    reports = {}
    for stat in stats:
        values = np.concatenate([part[stat] for part in parts])
        reports[stat.value] = MonteCarloReport.from_values(stat.value, values)
    return reports
