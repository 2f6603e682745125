"""Frequency sets, frame/Bessel bounds, and shear transport of spectra.

Frame bounds of a discretized measure are the extremal eigenvalues of the
atom-indexed Hermitian square of the synthesis matrix. Everything is
deterministic: fixed eigensolvers, fixed start vectors, fixed tie-breaks.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AtomBudgetExceeded,
    EigenBudgetExceeded,
    EmptyFrequencySet,
    HadamardCheckFailed,
    PoolExhausted,
    SingularA4,
    SizeMismatch,
    ZeroNormInput,
)
from .measures import AtomicMeasure, DigitSystem, as_float_arrays, atom_budget

DEFAULT_EIGEN_BUDGET = 4096
# Above this atom count the extremal eigenvalues come from deterministic
# power iteration instead of a full eigendecomposition.
_DENSE_EIG_LIMIT = 1024
_POWER_TOL = 1e-10
_POWER_MAXIT = 100_000
_DISTINCT_RESOLUTION = 1e-12


@dataclass(frozen=True)
class FrequencySet:
    """A finite list of real frequency vectors with a provenance tag."""

    dim: int
    freqs: tuple
    provenance: str = "user"

    def __post_init__(self):
        freqs = tuple(tuple(float(x) for x in f) for f in self.freqs)
        object.__setattr__(self, "freqs", freqs)
        if any(len(f) != self.dim for f in freqs):
            raise SizeMismatch("frequency dimension mismatch")
        seen = {}
        for f in freqs:
            key = tuple(round(x / _DISTINCT_RESOLUTION) for x in f)
            if key in seen:
                raise ValueError(f"frequencies {seen[key]} and {f} coincide within resolution")
            seen[key] = f

    @classmethod
    def from_scalars(cls, values, provenance: str = "user") -> "FrequencySet":
        return cls(dim=1, freqs=tuple((float(v),) for v in values), provenance=provenance)

    def __len__(self) -> int:
        return len(self.freqs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.freqs, dtype=float).reshape(len(self.freqs), self.dim)


@dataclass(frozen=True)
class FrameReport:
    """Extremal frame bounds of an exponential system on a discrete measure."""

    lower: float
    upper: float
    ratio: float
    rank: int
    worst_vector: tuple
    atom_count: int
    freq_count: int


@dataclass(frozen=True)
class GreedySelection:
    frequencies: FrequencySet
    report: FrameReport
    selected_indices: tuple


def hadamard_triple_check(R, B, L, tol: float = 1e-12) -> bool:
    """True iff the normalized exponential matrix of (R, B, L) is unitary."""
    ds = DigitSystem(R, B)
    digits = np.asarray(ds.digits, dtype=float)
    freqs = np.asarray([(l,) if isinstance(l, int) else tuple(l) for l in L], dtype=float)
    if freqs.shape[0] != digits.shape[0]:
        raise SizeMismatch("digit and frequency sets must have equal size")
    if freqs.ndim == 1:
        freqs = freqs.reshape(-1, 1)
    rinv = np.array([[float(x) for x in row] for row in ds.inverse_matrix()])
    scaled = digits @ rinv.T
    matrix = np.exp(2j * np.pi * (scaled @ freqs.T)) / math.sqrt(len(digits))
    gram = matrix.conj().T @ matrix
    return bool(np.max(np.abs(gram - np.eye(len(digits)))) <= tol)


def jp_spectrum(ds: DigitSystem, L, n: int, budget: int | None = None) -> FrequencySet:
    """Level-n truncation of the orthonormal spectrum of a Hadamard pair.

    Frequencies are all sums l_0 + R^t l_1 + ... + (R^t)^(n-1) l_(n-1).
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    freq_digits = tuple((l,) if isinstance(l, int) else tuple(int(x) for x in l) for l in L)
    if not hadamard_triple_check(ds.matrix, ds.digits, freq_digits):
        raise HadamardCheckFailed("the digit and frequency sets do not form a Hadamard pair")
    if len(freq_digits) ** n > atom_budget(budget):
        raise AtomBudgetExceeded("spectrum enumeration exceeds the atom budget")
    d = ds.dim
    rt = tuple(tuple(ds.matrix[j][i] for j in range(d)) for i in range(d))

    def mat_mul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)) for i in range(d)
        )

    def mat_vec(a, v):
        return tuple(sum(a[i][k] * v[k] for k in range(d)) for i in range(d))

    power = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    current = {(0,) * d}
    for _ in range(n):
        layer = [mat_vec(power, l) for l in freq_digits]
        current = {tuple(c + v for c, v in zip(pt, vec)) for pt in current for vec in layer}
        power = mat_mul(power, rt)
    freqs = sorted(current)
    return FrequencySet(
        dim=d, freqs=tuple(tuple(float(x) for x in f) for f in freqs), provenance="jp-spectrum"
    )


def synthesis_matrix(locations: np.ndarray, weights: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    """Rows indexed by frequency, columns by atom: sqrt(w) exp(-2*pi*i <l, x>)."""
    phases = freqs @ locations.T
    return np.exp(-2j * np.pi * phases) * np.sqrt(weights)[None, :]


def _exact_phase_matrix(m: AtomicMeasure, freq_set: "FrequencySet") -> np.ndarray:
    """Phases <freq, atom> reduced mod 1 in exact rational arithmetic.

    Large integer frequencies against deep-level atoms would lose several
    digits in a float dot product; stored floats are exact rationals, so
    the reduction costs nothing in accuracy.
    """
    from fractions import Fraction

    offset = [Fraction(o) for o in m.offset]
    columns = [[x + o for x, o in zip(p, offset)] for p, _ in m.atoms]
    rows = np.empty((len(freq_set), len(columns)), dtype=float)
    for i, f in enumerate(freq_set.freqs):
        exact = [Fraction(v) for v in f]
        for j, col in enumerate(columns):
            value = sum((a * b for a, b in zip(exact, col)), Fraction(0))
            rows[i, j] = float(value - (value.numerator // value.denominator))
    return rows


def _power_extremes(gram: np.ndarray, tol: float = _POWER_TOL):
    """Extremal eigenvalues by deterministic power iteration with a spectral shift."""

    def largest(matrix: np.ndarray) -> tuple[float, np.ndarray]:
        v = np.ones(matrix.shape[0], dtype=complex)
        v /= np.linalg.norm(v)
        value = 0.0
        for _ in range(_POWER_MAXIT):
            w = matrix @ v
            norm = np.linalg.norm(w)
            if norm == 0.0:
                return 0.0, v
            v_new = w / norm
            new_value = float(np.real(np.vdot(v_new, matrix @ v_new)))
            if abs(new_value - value) <= tol * max(1.0, abs(new_value)):
                return new_value, v_new
            value, v = new_value, v_new
        return value, v

    upper, _ = largest(gram)
    shift = upper + 1.0
    shifted_value, vec = largest(shift * np.eye(gram.shape[0]) - gram)
    lower = shift - shifted_value
    return lower, upper, vec


def _gram_extremes(gram: np.ndarray):
    m = gram.shape[0]
    if m <= _DENSE_EIG_LIMIT:
        values, vectors = np.linalg.eigh(gram)
        return float(values[0]), float(values[-1]), vectors[:, 0]
    lower, upper, vec = _power_extremes(gram)
    return lower, upper, vec


def frame_bounds_from_arrays(
    locations: np.ndarray,
    weights: np.ndarray,
    freq_set: FrequencySet,
    eigen_budget: int = DEFAULT_EIGEN_BUDGET,
) -> FrameReport:
    """Frame bounds of the exponential system on explicit weighted points."""
    if len(freq_set) == 0:
        raise EmptyFrequencySet("frequency set is empty")
    m = locations.shape[0]
    if m == 0:
        raise ZeroNormInput("measure has no atoms")
    if m > eigen_budget:
        raise EigenBudgetExceeded(f"{m} atoms exceed the eigen budget {eigen_budget}")
    phi = synthesis_matrix(locations, weights, freq_set.as_array())
    return _frame_report_from_phi(phi, weights, len(freq_set))


def _frame_report_from_phi(phi: np.ndarray, weights: np.ndarray, freq_count: int) -> FrameReport:
    m = phi.shape[1]
    gram = phi.conj().T @ phi
    gram = (gram + gram.conj().T) / 2.0
    lower, upper, vec = _gram_extremes(gram)
    upper = max(upper, 0.0)
    tol = max(m, freq_count) * np.finfo(float).eps * max(upper, 1.0)
    if m <= _DENSE_EIG_LIMIT:
        eigvals = np.linalg.eigvalsh(gram)
        rank = int(np.count_nonzero(eigvals > tol))
    else:
        rank = m if lower > tol else m - 1
    if rank < m:
        lower = 0.0
    lower = max(lower, 0.0)
    ratio = upper / lower if lower > 0 else math.inf
    worst = tuple(np.conj(vec) / np.sqrt(weights))
    return FrameReport(
        lower=lower,
        upper=upper,
        ratio=ratio,
        rank=rank,
        worst_vector=worst,
        atom_count=m,
        freq_count=freq_count,
    )


def frame_bounds(
    m: AtomicMeasure, freq_set: FrequencySet, eigen_budget: int = DEFAULT_EIGEN_BUDGET
) -> FrameReport:
    """Frame bounds of E(freqs) on a discretized measure, with exact phases."""
    if freq_set.dim != m.dim:
        raise SizeMismatch("frequency dimension does not match the measure")
    if len(freq_set) == 0:
        raise EmptyFrequencySet("frequency set is empty")
    if len(m) == 0:
        raise ZeroNormInput("measure has no atoms")
    if len(m) > eigen_budget:
        raise EigenBudgetExceeded(f"{len(m)} atoms exceed the eigen budget {eigen_budget}")
    _, weights = as_float_arrays(m)
    phases = _exact_phase_matrix(m, freq_set)
    phi = np.exp(-2j * np.pi * phases) * np.sqrt(weights)[None, :]
    return _frame_report_from_phi(phi, weights, len(freq_set))


def bessel_quotient(m: AtomicMeasure, freq_set: FrequencySet, coefficients) -> float:
    """Rayleigh quotient sum_l |(f dm)^(l)|^2 / ||f||^2 for atom coefficients f."""
    _, weights = as_float_arrays(m)
    f = np.asarray(coefficients, dtype=complex).reshape(-1)
    if f.shape[0] != weights.shape[0]:
        raise SizeMismatch("coefficient vector length does not match the atom count")
    norm_sq = float(np.sum(np.abs(f) ** 2 * weights))
    if norm_sq == 0.0:
        raise ZeroNormInput("coefficients have zero norm in L2(m)")
    phases = _exact_phase_matrix(m, freq_set)
    analysis = np.exp(2j * np.pi * phases) @ (f * weights)
    return float(np.sum(np.abs(analysis) ** 2) / norm_sq)


def indicator_coefficients(m: AtomicMeasure, points) -> np.ndarray:
    """Indicator of an exact point set, aligned with the canonical atom order."""
    from .measures import absolute_atoms, as_point

    wanted = {as_point(p, m.dim) for p in points}
    return np.array([1.0 if loc in wanted else 0.0 for loc, _ in absolute_atoms(m)], dtype=complex)


@dataclass(frozen=True)
class BlockedLinearMap:
    """An invertible map in block form ((A1, A2), (A3, A4)) splitting at m."""

    m: int
    a1: tuple
    a2: tuple
    a3: tuple
    a4: tuple

    @classmethod
    def from_matrix(cls, matrix, m: int) -> "BlockedLinearMap":
        t = np.asarray(matrix, dtype=float)
        d = t.shape[0]
        if t.shape != (d, d):
            raise SizeMismatch("matrix is not square")
        if not 0 < m < d:
            raise SizeMismatch("block split must be strictly inside the dimension")
        if abs(np.linalg.det(t)) <= 1e-12 * max(1.0, float(np.abs(t).max()) ** d):
            raise ValueError("map is not invertible within margin")
        to_tuple = lambda a: tuple(tuple(float(x) for x in row) for row in a)
        return cls(
            m=m,
            a1=to_tuple(t[:m, :m]),
            a2=to_tuple(t[:m, m:]),
            a3=to_tuple(t[m:, :m]),
            a4=to_tuple(t[m:, m:]),
        )

    @classmethod
    def rotation_2d(cls, theta_radians: float) -> "BlockedLinearMap":
        c, s = math.cos(theta_radians), math.sin(theta_radians)
        return cls.from_matrix([[c, -s], [s, c]], m=1)

    @property
    def dim(self) -> int:
        return self.m + len(self.a4)

    def matrix(self) -> np.ndarray:
        top = np.hstack([np.asarray(self.a1), np.asarray(self.a2)])
        bottom = np.hstack([np.asarray(self.a3), np.asarray(self.a4)])
        return np.vstack([top, bottom])


@dataclass(frozen=True)
class ShearData:
    shear: tuple  # A2 @ A4^-1
    a4: tuple
    a4_condition: float


def shear_blocks(t: BlockedLinearMap) -> ShearData:
    """Shear data of the map; raises when the lower-right block is singular.

    Singularity of that block means the image of the second factor meets
    the first coordinate subspace nontrivially, where the straightening
    change of variables breaks down.
    """
    a4 = np.asarray(t.a4, dtype=float)
    singular_values = np.linalg.svd(a4, compute_uv=False)
    scale = max(1.0, float(np.abs(t.matrix()).max()))
    if singular_values.size == 0 or singular_values[-1] <= 1e-12 * scale:
        raise SingularA4("lower-right block is singular within margin")
    a2 = np.asarray(t.a2, dtype=float)
    shear = a2 @ np.linalg.inv(a4)
    condition = float(singular_values[0] / singular_values[-1])
    return ShearData(
        shear=tuple(tuple(float(x) for x in row) for row in shear),
        a4=t.a4,
        a4_condition=condition,
    )


def transform_spectrum(freq_set: FrequencySet, t: BlockedLinearMap) -> FrequencySet:
    """Transport a spectrum for the axis-aligned sum to the sheared sum.

    Maps (l1, l2) to (l1, l2 - (A4^t)^-1 A2^t l1), which makes the
    synthesis matrix on the transformed measure equal entry by entry to
    the one of the original pair.
    """
    shear_blocks(t)  # raises SingularA4 when not applicable
    m = t.m
    if freq_set.dim != t.dim:
        raise SizeMismatch("spectrum dimension does not match the map")
    a2 = np.asarray(t.a2, dtype=float)
    a4 = np.asarray(t.a4, dtype=float)
    correction = np.linalg.solve(a4.T, a2.T)
    mapped = []
    for f in freq_set.freqs:
        l1 = np.asarray(f[:m])
        l2 = np.asarray(f[m:])
        mapped.append(tuple(l1) + tuple(l2 - correction @ l1))
    return FrequencySet(dim=freq_set.dim, freqs=tuple(mapped), provenance="sheared")


def greedy_frame_search(
    m: AtomicMeasure,
    pool: FrequencySet,
    target_count: int,
    eigen_budget: int = DEFAULT_EIGEN_BUDGET,
) -> GreedySelection:
    """Select frequencies greedily to maximize the smallest Gram eigenvalue.

    Deterministic: ties break toward the lowest pool index, zero-gain
    steps are allowed. Raises PoolExhausted when a full-rank system is
    requested but the pool cannot provide one.
    """
    locations, weights = as_float_arrays(m)
    atoms = locations.shape[0]
    if atoms > eigen_budget:
        raise EigenBudgetExceeded(f"{atoms} atoms exceed the eigen budget {eigen_budget}")
    if target_count > len(pool):
        raise PoolExhausted("target count exceeds the pool size")
    if target_count < atoms:
        warnings.warn("target count below atom count: the selection cannot be a frame", stacklevel=2)
    rows = synthesis_matrix(locations, weights, pool.as_array())
    selected: list[int] = []
    chosen: set[int] = set()
    gram = np.zeros((atoms, atoms), dtype=complex)
    for _ in range(target_count):
        best_idx = -1
        best_value = -1.0
        for idx in range(len(pool)):
            if idx in chosen:
                continue
            candidate = gram + np.outer(rows[idx].conj(), rows[idx])
            value = float(np.linalg.eigvalsh(candidate)[0])
            if value > best_value:
                best_value = value
                best_idx = idx
        selected.append(best_idx)
        chosen.add(best_idx)
        gram = gram + np.outer(rows[best_idx].conj(), rows[best_idx])
    freq_set = FrequencySet(
        dim=pool.dim, freqs=tuple(pool.freqs[i] for i in selected), provenance="greedy"
    )
    report = frame_bounds_from_arrays(locations, weights, freq_set, eigen_budget)
    if target_count >= atoms and report.rank < atoms:
        raise PoolExhausted("pool cannot span the atom space: rank %d < %d" % (report.rank, atoms))
    return GreedySelection(frequencies=freq_set, report=report, selected_indices=tuple(selected))
