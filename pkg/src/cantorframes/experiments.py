"""The three frame experiments: degeneracy, rotation invariance, cross-Bessel.

Each experiment is a pure function returning a result dataclass with
plain-tuple rows ready for CSV emission. Finite-level lower-bound collapse
runs are mechanism demonstrations, not proofs about the limit measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotCertifiedPacking, SingularA4
from .frames import (
    BlockedLinearMap,
    FrameReport,
    FrequencySet,
    bessel_quotient,
    frame_bounds,
    frame_bounds_from_arrays,
    greedy_frame_search,
    indicator_coefficients,
    jp_spectrum,
    shear_blocks,
    transform_spectrum,
)
from .measures import (
    AtomicMeasure,
    DigitSystem,
    add,
    as_float_arrays,
    as_point,
    ball_mass,
    convolve,
    embed_axis,
    level_measure,
    translate,
)
from .packing import CERTIFIED_PACKING, _packing_certificate_for_pair


@dataclass(frozen=True)
class DegeneracyRow:
    k: int
    ball_mass: Fraction
    quotient: float
    quotient_over_mass: float
    inverse_mass: Fraction


@dataclass(frozen=True)
class DegeneracyResult:
    rows: tuple
    upper_estimate: float  # largest eigenvalue of the sum measure's Gram
    nu_upper_estimate: float  # Bessel constant of the spectrum against the first factor
    collapse: tuple  # ((level, lower bound), ...) under the fixed pool rule
    certificate_status: str


def degeneracy_experiment(
    nu_ds: DigitSystem,
    lam_ds: DigitSystem,
    shift,
    level: int,
    freq_set: FrequencySet,
    k_list,
    collapse_levels=(),
    budget: int | None = None,
) -> DegeneracyResult:
    """Quotient-versus-ball-mass table for the sum measure mechanism.

    For each k the window is V_k = (first support) + (second support
    inside the 1/k ball); the quotient of its indicator against the
    convolution factor is compared with the ball mass, so the table
    exhibits quotient <= upper_estimate * mass and hence a lower bound
    1/mass on the condition ratio of any common frame.
    """
    cert = _packing_certificate_for_pair(nu_ds, lam_ds, level, budget)
    if cert.status != CERTIFIED_PACKING:
        raise NotCertifiedPacking("degeneracy experiment requires a certified packing pair")
    t = as_point(shift, nu_ds.dim)
    nu_n = level_measure(nu_ds, level, budget)
    lam_n = level_measure(lam_ds, level, budget)
    mu_n = convolve(nu_n, lam_n, budget)
    rho = add(mu_n, translate(nu_n, t))

    upper = frame_bounds(rho, freq_set).upper
    nu_upper = frame_bounds(nu_n, freq_set).upper

    rows = []
    for k in sorted(int(k) for k in k_list):
        radius = Fraction(1, k)
        beta = ball_mass(lam_n, 0, radius)
        ball_points = [p for p, _ in lam_n.atoms if sum(x * x for x in p) <= radius * radius]
        window = {
            tuple(a + b for a, b in zip(p, q)) for p in nu_n.locations for q in ball_points
        }
        coeffs = indicator_coefficients(mu_n, window)
        quotient = bessel_quotient(mu_n, freq_set, coeffs)
        rows.append(
            DegeneracyRow(
                k=k,
                ball_mass=beta,
                quotient=quotient,
                quotient_over_mass=quotient / float(beta) if beta else math.inf,
                inverse_mass=1 / beta if beta else None,
            )
        )
    collapse = collinear_lower_bounds(nu_ds, lam_ds, t, collapse_levels, budget=budget)
    return DegeneracyResult(
        rows=tuple(rows),
        upper_estimate=upper,
        nu_upper_estimate=nu_upper,
        collapse=collapse,
        certificate_status=cert.status,
    )


def integer_pool(size: int) -> FrequencySet:
    return FrequencySet.from_scalars(range(size), provenance="lattice-pool")


def collinear_lower_bounds(
    nu_ds: DigitSystem,
    lam_ds: DigitSystem,
    shift,
    sum_levels,
    pool_factor: int = 2,
    budget: int | None = None,
) -> tuple:
    """Lower frame bound of the collinear sum under a fixed pool-growth rule.

    ``sum_levels`` count digit layers of the convolution measure: level n
    uses the first factor at depth floor(n/2) and the second at
    ceil(n/2). Each sum measure gets the integer frequency pool
    {0, ..., pool_factor * atoms - 1}; the lower bound collapsing with n
    is the finite-level shadow of frame degeneracy.
    """
    t = as_point(shift, nu_ds.dim)
    out = []
    for n in sorted(int(n) for n in sum_levels):
        if n < 2:
            raise ValueError("sum levels must be >= 2")
        nu_n = level_measure(nu_ds, n // 2, budget)
        lam_n = level_measure(lam_ds, (n + 1) // 2, budget)
        rho = add(convolve(nu_n, lam_n, budget), translate(nu_n, t))
        pool = integer_pool(pool_factor * len(rho))
        report = frame_bounds(rho, pool, eigen_budget=max(4096, len(rho)))
        out.append((n, report.lower))
    return tuple(out)


@dataclass(frozen=True)
class RotationRow:
    theta_degrees: float
    status: str  # "ok" or "singular-a4"
    lower: float
    upper: float
    lower_deviation: float
    upper_deviation: float


@dataclass(frozen=True)
class RotationResult:
    base_report: FrameReport
    base_frequencies: FrequencySet
    rows: tuple
    collapse: tuple


def _planar_sum_arrays(mu_1d: AtomicMeasure, nu_1d: AtomicMeasure, theta_radians: float):
    """Atoms of the planar sum with the second factor rotated; exact merges."""
    c, s = math.cos(theta_radians), math.sin(theta_radians)
    pts: dict = {}
    mu_locs, mu_w = as_float_arrays(mu_1d)
    nu_locs, nu_w = as_float_arrays(nu_1d)
    for x, w in zip(mu_locs[:, 0], mu_w):
        key = (float(x), 0.0)
        pts[key] = pts.get(key, 0.0) + float(w)
    for y, w in zip(nu_locs[:, 0], nu_w):
        key = (-s * float(y), c * float(y))
        pts[key] = pts.get(key, 0.0) + float(w)
    items = sorted(pts.items())
    locations = np.array([k for k, _ in items], dtype=float)
    weights = np.array([v for _, v in items], dtype=float)
    return locations, weights


def rotation_experiment(
    level: int,
    thetas_degrees,
    target_factor: int = 2,
    collapse_levels=(),
    budget: int | None = None,
) -> RotationResult:
    """Frame-bound invariance of the planar two-Cantor sum under rotation.

    A spectrum is found once for the axis-aligned sum by greedy selection
    over the product of the two orthonormal spectra; each rotation
    transports it by the shear map and must reproduce the same bounds.
    Right angles report the singular block instead.
    """
    mu_1d = level_measure(DigitSystem.one_dimensional(4, [0, 1]), level, budget)
    nu_1d = level_measure(DigitSystem.one_dimensional(16, [0, 1]), level, budget)
    base = add(embed_axis(mu_1d, 2, 0), embed_axis(nu_1d, 2, 1))

    jp_mu = jp_spectrum(DigitSystem.one_dimensional(4, [0, 1]), [0, 2], level, budget)
    jp_nu = jp_spectrum(DigitSystem.one_dimensional(16, [0, 1]), [0, 8], level, budget)
    pool = FrequencySet(
        dim=2,
        freqs=tuple((a[0], b[0]) for a in jp_mu.freqs for b in jp_nu.freqs),
        provenance="lattice-pool",
    )
    target = min(target_factor * len(base), len(pool))
    selection = greedy_frame_search(base, pool, target)
    base_report = selection.report
    base_freqs = selection.frequencies

    rows = []
    for theta_deg in thetas_degrees:
        theta = math.radians(float(theta_deg))
        t_map = BlockedLinearMap.rotation_2d(theta)
        try:
            shear_blocks(t_map)
        except SingularA4:
            rows.append(
                RotationRow(
                    theta_degrees=float(theta_deg),
                    status="singular-a4",
                    lower=math.nan,
                    upper=math.nan,
                    lower_deviation=math.nan,
                    upper_deviation=math.nan,
                )
            )
            continue
        cos_t = math.cos(theta)
        scaled = FrequencySet(
            dim=2,
            freqs=tuple((f[0], f[1] / cos_t) for f in base_freqs.freqs),
            provenance="sheared",
        )
        transported = transform_spectrum(scaled, t_map)
        locations, weights = _planar_sum_arrays(mu_1d, nu_1d, theta)
        report = frame_bounds_from_arrays(locations, weights, transported)
        rows.append(
            RotationRow(
                theta_degrees=float(theta_deg),
                status="ok",
                lower=report.lower,
                upper=report.upper,
                lower_deviation=abs(report.lower - base_report.lower),
                upper_deviation=abs(report.upper - base_report.upper),
            )
        )
    collapse = collinear_lower_bounds(
        DigitSystem.one_dimensional(16, [0, 1]),
        DigitSystem.one_dimensional(16, [0, 4]),
        0,
        collapse_levels,
        budget=budget,
    )
    return RotationResult(
        base_report=base_report, base_frequencies=base_freqs, rows=tuple(rows), collapse=collapse
    )


@dataclass(frozen=True)
class CrossBesselRow:
    level: int
    freq_count: int
    atom_count: int
    upper: float


@dataclass(frozen=True)
class CrossBesselResult:
    rows: tuple


def cross_bessel_experiment(
    src_ds: DigitSystem,
    src_freq_digits,
    dst_ds: DigitSystem,
    levels,
    depth_ratio: int = 1,
    budget: int | None = None,
) -> CrossBesselResult:
    """Bessel constant of one measure's orthonormal spectrum against another.

    Exploratory by design: the growth of the constant with the level is
    reported without a pass/fail threshold.
    """
    rows = []
    for n in sorted(int(n) for n in levels):
        freq_set = jp_spectrum(src_ds, src_freq_digits, n, budget)
        measure = level_measure(dst_ds, max(1, depth_ratio * n), budget)
        report = frame_bounds(measure, freq_set)
        rows.append(
            CrossBesselRow(
                level=n, freq_count=len(freq_set), atom_count=len(measure), upper=report.upper
            )
        )
    return CrossBesselResult(rows=tuple(rows))
