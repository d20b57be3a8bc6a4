"""Eigenvalue clustering, Jordan probing and the sector-by-sector comparison
of observed spectra with the selection-rule predictions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.sparse.csgraph import connected_components

from .link_rep import rho_sector_block, sector_dimension
from .selection_rules import EigLabel, predicted_spectrum, sector_configurations, config_to_signs
from .transfer import candidate_d, double_row_sector, hamiltonian_element
from .xx_chain import fock_words, hxxz_matrix, sector_indices

DEFAULT_TOL = 1e-8
RESIDUAL_TOL = 1e-9
RANK_TOL = 1e-8
MAX_SUITE_SITES = 14


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClusteredSpectrum:
    entries: tuple[tuple[complex, int], ...]
    tolerance: float

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def real_entries(self) -> list[tuple[float, int]]:
        return [(float(v.real), m) for v, m in self.entries]


def _cluster_values(values: np.ndarray, threshold: float) -> list[np.ndarray]:
    """Groups of indices joined by single linkage at distance <= threshold."""
    if values.size == 0:
        return []
    dist = np.abs(values[:, None] - values[None, :])
    n_comp, labels = connected_components(dist <= threshold, directed=False)
    groups = [np.flatnonzero(labels == c) for c in range(n_comp)]
    groups.sort(key=lambda g: (round(values[g].mean().real, 9), round(values[g].mean().imag, 9)))
    return groups


def cluster_threshold(values: np.ndarray, tol: float) -> float:
    radius = float(np.max(np.abs(values))) if values.size else 0.0
    return tol * max(1.0, radius)


def cluster_values(values, tol: float = DEFAULT_TOL, weights=None) -> ClusteredSpectrum:
    """Cluster a list of (optionally weighted) values; representatives are weighted means."""
    values = np.asarray(values, dtype=complex)
    weights = np.ones(values.size, dtype=int) if weights is None else np.asarray(weights, dtype=int)
    threshold = cluster_threshold(values, tol)
    entries = []
    for g in _cluster_values(values, threshold):
        mult = int(weights[g].sum())
        centre = complex(np.sum(values[g] * weights[g]) / mult)
        entries.append((centre, mult))
    return ClusteredSpectrum(tuple(entries), tol)


def eigenvalues_checked(m: np.ndarray) -> np.ndarray:
    """General eigenvalues with a per-pair residual check."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.zeros(0, dtype=complex)
    try:
        vals, vecs = sla.eig(m)
    except (sla.LinAlgError, ValueError) as exc:
        raise SpectralError(f"eigen-solver failure: {exc}") from exc
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    norms = np.linalg.norm(vecs, axis=0)
    residual = np.linalg.norm(m @ vecs - vecs * vals, axis=0) / np.where(norms > 0, norms, 1)
    if np.any(residual > RESIDUAL_TOL * scale):
        raise SpectralError(f"eigenpair residual {residual.max():.3e} above tolerance")
    return vals


def clustered_spectrum(m: np.ndarray, tol: float = DEFAULT_TOL) -> ClusteredSpectrum:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return cluster_values(eigenvalues_checked(m), tol)


def _rank(m: np.ndarray, threshold: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > threshold))


def jordan_cells(
    m: np.ndarray,
    value: complex,
    tol: float = 1e-6,
    rank_tol: float = RANK_TOL,
    radius: float | None = None,
) -> tuple[int, int]:
    """(geometric multiplicity, number of size-2 Jordan cells) at ``value``.

    A sorted Schur form isolates the eigenvalues within tol * max(1, |m|) of
    ``value``; ranks of the shifted leading block and its powers are then read
    off by singular-value thresholding, away from the conditioning of the rest
    of the spectrum.
    """
    m = np.asarray(m, dtype=complex)
    dim = m.shape[0]
    if dim == 0:
        return 0, 0
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    if radius is None:
        radius = tol * scale
    t, _, sdim = sla.schur(m, output="complex", sort=lambda x: abs(x - value) <= radius)
    if sdim == 0:
        raise SpectralError(f"no eigenvalue within {radius:.1e} of {value}")
    block = t[:sdim, :sdim]
    centre = np.trace(block) / sdim
    shifted = block - centre * np.eye(sdim)
    threshold = rank_tol * scale
    r1 = _rank(shifted, threshold)
    sq = shifted @ shifted
    r2 = _rank(sq, threshold)
    r3 = _rank(sq @ shifted, threshold)
    if r3 != r2:
        raise SpectralError(f"rank did not stabilise at value {value}: ranks {r1}, {r2}, {r3}")
    return sdim - r1, r1 - r2


def count_jordan_cells(m: np.ndarray, tol: float = 1e-6) -> int:
    """Total number of size-2 cells over all eigenvalue clusters of m."""
    values = eigenvalues_checked(m)
    threshold = cluster_threshold(values, tol)
    spectrum = cluster_values(values, tol)
    return sum(
        jordan_cells(m, value, radius=threshold)[1] for value, mult in spectrum.entries if mult >= 2
    )


@dataclass
class SectorFailure:
    value: float
    predicted: int
    observed: int

    def as_dict(self) -> dict:
        return {"value": self.value, "predicted": self.predicted, "observed": self.observed}


@dataclass
class VerificationReport:
    n_sites: int
    defects: int
    predicted: list[tuple[EigLabel, float, int]]
    observed: ClusteredSpectrum
    pooled: list[tuple[float, int, list[EigLabel]]]
    passed: bool
    jordan_cells_found: int
    failures: list[SectorFailure] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def _match(observed: list[tuple[float, int]], expected: list[tuple[float, int]], threshold: float):
    """Pair clusters by value; returns failures for any unmatched or miscounted cluster."""
    failures = []
    remaining = list(expected)
    for value, mult in observed:
        hit = None
        for k, (ev, em) in enumerate(remaining):
            if abs(ev - value) <= threshold:
                hit = k
                break
        if hit is None:
            failures.append(SectorFailure(value, 0, mult))
            continue
        ev, em = remaining.pop(hit)
        if em != mult:
            failures.append(SectorFailure(value, em, mult))
    for ev, em in remaining:
        failures.append(SectorFailure(ev, em, 0))
    return failures


def pool_labels(labels: dict[EigLabel, int], tol: float) -> list[tuple[float, int, list[EigLabel]]]:
    """Merge formal labels whose values coincide numerically."""
    items = list(labels.items())
    values = np.array([lab.value for lab, _ in items], dtype=complex)
    threshold = cluster_threshold(values, tol)
    pooled = []
    for g in _cluster_values(values, threshold):
        members = [items[k][0] for k in g]
        mult = sum(items[k][1] for k in g)
        pooled.append((float(values[g].real.mean()), mult, members))
    return pooled


def verify_sector(n: int, d: int, tol: float = DEFAULT_TOL, check_jordan: bool = True) -> VerificationReport:
    """Compare the spectrum of rho(H_N) on V_N^d with the predicted labels."""
    labels = predicted_spectrum(n, d)
    predicted = [(lab, lab.value, mult) for lab, mult in labels.items()]
    if n == 1:
        block = np.zeros((1, 1), dtype=complex)
    else:
        block = rho_sector_block(hamiltonian_element(n), n, d)
    observed = clustered_spectrum(block, tol)
    pooled = pool_labels(labels, tol)
    values = np.array([v for v, _ in observed.entries] + [p[0] for p in pooled], dtype=complex)
    threshold = cluster_threshold(values, tol)
    failures = _match(observed.real_entries(), [(v, m) for v, m, _ in pooled], threshold)
    imag = max((abs(v.imag) for v, _ in observed.entries), default=0.0)
    if imag > threshold:
        failures.append(SectorFailure(float("nan"), 0, 0))
    cells = count_jordan_cells(block) if check_jordan else 0
    return VerificationReport(n, d, predicted, observed, pooled, not failures, cells, failures)


def sectors(n: int) -> list[int]:
    return list(range(n % 2, n + 1, 2))


@dataclass
class SuiteResult:
    reports: list[VerificationReport]
    errors: list[tuple[int, int, str]]

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.passed for r in self.reports)

    def summary(self) -> dict:
        return {
            "sectors": len(self.reports) + len(self.errors),
            "passed": sum(1 for r in self.reports if r.passed),
            "failed": sum(1 for r in self.reports if not r.passed) + len(self.errors),
            "all_pass": self.passed,
        }


def run_suite(n_max: int, tol: float = DEFAULT_TOL, check_jordan: bool = False) -> SuiteResult:
    """verify_sector over every (N, d) with 1 <= N <= n_max... starting at N = 2."""
    if n_max > MAX_SUITE_SITES:
        raise ValueError(f"n_max={n_max} exceeds the guard {MAX_SUITE_SITES}")
    reports, errors = [], []
    for n in range(2, n_max + 1):
        for d in sectors(n):
            try:
                reports.append(verify_sector(n, d, tol, check_jordan))
            except (SpectralError, np.linalg.LinAlgError) as exc:
                errors.append((n, d, str(exc)))
    return SuiteResult(reports, errors)


def spin_sector_matrix(n: int, n_down: int) -> np.ndarray:
    """Dense block of the q = i Hamiltonian on the sector with n_down down spins."""
    idx = sector_indices(n, n_down)
    h = hxxz_matrix(n, 1j).tocsr()
    return h[idx][:, idx].toarray()


def fock_sector_mismatch(n: int, n_down: int, tol: float = 1e-6) -> tuple[float, bool]:
    """Compare Fock-word eigenvalues with the numeric spectrum of one spin sector.

    Jordan pairs split numerically by about sqrt(machine eps), so clusters are
    formed at the looser ``tol`` and their centroids compared. Returns the
    largest centroid deviation and whether the multiplicities agree.
    """
    words = fock_words(n, n_down)
    predicted = cluster_values([w.eigenvalue for w in words], tol)
    observed = clustered_spectrum(spin_sector_matrix(n, n_down), tol)
    if len(predicted.entries) != len(observed.entries):
        return float("inf"), False
    worst, same = 0.0, True
    for (pv, pm), (ov, om) in zip(predicted.entries, observed.entries):
        worst = max(worst, abs(pv - ov))
        same = same and pm == om
    return worst, same


def generalized_eigenvector_count(n: int) -> int:
    """Total number of size-2 Jordan cells of the q = i Hamiltonian over all sectors."""
    return sum(count_jordan_cells(spin_sector_matrix(n, k)) for k in range(n + 1))


def transfer_sector_mismatch(n: int, d: int, u: float, tol: float = DEFAULT_TOL) -> float:
    """Largest distance from an eigenvalue of rho(D_N(u)) on V_N^d to the sector's candidates."""
    block = double_row_sector(n, u, d)
    observed = clustered_spectrum(block, tol)
    candidates = sorted({candidate_d(n, u, config_to_signs(c, n)) for c, _ in sector_configurations(n, d)})
    cand = np.array(candidates)
    return max(float(np.min(np.abs(cand - v))) for v, _ in observed.entries)


def transfer_sector_multiset_match(n: int, d: int, u: float, tol: float = DEFAULT_TOL) -> bool:
    """Observed clusters of rho(D_N(u)) on V_N^d equal the configuration multiset of candidates."""
    block = double_row_sector(n, u, d)
    observed = clustered_spectrum(block, tol)
    values = [candidate_d(n, u, config_to_signs(c, n)) for c, _ in sector_configurations(n, d)]
    expected = cluster_values(values, tol)
    threshold = cluster_threshold(np.array(values + [v.real for v, _ in observed.entries]), tol)
    return not _match(observed.real_entries(), expected.real_entries(), threshold)


def sector_total_matches(report: VerificationReport) -> bool:
    return report.observed.total == sector_dimension(report.n_sites, report.defects)
