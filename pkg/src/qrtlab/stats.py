"""Dataset statistics: Pearson correlations with significance, pairwise
win-percentage tables, and covariance-eigendecomposition PCA."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .witness import WITNESS_IDS

# families whose states are free for a witness and therefore sit out its
# tournament (uniform products are also unentangled and permutation-free)
PAIRWISE_EXCLUSIONS = {
    "ent": {"ent", "uent"},
    "sn": {"sn", "uent"},
    "uent": {"uent"},
}
DEFAULT_TIE_EPS = 1e-9


def pearson(xs, ys):
    """(r, p): the plain product-moment coefficient and its two-tailed
    t-test p-value through the regularized incomplete beta function."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("need two equal-length vectors")
    n = xs.size
    if n < 3:
        raise ValueError("need at least 3 points")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("degenerate variable")
    r = float(np.sum(dx * dy) / (sx * sy))
    r = max(-1.0, min(1.0, r))
    nu = n - 2
    if 1.0 - r * r <= 0.0:
        return r, 0.0
    # two-tailed t-test: p = I_{nu/(nu+t^2)}(nu/2, 1/2)
    t2 = r * r * nu / (1.0 - r * r)
    p = float(betainc(nu / 2.0, 0.5, nu / (nu + t2)))
    return r, p


def significance_stars(p: float) -> str:
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


@dataclass(frozen=True)
class CorrelationReport:
    witness_order: tuple
    r: np.ndarray
    p: np.ndarray
    n_samples: int


def correlation_report(values: np.ndarray) -> CorrelationReport:
    """values: (N, 8) array in WITNESS_IDS column order."""
    values = np.asarray(values, dtype=float)
    k = values.shape[1]
    r = np.eye(k)
    p = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            rij, pij = pearson(values[:, i], values[:, j])
            r[i, j] = r[j, i] = rij
            p[i, j] = p[j, i] = pij
    return CorrelationReport(
        witness_order=tuple(WITNESS_IDS), r=r, p=p, n_samples=values.shape[0]
    )


@dataclass(frozen=True)
class PairwiseTable:
    win_pct: dict  # (family, witness) -> percent
    comparisons: dict  # (family, witness) -> number of matchups entered
    exclusions: dict  # witness -> excluded family set


def pairwise_table(families, values, eps: float = DEFAULT_TIE_EPS) -> PairwiseTable:
    """Tournament win percentages per (family, witness).

    families: length-N family labels; values: (N, 8) witness matrix. A state
    beats another if its value is larger by more than eps; ties score 1/2.
    """
    families = np.asarray(families)
    values = np.asarray(values, dtype=float)
    fam_ids = sorted(set(families.tolist()))
    win_pct, comparisons, exclusions = {}, {}, {}
    for wi, w in enumerate(WITNESS_IDS):
        excl = set(PAIRWISE_EXCLUSIONS.get(w, {w}))
        exclusions[w] = excl & set(fam_ids)
        active = [f for f in fam_ids if f not in excl]
        if len(active) < 2:
            raise ValueError(f"fewer than two families left for witness {w}")
        cols = {f: np.sort(values[families == f, wi]) for f in active}
        for f in active:
            score = 0.0
            total = 0
            a = cols[f]
            for g in active:
                if g == f:
                    continue
                b = cols[g]
                lo = np.searchsorted(b, a - eps, side="left")
                hi = np.searchsorted(b, a + eps, side="right")
                score += lo.sum() + 0.5 * (hi - lo).sum()
                total += a.size * b.size
            win_pct[(f, w)] = 100.0 * score / total
            comparisons[(f, w)] = total
    return PairwiseTable(win_pct=win_pct, comparisons=comparisons, exclusions=exclusions)


@dataclass(frozen=True)
class PcaResult:
    witness_order: tuple
    explained_variance_ratio: np.ndarray
    loadings: np.ndarray  # columns are components
    projections: np.ndarray  # N x 2
    standardized: bool


def pca(values: np.ndarray, exclude=("imag",), standardize: bool = True) -> PcaResult:
    """PCA by eigendecomposition of the (optionally correlation-) covariance
    matrix; imag is excluded by default as exactly collinear with real."""
    values = np.asarray(values, dtype=float)
    keep = [i for i, w in enumerate(WITNESS_IDS) if w not in set(exclude)]
    order = tuple(WITNESS_IDS[i] for i in keep)
    x = values[:, keep]
    if x.shape[0] <= x.shape[1]:
        raise ValueError("need more samples than variables")
    x = x - x.mean(axis=0)
    if standardize:
        sd = x.std(axis=0, ddof=1)
        sd[sd == 0.0] = 1.0  # rank-deficient columns are reported, not fatal
        x = x / sd
    cov = (x.T @ x) / (x.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    idx = np.argsort(evals)[::-1]
    evals = np.clip(evals[idx], 0.0, None)
    evecs = evecs[:, idx]
    # canonical sign: largest-magnitude loading entry positive
    for j in range(evecs.shape[1]):
        k = np.argmax(np.abs(evecs[:, j]))
        if evecs[k, j] < 0:
            evecs[:, j] = -evecs[:, j]
    ratios = evals / evals.sum() if evals.sum() > 0 else evals
    projections = x @ evecs[:, :2]
    return PcaResult(
        witness_order=order,
        explained_variance_ratio=ratios,
        loadings=evecs,
        projections=projections,
        standardized=standardize,
    )
