"""Dense complex linear algebra for small Hamiltonians.

Eigendecomposition, rank, inverse, and the algebraic/geometric multiplicity
classification that decides diagonalizability.  Matrices are plain complex
ndarrays; everything here is a pure function of its inputs.

The general eigensolver is LAPACK's Hessenberg + shifted-QR routine (via
``numpy.linalg.eig``); 2x2 matrices take a closed-form path that is exact at
defective points.  Both routes are exposed so they can be cross-checked.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NoConvergence, Singular

MAX_DIM = 64

#: relative eigenvalue-clustering tolerance (scaled by the spectral norm)
DEFAULT_CLUSTER_TOL = 1e-8
#: relative singular-value threshold for rank decisions
DEFAULT_RANK_TOL = 1e-10
#: condition-number cap beyond which inverse() refuses
DEFAULT_COND_CAP = 1e12


def as_matrix(M) -> np.ndarray:
    """Validate and return M as a square complex128 array (n <= 64, finite)."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dim {A.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(A.imag))):
        raise DimensionMismatch("matrix entries must be finite")
    return A


def spectral_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=complex), 2))


def canonical_gauge(v: np.ndarray) -> np.ndarray:
    """Unit Euclidean norm with the first nonzero component real positive."""
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("cannot gauge-fix the zero vector")
    v = v / nrm
    i = int(np.argmax(np.abs(v) > 1e-12))
    a = v[i]
    if abs(a) == 0.0:  # all components below threshold; fall back to largest
        i = int(np.argmax(np.abs(v)))
        a = v[i]
    return v * (np.conj(a) / abs(a))


def eig2(M: np.ndarray):
    """Closed-form eigenpairs of a 2x2 complex matrix.

    Returns (values, vectors) with vectors as columns in canonical gauge.
    Exact (to rounding) at defective points where iterative solvers split
    the double root by ~sqrt(eps).
    """
    a, b = M[0, 0], M[0, 1]
    c, d = M[1, 0], M[1, 1]
    half_tr = 0.5 * (a + d)
    z = 0.5 * (a - d)
    sq = np.sqrt(z * z + b * c)
    vals = np.array([half_tr + sq, half_tr - sq])
    scale = max(abs(a), abs(b), abs(c), abs(d), 1e-300)
    vecs = np.empty((2, 2), dtype=complex)
    for k, lam in enumerate(vals):
        u = np.array([b, lam - a])
        w = np.array([lam - d, c])
        cand = u if np.linalg.norm(u) >= np.linalg.norm(w) else w
        if np.linalg.norm(cand) <= 1e-14 * scale:
            cand = np.zeros(2, dtype=complex)
            cand[k] = 1.0  # M ~ lam*I
        vecs[:, k] = canonical_gauge(cand)
    return vals, vecs


def _sort_spectrum(vals, vecs):
    """Descending real part, ties broken by descending imaginary part."""
    order = np.lexsort((-vals.imag, -vals.real))
    return vals[order], vecs[:, order]


def eigendecompose(M, tol: float = 1e-10, force_general: bool = False):
    """Eigenvalues and canonical-gauge right eigenvectors of a dense matrix.

    Parameters
    ----------
    M : (n, n) array_like
        Complex matrix, n <= 64.
    tol : float
        Residual bound: each returned pair satisfies
        ``||M v - lam v|| <= tol * ||M||``.
    force_general : bool
        Skip the 2x2 closed-form path (used for cross-checking routes).

    Returns
    -------
    values : (n,) complex ndarray, sorted by descending real part
    vectors : (n, n) complex ndarray, columns are unit eigenvectors

    Defective matrices still yield n candidate pairs (vectors may repeat);
    only multiplicity_report renders a diagonalizability verdict.
    """
    A = as_matrix(M)
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = A.shape[0]
    if n == 1:
        return A[0, :1].copy(), np.ones((1, 1), dtype=complex)
    if n == 2 and not force_general:
        vals, vecs = eig2(A)
    else:
        try:
            vals, vecs = np.linalg.eig(A)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"eigensolver failed: {exc}") from exc
        vecs = np.column_stack([canonical_gauge(vecs[:, k]) for k in range(n)])
    vals, vecs = _sort_spectrum(vals, vecs)
    nrm = spectral_norm(A)
    resid = np.linalg.norm(A @ vecs - vecs * vals[np.newaxis, :], axis=0)
    if np.any(resid > tol * max(nrm, 1e-300)):
        raise NoConvergence(
            f"eigenpair residual {resid.max():.3e} exceeds {tol:.1e} * ||M||"
        )
    return vals, vecs


def rank(M, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above rank_tol * sigma_max (0 for the zero matrix)."""
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    A = as_matrix(M)
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))


def inverse(M, cond_cap: float = DEFAULT_COND_CAP) -> np.ndarray:
    """Matrix inverse, refusing condition numbers beyond cond_cap."""
    A = as_matrix(M)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] == 0.0 or s[0] / s[-1] > cond_cap:
        cond = np.inf if s[-1] == 0.0 else s[0] / s[-1]
        raise Singular(f"condition estimate {cond:.3e} exceeds cap {cond_cap:.1e}")
    Ainv = np.linalg.inv(A)
    n = A.shape[0]
    defect = spectral_norm(A @ Ainv - np.eye(n))
    if defect > 1e3 * np.finfo(float).eps * (s[0] / s[-1]) * n:
        raise Singular(f"inverse verification failed: ||M M^-1 - I|| = {defect:.3e}")
    return Ainv


@dataclass
class EigenCluster:
    """One clustered eigenvalue with its multiplicities."""

    eigenvalue: complex
    eta: int   # algebraic multiplicity (cluster size)
    zeta: int  # geometric multiplicity (n - rank(M - lam I))


@dataclass
class SpectrumReport:
    """Clustered spectrum with a diagonalizability verdict."""

    clusters: list = field(default_factory=list)
    diagonalizable: bool = True
    cluster_tol: float = 0.0

    @property
    def eigenvalues(self):
        return np.array([c.eigenvalue for c in self.clusters])

    def worst_cluster(self) -> EigenCluster:
        return max(self.clusters, key=lambda c: c.eta - c.zeta)


def _single_linkage(vals: np.ndarray, tol: float):
    """Greedy union-find clustering: merge eigenvalues within tol pairwise."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def multiplicity_report(
    M, cluster_tol: float | None = None, rank_tol: float = DEFAULT_RANK_TOL
) -> SpectrumReport:
    """Cluster the spectrum and compare algebraic vs geometric multiplicities.

    cluster_tol is an absolute distance; None means 1e-8 * ||M||.  Eigenvalues
    within cluster_tol of each other (single linkage) merge into one cluster
    with eta = cluster size and zeta = n - rank(M - lam I).  The matrix is
    diagonalizable iff zeta == eta for every cluster.
    """
    A = as_matrix(M)
    n = A.shape[0]
    nrm = spectral_norm(A)
    if cluster_tol is None:
        cluster_tol = DEFAULT_CLUSTER_TOL * max(nrm, 1e-300)
    if cluster_tol <= 0 or rank_tol <= 0:
        raise ValueError("tolerances must be positive")
    vals, _ = eigendecompose(A)
    clusters = []
    ok = True
    for idx in _single_linkage(vals, cluster_tol):
        lam = complex(np.mean(vals[idx]))
        eta = len(idx)
        zeta = n - rank(A - lam * np.eye(n), rank_tol)
        zeta = max(1, min(zeta, eta))
        clusters.append(EigenCluster(lam, eta, zeta))
        ok = ok and (zeta == eta)
    clusters.sort(key=lambda c: (-c.eigenvalue.real, -c.eigenvalue.imag))
    return SpectrumReport(clusters=clusters, diagonalizable=ok, cluster_tol=cluster_tol)
