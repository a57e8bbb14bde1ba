"""Biorthonormal right/left eigenframes and the Hermitian metric X.

A frame at one parameter point pairs right eigenvectors |psi_j> (columns of
A) with left eigenvectors |phi^j> taken from the conjugate-transposed rows of
A^-1, so <phi^i|psi_j> = delta_ij holds to machine precision by construction.
The metric X = (A A^dag)^-1 maps psi_j to phi^j and defines the pseudo-norm
<Psi|X|Psi>.

Gauge conventions
-----------------
build_frame returns the *canonical* gauge: unit-norm right vectors with the
first nonzero component real positive.  X depends on the per-band moduli of
the gauge, so frames built in other gauges (e.g. a model's closed-form gauge)
carry their own X; use frame_from_right for those.  rebalance() moves a frame
to the *balanced* gauge ||psi_j|| = ||phi^j||, the unique modulus choice
compatible with a constant unitary-Hermitian intertwiner Y.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    NearDefective,
    NonDiagonalizable,
    Singular,
    StepTooCoarse,
)

#: |Im E| <= SPECTRAL_REALITY_TOL * (1 + |E|) counts as a real eigenvalue
SPECTRAL_REALITY_TOL = 1e-9
#: default min-gap floor, relative to ||H||
DEFAULT_GAP_FLOOR = 1e-6


@dataclass
class BiorthFrame:
    """Paired right/left eigenvectors with the metric at one parameter point.

    Attributes
    ----------
    energies : (n,) complex ndarray, sorted by descending real part
    right : (n, n) ndarray, columns are |psi_j>
    left : (n, n) ndarray, columns are |phi^j> with <phi^i|psi_j> = delta_ij
    metric_X : (n, n) Hermitian ndarray, (A A^dag)^-1
    real_spectrum : bool
    min_gap : float, smallest pairwise |E_i - E_j|
    """

    energies: np.ndarray
    right: np.ndarray
    left: np.ndarray
    metric_X: np.ndarray
    real_spectrum: bool
    min_gap: float

    @property
    def dim(self) -> int:
        return self.right.shape[0]

    def psi(self, j: int) -> np.ndarray:
        return self.right[:, j]

    def phi(self, j: int) -> np.ndarray:
        return self.left[:, j]


def _min_gap(energies: np.ndarray) -> float:
    n = len(energies)
    if n < 2:
        return np.inf
    diff = np.abs(energies[:, None] - energies[None, :])
    return float(diff[~np.eye(n, dtype=bool)].min())


def _is_real_spectrum(energies: np.ndarray) -> bool:
    return bool(
        np.all(np.abs(energies.imag) <= SPECTRAL_REALITY_TOL * (1.0 + np.abs(energies)))
    )


def frame_from_right(energies, A, cond_cap: float = linalg.DEFAULT_COND_CAP) -> BiorthFrame:
    """Build a frame from explicit right eigenvectors (columns of A).

    The gauge of A is preserved; left vectors and X are derived from A^-1,
    so all biorthonormality invariants hold no matter the gauge.
    """
    A = np.asarray(A, dtype=complex)
    energies = np.asarray(energies, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or len(energies) != A.shape[0]:
        raise DimensionMismatch("A must be square with one energy per column")
    Ainv = linalg.inverse(A, cond_cap)
    left = Ainv.conj().T
    X = linalg.inverse(A @ A.conj().T, cond_cap)
    X = 0.5 * (X + X.conj().T)
    return BiorthFrame(
        energies=energies,
        right=A,
        left=left,
        metric_X=X,
        real_spectrum=_is_real_spectrum(energies),
        min_gap=_min_gap(energies),
    )


def build_frame(
    H,
    cluster_tol: float | None = None,
    rank_tol: float = linalg.DEFAULT_RANK_TOL,
    gap_floor: float | None = None,
) -> BiorthFrame:
    """Canonical-gauge biorthonormal frame of a diagonalizable Hamiltonian.

    Energies are sorted by descending real part (ties by descending imaginary
    part).  Raises NonDiagonalizable (carrying the SpectrumReport) at
    exceptional points and NearDefective when the smallest gap drops below
    gap_floor (default 1e-6 * ||H||; pass 0 to disable).
    """
    A = linalg.as_matrix(H)
    report = linalg.multiplicity_report(A, cluster_tol, rank_tol)
    if not report.diagonalizable:
        worst = report.worst_cluster()
        raise NonDiagonalizable(
            f"defective at eigenvalue {worst.eigenvalue:.6g} "
            f"(eta={worst.eta}, zeta={worst.zeta})",
            report=report,
        )
    vals, vecs = linalg.eigendecompose(A)
    if gap_floor is None:
        gap_floor = DEFAULT_GAP_FLOOR * max(linalg.spectral_norm(A), 1e-300)
    gap = _min_gap(vals)
    if gap < gap_floor:
        raise NearDefective(
            f"min eigenvalue gap {gap:.3e} below floor {gap_floor:.3e} (EP proximity)",
            min_gap=gap,
            floor=gap_floor,
        )
    return frame_from_right(vals, vecs)


def metric(frame: BiorthFrame) -> np.ndarray:
    """The Hermitian metric X = (A A^dag)^-1 in the frame's gauge."""
    A = frame.right
    try:
        X = linalg.inverse(A @ A.conj().T)
    except Singular:
        raise
    return 0.5 * (X + X.conj().T)


@dataclass
class Expansion:
    """Contravariant (c^j) and covariant (c_j) components of a state."""

    contravariant: np.ndarray
    covariant: np.ndarray


def expand(frame: BiorthFrame, psi) -> Expansion:
    """Expansion coefficients c^j = <phi^j|Psi>, c_j = <psi_j|Psi>."""
    v = np.asarray(psi, dtype=complex)
    if v.shape != (frame.dim,):
        raise DimensionMismatch(f"state must have shape ({frame.dim},), got {v.shape}")
    return Expansion(
        contravariant=frame.left.conj().T @ v,
        covariant=frame.right.conj().T @ v,
    )


def pseudo_norm(frame: BiorthFrame, psi) -> float:
    """<Psi|X|Psi>; real (to rounding) by Hermiticity of X."""
    v = np.asarray(psi, dtype=complex)
    if v.shape != (frame.dim,):
        raise DimensionMismatch(f"state must have shape ({frame.dim},), got {v.shape}")
    val = complex(v.conj() @ frame.metric_X @ v)
    scale = max(1.0, abs(val))
    if abs(val.imag) > 1e-12 * scale:
        raise ArithmeticError(f"pseudo-norm not real: {val}")
    return val.real


def rescale_band(frame: BiorthFrame, j: int, f: complex) -> BiorthFrame:
    """GL(1,C) gauge move on band j: psi -> f psi, phi -> phi / conj(f)."""
    if f == 0:
        raise ValueError("gauge factor must be nonzero")
    right = frame.right.copy()
    left = frame.left.copy()
    right[:, j] = f * right[:, j]
    left[:, j] = left[:, j] / np.conj(f)
    X = linalg.inverse(right @ right.conj().T)
    return BiorthFrame(
        energies=frame.energies.copy(),
        right=right,
        left=left,
        metric_X=0.5 * (X + X.conj().T),
        real_spectrum=frame.real_spectrum,
        min_gap=frame.min_gap,
    )


def rebalance(frame: BiorthFrame) -> BiorthFrame:
    """Move to the balanced gauge ||psi_j|| = ||phi^j|| (phases untouched)."""
    out = frame
    for j in range(frame.dim):
        r = np.linalg.norm(frame.left[:, j]) / np.linalg.norm(frame.right[:, j])
        out = rescale_band(out, j, np.sqrt(r))
    return out


def match_bands(reference: BiorthFrame, other: BiorthFrame) -> np.ndarray:
    """Permutation p with band j of `reference` matching band p[j] of `other`.

    Assignment maximizes |<phi^j_ref | psi_k_other>| (optimal, not greedy).
    """
    from scipy.optimize import linear_sum_assignment

    overlap = np.abs(reference.left.conj().T @ other.right)
    _, cols = linear_sum_assignment(-overlap)
    return cols


def permute_bands(frame: BiorthFrame, perm) -> BiorthFrame:
    perm = np.asarray(perm, dtype=int)
    return BiorthFrame(
        energies=frame.energies[perm],
        right=frame.right[:, perm],
        left=frame.left[:, perm],
        metric_X=frame.metric_X,
        real_spectrum=frame.real_spectrum,
        min_gap=frame.min_gap,
    )


def reanchor(frame: BiorthFrame, anchors) -> BiorthFrame:
    """Re-fix canonical phases using given anchor component indices per band.

    Keeps unit norms; makes component anchors[j] of psi_j real positive.  Used
    to extend one point's canonical gauge smoothly to its neighbors.
    """
    out = frame
    for j, i in enumerate(anchors):
        a = out.right[i, j]
        if abs(a) < 1e-300:
            raise StepTooCoarse(f"anchor component {i} of band {j} vanished")
        out = rescale_band(out, j, np.conj(a) / abs(a))
    return out


def anchor_indices(frame: BiorthFrame, stable: bool = False) -> list:
    """Per-band anchor component indices.

    stable=False reproduces the canonical rule (first component above
    threshold); stable=True picks the largest-magnitude component, which stays
    usable across a finite-difference stencil around the frame's point.
    """
    out = []
    for j in range(frame.dim):
        v = frame.right[:, j]
        if stable:
            i = int(np.argmax(np.abs(v)))
        else:
            i = int(np.argmax(np.abs(v) > 1e-12 * np.abs(v).max()))
        out.append(i)
    return out


# ---------------------------------------------------------------------------
# Vectorized closed-form frames for batches of 2x2 Hamiltonians.  Grid scans,
# loop holonomies and path evolutions for the two-level models all funnel
# through here; the per-point result is identical to build_frame.
# ---------------------------------------------------------------------------


class FrameBatch:
    """Frames at N parameter points for a two-level model, as stacked arrays.

    energies : (N, 2) sorted descending by (Re, Im)
    right    : (N, 2, 2) canonical-gauge columns
    left     : (N, 2, 2) biorthonormal duals
    """

    def __init__(self, energies, right, left, min_gap):
        self.energies = energies
        self.right = right
        self.left = left
        self.min_gap = min_gap

    def __len__(self):
        return self.energies.shape[0]

    def real_spectrum_mask(self) -> np.ndarray:
        E = self.energies
        return np.all(np.abs(E.imag) <= SPECTRAL_REALITY_TOL * (1.0 + np.abs(E)), axis=1)

    def frame(self, k: int) -> BiorthFrame:
        return frame_from_right(self.energies[k], self.right[k])

    def track(self):
        """Permute bands for continuity along the point sequence (in place).

        Greedy stepwise assignment by total overlap magnitude; returns the
        per-step tracked overlaps o_k[j] = <phi^j_k | psi_j_{k+1}>.
        """
        N = len(self)
        if N < 2:
            return np.ones((0, 2), dtype=complex)
        ov = np.einsum("kij,kil->kjl", self.left[:-1].conj(), self.right[1:])
        keep = np.abs(ov[:, 0, 0]) + np.abs(ov[:, 1, 1])
        swap = np.abs(ov[:, 0, 1]) + np.abs(ov[:, 1, 0])
        flips = swap > keep
        cum = np.logical_xor.accumulate(np.concatenate([[False], flips]))
        idx = np.where(cum)[0]
        self.energies[idx] = self.energies[idx][:, ::-1]
        self.right[idx] = self.right[idx][:, :, ::-1]
        self.left[idx] = self.left[idx][:, :, ::-1]
        ov = np.einsum("kij,kil->kjl", self.left[:-1].conj(), self.right[1:])
        return np.stack([ov[:, 0, 0], ov[:, 1, 1]], axis=1)


def frame_batch_2x2(H, gap_floor: float | None = None) -> FrameBatch:
    """Closed-form canonical frames for an (N, 2, 2) stack of Hamiltonians.

    Raises NearDefective naming the first point whose gap is below the floor
    (default 1e-6 * ||H||; pass 0 to disable).
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 3 or H.shape[1:] != (2, 2):
        raise DimensionMismatch(f"expected (N, 2, 2), got {H.shape}")
    a, b = H[:, 0, 0], H[:, 0, 1]
    c, d = H[:, 1, 0], H[:, 1, 1]
    half_tr = 0.5 * (a + d)
    sq = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    # orient the root so +sq is the lexicographically larger (Re, Im) branch
    neg = (sq.real < 0) | ((sq.real == 0) & (sq.imag < 0))
    sq = np.where(neg, -sq, sq)
    E = np.stack([half_tr + sq, half_tr - sq], axis=1)
    gap = np.abs(2.0 * sq)
    scale = np.abs(H).sum(axis=(1, 2)) + 1e-300
    if gap_floor is None:
        floors = DEFAULT_GAP_FLOOR * np.linalg.norm(H, ord=2, axis=(1, 2))
    else:
        floors = np.full(len(H), gap_floor)
    bad = gap < floors
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NearDefective(
            f"min eigenvalue gap {gap[k]:.3e} below floor at batch index {k}",
            min_gap=float(gap[k]),
            floor=float(floors[k]),
        )
    A = np.empty((len(H), 2, 2), dtype=complex)
    for col in (0, 1):
        lam = E[:, col]
        u = np.stack([b, lam - a], axis=1)
        w = np.stack([lam - d, c], axis=1)
        pick_u = np.linalg.norm(u, axis=1) >= np.linalg.norm(w, axis=1)
        v = np.where(pick_u[:, None], u, w)
        tiny = np.linalg.norm(v, axis=1) <= 1e-14 * scale
        if np.any(tiny):  # H ~ lam*I; canonical basis
            v[tiny] = 0.0
            v[tiny, col] = 1.0
        v = v / np.linalg.norm(v, axis=1)[:, None]
        anchor = np.where(np.abs(v[:, 0]) > 1e-12, v[:, 0], v[:, 1])
        v = v * (np.conj(anchor) / np.abs(anchor))[:, None]
        A[:, :, col] = v
    detA = A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]
    small = np.abs(detA) < 1e-12
    if np.any(small):
        k = int(np.argmax(small))
        raise NearDefective(
            f"eigenvector matrix nearly singular at batch index {k}",
            min_gap=float(gap[k]),
            floor=float(floors[k]),
        )
    Ainv = np.empty_like(A)
    Ainv[:, 0, 0] = A[:, 1, 1] / detA
    Ainv[:, 0, 1] = -A[:, 0, 1] / detA
    Ainv[:, 1, 0] = -A[:, 1, 0] / detA
    Ainv[:, 1, 1] = A[:, 0, 0] / detA
    left = np.conj(np.transpose(Ainv, (0, 2, 1)))
    return FrameBatch(E, A, left, gap)
