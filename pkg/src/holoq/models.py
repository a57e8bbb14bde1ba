"""Parametric Hamiltonian models.

Two closed-form two-level models plus a generic user-supplied callback:

* dirac(s):  H(p) = p_x sigma_x + p_y sigma_y + (p_z + i s) sigma_z.
  Spectrum E = +-sqrt(p^2 - s^2 + 2 i p_z s); real on the plane p_z = 0 with
  p_x^2 + p_y^2 >= s^2; the ring p_x^2 + p_y^2 = s^2, p_z = 0 is a ring of
  exceptional points.

* bdg():  H(x,y,z) = i x sigma_x + i y sigma_y + z sigma_z, the two-mode
  bosonic Bogoliubov-de Gennes block.  Spectrum E = +-sqrt(z^2 - x^2 - y^2);
  the cone z^2 = x^2 + y^2 is the exceptional set.  sigma_z H sigma_z = H^dag
  holds identically, which is the algebraic root of the constant-Y property.

Built-in models carry a ReferenceBundle of closed forms (energies,
eigenvectors, metric, curvature, EP predicate) used as oracles by the
numerical machinery and its tests.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import frames, linalg
from .errors import NoReference, OnEP, OutOfValidity

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

EP_PREDICATE_TOL = 1e-12


@dataclass
class ReferenceBundle:
    """Closed-form oracle data for a built-in model."""

    energies: Callable          # R -> (2,) complex, (+root, -root)
    right_vectors: Callable     # R -> (2, 2) columns, paper gauge (unnormalized)
    left_vectors: Callable      # R -> (2, 2) biorthonormal duals
    metric: Callable            # R -> (2, 2) closed-form X (validity-limited)
    metric_frame: Callable      # R -> BiorthFrame in the gauge matching `metric`
    curvature: Callable         # (R, band) -> (3,) complex
    is_ep: Callable             # R -> bool, exact predicate (tol 1e-12)
    Y: Optional[np.ndarray] = None
    alphas: Optional[tuple] = None


@dataclass(frozen=True)
class ModelHandle:
    """A parametric Hamiltonian R -> H(R) with optional closed-form reference."""

    name: str
    param_dim: int
    dim: int
    evaluate: Callable
    fixed: dict = field(default_factory=dict)
    reference: Optional[ReferenceBundle] = None
    evaluate_batch: Optional[Callable] = None

    def hamiltonians(self, points: np.ndarray) -> np.ndarray:
        """Stack of H(R_k) for points of shape (N, param_dim)."""
        points = np.asarray(points, dtype=float)
        if self.evaluate_batch is not None:
            return self.evaluate_batch(points)
        return np.stack([self.evaluate(R) for R in points])


def model_hamiltonian(model: ModelHandle, R) -> np.ndarray:
    """Evaluate H(R) at a single parameter point."""
    R = np.asarray(R, dtype=float)
    if R.shape != (model.param_dim,):
        raise ValueError(f"expected parameter point of shape ({model.param_dim},)")
    if not np.all(np.isfinite(R)):
        raise ValueError("parameter point must be finite")
    return model.evaluate(R)


def reference_energies(model: ModelHandle, R):
    if model.reference is None:
        raise NoReference(f"model '{model.name}' has no closed-form reference")
    E = model.reference.energies(np.asarray(R, dtype=float))
    return complex(E[0]), complex(E[1])


def reference_curvature(model: ModelHandle, R, band: int) -> np.ndarray:
    if model.reference is None:
        raise NoReference(f"model '{model.name}' has no closed-form reference")
    return model.reference.curvature(np.asarray(R, dtype=float), band)


def is_exceptional(model: ModelHandle, R) -> bool:
    if model.reference is None:
        raise NoReference(f"model '{model.name}' has no closed-form reference")
    return bool(model.reference.is_ep(np.asarray(R, dtype=float)))


# ---------------------------------------------------------------------------
# non-Hermitian Dirac model
# ---------------------------------------------------------------------------


def _dirac_eval(s):
    def evaluate(R):
        px, py, pz = R
        return px * SIGMA_X + py * SIGMA_Y + (pz + 1j * s) * SIGMA_Z

    return evaluate


def _dirac_eval_batch(s):
    def evaluate_batch(P):
        px, py, pz = P[:, 0], P[:, 1], P[:, 2]
        H = np.empty((len(P), 2, 2), dtype=complex)
        H[:, 0, 0] = pz + 1j * s
        H[:, 0, 1] = px - 1j * py
        H[:, 1, 0] = px + 1j * py
        H[:, 1, 1] = -(pz + 1j * s)
        return H

    return evaluate_batch


def _dirac_root(R, s):
    px, py, pz = R
    return np.sqrt(complex(px * px + py * py + pz * pz - s * s) + 2j * pz * s)


def _dirac_reference(s: float) -> ReferenceBundle:
    def energies(R):
        E = _dirac_root(R, s)
        return np.array([E, -E])

    def is_ep(R):
        px, py, pz = R
        return abs(px * px + py * py - s * s) <= EP_PREDICATE_TOL and abs(pz) <= EP_PREDICATE_TOL

    def right_vectors(R):
        if is_ep(R):
            raise OnEP(f"Dirac reference eigenvectors undefined on the EP ring at {R}")
        px, py, pz = R
        E = _dirac_root(R, s)
        psi1 = np.array([E + 1j * s + pz, px + 1j * py])
        psi2 = np.array([-px + 1j * py, E + 1j * s + pz])
        A = np.column_stack([psi1, psi2])
        scale = max(np.linalg.norm(psi1), np.linalg.norm(psi2), 1e-300)
        if abs(np.linalg.det(A)) < 1e-9 * scale**2:
            raise OutOfValidity(f"closed-form Dirac eigenvectors degenerate at {R}")
        return A

    def left_vectors(R):
        A = right_vectors(R)
        return np.linalg.inv(A).conj().T

    def metric(R):
        px, py, pz = R
        q2 = px * px + py * py
        if abs(pz) > EP_PREDICATE_TOL or q2 <= s * s:
            raise OutOfValidity(
                "closed-form Dirac metric is stated on the real-spectrum plane "
                f"p_z = 0, p_x^2+p_y^2 > s^2; got {R}"
            )
        off = -s * (py + 1j * px) / q2
        return 0.5 * np.array([[1.0, off], [np.conj(off), 1.0]])

    def metric_frame(R):
        # gauge psi_j / E reproduces the paper metric on the p_z = 0 plane
        A = right_vectors(R)
        E = _dirac_root(R, s)
        if abs(E) < 1e-12:
            raise OutOfValidity(f"metric gauge undefined where E -> 0 at {R}")
        return frames.frame_from_right(np.array([E, -E]), A / E)

    def curvature(R, band):
        if band not in (0, 1):
            raise ValueError("band must be 0 or 1")
        if is_ep(R):
            raise OnEP(f"curvature diverges on the EP ring at {R}")
        px, py, pz = R
        q2 = px * px + py * py
        if abs(pz) > EP_PREDICATE_TOL or q2 <= s * s:
            raise OutOfValidity(
                f"closed-form Dirac curvature valid on p_z = 0 with p_x^2+p_y^2 > s^2; got {R}"
            )
        sign = -1.0 if band == 0 else 1.0
        bz = sign * 0.5j * s / (q2 - s * s) ** 1.5
        return np.array([0.0, 0.0, bz])

    return ReferenceBundle(
        energies=energies,
        right_vectors=right_vectors,
        left_vectors=left_vectors,
        metric=metric,
        metric_frame=metric_frame,
        curvature=curvature,
        is_ep=is_ep,
    )


def dirac(s: float = 1.0) -> ModelHandle:
    """Non-Hermitian Dirac model with gain/loss strength s."""
    return ModelHandle(
        name="dirac",
        param_dim=3,
        dim=2,
        evaluate=_dirac_eval(s),
        evaluate_batch=_dirac_eval_batch(s),
        fixed={"s": float(s)},
        reference=_dirac_reference(float(s)),
    )


# ---------------------------------------------------------------------------
# two-mode Bogoliubov-de Gennes model
# ---------------------------------------------------------------------------


def _bdg_eval(R):
    x, y, z = R
    return 1j * x * SIGMA_X + 1j * y * SIGMA_Y + z * SIGMA_Z


def _bdg_eval_batch(P):
    x, y, z = P[:, 0], P[:, 1], P[:, 2]
    H = np.empty((len(P), 2, 2), dtype=complex)
    H[:, 0, 0] = z
    H[:, 0, 1] = y + 1j * x
    H[:, 1, 0] = -y + 1j * x
    H[:, 1, 1] = -z
    return H


def _bdg_reference() -> ReferenceBundle:
    def energies(R):
        x, y, z = R
        E = np.sqrt(complex(z * z - x * x - y * y))
        return np.array([E, -E])

    def is_ep(R):
        x, y, z = R
        return abs(z * z - x * x - y * y) <= EP_PREDICATE_TOL

    def _ab(R):
        x, y, z = R
        w2 = z * z - x * x - y * y
        if is_ep(R):
            raise OnEP(f"BdG closed-form eigenvectors undefined on the cone at {R}")
        if w2 <= 0 or z <= 0:
            raise OutOfValidity(
                f"BdG closed forms stated for the upper cone interior (z > 0, z^2 > x^2+y^2); got {R}"
            )
        W = np.sqrt(w2)
        den = np.sqrt(2.0 * (w2 + z * W))
        a = -(z + W) / den
        b = (y - 1j * x) / den
        return a, b

    def right_vectors(R):
        a, b = _ab(R)
        return np.array([[a, np.conj(b)], [b, np.conj(a)]])

    def left_vectors(R):
        # sign of phi^2 fixed so <phi^i|psi_j> = delta_ij (phi^j = alpha_j sigma_z psi_j)
        a, b = _ab(R)
        return np.array([[a, -np.conj(b)], [-b, np.conj(a)]])

    def metric(R):
        a, b = _ab(R)
        n = abs(a) ** 2 + abs(b) ** 2
        return np.array([[n, -2.0 * a * np.conj(b)], [-2.0 * np.conj(a) * b, n]])

    def metric_frame(R):
        return frames.frame_from_right(energies(R), right_vectors(R))

    def curvature(R, band):
        # radial field of magnitude 1 / (2 r^2 cos(2 theta)^{3/2}); the + branch
        # belongs to the E = +sqrt(z^2-x^2-y^2) band (checked against plaquette
        # holonomy and a direct expansion of the eigenvector family)
        if band not in (0, 1):
            raise ValueError("band must be 0 or 1")
        if is_ep(R):
            raise OnEP(f"curvature diverges on the cone at {R}")
        x, y, z = R
        w2 = z * z - x * x - y * y
        if w2 <= 0:
            raise OutOfValidity(f"closed-form BdG curvature valid inside the cone; got {R}")
        r = np.sqrt(x * x + y * y + z * z)
        mag = r / (2.0 * w2**1.5)
        sign = 1.0 if band == 0 else -1.0
        return sign * mag * np.array([x, y, z]) / r

    return ReferenceBundle(
        energies=energies,
        right_vectors=right_vectors,
        left_vectors=left_vectors,
        metric=metric,
        metric_frame=metric_frame,
        curvature=curvature,
        is_ep=is_ep,
        Y=SIGMA_Z.copy(),
        alphas=(1, -1),
    )


def bdg() -> ModelHandle:
    """Two-mode bosonic Bogoliubov-de Gennes model."""
    return ModelHandle(
        name="bdg",
        param_dim=3,
        dim=2,
        evaluate=_bdg_eval,
        evaluate_batch=_bdg_eval_batch,
        reference=_bdg_reference(),
    )


def custom(fn: Callable, dim: int, param_dim: int = 3, name: str = "custom") -> ModelHandle:
    """Wrap a matrix-valued callback R -> H(R) as a model without reference."""

    def evaluate(R):
        H = linalg.as_matrix(fn(R))
        if H.shape != (dim, dim):
            raise ValueError(f"callback returned shape {H.shape}, expected ({dim}, {dim})")
        return H

    return ModelHandle(name=name, param_dim=param_dim, dim=dim, evaluate=evaluate)
