"""Probe 2: aux identity sign with a single smooth gauge across the stencil."""
import sys
sys.path.insert(0, "src")
import numpy as np
from holoq import frames, models

dir1 = models.dirac(1.0)
bdgm = models.bdg()

EPS = np.zeros((3, 3, 3))
EPS[0, 1, 2] = EPS[1, 2, 0] = EPS[2, 0, 1] = 1
EPS[0, 2, 1] = EPS[2, 1, 0] = EPS[1, 0, 2] = -1


def smooth_A(model, R0):
    """Return A(R) in one smooth gauge anchored at R0 (canonical at R0)."""
    f0 = frames.build_frame(model.evaluate(np.asarray(R0)))
    anch = frames.anchor_indices(f0, stable=True)

    def A_at(Rp):
        fr = frames.build_frame(model.evaluate(np.asarray(Rp)))
        perm = frames.match_bands(f0, fr)
        fr = frames.permute_bands(fr, perm)
        fr = frames.reanchor(fr, anch)
        return fr.right

    return A_at


def aux_residuals(model, R0, h):
    R0 = np.asarray(R0, dtype=float)
    A_at = smooth_A(model, R0)

    def F_at(Rp):
        Ainv = np.linalg.inv(A_at(Rp))
        F = []
        for a in range(3):
            e = np.zeros(3); e[a] = h
            dA = (A_at(Rp + e) - A_at(Rp - e)) / (2 * h)
            F.append(-1j * dA @ Ainv)
        return F

    F0 = F_at(R0)
    dF = np.zeros((3, 3, 2, 2), dtype=complex)
    for a in range(3):
        e = np.zeros(3); e[a] = h
        Fp, Fm = F_at(R0 + e), F_at(R0 - e)
        for b in range(3):
            dF[a, b] = (Fp[b] - Fm[b]) / (2 * h)
    curl = [sum(EPS[c, a, b] * dF[a, b] for a in range(3) for b in range(3)) for c in range(3)]
    FxF = [sum(EPS[c, a, b] * (F0[a] @ F0[b]) for a in range(3) for b in range(3)) for c in range(3)]
    rm = max(np.linalg.norm(curl[c] - 1j * FxF[c], 2) for c in range(3))
    rp = max(np.linalg.norm(curl[c] + 1j * FxF[c], 2) for c in range(3))
    return rm, rp


for model, R0 in ((bdgm, (0.0, 0.0, 1.0)), (dir1, (2.0, 0.0, 0.0))):
    for h in (2e-3, 1e-3, 5e-4):
        rm, rp = aux_residuals(model, R0, h)
        print(f"{model.name} at {R0} h={h}: ||curl - i FxF||={rm:.3e}   ||curl + i FxF||={rp:.3e}")

# also with a random smooth synthetic frame family (no model): A(R) polynomial
rng = np.random.default_rng(0)
C0 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) + 3 * np.eye(2)
C1 = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]


def A_poly(R):
    return C0 + sum(R[a] * C1[a] for a in range(3)) + 0.3 * R[0] * R[1] * np.eye(2)


def aux_res_poly(R0, h):
    R0 = np.asarray(R0, dtype=float)

    def F_at(Rp):
        Ainv = np.linalg.inv(A_poly(Rp))
        F = []
        for a in range(3):
            e = np.zeros(3); e[a] = h
            dA = (A_poly(Rp + e) - A_poly(Rp - e)) / (2 * h)
            F.append(-1j * dA @ Ainv)
        return F

    F0 = F_at(R0)
    dF = np.zeros((3, 3, 2, 2), dtype=complex)
    for a in range(3):
        e = np.zeros(3); e[a] = h
        Fp, Fm = F_at(R0 + e), F_at(R0 - e)
        for b in range(3):
            dF[a, b] = (Fp[b] - Fm[b]) / (2 * h)
    curl = [sum(EPS[c, a, b] * dF[a, b] for a in range(3) for b in range(3)) for c in range(3)]
    FxF = [sum(EPS[c, a, b] * (F0[a] @ F0[b]) for a in range(3) for b in range(3)) for c in range(3)]
    rm = max(np.linalg.norm(curl[c] - 1j * FxF[c], 2) for c in range(3))
    rp = max(np.linalg.norm(curl[c] + 1j * FxF[c], 2) for c in range(3))
    return rm, rp


rm, rp = aux_res_poly((0.1, -0.2, 0.3), 1e-3)
print(f"poly A: ||curl - i FxF||={rm:.3e}   ||curl + i FxF||={rp:.3e}")
