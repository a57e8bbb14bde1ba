"""Probe: verify closed forms, gauge factors, aux-identity sign, plaquette pollution."""
import sys
sys.path.insert(0, "src")
import numpy as np
from holoq import frames, models, linalg

np.set_printoptions(precision=8, suppress=False, linewidth=120)

dir1 = models.dirac(1.0)
bdgm = models.bdg()

# --- 1. Dirac verbatim reference at (sqrt2, 0, 0)
R = np.array([np.sqrt(2.0), 0.0, 0.0])
A = dir1.reference.right_vectors(R)
L = dir1.reference.left_vectors(R)
print("psi1 =", A[:, 0], " expect (1+1j, sqrt2)")
print("phi1 =", L[:, 0], " expect (0.5, (1+1j)/(2 sqrt2)) =", (0.5, (1+1j)/(2*np.sqrt(2))))
print("biorth:", L.conj().T @ A)

# metric from reference gauge (psi/E)
fr_ref = dir1.reference.metric_frame(R)
print("X_ref =\n", fr_ref.metric_X)
print("X_closed =\n", dir1.reference.metric(R))

# canonical-gauge X
fr_can = frames.build_frame(dir1.evaluate(R))
print("X_canonical =\n", fr_can.metric_X, "\n expect 4x the closed form")

# pseudo-norm example
psi1 = A[:, 0]
print("pseudo_norm(ref frame, psi1_raw) =", frames.pseudo_norm(fr_ref, psi1), "expect 1")

# --- 2. BdG at (0,0,1) and interior point
Rb = np.array([0.2, 0.1, 1.0])
Ab = bdgm.reference.right_vectors(Rb)
Lb = bdgm.reference.left_vectors(Rb)
print("BdG biorth:", np.abs(Lb.conj().T @ Ab - np.eye(2)).max())
Xb = bdgm.reference.metric(Rb)
frb = bdgm.reference.metric_frame(Rb)
print("BdG X closed vs frame:", np.abs(Xb - frb.metric_X).max())
x, y, z = Rb
W = np.sqrt(z*z - x*x - y*y)
Xsimple = np.array([[z, y + 1j*x], [y - 1j*x, z]]) / W
print("BdG X simple-form check:", np.abs(Xb - Xsimple).max())
# sigma_z compatibility: phi = alpha sigma_z psi
sz = models.SIGMA_Z
print("phi1 - sz psi1:", np.abs(Lb[:, 0] - sz @ Ab[:, 0]).max())
print("phi2 + sz psi2:", np.abs(Lb[:, 1] + sz @ Ab[:, 1]).max())

# balanced gauge from canonical = sigma_z-compatible?
fcb = frames.rebalance(frames.build_frame(bdgm.evaluate(Rb)))
print("balanced: phi1 - sz psi1:", np.abs(fcb.left[:, 0] - sz @ fcb.right[:, 0]).max())
print("balanced: phi2 + sz psi2:", np.abs(fcb.left[:, 1] + sz @ fcb.right[:, 1]).max())

# --- 3. Auxiliary operator identity sign
def F_components(model, R, h=1e-3):
    """F_a = -i (d_a A) A^-1 using canonical frames anchored to center."""
    f0 = frames.build_frame(model.evaluate(np.asarray(R)))
    anch = frames.anchor_indices(f0)

    def frame_at(Rp):
        fr = frames.build_frame(model.evaluate(np.asarray(Rp)))
        perm = frames.match_bands(f0, fr)
        fr = frames.permute_bands(fr, perm)
        return frames.reanchor(fr, anch)

    F = []
    for a in range(3):
        e = np.zeros(3); e[a] = h
        Ap = frame_at(R + e).right
        Am = frame_at(R - e).right
        dA = (Ap - Am) / (2 * h)
        F.append(-1j * dA @ np.linalg.inv(frame_at(R).right))
    return F, frame_at

for model, R0 in ((bdgm, np.array([0.0, 0.0, 1.0])), (dir1, np.array([2.0, 0.0, 0.0]))):
    h = 1e-3
    F, frame_at = F_components(model, R0, h)
    # curl via FD of F
    def F_at(Rp):
        Fs, _ = F_components(model, Rp, h)
        return Fs
    curl = [None]*3
    eps = np.zeros((3,3,3))
    eps[0,1,2]=eps[1,2,0]=eps[2,0,1]=1; eps[0,2,1]=eps[2,1,0]=eps[1,0,2]=-1
    dF = np.zeros((3,3,2,2), dtype=complex)  # dF[a][b] = d_a F_b
    for a in range(3):
        e = np.zeros(3); e[a] = h
        Fp = F_at(R0 + e); Fm = F_at(R0 - e)
        for b in range(3):
            dF[a, b] = (Fp[b] - Fm[b]) / (2*h)
    curl = [sum(eps[c,a,b]*dF[a,b] for a in range(3) for b in range(3)) for c in range(3)]
    FxF = [sum(eps[c,a,b]*(F[a] @ F[b]) for a in range(3) for b in range(3)) for c in range(3)]
    res_minus = max(np.linalg.norm(curl[c] - 1j*FxF[c], 2) for c in range(3))
    res_plus = max(np.linalg.norm(curl[c] + 1j*FxF[c], 2) for c in range(3))
    print(f"{model.name} at {R0}: ||curl F - i FxF|| = {res_minus:.3e}   ||curl F + i FxF|| = {res_plus:.3e}")

# --- 4. Plaquette curvature: one-orientation vs antisymmetrized
def plaquette(model, R, plane, h, band, symmetrized):
    f0 = frames.build_frame(model.evaluate(np.asarray(R)))
    anch = frames.anchor_indices(f0)
    a_, b_ = plane
    corners = []
    for sa, sb in ((-1,-1),(1,-1),(1,1),(-1,1)):
        Rp = np.array(R, dtype=float)
        Rp[a_] += sa*h/2; Rp[b_] += sb*h/2
        corners.append(Rp)
    frs = []
    for Rp in corners:
        fr = frames.build_frame(model.evaluate(Rp))
        perm = frames.match_bands(f0, fr)
        frs.append(frames.permute_bands(fr, perm))
    total = 0.0
    for k in range(4):
        u, v = frs[k], frs[(k+1) % 4]
        ofwd = np.vdot(u.left[:, band], v.right[:, band])
        orev = np.vdot(v.left[:, band], u.right[:, band])
        if symmetrized:
            total += 0.5*(np.log(ofwd) - np.log(orev))
        else:
            total += np.log(ofwd)
    return 1j*total/h**2

for model, R0, expect in ((dir1, np.array([np.sqrt(2),0,0]), -0.5j), (bdgm, np.array([0.,0.,1.]), -0.5)):
    for h in (1e-2, 1e-3):
        b1 = plaquette(model, R0, (0,1), h, 0, False)
        b2 = plaquette(model, R0, (0,1), h, 0, True)
        print(f"{model.name} h={h}: one-orient B={b1:.8f}  antisym B={b2:.8f}  expect {expect}")
