"""Probe 4: pin the corrected BdG curvature field (direction + radial falloff)."""
import sys
sys.path.insert(0, "src")
import numpy as np
from holoq import frames, models

bdgm = models.bdg()


def plaquette(model, R, plane, h, band):
    a_, b_ = plane
    f0 = frames.build_frame(model.evaluate(np.asarray(R)))
    corners = []
    for sa, sb in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        Rp = np.array(R, dtype=float)
        Rp[a_] += sa * h / 2
        Rp[b_] += sb * h / 2
        corners.append(Rp)
    frs = []
    for Rp in corners:
        fr = frames.build_frame(model.evaluate(Rp))
        perm = frames.match_bands(f0, fr)
        frs.append(frames.permute_bands(fr, perm))
    total = 0.0
    for k in range(4):
        u, v = frs[k], frs[(k + 1) % 4]
        ofwd = np.vdot(u.left[:, band], v.right[:, band])
        orev = np.vdot(v.left[:, band], u.right[:, band])
        total += 0.5 * (np.log(ofwd) - np.log(orev))
    return 1j * total / h**2


def B_vec(model, R, h=1e-3, band=0):
    bz = plaquette(model, R, (0, 1), h, band)
    bx = plaquette(model, R, (1, 2), h, band)
    by = plaquette(model, R, (2, 0), h, band)
    return np.array([bx, by, bz])


for R in ((0.2, 0.1, 1.0), (0.3, -0.25, 1.4), (0.05, 0.3, 0.8), (0.4, 0.2, 2.0)):
    R = np.array(R, dtype=float)
    B = B_vec(bdgm, R)
    x, y, z = R
    r = np.linalg.norm(R)
    W = np.sqrt(z * z - x * x - y * y)
    mag_corr = r / (2 * W**3)           # with 1/r^2 falloff
    mag_paper = r**3 / (2 * W**3)       # theta-only form evaluated literally
    Bpred = mag_corr * R / r
    print(f"R={R} B_num={np.real_if_close(B, tol=1e6)}")
    print(f"   +mag_corr*Rhat={Bpred},  |B|={np.linalg.norm(B):.6f} vs corr {mag_corr:.6f} vs paper-literal {mag_paper:.6f}")
    print(f"   direction dot: {np.real(np.dot(B, R)) / (np.linalg.norm(B) * r):+.8f}  max dev from pred: {np.abs(B - Bpred).max():.2e}")

# Dirac band-2 sign check too
dir1 = models.dirac(1.0)
for R in ((np.sqrt(2), 0, 0),):
    b2 = plaquette(dir1, np.array(R, dtype=float), (0, 1), 1e-3, 1)
    print(f"dirac band2 at {R}: {b2:.8f} expect +0.5j")
