"""Probe 3: plaquette symmetrization, holonomy vs quadrature, real-phase, Y."""
import sys
sys.path.insert(0, "src")
import numpy as np
from scipy import integrate
from holoq import frames, models

dir1 = models.dirac(1.0)
bdgm = models.bdg()


def stencil_frames(model, center, points):
    f0 = frames.build_frame(model.evaluate(np.asarray(center)))
    out = []
    for Rp in points:
        fr = frames.build_frame(model.evaluate(np.asarray(Rp)))
        perm = frames.match_bands(f0, fr)
        out.append(frames.permute_bands(fr, perm))
    return f0, out


def plaquette(model, R, plane, h, band, symmetrized=True):
    a_, b_ = plane
    corners = []
    for sa, sb in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        Rp = np.array(R, dtype=float)
        Rp[a_] += sa * h / 2
        Rp[b_] += sb * h / 2
        corners.append(Rp)
    _, frs = stencil_frames(model, R, corners)
    total = 0.0
    for k in range(4):
        u, v = frs[k], frs[(k + 1) % 4]
        ofwd = np.vdot(u.left[:, band], v.right[:, band])
        orev = np.vdot(v.left[:, band], u.right[:, band])
        if symmetrized:
            total += 0.5 * (np.log(ofwd) - np.log(orev))
        else:
            total += np.log(ofwd)
    return 1j * total / h**2


print("== plaquette ==")
for model, R0, expect in ((dir1, (np.sqrt(2), 0, 0), -0.5j), (bdgm, (0.0, 0.0, 1.0), -0.5)):
    for h in (1e-2, 5e-3, 2.5e-3, 1e-3):
        b_one = plaquette(model, R0, (0, 1), h, 0, False)
        b_sym = plaquette(model, R0, (0, 1), h, 0, True)
        print(f"{model.name} h={h}: one={b_one:.8f}  sym={b_sym:.8f}  err_sym={abs(b_sym-expect):.2e}")

# order check for symmetrized version
for model, R0, expect in ((dir1, (np.sqrt(2), 0, 0), -0.5j), (bdgm, (0.2, 0.1, 1.0), None)):
    if expect is None:
        expect = bdgm.reference.curvature(np.array(R0), 0)[2] * 1.0  # z-component? needs projection
        # curvature vector at R0, z-plaquette measures B_z
        expect = bdgm.reference.curvature(np.array(R0), 0)[2]
    errs = []
    hs = (1e-2, 5e-3, 2.5e-3)
    for h in hs:
        errs.append(abs(plaquette(model, R0, (0, 1), h, 0, True) - expect))
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    print(f"{model.name} plaquette order: {order:.2f} errs={[f'{e:.2e}' for e in errs]}")

print("== holonomy (Dirac loop r=0.5 center (2,0,0)) ==")


def loop_vertices_xy(center, radius, K, clockwise=False):
    ang = 2 * np.pi * np.arange(K + 1) / K
    if clockwise:
        ang = -ang
    pts = np.zeros((K + 1, 3))
    pts[:, 0] = center[0] + radius * np.cos(ang)
    pts[:, 1] = center[1] + radius * np.sin(ang)
    pts[:, 2] = center[2]
    return pts


def holonomy(model, pts, band, symmetrized=True):
    # tracked frames along the loop
    H = model.hamiltonians(pts)
    fb = frames.frame_batch_2x2(H)
    fb.track()
    total = 0.0
    for k in range(len(pts) - 1):
        ofwd = np.vdot(fb.left[k][:, band], fb.right[k + 1][:, band])
        orev = np.vdot(fb.left[k + 1][:, band], fb.right[k][:, band])
        if symmetrized:
            total += 0.5 * (np.log(ofwd) - np.log(orev))
        else:
            total += np.log(ofwd)
    return 1j * total


def disk_quad_dirac(center, radius, s=1.0):
    def integrand(rho, alpha):
        x = center[0] + rho * np.cos(alpha)
        y = center[1] + rho * np.sin(alpha)
        return rho / (x * x + y * y - s * s) ** 1.5

    val, err = integrate.dblquad(integrand, 0, 2 * np.pi, 0, radius, epsabs=1e-12, epsrel=1e-12)
    return val, err


I_disk, qerr = disk_quad_dirac((2.0, 0.0), 0.5)
beta_expect = -0.5j * I_disk  # band 1, CCW
print(f"quadrature integral={I_disk:.10f} (err {qerr:.1e}), expected beta (b1, ccw) = {beta_expect:.10f}")
for K in (100, 200, 400, 800):
    pts = loop_vertices_xy((2.0, 0.0, 0.0), 0.5, K)
    b_sym = holonomy(dir1, pts, 0, True)
    b_one = holonomy(dir1, pts, 0, False)
    print(f"K={K}: sym={b_sym:.10f} relerr={abs(b_sym-beta_expect)/abs(beta_expect):.2e}   one={b_one:.10f} relerr={abs(b_one-beta_expect)/abs(beta_expect):.2e}")

print("== BdG loop theta=pi/8 ==")


def cone_loop(theta, r, K, clockwise=False):
    ang = 2 * np.pi * np.arange(K + 1) / K
    if clockwise:
        ang = -ang
    pts = np.zeros((K + 1, 3))
    pts[:, 0] = r * np.sin(theta) * np.cos(ang)
    pts[:, 1] = r * np.sin(theta) * np.sin(ang)
    pts[:, 2] = r * np.cos(theta)
    return pts


th = np.pi / 8
cap_expect = -np.pi * (np.cos(th) / np.sqrt(np.cos(2 * th)) - 1.0)
for K in (200, 400):
    pts = cone_loop(th, 1.0, K)
    b = holonomy(bdgm, pts, 0, True)
    print(f"K={K}: beta={b:.10f}  analytic cap flux={cap_expect:.10f}  |Im|={abs(b.imag):.2e}")

print("== real-phase condition (reference gauge, Richardson) ==")


def real_phase(model, R, band, h=1e-3):
    bundle = model.reference
    psi = bundle.metric_frame(np.asarray(R)).right[:, band]

    def D(hh):
        comps = []
        for a in range(3):
            e = np.zeros(3)
            e[a] = hh
            Xp = bundle.metric_frame(np.asarray(R) + e).metric_X
            Xm = bundle.metric_frame(np.asarray(R) - e).metric_X
            comps.append(complex(psi.conj() @ ((Xp - Xm) / (2 * hh)) @ psi))
        return np.array(comps)

    comps = (4 * D(h / 2) - D(h)) / 3
    return comps[np.argmax(np.abs(comps))]


for model, R0 in ((bdgm, (0.2, 0.1, 1.0)), (dir1, (np.sqrt(2), 0.0, 0.0))):
    v = real_phase(model, R0, 0)
    print(f"{model.name} at {R0}: largest component = {v:.3e} |.|={abs(v):.3e}")

print("== find_Y (balanced gauge least squares) ==")


def find_Y(model, points, tol=1e-6):
    frs = [frames.rebalance(frames.build_frame(model.evaluate(np.asarray(R)))) for R in points]
    n = frs[0].dim
    basis = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1
        basis.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = 1
            basis.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1j
            E[j, i] = -1j
            basis.append(E)
    best = None
    for pattern in range(2 ** (n - 1)):
        alphas = [1] + [1 if (pattern >> k) & 1 == 0 else -1 for k in range(n - 1)]
        rows, rhs = [], []
        for fr in frs:
            for j in range(n):
                for Bk in basis:
                    pass
        # build design: columns = basis coeffs, rows = stacked (Re, Im) of alpha_j B psi_j entries
        Arows = []
        brows = []
        for fr in frs:
            for j in range(n):
                cols = [alphas[j] * (Bk @ fr.right[:, j]) for Bk in basis]
                M = np.stack(cols, axis=1)  # (n, nbasis)
                target = fr.left[:, j]
                Arows.append(M.real)
                Arows.append(M.imag)
                brows.append(target.real)
                brows.append(target.imag)
        Amat = np.concatenate(Arows)
        bvec = np.concatenate(brows)
        coef, *_ = np.linalg.lstsq(Amat, bvec, rcond=None)
        Y = sum(c * Bk for c, Bk in zip(coef, basis))
        resid = 0.0
        denom = 0.0
        for fr in frs:
            for j in range(n):
                resid += np.linalg.norm(alphas[j] * Y @ fr.right[:, j] - fr.left[:, j]) ** 2
                denom += np.linalg.norm(fr.left[:, j]) ** 2
        rel = np.sqrt(resid / denom)
        if best is None or rel < best[2]:
            best = (Y, alphas, rel)
    Y, alphas, rel = best
    k = np.unravel_index(np.argmax(np.abs(Y)), Y.shape)
    Y = Y / abs(Y[k])
    d = np.real(np.diag(Y))
    nz = np.nonzero(np.abs(d) > 1e-9)[0]
    if len(nz) and d[nz[0]] < 0:
        Y = -Y
        alphas = [-a for a in alphas]
    return Y, alphas, rel


rng = np.random.default_rng(1)
pts_bdg = []
while len(pts_bdg) < 10:
    v = rng.uniform(-0.5, 0.5, 3)
    v[2] = rng.uniform(0.8, 1.5)
    if v[2] ** 2 > v[0] ** 2 + v[1] ** 2 + 0.3:
        pts_bdg.append(v)
Y, al, res = find_Y(bdgm, pts_bdg)
print("BdG Y =\n", np.round(Y, 10), "alphas:", al, "resid:", f"{res:.2e}")

pts_dir = []
while len(pts_dir) < 10:
    v = rng.uniform(-2, 2, 3)
    v[2] = 0.0
    if v[0] ** 2 + v[1] ** 2 > 1.5:
        pts_dir.append(v)
Yd, ald, resd = find_Y(dir1, pts_dir)
print("Dirac resid:", f"{resd:.2e} (expect >> 1e-6)")

herm = models.custom(lambda R: R[0] * models.SIGMA_X + R[1] * models.SIGMA_Y + R[2] * models.SIGMA_Z, 2)
pts_h = [rng.uniform(-1, 1, 3) + np.array([0, 0, 2.0]) for _ in range(6)]
Yh, alh, resh = find_Y(herm, pts_h)
print("Hermitian Y =\n", np.round(Yh, 10), "alphas:", alh, "resid:", f"{resh:.2e}")

print("== connection three ways (BdG) ==")


def connection_fd(model, R, direction, h, band):
    R = np.asarray(R, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    f0 = frames.rebalance(frames.build_frame(model.evaluate(R)))
    anch = frames.anchor_indices(f0, stable=True)

    def fr_at(Rp):
        fr = frames.build_frame(model.evaluate(Rp))
        perm = frames.match_bands(f0, fr)
        fr = frames.permute_bands(fr, perm)
        fr = frames.reanchor(fr, anch)
        return frames.rebalance(fr)

    fp, fm = fr_at(R + h * d), fr_at(R - h * d)
    dpsi = (fp.right[:, band] - fm.right[:, band]) / (2 * h)
    return 1j * np.vdot(f0.left[:, band], dpsi), f0, fp, fm, dpsi


Rb = np.array([0.25, -0.1, 1.1])
dvec = np.array([1.0, 0.5, -0.2])
dvec /= np.linalg.norm(dvec)
for h in (1e-3, 3e-4):
    A1, f0, fp, fm, dpsi = connection_fd(bdgm, Rb, dvec, h, 0)
    # Y-form
    A2 = 1j * np.vdot(models.SIGMA_Z @ f0.right[:, 0], dpsi)  # alpha_1 = +1
    # increment route (symmetrized edge logs over [R-hd, R] and [R, R+hd])
    def edgelog(u, v):
        ofwd = np.vdot(u.left[:, 0], v.right[:, 0])
        orev = np.vdot(v.left[:, 0], u.right[:, 0])
        return 0.5 * (np.log(ofwd) - np.log(orev))
    A3 = 1j * (edgelog(fm, f0) + edgelog(f0, fp)) / (2 * h)
    print(f"h={h}: fd={A1:.10f}  Yform={A2:.10f}  incr={A3:.10f}  |fd-Y|={abs(A1-A2):.1e} |fd-incr|={abs(A1-A3):.1e}")
