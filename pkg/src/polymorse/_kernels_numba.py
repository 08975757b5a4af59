"""numba-compiled twins of :mod:`polymorse._kernels_numpy`.

Same signatures and return values; explicit loops instead of vectorized
numpy so that the tiny per-iteration arrays do not pay numpy dispatch costs.
"""
import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def area_gradient(X):
    n = X.shape[0]
    G = np.zeros_like(X)
    for i in range(n):
        nx = (i + 1) % n
        pv = (i - 1) % n
        G[i, 0] = 0.5 * (X[nx, 1] - X[pv, 1])
        G[i, 1] = 0.5 * (X[pv, 0] - X[nx, 0])
    return G


@njit(**_opts)
def constraint_values(X, lengths):
    n, d = X.shape
    g = np.empty(n)
    for i in range(n):
        nx = (i + 1) % n
        s = 0.0
        for c in range(d):
            e = X[nx, c] - X[i, c]
            s += e * e
        g[i] = s - lengths[i] * lengths[i]
    return g


@njit(**_opts)
def constraint_jacobian(X):
    n, d = X.shape
    J = np.zeros((n, n * d))
    for i in range(n):
        nx = (i + 1) % n
        for c in range(d):
            e = X[nx, c] - X[i, c]
            J[i, i * d + c] += -2.0 * e
            J[i, nx * d + c] += 2.0 * e
    return J


@njit(**_opts)
def lagrangian_gradient(X, lam):
    n, d = X.shape
    G = area_gradient(X)
    out = np.empty(n * d)
    for i in range(n):
        for c in range(d):
            out[i * d + c] = G[i, c]
    for i in range(n):
        nx = (i + 1) % n
        for c in range(d):
            e = X[nx, c] - X[i, c]
            out[i * d + c] -= lam[i] * (-2.0 * e)
            out[nx * d + c] -= lam[i] * (2.0 * e)
    return out


@njit(**_opts)
def lagrangian_hessian(n, d, lam):
    N = n * d
    H = np.zeros((N, N))
    for i in range(n):
        nx = (i + 1) % n
        pv = (i - 1) % n
        H[i * d, nx * d + 1] += 0.5
        H[nx * d + 1, i * d] += 0.5
        H[i * d, pv * d + 1] -= 0.5
        H[pv * d + 1, i * d] -= 0.5
        dg = -2.0 * (lam[i] + lam[pv])
        for c in range(d):
            H[i * d + c, i * d + c] += dg
            H[i * d + c, nx * d + c] += 2.0 * lam[i]
            H[nx * d + c, i * d + c] += 2.0 * lam[i]
    return H


@njit(**_opts)
def fd_lagrangian_hessian(X, lam, free, h):
    n, d = X.shape
    m = free.shape[0]
    Xw = X.copy()
    H = np.empty((m, m))
    for k in range(m):
        j = free[k]
        vi = j // d
        ci = j % d
        Xw[vi, ci] += h
        gp = lagrangian_gradient(Xw, lam)
        Xw[vi, ci] -= 2.0 * h
        gm = lagrangian_gradient(Xw, lam)
        Xw[vi, ci] += h
        for r in range(m):
            H[r, k] = (gp[free[r]] - gm[free[r]]) / (2.0 * h)
    out = np.empty((m, m))
    for a in range(m):
        for b in range(m):
            out[a, b] = 0.5 * (H[a, b] + H[b, a])
    return out


@njit(**_opts)
def _take_cols(J, free):
    out = np.empty((J.shape[0], free.shape[0]))
    for r in range(J.shape[0]):
        for k in range(free.shape[0]):
            out[r, k] = J[r, free[k]]
    return out


@njit(**_opts)
def multipliers(X, free):
    n, d = X.shape
    J = _take_cols(constraint_jacobian(X), free)
    G = area_gradient(X)
    m = free.shape[0]
    gA = np.empty(m)
    for k in range(m):
        j = free[k]
        gA[k] = G[j // d, j % d]
    JT = np.ascontiguousarray(J.T)
    lam = np.linalg.lstsq(JT, gA)[0]
    res = gA - JT @ lam
    scale = max(np.sqrt(np.sum(gA * gA)), 1e-300)
    return lam, np.sqrt(np.sum(res * res)) / scale


@njit(**_opts)
def project_closure(X0, lengths, free, maxiter, tol):
    n, d = X0.shape
    X = X0.copy()
    m = free.shape[0]
    for _ in range(maxiter):
        g = constraint_values(X, lengths)
        err = 0.0
        for i in range(n):
            v = abs(g[i]) / (lengths[i] * lengths[i])
            if v > err:
                err = v
        if err < tol:
            return X, err
        J = _take_cols(constraint_jacobian(X), free)
        step = np.linalg.lstsq(J, g)[0]
        for k in range(m):
            j = free[k]
            X[j // d, j % d] -= step[k]
    g = constraint_values(X, lengths)
    err = 0.0
    for i in range(n):
        v = abs(g[i]) / (lengths[i] * lengths[i])
        if v > err:
            err = v
    return X, err


@njit(**_opts)
def _merit(X, lam, lengths, free, ltot):
    gfull = lagrangian_gradient(X, lam)
    g = constraint_values(X, lengths)
    m = free.shape[0]
    gL = np.empty(m)
    for k in range(m):
        gL[k] = gfull[free[k]]
    val = np.sqrt(np.sum(gL * gL) / ltot**2 + np.sum(g * g) / ltot**4)
    return gL, g, val


@njit(**_opts)
def kkt_newton(X0, lengths, free, lam0, maxiter, tol):
    n, d = X0.shape
    X = X0.copy()
    lam = lam0.copy()
    ltot = np.sum(lengths)
    m = free.shape[0]
    gL, g, merit = _merit(X, lam, lengths, free, ltot)
    it = 0
    K = np.zeros((m + n, m + n))
    rhs = np.empty(m + n)
    for it in range(1, maxiter + 1):
        Hf = lagrangian_hessian(n, d, lam)
        J = _take_cols(constraint_jacobian(X), free)
        K[:, :] = 0.0
        for a in range(m):
            for b in range(m):
                K[a, b] = Hf[free[a], free[b]]
        for r in range(n):
            for a in range(m):
                K[a, m + r] = -J[r, a]
                K[m + r, a] = J[r, a]
        for a in range(m):
            rhs[a] = -gL[a]
        for r in range(n):
            rhs[m + r] = -g[r]
        # singular KKT matrices only occur at non-generic points
        if abs(np.linalg.det(K)) == 0.0:
            break
        step = np.linalg.solve(K, rhs)
        nrm = np.sqrt(np.sum(step[:m] * step[:m]))
        fac = 1.0
        if nrm > ltot:
            fac = ltot / nrm
        t = 1.0
        accepted = False
        Xn = X.copy()
        lamn = lam.copy()
        gLn = gL
        gn = g
        meritn = merit
        while t > 1e-6:
            for i in range(n):
                for c in range(d):
                    Xn[i, c] = X[i, c]
            for a in range(m):
                j = free[a]
                Xn[j // d, j % d] += t * fac * step[a]
            for r in range(n):
                lamn[r] = lam[r] + t * fac * step[m + r]
            gLn, gn, meritn = _merit(Xn, lamn, lengths, free, ltot)
            if meritn < (1.0 - 1e-4 * t) * merit:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        X = Xn.copy()
        lam = lamn.copy()
        gL = gLn
        g = gn
        merit = meritn
        if merit < tol:
            break
    grad_res = np.sqrt(np.sum(gL * gL)) / ltot
    con_res = np.sqrt(np.sum(g * g)) / ltot**2
    ok = grad_res < tol and con_res < tol
    return X, lam, grad_res, con_res, it, ok


@njit(**_opts)
def scan_brackets(table, signs, omegas):
    # omegas must be consecutive integers. An interval whose ends lie
    # strictly inside one strip (pi*q, pi*(q+1)) cannot bracket a root, and
    # the test uses the same f - pi*w arithmetic as the numpy twin
    n, M = table.shape
    nE = signs.shape[0]
    nw = omegas.shape[0]
    iw0 = int(omegas[0])
    iw1 = iw0 + nw - 1
    cap = 64
    out = np.empty((cap, 3), dtype=np.int64)
    cnt = 0
    f0 = np.empty(M)
    q = np.empty(M)
    for e in range(nE):
        f0[:] = 0.0
        for i in range(n):
            si = signs[e, i]
            for k in range(M):
                f0[k] += si * table[i, k]
        for k in range(M):
            q[k] = np.floor(f0[k] / np.pi)
        for k in range(M - 1):
            a = f0[k]
            b = f0[k + 1]
            if q[k] == q[k + 1]:
                lo = np.pi * q[k]
                hi = np.pi * (q[k] + 1.0)
                if a - lo > 0.0 and b - lo > 0.0 and a - hi < 0.0 and b - hi < 0.0:
                    continue
            wa = int(min(q[k], q[k + 1])) - 1
            wb = int(max(q[k], q[k + 1])) + 2
            if wa < iw0:
                wa = iw0
            if wb > iw1:
                wb = iw1
            for wv in range(wa, wb + 1):
                shift = np.pi * wv
                prev = a - shift
                cur = b - shift
                if prev == 0.0 or (prev < 0.0 and cur > 0.0) or (prev > 0.0 and cur < 0.0):
                    if cnt == cap:
                        cap *= 2
                        grown = np.empty((cap, 3), dtype=np.int64)
                        grown[:cnt] = out[:cnt]
                        out = grown
                    out[cnt, 0] = e
                    out[cnt, 1] = wv - iw0
                    out[cnt, 2] = k
                    cnt += 1
    return out[:cnt].copy()
