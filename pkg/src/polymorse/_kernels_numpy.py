"""Pure-numpy implementations of the hot kernels.

Coordinates are an ``(n, d)`` array with ``d`` in {2, 3}; flattened vectors
use row-major order (vertex-major). ``free`` is an integer array of the
flattened coordinates that are not pinned by the gauge. The objective is
always the signed area of the projection onto the first two axes, which is
A for planar polygons and S(P, e_z) for spatial ones.

The numba module mirrors every function here with the same signature.
"""
import numpy as np


def area_gradient(X):
    nxt = np.roll(X, -1, axis=0)
    prv = np.roll(X, 1, axis=0)
    G = np.zeros_like(X)
    G[:, 0] = 0.5 * (nxt[:, 1] - prv[:, 1])
    G[:, 1] = 0.5 * (prv[:, 0] - nxt[:, 0])
    return G


def constraint_values(X, lengths):
    E = np.roll(X, -1, axis=0) - X
    return np.einsum("ij,ij->i", E, E) - lengths * lengths


def constraint_jacobian(X):
    n, d = X.shape
    E = np.roll(X, -1, axis=0) - X
    J = np.zeros((n, n, d))
    idx = np.arange(n)
    J[idx, idx, :] = -2.0 * E
    J[idx, (idx + 1) % n, :] += 2.0 * E
    return J.reshape(n, n * d)


def lagrangian_gradient(X, lam):
    """Flattened gradient of A - sum(lam * g)."""
    return area_gradient(X).ravel() - constraint_jacobian(X).T @ lam


def lagrangian_hessian(n, d, lam):
    """Exact Hessian of A - sum(lam * g); both terms are quadratic."""
    H = np.zeros((n, d, n, d))
    idx = np.arange(n)
    nxt = (idx + 1) % n
    prv = (idx - 1) % n
    H[idx, 0, nxt, 1] += 0.5
    H[nxt, 1, idx, 0] += 0.5
    H[idx, 0, prv, 1] -= 0.5
    H[prv, 1, idx, 0] -= 0.5
    diag = -2.0 * (lam + lam[prv])
    for c in range(d):
        H[idx, c, idx, c] += diag
        H[idx, c, nxt, c] += 2.0 * lam
        H[nxt, c, idx, c] += 2.0 * lam
    return H.reshape(n * d, n * d)


def fd_lagrangian_hessian(X, lam, free, h):
    """Central differences of the analytic Lagrangian gradient, free block."""
    x = X.ravel().copy()
    shape = X.shape
    m = free.shape[0]
    H = np.empty((m, m))
    for k in range(m):
        j = free[k]
        x[j] += h
        gp = lagrangian_gradient(x.reshape(shape), lam)[free]
        x[j] -= 2.0 * h
        gm = lagrangian_gradient(x.reshape(shape), lam)[free]
        x[j] += h
        H[:, k] = (gp - gm) / (2.0 * h)
    return 0.5 * (H + H.T)


def multipliers(X, free):
    """Least-squares multipliers and the relative stationarity residual."""
    J = constraint_jacobian(X)[:, free]
    gA = area_gradient(X).ravel()[free]
    lam, *_ = np.linalg.lstsq(J.T, gA, rcond=None)
    res = gA - J.T @ lam
    scale = max(np.linalg.norm(gA), 1e-300)
    return lam, np.linalg.norm(res) / scale


def project_closure(X0, lengths, free, maxiter, tol):
    """Gauss-Newton projection onto the length constraints (min-norm steps).

    Returns the projected coordinates and the final max |g_i| / l_i^2.
    """
    X = X0.copy()
    shape = X.shape
    for _ in range(maxiter):
        g = constraint_values(X, lengths)
        err = np.max(np.abs(g) / (lengths * lengths))
        if err < tol:
            return X, err
        J = constraint_jacobian(X)[:, free]
        step, *_ = np.linalg.lstsq(J, g, rcond=None)
        x = X.ravel()
        x[free] -= step
        X = x.reshape(shape)
    g = constraint_values(X, lengths)
    return X, np.max(np.abs(g) / (lengths * lengths))


def _kkt_residual(X, lam, lengths, free):
    gL = lagrangian_gradient(X, lam)[free]
    g = constraint_values(X, lengths)
    return gL, g


def kkt_newton(X0, lengths, free, lam0, maxiter, tol):
    """Damped Newton on the stationarity system of A restricted to the
    length constraints, in the gauge chart given by ``free``.

    Convergence is declared when the stationarity residual relative to the
    total length and the constraint residual relative to its square both
    fall below ``tol``. Returns ``(X, lam, grad_res, con_res, iters, ok)``.
    """
    n, d = X0.shape
    X = X0.copy()
    lam = lam0.copy()
    ltot = lengths.sum()
    m = free.shape[0]
    gL, g = _kkt_residual(X, lam, lengths, free)
    merit = np.sqrt(gL @ gL / ltot**2 + g @ g / ltot**4)
    it = 0
    for it in range(1, maxiter + 1):
        H = lagrangian_hessian(n, d, lam)[np.ix_(free, free)]
        J = constraint_jacobian(X)[:, free]
        K = np.zeros((m + n, m + n))
        K[:m, :m] = H
        K[:m, m:] = -J.T
        K[m:, :m] = J
        rhs = -np.concatenate([gL, g])
        try:
            step = np.linalg.solve(K, rhs)
        except np.linalg.LinAlgError:
            break
        dx = step[:m]
        dlam = step[m:]
        # cap the step at the polygon scale
        nrm = np.linalg.norm(dx)
        if nrm > ltot:
            dx *= ltot / nrm
            dlam *= ltot / nrm
        t = 1.0
        accepted = False
        while t > 1e-6:
            x_new = X.ravel().copy()
            x_new[free] += t * dx
            X_new = x_new.reshape(n, d)
            lam_new = lam + t * dlam
            gL_new, g_new = _kkt_residual(X_new, lam_new, lengths, free)
            merit_new = np.sqrt(gL_new @ gL_new / ltot**2 + g_new @ g_new / ltot**4)
            if merit_new < (1.0 - 1e-4 * t) * merit:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        X, lam, gL, g, merit = X_new, lam_new, gL_new, g_new, merit_new
        if merit < tol:
            break
    grad_res = np.linalg.norm(gL) / ltot
    con_res = np.linalg.norm(g) / ltot**2
    ok = grad_res < tol and con_res < tol
    return X, lam, grad_res, con_res, it, ok


def scan_brackets(table, signs, omegas):
    """Sign-change brackets of f(r) = signs @ table - pi * omega.

    ``table[i, k] = arcsin(l_i / (2 r_k))``. Returns an ``(m, 3)`` int array
    of (sign-row, omega-index, k) with f changing sign on [r_k, r_{k+1}]
    or vanishing at r_k.
    """
    out = []
    chunk = max(1, 2**16 // max(table.shape[1], 1))
    for start in range(0, signs.shape[0], chunk):
        F0 = signs[start:start + chunk] @ table
        for w_idx, w in enumerate(omegas):
            F = F0 - np.pi * w
            s = np.sign(F)
            hit = (s[:, :-1] * s[:, 1:] < 0) | (s[:, :-1] == 0)
            rows, ks = np.nonzero(hit)
            for r_, k_ in zip(rows, ks):
                out.append((start + r_, w_idx, k_))
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    return np.array(out, dtype=np.int64)
