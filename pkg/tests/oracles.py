"""Independent reference implementations used as test oracles.

Everything here deliberately takes a different route from the package
under test: classic fixed-step RK4 instead of embedded Dormand-Prince,
brute-force scans instead of kd-trees, per-step QR instead of a
renormalized tangent vector, plain Python loops instead of vectorized
kernels.  Agreement between the two routes is the point of the tests.
"""

import numpy as np

SIGMA, RHO, BETA = 10.0, 28.0, 8.0 / 3.0
HENON_A, HENON_B = 1.4, 0.3


def lorenz_rhs(state, sigma=SIGMA, rho=RHO, beta=BETA):
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def rk4_advance(rhs, state, span, n_sub):
    """Classic fixed-step RK4 over `span` split into n_sub equal steps."""
    x = np.array(state, dtype=float)
    h = span / n_sub
    for _ in range(n_sub):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h * k2)
        k4 = rhs(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def henon_apply(state, a=HENON_A, b=HENON_B):
    x, y = state
    return np.array([1.0 - a * x * x + y, b * x])


def henon_jacobian(state, a=HENON_A, b=HENON_B):
    x = state[0]
    return np.array([[-2.0 * a * x, 1.0], [b, 0.0]])


def forward_fd_jacobian(f, x, eps=1e-7):
    """One-sided forward differences (the package uses central)."""
    x = np.asarray(x, dtype=float)
    fx = np.asarray(f(x))
    jac = np.empty((fx.shape[0], x.shape[0]))
    for j in range(x.shape[0]):
        xp = x.copy()
        xp[j] += eps
        jac[:, j] = (np.asarray(f(xp)) - fx) / eps
    return jac


def brute_force_nn(points, cloud):
    """Nearest-neighbour distance of each point to the cloud, O(m n)."""
    points = np.atleast_2d(points)
    out = np.empty(points.shape[0])
    for i, p in enumerate(points):
        diff = cloud - p
        out[i] = np.sqrt(np.min(np.einsum("ij,ij->i", diff, diff)))
    return out


def scalar_forward(layers, act, x):
    """Pure-Python loop MLP forward pass; layers is [(W, b), ...]."""
    h = [float(v) for v in x]
    for depth, (w, b) in enumerate(layers):
        nxt = []
        for i in range(w.shape[0]):
            s = float(b[i])
            for j in range(w.shape[1]):
                s += float(w[i, j]) * h[j]
            nxt.append(act(s) if depth < len(layers) - 1 else s)
        h = nxt
    return np.array(h)


def qr_lyapunov(jacobians):
    """Largest Lyapunov exponent per step from a (n, d, d) Jacobian stack."""
    d = jacobians.shape[1]
    q = np.eye(d)
    log_sum = 0.0
    for jac in jacobians:
        q, r = np.linalg.qr(jac @ q)
        log_sum += np.log(abs(r[0, 0]))
    return log_sum / jacobians.shape[0]


def tanh_cubic(z):
    """Degree-3 Taylor polynomial of tanh about 0."""
    return z - z**3 / 3.0


def random_net_arrays(rng, dims, scale=0.5):
    """Layer (W, b) pairs drawn from a numpy Generator."""
    return [(rng.normal(scale=scale, size=(dims[k + 1], dims[k])),
             rng.normal(scale=scale, size=dims[k + 1]))
            for k in range(len(dims) - 1)]
