"""Independent reference values for the C++ test suite.

Uses scipy's matrix exponential and collocation BVP solver, and plain quadrature
for transforms, so nothing here shares code or formulas with the library's
Riccati/cosh implementation.  Run: python3 tests/oracle/derive_values.py
"""
import numpy as np
from scipy.integrate import quad, solve_bvp
from scipy.linalg import expm
from scipy.special import erf

ETA, DELTA, RHO, THETA, T, D = 0.051, 0.05, 0.04, 0.5, 30.0, 0.01
P0 = 400.23
G = ETA * (1 - THETA) / THETA


def theta_matrix(extra=0.0):
    dl = DELTA + extra
    return np.array([[ETA - dl, -ETA], [-ETA, RHO - ETA + dl]])


def coupling(extra=0.0):
    """u(0)/p(0) from u(T) = G p(T) with (p,u)(t) = expm(Theta t)(p0,u0)."""
    e = expm(theta_matrix(extra) * T)
    # G (e11 + e12 k) = e21 + e22 k
    return (e[1, 0] - G * e[0, 0]) / (G * e[0, 1] - e[1, 1])


def mode_path(extra, t):
    k = coupling(extra)
    e = expm(theta_matrix(extra) * t)
    return e[0, 0] + e[0, 1] * k, e[1, 0] + e[1, 1] * k


def terminal_ratio(extra):
    """p(T)/p(0): propagate (1, G) back from T with expm(-Theta T); both terms are positive."""
    f = expm(-theta_matrix(extra) * T)
    return 1.0 / (f[0, 0] + G * f[0, 1])


def bvp(extra=0.0, tol=1e-12):
    a = ETA - DELTA - extra

    def f(t, y):
        p, u = y
        return np.vstack([a * p - ETA * u, RHO * u - ETA * p - a * u])

    def bc(ya, yb):
        return np.array([ya[0] - 1.0, yb[1] - G * yb[0]])

    ts = np.linspace(0, T, 401)
    sol = solve_bvp(f, bc, ts, np.vstack([np.ones_like(ts), 0.6 * np.ones_like(ts)]), tol=tol, max_nodes=1000000)
    assert sol.success, sol.message
    return sol


def bump(x):
    return 0.75 * P0 + 0.5 * P0 * np.exp(-x * x)


def main():
    print("xi", np.hypot(2 * (DELTA - ETA) + RHO, 2 * ETA))
    w = np.linalg.eigvalsh(theta_matrix())
    print("theta eigenvalues", w)

    s = bvp()
    print("kappa (expm)", coupling())
    print("tau(0) (bvp)", s.sol(0.0)[1])
    print("tau(15) (bvp)", s.sol(15.0)[1] / s.sol(15.0)[0])
    print("tau(T) (bvp)", s.sol(T)[1] / s.sol(T)[0])
    print("p_T / p0 (bvp)", s.sol(T)[0])
    print("p_T for p0=400.23", P0 * s.sol(T)[0])

    # Bump on [-1,1]: A_n = (2/L) int p0(x) cos(n pi (x+1)/2) dx, mode 0 weighted 1/2.
    L = 2.0
    coeffs = []
    for n in range(128):
        k = n * np.pi / L
        v, _ = quad(lambda x: bump(x) * np.cos(k * (x + 1.0)), -1, 1, epsabs=1e-12, limit=200)
        coeffs.append(2.0 * v / L)
    print("A0 A1 A2", coeffs[0], coeffs[1], coeffs[2])

    # Bounded global bump: each cosine mode solved as its own BVP.
    def bounded_global(x, t):
        p = u = 0.0
        for n, a_n in enumerate(coeffs):
            if n % 2 == 1:  # odd modes vanish for a centred bump
                continue
            k = n * np.pi / L
            m = 0.5 if n == 0 else np.cos(k * (x + 1.0))
            sn = bvp(D * k * k, 1e-12 if n == 0 else 1e-9).sol(t)
            p += a_n * m * sn[0]
            u += a_n * m * sn[1]
        return p, u

    for x in (0.0, 0.5, 1.0):
        p, u = bounded_global(x, 0.0)
        print(f"bounded global tau(x={x}, 0)", u / p)
    print("bounded global p(0, T)", bounded_global(0.0, T)[0])

    # Heat smoothing of the bump at x=0.3, t=5 (closed form of the Gaussian part).
    t, x = 5.0, 0.3
    s4 = 1 + 4 * D * t
    print("heat bump (0.3, 5)", 0.75 * P0 + 0.5 * P0 * np.exp(-x * x / s4) / np.sqrt(s4))

    # Hat 1 + max(0, 1 - 2|y|) under the heat kernel with variance 2 d t = 0.02, at x = 0.
    s = np.sqrt(0.02)
    print("heat hat (0, 1)", 1 + erf(0.5 / (s * np.sqrt(2))) - 2 * s * np.sqrt(2 / np.pi) * (1 - np.exp(-0.125 / s**2)))

    # Unbounded global bump: constant part plus (1/pi) int sqrt(pi) e^{-w^2/4} (.) cos(w x) dw.
    def unbounded_global(x, t):
        p0m, u0m = mode_path(0.0, t)
        p = 0.75 * P0 * p0m
        u = 0.75 * P0 * u0m

        def integrand(w, which):
            pm, um = mode_path(D * w * w, t)
            return np.sqrt(np.pi) * np.exp(-w * w / 4) * (pm if which == 0 else um) * np.cos(w * x) / np.pi

        p += 0.5 * P0 * quad(integrand, 0, 40, args=(0,), epsabs=1e-12, limit=400)[0]
        u += 0.5 * P0 * quad(integrand, 0, 40, args=(1,), epsabs=1e-12, limit=400)[0]
        return p, u

    for x in (0.0, 0.5, 1.0):
        p, u = unbounded_global(x, 0.0)
        print(f"unbounded global tau(x={x}, 0)", u / p)
    pt = 0.75 * P0 * terminal_ratio(0.0) + 0.5 * P0 * quad(
        lambda w: np.exp(-w * w / 4) * terminal_ratio(D * w * w) / np.sqrt(np.pi), 0, 14, epsabs=1e-12, limit=400)[0]
    print("unbounded global p(0, T)", pt)
    print("bounded global p(0, T) via terminal ratios",
          sum(a_n * (0.5 if n == 0 else np.cos(n * np.pi / L)) * terminal_ratio(D * (n * np.pi / L) ** 2)
              for n, a_n in enumerate(coeffs)))


if __name__ == "__main__":
    main()
