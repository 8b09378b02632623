"""Independent reference values frozen into tests/oracle_values.hpp.

Run with python3; needs numpy, scipy and mpmath. Integrators and quadratures
here share no code with the C++ library.
"""
import math

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp, solve_bvp
from scipy.optimize import brentq, minimize_scalar

mp.mp.dps = 30


def cubic(k):
    return lambda u: k * u * (u * u - 1.0)


def radial_shot(n, k, a, r_end, r_eval):
    f = cubic(k)
    r0 = 1e-5
    y0 = [a + f(a) * r0**2 / (2 * n), f(a) * r0 / n]
    rhs = lambda r, y: [y[1], f(y[0]) - (n - 1) / math.tanh(r) * y[1]]
    sol = solve_ivp(rhs, (r0, r_end), y0, method="DOP853", rtol=1e-13, atol=1e-15, t_eval=r_eval)
    return sol.y[0]


def disk_pole(k, R, c):
    # radial Dirichlet problem u(R) = c for n = 2, shooting on the pole value
    g = lambda a: radial_shot(2, k, a, R, [R])[-1] - c
    return brentq(g, -0.99, 0.99, xtol=1e-14)


def hyperbolic_bvp(n, k, T, ts):
    f = cubic(k)
    t = np.linspace(-T, T, 2001)
    y = np.vstack([np.tanh(t), 1 - np.tanh(t) ** 2])
    rhs = lambda t, y: np.vstack([y[1], f(y[0]) - (n - 1) * np.tanh(t) * y[1]])
    bc = lambda ya, yb: np.array([ya[0] + 1, yb[0] - 1])
    sol = solve_bvp(rhs, bc, t, y, tol=1e-10, max_nodes=200000)
    assert sol.success
    return [float(sol.sol(s)[0]) for s in ts]


def mode_ratio(lam, m, r, R):
    # regular eigenfunction of the hyperbolic Laplacian on H^2 with angular index m
    nu = -0.5 + mp.sqrt(0.25 - lam)
    P = lambda s: mp.legenp(nu, -m, mp.cosh(s), type=3).real
    return float(P(r) / P(R))


def t_brute(z1, z2):
    # distance to the geodesic {z2 = 0} of the ball model, minimized over the geodesic
    def d(w):
        num = 2 * ((z1 - w) ** 2 + z2**2)
        return math.acosh(1 + num / ((1 - z1 * z1 - z2 * z2) * (1 - w * w)))
    res = minimize_scalar(d, bounds=(-0.999999, 0.999999), method="bounded", options={"xatol": 1e-13})
    return math.copysign(res.fun, z2)


if __name__ == "__main__":
    u = radial_shot(3, 0.5, 0.5, 10.0, [2.0, 5.0, 10.0])
    print("radial n3 k0.5 a0.5 u(2),u(5),u(10):", *("%.15g" % v for v in u))
    u = radial_shot(3, 1.0, 0.5, 15.0, [15.0])
    print("radial n3 k1 a0.5 u(15):", "%.15g" % u[0])
    print("disk pole k2/9 R4 c0.5:", "%.15g" % disk_pole(2 / 9, 4.0, 0.5))
    print("disk pole k2/9 R4 c-0.8:", "%.15g" % disk_pole(2 / 9, 4.0, -0.8))
    print("hyperbolic n2 k2/9 T8 U(1),U(2),U(4):", *("%.15g" % v for v in hyperbolic_bvp(2, 2 / 9, 8.0, [1.0, 2.0, 4.0])))
    print("hyperbolic n3 k1 T8 U(1),U(2):", *("%.15g" % v for v in hyperbolic_bvp(3, 1.0, 8.0, [1.0, 2.0])))
    for m in (0, 1, 2):
        print("mode m=%d v(3)/v(10), v(6)/v(10):" % m, "%.15g %.15g" % (mode_ratio(2 / 9, m, 3.0, 10.0), mode_ratio(2 / 9, m, 6.0, 10.0)))
    for z in [(0.0, 0.5), (0.3, -0.4), (-0.6, 0.7)]:
        print("t_brute", z, "%.15g" % t_brute(*z))
    # alpha/beta for n = 10, k = 2
    print("n10 k2 alpha-, beta-:", "%.15g %.15g" % ((9 - math.sqrt(73)) / 2, (9 - math.sqrt(65)) / 2))
