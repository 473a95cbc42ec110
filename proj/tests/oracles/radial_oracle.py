"""Independent oracle for the radial ground state of -Q'' - Q'/r + Q - Q^3 = 0.

Uses scipy's adaptive DOP853 integrator (not the fixed-step RK4 used by the
library) with bisection on Q(0), then radial quadrature for mass, moments and
the log self-interaction. Prints the values frozen into the C++ tests.
"""
import numpy as np
from scipy.integrate import solve_ivp, quad


def shoot(q0, rmax=14.0):
    r0 = 1e-6
    y0 = [q0 + (q0 - q0**3) * r0**2 / 4, (q0 - q0**3) * r0 / 2]

    def rhs(r, y):
        return [y[1], -y[1] / r + y[0] - y[0] ** 3]

    def cross(r, y):
        return y[0]
    cross.terminal = True

    def turn(r, y):
        return y[1]
    turn.terminal = True
    sol = solve_ivp(rhs, (r0, rmax), y0, method="DOP853", rtol=1e-13, atol=1e-15,
                    events=[cross, turn], dense_output=True)
    if sol.t_events[0].size:
        return -1, sol  # crossed zero: q0 too large
    if sol.t_events[1].size:
        return +1, sol  # turned up: q0 too small
    return 0, sol


lo, hi = 2.0, 3.0
for _ in range(60):
    mid = 0.5 * (lo + hi)
    s, _ = shoot(mid)
    if s < 0:
        hi = mid
    else:
        lo = mid
q0 = 0.5 * (lo + hi)
print("q0", repr(q0))

# Integrate to a radius where the profile is still accurate, then match the
# asymptotic tail c r^{-1/2} e^{-r}.
s, sol = shoot(q0, rmax=9.0)
R = min(sol.t[-1], 9.0)
rr = np.linspace(1e-6, R, 200001)
Q = sol.sol(rr)[0]
c = Q[-1] * np.sqrt(R) * np.exp(R)
print("tail c", c, "R", R)


def Qf(r):
    if r <= R:
        return sol.sol(r)[0]
    return c * np.exp(-r) / np.sqrt(r)


def rad(f, lim=40):
    a = quad(lambda r: f(r) * r, 1e-6, R, limit=500, epsabs=1e-14, epsrel=1e-13)[0]
    b = quad(lambda r: f(r) * r, R, lim, limit=500, epsabs=1e-16, epsrel=1e-13)[0]
    return 2 * np.pi * (a + b)


astar = rad(lambda r: Qf(r) ** 2)
m2 = rad(lambda r: Qf(r) ** 2 * r * r)
q4 = rad(lambda r: Qf(r) ** 4)
print("a_star", repr(astar))
print("moment2", repr(m2))
print("half int Q4 / a*", q4 / 2 / astar)

# B0(Q^2,Q^2) = int int ln|x-y| rho(x) rho(y): the radial potential of a
# radial density is Phi(r) = 2pi [ ln r int_0^r rho s ds + int_r^inf rho s ln s ds ].
rg = np.linspace(0, 30, 300001)
rho = np.array([Qf(max(r, 1e-6)) ** 2 for r in rg])
from scipy.integrate import cumulative_trapezoid
inner = cumulative_trapezoid(rho * rg, rg, initial=0.0)
lnr = np.log(np.maximum(rg, 1e-300))
outer_int = cumulative_trapezoid(rho * rg * np.where(rg > 0, lnr, 0.0), rg, initial=0.0)
outer = outer_int[-1] - outer_int
phi = 2 * np.pi * (np.where(rg > 0, lnr, 0.0) * inner + outer)
from scipy.integrate import simpson
b0 = 2 * np.pi * simpson(phi * rho * rg, x=rg)
print("b0(Q2,Q2)", repr(b0))
const = astar**2 / 4 - astar**2 / 2 * np.log(astar) + 0.5 * b0
print("energy constant", repr(const))
