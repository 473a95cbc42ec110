"""Independent values for the logarithmic-convolution tests (scipy quadrature)."""
import numpy as np
from scipy.integrate import dblquad, quad

h = 1.0


def cell_mean(f):
    v = dblquad(lambda y, x: f(np.hypot(x, y)), 0, h / 2, 0, h / 2,
                epsabs=1e-14, epsrel=1e-13)[0]
    return 4 * v / h**2


print("cell mean ln r (h=1)", repr(cell_mean(np.log)))
print("cell mean ln(1+r) (h=1)", repr(cell_mean(np.log1p)))
print("cell mean ln(1+1/r) (h=1)", repr(cell_mean(lambda r: np.log1p(1 / r))))

# Unit-mass Gaussian rho = exp(-r^2)/pi (variance 1/2 per axis).
rho = lambda r: np.exp(-r * r) / np.pi
phi0 = 2 * np.pi * quad(lambda r: np.log(r) * rho(r) * r, 0, 12, limit=400, epsabs=1e-15)[0]
print("Phi(0)", repr(phi0), "closed form", -np.euler_gamma / 2)
# rho * rho is a Gaussian of doubled variance: exp(-r^2/2)/(2 pi).
rho2 = lambda r: np.exp(-r * r / 2) / (2 * np.pi)
b0 = 2 * np.pi * quad(lambda r: np.log(r) * rho2(r) * r, 0, 16, limit=400, epsabs=1e-15)[0]
print("b0(rho,rho)", repr(b0), "closed form", 0.5 * (np.log(2) - np.euler_gamma))
# star norm of f = sqrt(rho): (int ln(1+r) rho)^(1/2)
s = 2 * np.pi * quad(lambda r: np.log1p(r) * rho(r) * r, 0, 12, limit=400, epsabs=1e-15)[0]
print("star norm sqrt(rho)", repr(np.sqrt(s)))
