"""Independent reference computations used only by the tests.

None of these go through the package's transfer/scattering-matrix code.
"""
import numpy as np
from scipy.integrate import solve_ivp


def square_barrier_transmission(p, height, width, mass, hbar):
    """Textbook |t|^2 for a real square barrier, valid on both sides of E = V0."""
    e = p * p / (2 * mass)
    q = np.sqrt(complex(p * p - 2 * mass * height))
    s = np.sin(q * width / hbar)  # sin(i z) = i sinh(z) below threshold
    return 1.0 / (1.0 + height**2 * abs(s) ** 2 / (4 * e * abs(e - height)))


def ode_amplitudes(breakpoints, values, p, mass, hbar, rtol=1e-11):
    """Left-incidence (t, r) by integrating the Schrodinger equation backwards.

    Starts from a pure transmitted wave exp(ikx) right of the potential,
    integrates psi'' = (2m/hbar^2)(V - E) psi to the left edge, and reads off
    incident and reflected amplitudes there.  Phase convention: plane waves
    referenced to x = 0.
    """
    k = p / hbar
    e = p * p / (2 * mass)
    x = np.asarray(breakpoints, float)
    v = np.asarray(values, complex)

    def pot(xx):
        j = np.searchsorted(x, xx, side="right") - 1
        return v[j] if 0 <= j < v.size else 0.0

    def rhs(xx, y):
        psi = y[0] + 1j * y[1]
        dpsi = y[2] + 1j * y[3]
        dd = 2 * mass / hbar**2 * (pot(xx) - e) * psi
        return [dpsi.real, dpsi.imag, dd.real, dd.imag]

    psi = np.exp(1j * k * x[-1])
    dpsi = 1j * k * psi
    y = np.array([psi.real, psi.imag, dpsi.real, dpsi.imag])
    # integrate segment by segment so the solver never straddles a jump
    for a, b in zip(x[::-1][:-1], x[::-1][1:]):
        sol = solve_ivp(rhs, (a, b), y, method="DOP853", rtol=rtol, atol=1e-14,
                        first_step=None)
        y = sol.y[:, -1]
    psi = y[0] + 1j * y[1]
    dpsi = y[2] + 1j * y[3]
    x0 = x[0]
    # psi = A e^{ikx} + B e^{-ikx}
    A = 0.5 * (psi + dpsi / (1j * k)) * np.exp(-1j * k * x0)
    B = 0.5 * (psi - dpsi / (1j * k)) * np.exp(1j * k * x0)
    return 1.0 / A, B / A


def free_dwell_matrix(p, l, mass, hbar, left=0.0):
    """Plane-wave on-shell dwell matrix over [left, left + l], integrated by hand."""
    k = p / hbar
    m11 = mass * l / p
    # int exp(-2ikx) dx over the interval
    overlap = (np.exp(-2j * k * (left + l)) - np.exp(-2j * k * left)) / (-2j * k)
    m12 = mass / p * overlap
    return np.array([[m11, m12], [np.conj(m12), m11]])


def quadrature_overlap(psi_a, psi_b, a, b, n=20001):
    """Composite Simpson rule for int_a^b conj(psi_a) psi_b dx."""
    from scipy.integrate import simpson

    x = np.linspace(a, b, n)
    return simpson(np.conj(psi_a(x)) * psi_b(x), x=x)
