"""Spin coherent states, Husimi fields on a sphere grid, and Wehrl functionals.

A state of spin J becomes the function Q(theta, phi) = <Omega| rho |Omega>
with |Omega> = exp(-i phi jz) exp(-i theta jy) |J, J>.  In the ladder basis
the overlap factorizes as <J, m|Omega> = exp(-i m phi) a_m(theta) with real
nonnegative amplitudes, so every field built from rho is a finite azimuthal
Fourier series

    F(theta, phi) = sum_k g_k(theta) exp(i k phi),  |k| <= 2J.

Fields are stored in that spectral form, with each component carrying
analytic theta-derivative columns.  The differential actions

    jz  -> -i d_phi
    j+  ->  exp(+i phi) (d_theta + i cot(theta) d_phi)
    j-  -> -exp(-i phi) (d_theta - i cot(theta) d_phi)

then reduce to exact component-wise recurrences, which keeps the dissipator
fields free of finite-difference noise.  Quadrature pairs Gauss-Legendre
nodes in cos(theta) with a uniform phi grid, so there are no polar nodes
and trigonometric polynomials up to the band limit integrate exactly.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dynamics import AmplitudeDampingChannel, DephasingChannel
from .errors import DimensionError, QFloorWarning, RangeError
from .spins import SpinJ, check_density_matrix

Q_FLOOR = 1e-14


class SolidAngle(NamedTuple):
    """Point on the sphere: polar angle theta in [0, pi], azimuth phi."""

    theta: float
    phi: float


class SphereGrid:
    """Product quadrature grid: Gauss-Legendre in cos(theta) times uniform phi."""

    def __init__(self, n_theta: int = 64, n_phi: int = 64):
        if n_theta < 2 or n_phi < 4:
            raise ValueError(f"grid too small: {n_theta} x {n_phi}")
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        theta = np.arccos(x)
        order = np.argsort(theta)
        self.theta_nodes = theta[order]
        self.theta_weights = w[order]
        self.phi_nodes = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        self.cos_theta = np.cos(self.theta_nodes)
        self.sin_theta = np.sin(self.theta_nodes)
        self.cot_theta = self.cos_theta / self.sin_theta
        self.inv_sin2_theta = 1.0 / self.sin_theta**2
        self.weights_2d = np.outer(self.theta_weights, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))

    def integrate(self, values: np.ndarray) -> float:
        """Integral over the full sphere of values sampled on the grid."""
        values = np.asarray(values)
        if values.shape != (self.n_theta, self.n_phi):
            raise DimensionError(f"values shape {values.shape} does not match grid {self.n_theta} x {self.n_phi}")
        return complex(np.sum(values * self.weights_2d)).real if np.iscomplexobj(values) else float(
            np.sum(values * self.weights_2d)
        )


def integrate(grid: SphereGrid, values: np.ndarray) -> float:
    """Sphere integral of grid-sampled values (sum over the fixed node order)."""
    return grid.integrate(values)


def _amplitude_table(j: SpinJ, thetas: np.ndarray, orders: int = 3) -> np.ndarray:
    """Coherent-state amplitudes a_m(theta) and theta-derivatives.

    Returns shape (orders, dim, len(thetas)); row index r corresponds to
    m = J - r.  a_m = sqrt(C(2J, J-m)) cos^(J+m)(theta/2) sin^(J-m)(theta/2).
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    c = np.cos(0.5 * thetas)
    s = np.sin(0.5 * thetas)
    out = np.zeros((orders, j.dim, thetas.shape[0]))
    for r in range(j.dim):
        p = j.two_j - r
        q = r
        root = math.sqrt(math.comb(j.two_j, r))
        out[0, r] = root * c**p * s**q
        if orders >= 2:
            acc = np.zeros_like(thetas)
            if q > 0:
                acc += q * c ** (p + 1) * s ** (q - 1)
            if p > 0:
                acc -= p * c ** (p - 1) * s ** (q + 1)
            out[1, r] = 0.5 * root * acc
        if orders >= 3:
            acc = -(2.0 * p * q + p + q) * c**p * s**q
            if p > 1:
                acc = acc + p * (p - 1) * c ** (p - 2) * s ** (q + 2)
            if q > 1:
                acc = acc + q * (q - 1) * c ** (p + 2) * s ** (q - 2)
            out[2, r] = 0.25 * root * acc
    return out


@dataclass(frozen=True, eq=False)
class CoherentAmplitudes:
    """Amplitudes a_m(theta) and derivatives at one polar angle, ordered m = J ... -J."""

    j: SpinJ
    theta: float
    amplitudes: np.ndarray
    damplitudes: np.ndarray


def coherent_amplitudes(j: SpinJ, theta: float) -> CoherentAmplitudes:
    """Overlap amplitudes <J, m|Omega> at azimuth zero, with theta-derivatives."""
    if not (0.0 <= theta <= math.pi):
        raise RangeError(f"theta must lie in [0, pi], got {theta}")
    table = _amplitude_table(j, np.array([theta]), orders=2)
    return CoherentAmplitudes(j=j, theta=theta, amplitudes=table[0, :, 0].copy(), damplitudes=table[1, :, 0].copy())


# ---------------------------------------------------------------------------
# spectral components: dict k -> array (n_orders, n_theta), field = sum_k g_k e^{ik phi}

def _components_from_state(rho: np.ndarray, j: SpinJ, grid: SphereGrid) -> dict:
    table = _amplitude_table(j, grid.theta_nodes, orders=3)
    a0, a1, a2 = table
    comps: dict[int, np.ndarray] = {}
    d = j.dim
    for r in range(d):
        for rp in range(d):
            w = rho[r, rp]
            if w == 0.0:
                continue
            k = rp - r  # Fourier index m - m' for m = J - r, m' = J - rp
            stack = np.empty((3, grid.n_theta), dtype=complex)
            stack[0] = w * a0[r] * a0[rp]
            stack[1] = w * (a1[r] * a0[rp] + a0[r] * a1[rp])
            stack[2] = w * (a2[r] * a0[rp] + 2.0 * a1[r] * a1[rp] + a0[r] * a2[rp])
            if k in comps:
                comps[k] = comps[k] + stack
            else:
                comps[k] = stack
    return comps


def _orders(comps: dict) -> int:
    return min(g.shape[0] for g in comps.values()) if comps else 0


def _evaluate(comps: dict, grid: SphereGrid, order: int = 0, phi_derivative: bool = False) -> np.ndarray:
    out = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
    for k in sorted(comps):
        g = comps[k][order]
        phase = np.exp(1j * k * grid.phi_nodes)
        if phi_derivative:
            phase = 1j * k * phase
        out += np.outer(g, phase)
    return out


def _scale_by_k(comps: dict, factor) -> dict:
    return {k: factor(k) * g for k, g in comps.items()}


def _shift_phi(comps: dict, dk: int) -> dict:
    return {k + dk: g for k, g in comps.items()}


def _conjugate(comps: dict) -> dict:
    return {-k: np.conj(g) for k, g in comps.items()}


def _add(a: dict, b: dict) -> dict:
    n = min(_orders(a), _orders(b))
    out = {k: g[:n].copy() for k, g in a.items()}
    for k, g in b.items():
        if k in out:
            out[k] = out[k] + g[:n]
        else:
            out[k] = g[:n].copy()
    return out


def _mul_theta(comps: dict, h: np.ndarray, dh: np.ndarray | None = None) -> dict:
    """Multiply by a theta-only function, keeping one derivative when dh is given."""
    out = {}
    for k, g in comps.items():
        if dh is not None and g.shape[0] >= 2:
            stack = np.empty((2, g.shape[1]), dtype=complex)
            stack[0] = g[0] * h
            stack[1] = g[1] * h + g[0] * dh
        else:
            stack = (g[0] * h)[None, :]
        out[k] = stack
    return out


def _op_jz(comps: dict) -> dict:
    """jz action: component k picks up the factor k (from -i d_phi)."""
    return {k: k * g for k, g in comps.items()}


def _op_jplus(comps: dict, grid: SphereGrid) -> dict:
    """j+ action: e^{i phi} (d_theta + i cot d_phi); consumes one derivative order."""
    cot = grid.cot_theta
    inv2 = grid.inv_sin2_theta
    out = {}
    for k, g in comps.items():
        n = g.shape[0]
        if n < 2:
            raise ValueError("need at least one stored derivative to apply j+")
        stack = np.empty((n - 1, g.shape[1]), dtype=complex)
        stack[0] = g[1] - k * cot * g[0]
        if n >= 3:
            stack[1] = g[2] + k * inv2 * g[0] - k * cot * g[1]
        out[k + 1] = stack
    return out


def _op_jminus(comps: dict, grid: SphereGrid) -> dict:
    """j- action: -e^{-i phi} (d_theta - i cot d_phi); consumes one derivative order."""
    cot = grid.cot_theta
    inv2 = grid.inv_sin2_theta
    out = {}
    for k, g in comps.items():
        n = g.shape[0]
        if n < 2:
            raise ValueError("need at least one stored derivative to apply j-")
        stack = np.empty((n - 1, g.shape[1]), dtype=complex)
        stack[0] = -(g[1] + k * cot * g[0])
        if n >= 3:
            stack[1] = -(g[2] - k * inv2 * g[0] + k * cot * g[1])
        out[k - 1] = stack
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HusimiField:
    """Husimi function of a state sampled on a sphere grid.

    q and dq_dtheta are real arrays of shape (n_theta, n_phi); dq_dphi keeps
    the complex spectral result (its imaginary part is roundoff for a valid
    state).  spectral holds the azimuthal components with derivative columns
    and drives the exact differential-operator actions.
    """

    j: SpinJ
    grid: SphereGrid
    q: np.ndarray
    dq_dtheta: np.ndarray
    dq_dphi: np.ndarray
    spectral: dict


def husimi_field(rho: np.ndarray, grid: SphereGrid) -> HusimiField:
    """Sample Q = <Omega|rho|Omega> and its first angular derivatives on a grid."""
    rho = check_density_matrix(rho)
    j = SpinJ(rho.shape[0] - 1)
    comps = _components_from_state(rho, j, grid)
    q = _evaluate(comps, grid, order=0).real
    dq_dtheta = _evaluate(comps, grid, order=1).real
    dq_dphi = _evaluate(comps, grid, order=0, phi_derivative=True)
    return HusimiField(j=j, grid=grid, q=q, dq_dtheta=dq_dtheta, dq_dphi=dq_dphi, spectral=comps)


def husimi_q(rho: np.ndarray, omega: SolidAngle) -> float:
    """Husimi value <Omega|rho|Omega> at a single direction."""
    rho = check_density_matrix(rho)
    theta, phi = omega
    if not (0.0 <= theta <= math.pi):
        raise RangeError(f"theta must lie in [0, pi], got {theta}")
    j = SpinJ(rho.shape[0] - 1)
    a = _amplitude_table(j, np.array([theta]), orders=1)[0, :, 0]
    total = 0.0j
    for r in range(j.dim):
        for rp in range(j.dim):
            total += rho[r, rp] * a[r] * a[rp] * np.exp(1j * (rp - r) * phi)
    return float(total.real)


def phase_space_jz(field: HusimiField) -> np.ndarray:
    """Differential jz action -i d_phi Q on the grid (purely imaginary for real Q)."""
    return -1j * field.dq_dphi


def phase_space_jplus(field: HusimiField) -> np.ndarray:
    """Differential j+ action e^{i phi}(d_theta + i cot d_phi) Q on the grid."""
    return _evaluate(_op_jplus(field.spectral, field.grid), field.grid)


def phase_space_jminus(field: HusimiField) -> np.ndarray:
    """Differential j- action -e^{-i phi}(d_theta - i cot d_phi) Q on the grid."""
    return _evaluate(_op_jminus(field.spectral, field.grid), field.grid)


def _damping_flux_components(field: HusimiField, big_m: float) -> dict:
    """Components of f(Q) = (1/2)(2J Q - jz Q) e^{i phi} sin + (1/2)(cos - M) j+ Q."""
    two_j = field.j.two_j
    grid = field.grid
    drift = _scale_by_k(field.spectral, lambda k: 0.5 * (two_j - k))
    drift = _shift_phi(_mul_theta(drift, grid.sin_theta, grid.cos_theta), +1)
    pumped = _mul_theta(_op_jplus(field.spectral, grid), 0.5 * (grid.cos_theta - big_m), -0.5 * grid.sin_theta)
    return _add(drift, pumped)


def dissipator_field(field: HusimiField, channel) -> np.ndarray:
    """Phase-space dissipator D(Q) of the channel, sampled on the field's grid.

    Dephasing maps component k to -(lam/2) k^2 g_k.  Amplitude damping uses
    the current field f(Q): D(Q) = (gamma/2)(j- f - j+ f*), or its
    infinite-temperature limit -(gamma_bar/4)(j- j+ + j+ j-) Q.
    """
    grid = field.grid
    if isinstance(channel, DephasingChannel):
        if channel.ops.j != field.j:
            raise DimensionError("channel spin does not match field spin")
        vals = _evaluate(_scale_by_k(field.spectral, lambda k: -0.5 * channel.lam * k * k), grid)
        return vals.real
    if isinstance(channel, AmplitudeDampingChannel):
        if channel.ops.j != field.j:
            raise DimensionError("channel spin does not match field spin")
        if math.isinf(channel.nbar):
            jp = _op_jplus(field.spectral, grid)
            jm = _op_jminus(field.spectral, grid)
            vals = _evaluate(_op_jminus(jp, grid), grid) + _evaluate(_op_jplus(jm, grid), grid)
            return (-0.25 * channel.gamma_bar * vals).real
        big_m = 2.0 * channel.nbar + 1.0
        flux = _damping_flux_components(field, big_m)
        vals = _evaluate(_op_jminus(flux, grid), grid) - _evaluate(_op_jplus(_conjugate(flux), grid), grid)
        return (0.5 * channel.gamma * vals).real
    raise TypeError(f"no phase-space dissipator for {type(channel).__name__}")


def _floor_mask(field: HusimiField, context: str):
    mask = field.q >= Q_FLOOR
    if not np.all(mask):
        excluded = float(np.sum(field.grid.weights_2d[~mask]))
        warnings.warn(
            f"{context}: excluded {np.count_nonzero(~mask)} nodes (weight {excluded:.3e}) below Husimi floor",
            QFloorWarning,
            stacklevel=3,
        )
        return mask, excluded
    return mask, 0.0


def wehrl_entropy(field: HusimiField) -> float:
    """Wehrl entropy -(2J+1)/(4 pi) integral of Q ln Q."""
    pref = (field.j.two_j + 1) / (4.0 * np.pi)
    mask = field.q > Q_FLOOR
    integrand = np.zeros_like(field.q)
    integrand[mask] = field.q[mask] * np.log(field.q[mask])
    return -pref * field.grid.integrate(integrand)


def wehrl_rate_dissipative(field: HusimiField, channel) -> float:
    """Dissipative Wehrl entropy rate -(2J+1)/(4 pi) integral of D(Q) ln Q."""
    pref = (field.j.two_j + 1) / (4.0 * np.pi)
    dvals = dissipator_field(field, channel)
    mask, _ = _floor_mask(field, "wehrl rate")
    integrand = np.zeros_like(field.q)
    integrand[mask] = dvals[mask] * np.log(field.q[mask])
    return -pref * field.grid.integrate(integrand)
