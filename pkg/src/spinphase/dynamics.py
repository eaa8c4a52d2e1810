"""Lindblad channels, fixed-step propagation, and the classical rate sector.

Channels bundle a Hamiltonian with a dissipator.  The dephasing channel
couples through jz with strength lambda; the amplitude-damping channel is
the thermal ladder pair (J-, J+) with loss rate gamma (nbar + 1) and gain
rate gamma nbar.  A general Davies channel carries explicit jump operators
and rates, optionally tied together by an inverse temperature.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BasisError,
    DetailedBalanceError,
    DimensionError,
    PositivityWarning,
    StepCountError,
    ZeroRateError,
)
from .spins import SpinJ, SpinOperators, check_density_matrix, make_spin_operators, relative_entropy_of_coherence

POSITIVITY_FLOOR = -1e-8


@dataclass(frozen=True, eq=False)
class UnitaryChannel:
    """Closed evolution under a Hamiltonian."""

    hamiltonian: np.ndarray


@dataclass(frozen=True, eq=False)
class DephasingChannel:
    """Pure dephasing through jz at rate lam >= 0."""

    lam: float
    ops: SpinOperators
    hamiltonian: np.ndarray | None = None

    def __post_init__(self):
        if self.lam < 0.0:
            raise ValueError(f"dephasing rate must be >= 0, got {self.lam}")


@dataclass(frozen=True, eq=False)
class AmplitudeDampingChannel:
    """Thermal ladder damping with rates gamma (nbar + 1) down and gamma nbar up.

    gamma_bar = gamma (2 nbar + 1) is the total relaxation rate; it stays
    finite in the infinite-temperature limit gamma -> 0, nbar -> inf, which
    is reachable through the infinite_temperature constructor.
    """

    gamma: float
    nbar: float
    ops: SpinOperators
    hamiltonian: np.ndarray | None = None
    gamma_bar: float = field(default=math.nan)

    def __post_init__(self):
        if self.gamma < 0.0 or self.nbar < 0.0:
            raise ValueError(f"rates must be >= 0, got gamma={self.gamma} nbar={self.nbar}")
        if math.isnan(self.gamma_bar):
            if math.isinf(self.nbar):
                raise ValueError("infinite nbar requires an explicit gamma_bar")
            object.__setattr__(self, "gamma_bar", self.gamma * (2.0 * self.nbar + 1.0))

    @classmethod
    def infinite_temperature(cls, gamma_bar: float, ops: SpinOperators, hamiltonian=None):
        """Infinite-temperature limit: equal up and down rates gamma_bar / 2."""
        return cls(gamma=0.0, nbar=math.inf, ops=ops, hamiltonian=hamiltonian, gamma_bar=gamma_bar)

    @property
    def rate_down(self) -> float:
        return 0.5 * (self.gamma_bar + self.gamma)

    @property
    def rate_up(self) -> float:
        return 0.5 * (self.gamma_bar - self.gamma)

    @property
    def tau_bar_z(self) -> float:
        """Stationary qubit polarization -1 / (2 nbar + 1)."""
        if self.gamma_bar == 0.0:
            return -1.0 if self.nbar == 0.0 else 0.0
        return -self.gamma / self.gamma_bar


@dataclass(frozen=True, eq=False)
class DaviesPair:
    """One thermal jump pair: lowering operator, its rate, the raising rate, and the transition frequency."""

    l_minus: np.ndarray
    gamma_minus: float
    gamma_plus: float
    omega: float


@dataclass(frozen=True, eq=False)
class DaviesChannel:
    """Collection of thermal jump pairs, optionally checked against a declared beta."""

    pairs: tuple
    hamiltonian: np.ndarray | None = None
    beta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        for pair in self.pairs:
            if pair.gamma_minus < 0.0 or pair.gamma_plus < 0.0:
                raise ValueError("Davies rates must be >= 0")
            if self.beta is not None:
                if pair.gamma_minus == 0.0:
                    if pair.gamma_plus != 0.0:
                        raise DetailedBalanceError("gamma_plus > 0 with gamma_minus = 0")
                    continue
                ratio = pair.gamma_plus / pair.gamma_minus
                expected = math.exp(-self.beta * pair.omega)
                if abs(ratio - expected) > 1e-10:
                    raise DetailedBalanceError(
                        f"rate ratio {ratio:.15g} differs from exp(-beta omega) = {expected:.15g}"
                    )

    @classmethod
    def with_beta(cls, pairs, beta: float, hamiltonian=None):
        """Fix each gamma_plus to gamma_minus exp(-beta omega)."""
        fixed = tuple(
            DaviesPair(
                l_minus=p.l_minus,
                gamma_minus=p.gamma_minus,
                gamma_plus=p.gamma_minus * math.exp(-beta * p.omega),
                omega=p.omega,
            )
            for p in pairs
        )
        return cls(pairs=fixed, hamiltonian=hamiltonian, beta=beta)


ChannelSpec = UnitaryChannel | DephasingChannel | AmplitudeDampingChannel | DaviesChannel


def channel_dim(spec: ChannelSpec) -> int:
    if isinstance(spec, UnitaryChannel):
        return spec.hamiltonian.shape[0]
    if isinstance(spec, (DephasingChannel, AmplitudeDampingChannel)):
        return spec.ops.j.dim
    if isinstance(spec, DaviesChannel):
        if spec.hamiltonian is not None:
            return spec.hamiltonian.shape[0]
        return spec.pairs[0].l_minus.shape[0]
    raise TypeError(f"not a channel spec: {type(spec).__name__}")


def _lindblad_term(l_op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    ldl = l_op.conj().T @ l_op
    return l_op @ rho @ l_op.conj().T - 0.5 * (ldl @ rho + rho @ ldl)


def dephasing_dissipator(lam: float, ops: SpinOperators, rho: np.ndarray) -> np.ndarray:
    """-(lam/2) [jz, [jz, rho]]; entry (m, m') is scaled by -(lam/2)(m - m')^2."""
    inner = ops.jz @ rho - rho @ ops.jz
    return -0.5 * lam * (ops.jz @ inner - inner @ ops.jz)


def amplitude_damping_dissipator(gamma: float, nbar: float, ops: SpinOperators, rho: np.ndarray) -> np.ndarray:
    """Thermal ladder dissipator with loss gamma (nbar + 1) and gain gamma nbar."""
    if gamma < 0.0 or nbar < 0.0:
        raise ValueError(f"rates must be >= 0, got gamma={gamma} nbar={nbar}")
    return gamma * (nbar + 1.0) * _lindblad_term(ops.jminus, rho) + gamma * nbar * _lindblad_term(ops.jplus, rho)


def davies_dissipator(spec: DaviesChannel, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for pair in spec.pairs:
        if pair.gamma_minus != 0.0:
            out = out + pair.gamma_minus * _lindblad_term(pair.l_minus, rho)
        if pair.gamma_plus != 0.0:
            out = out + pair.gamma_plus * _lindblad_term(pair.l_minus.conj().T, rho)
    return out


def dissipator(spec: ChannelSpec, rho: np.ndarray) -> np.ndarray:
    """Dissipative part of the generator for the given channel."""
    if isinstance(spec, UnitaryChannel):
        return np.zeros_like(rho)
    if isinstance(spec, DephasingChannel):
        return dephasing_dissipator(spec.lam, spec.ops, rho)
    if isinstance(spec, AmplitudeDampingChannel):
        down, up = spec.rate_down, spec.rate_up
        out = np.zeros_like(rho)
        if down != 0.0:
            out = out + down * _lindblad_term(spec.ops.jminus, rho)
        if up != 0.0:
            out = out + up * _lindblad_term(spec.ops.jplus, rho)
        return out
    if isinstance(spec, DaviesChannel):
        return davies_dissipator(spec, rho)
    raise TypeError(f"not a channel spec: {type(spec).__name__}")


def apply_liouvillian(spec: ChannelSpec, rho: np.ndarray) -> np.ndarray:
    """Full generator L[rho] = -i [H, rho] + D[rho]."""
    rho = np.asarray(rho, dtype=complex)
    d = channel_dim(spec)
    if rho.shape != (d, d):
        raise DimensionError(f"state shape {rho.shape} does not match channel dimension {d}")
    ham = getattr(spec, "hamiltonian", None)
    out = dissipator(spec, rho)
    if ham is not None:
        ham = np.asarray(ham, dtype=complex)
        if ham.shape != (d, d):
            raise DimensionError(f"Hamiltonian shape {ham.shape} does not match channel dimension {d}")
        out = out - 1j * (ham @ rho - rho @ ham)
    return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Stored propagation output: times and one state per step."""

    times: np.ndarray
    states: np.ndarray


def evolve(spec: ChannelSpec, rho0: np.ndarray, t_max: float, n_steps: int) -> Trajectory:
    """Propagate rho0 with classical fixed-step fourth-order Runge-Kutta.

    Every stored state is re-hermitized and trace-renormalized.  Emits
    PositivityWarning once if any step dips below the -1e-8 eigenvalue
    floor, which signals a too-coarse step size.
    """
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 1:
        raise StepCountError(f"n_steps must be a positive integer, got {n_steps}")
    if not (t_max > 0.0) or not math.isfinite(t_max):
        raise ValueError(f"t_max must be finite and > 0, got {t_max}")
    rho = check_density_matrix(rho0)
    h = t_max / n_steps
    times = np.linspace(0.0, t_max, n_steps + 1)
    states = np.empty((n_steps + 1, rho.shape[0], rho.shape[0]), dtype=complex)
    states[0] = rho
    worst = 0.0
    for i in range(n_steps):
        k1 = apply_liouvillian(spec, rho)
        k2 = apply_liouvillian(spec, rho + 0.5 * h * k1)
        k3 = apply_liouvillian(spec, rho + 0.5 * h * k2)
        k4 = apply_liouvillian(spec, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
        lo = float(np.min(np.linalg.eigvalsh(rho)))
        worst = min(worst, lo)
        states[i + 1] = rho
    if worst < POSITIVITY_FLOOR:
        warnings.warn(
            f"minimum eigenvalue reached {worst:.3e}; steps too coarse for this channel",
            PositivityWarning,
            stacklevel=2,
        )
    return Trajectory(times=times, states=states)


def qubit_dephasing_bloch(tau0, lam: float, t) -> np.ndarray:
    """Dephasing Bloch solution: transverse decay exp(-lam t / 2), tau_z frozen.

    Accepts a scalar or array of times; returns shape (..., 3).
    """
    tau0 = np.asarray(tau0, dtype=float)
    t = np.asarray(t, dtype=float)
    decay = np.exp(-0.5 * lam * t)
    out = np.empty(t.shape + (3,))
    out[..., 0] = tau0[0] * decay
    out[..., 1] = tau0[1] * decay
    out[..., 2] = tau0[2]
    return out


def qubit_damping_bloch(tau0, gamma: float, nbar: float, t) -> np.ndarray:
    """Damping Bloch solution relaxing to (0, 0, tau_bar_z).

    Transverse components decay at gamma_bar / 2 and the longitudinal
    offset tau_z - tau_bar_z decays at gamma_bar, gamma_bar = gamma (2 nbar + 1).
    """
    tau0 = np.asarray(tau0, dtype=float)
    t = np.asarray(t, dtype=float)
    gamma_bar = gamma * (2.0 * nbar + 1.0)
    tau_bar_z = -1.0 / (2.0 * nbar + 1.0)
    out = np.empty(t.shape + (3,))
    out[..., 0] = tau0[0] * np.exp(-0.5 * gamma_bar * t)
    out[..., 1] = tau0[1] * np.exp(-0.5 * gamma_bar * t)
    out[..., 2] = (tau0[2] - tau_bar_z) * np.exp(-gamma_bar * t) + tau_bar_z
    return out


def damping_stationary_state(j: SpinJ, nbar: float) -> np.ndarray:
    """Stationary state of the ladder damping channel: populations with ratio nbar / (nbar + 1) per rung."""
    if math.isinf(nbar):
        return np.eye(j.dim, dtype=complex) / j.dim
    x = nbar / (nbar + 1.0)
    # population proportional to x^m, ground rung m = -J dominating for x < 1
    weights = x ** (j.m_values + j.j)
    weights = weights / weights.sum()
    return np.diag(weights.astype(complex))


@dataclass(frozen=True, eq=False)
class PauliRates:
    """Classical transition rates w[n, k] for the jump k -> n; diagonal is zero."""

    w: np.ndarray


def pauli_rates_from_davies(spec: DaviesChannel | AmplitudeDampingChannel) -> PauliRates:
    """Project a Davies channel onto populations: w[n, k] = sum of rate |<n|L|k>|^2.

    Requires a Hamiltonian diagonal in the working basis (or none), since
    the population sector only closes on itself in that case.
    """
    if isinstance(spec, AmplitudeDampingChannel):
        ham = spec.hamiltonian
        pairs = (
            DaviesPair(l_minus=spec.ops.jminus, gamma_minus=spec.rate_down, gamma_plus=spec.rate_up, omega=0.0),
        )
    else:
        ham = spec.hamiltonian
        pairs = spec.pairs
    if ham is not None:
        off = np.abs(np.asarray(ham) - np.diag(np.diag(np.asarray(ham)))).max()
        if off > 1e-12:
            raise BasisError(f"Hamiltonian has off-diagonal weight {off:.3e}")
    d = pairs[0].l_minus.shape[0]
    w = np.zeros((d, d))
    for pair in pairs:
        down = np.abs(pair.l_minus) ** 2
        up = np.abs(pair.l_minus.conj().T) ** 2
        w += pair.gamma_minus * down + pair.gamma_plus * up
    np.fill_diagonal(w, 0.0)
    return PauliRates(w=w)


def classical_ep_rate(rates: PauliRates, populations) -> float:
    """Entropy production of a Pauli master equation in Schnakenberg form.

    (1/2) sum over ordered pairs of (flux in minus flux out) times the log
    ratio of the two directed fluxes; nonnegative, zero exactly at detailed
    balance.  A one-way edge carrying flux raises ZeroRateError.
    """
    w = np.asarray(rates.w, dtype=float)
    p = np.asarray(populations, dtype=float)
    if w.shape[0] != w.shape[1] or p.shape != (w.shape[0],):
        raise DimensionError(f"incompatible shapes {w.shape} and {p.shape}")
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
        raise ValueError("populations must be a normalized distribution")
    if np.any(w < 0.0):
        raise ValueError("rates must be >= 0")
    total = 0.0
    d = w.shape[0]
    for n in range(d):
        for k in range(d):
            if n == k:
                continue
            forward = w[n, k] * p[k]
            backward = w[k, n] * p[n]
            if forward == 0.0 and backward == 0.0:
                continue
            if forward == 0.0 or backward == 0.0:
                raise ZeroRateError(f"one-way flux on edge {k} -> {n}")
            total += 0.5 * (forward - backward) * math.log(forward / backward)
    return total


def coherence_ep_rate(trajectory: Trajectory) -> np.ndarray:
    """Coherence consumption rate -dC/dt along a stored trajectory.

    Uses central differences in the interior and one-sided differences at
    the endpoints.
    """
    if trajectory.times.shape[0] < 3:
        raise ValueError("need at least 3 stored states for differencing")
    c_values = np.array([relative_entropy_of_coherence(s) for s in trajectory.states])
    return -np.gradient(c_values, trajectory.times)
