"""Command-line front end: figure CSVs, trajectory runs, coherence sweeps.

Every output is a CSV with `#`-prefixed metadata, full-precision floats, and
a trailing comment block of collected warnings, so a run can be audited and
reproduced byte for byte from the file alone.
"""

import argparse
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .dynamics import (
    AmplitudeDampingChannel,
    DephasingChannel,
    UnitaryChannel,
    damping_stationary_state,
    evolve,
    qubit_damping_bloch,
    qubit_dephasing_bloch,
)
from .entropy_production import (
    BathParams,
    ep_qubit_damping_closed,
    ep_qubit_dephasing_closed,
    ep_rate_damping_quad,
    ep_rate_dephasing_quad,
    ep_vn_general,
    ep_vn_qubit_damping,
    ep_vn_qubit_dephasing,
    vn_rate_dephasing,
)
from .errors import PurityDivergence, QFloorWarning, SupportError, TemperatureDivergence
from .phase_space import SphereGrid, husimi_field, wehrl_entropy
from .spins import (
    PAULI_X,
    SpinJ,
    bloch_to_rho,
    check_density_matrix,
    l1_coherence,
    make_spin_operators,
    random_state_with_coherence,
    rho_to_bloch,
    von_neumann_entropy,
)

FMT = "%.17e"


class CliError(Exception):
    """Configuration error; message names the offending flag."""


def _parse_j(text: str) -> SpinJ:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            value = float(num) / float(den)
        else:
            value = float(text)
        two_j = round(2.0 * value)
        if abs(2.0 * value - two_j) > 1e-9 or two_j < 1:
            raise ValueError
        return SpinJ(two_j)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"--j: expected a positive integer or half-integer, got {text!r}") from None


def _parse_grid(text: str) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise CliError(f"--grid: expected NTHETAxNPHI like 64x64, got {text!r}")
    try:
        n_theta, n_phi = int(parts[0]), int(parts[1])
    except ValueError:
        raise CliError(f"--grid: expected NTHETAxNPHI like 64x64, got {text!r}") from None
    if n_theta < 2 or n_phi < 2:
        raise CliError("--grid: both sizes must be >= 2")
    return n_theta, n_phi


def _parse_bloch(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliError(f"--bloch: expected X,Y,Z, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise CliError(f"--bloch: non-numeric component in {text!r}") from None


def read_state_file(path: str) -> np.ndarray:
    """Parse the plain-text state format: `dim d`, then d rows of d complex tokens."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("dim"):
        raise CliError(f"--state: {path}: first line must be 'dim d'")
    try:
        dim = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise CliError(f"--state: {path}: first line must be 'dim d'") from None
    if len(lines) != 1 + dim:
        raise CliError(f"--state: {path}: expected {dim} matrix rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        tokens = ln.split()
        if len(tokens) != dim:
            raise CliError(f"--state: {path}: row {i} has {len(tokens)} entries, expected {dim}")
        try:
            rows.append([complex(tok) for tok in tokens])
        except ValueError:
            raise CliError(f"--state: {path}: row {i}: unparsable complex token") from None
    return np.array(rows, dtype=complex)


def _worker_count(deterministic: bool) -> int:
    if deterministic:
        return 1
    env = os.environ.get("SPINPHASE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"SPINPHASE_THREADS: expected an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _run_tasks(tasks, deterministic: bool) -> list:
    """Evaluate a list of thunks, preserving order; concurrent unless pinned to one worker."""
    workers = _worker_count(deterministic)
    if workers == 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def write_csv(path: str, metadata: dict, header: list, rows: list, notes: list) -> None:
    """CSV with '#' metadata lines, one header row, %.17e numbers, trailing warnings."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(metadata):
            fh.write(f"# {key} = {metadata[key]}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fields = []
            for value in row:
                if isinstance(value, str):
                    fields.append(value)
                elif isinstance(value, (int, np.integer)):
                    fields.append(str(int(value)))
                elif value is None or (isinstance(value, float) and math.isnan(value)):
                    fields.append("nan")
                else:
                    fields.append(FMT % value)
            fh.write(",".join(fields) + "\n")
        for note in notes:
            fh.write(f"# warning: {note}\n")


def _build_channel(args, j: SpinJ):
    """Channel plus BathParams (damping) from the rate flags; errors name the flags."""
    ops = make_spin_operators(j)
    if args.channel == "dephasing":
        if args.lam is None:
            raise CliError("--lambda is required for --channel dephasing")
        if args.lam < 0:
            raise CliError("--lambda: rate must be >= 0")
        return DephasingChannel(lam=args.lam, ops=ops), None
    if args.tau_bar_z is not None:
        if args.gamma is not None or args.nbar is not None:
            raise CliError("--tau-bar-z is mutually exclusive with --gamma/--nbar")
        if not -1.0 <= args.tau_bar_z <= 0.0:
            raise CliError("--tau-bar-z: must lie in [-1, 0]")
        bath = BathParams.from_tau_bar(1.0, args.tau_bar_z)
    else:
        if args.gamma is None or args.nbar is None:
            raise CliError("--channel damping needs --gamma and --nbar (or --tau-bar-z)")
        if args.gamma < 0 or args.nbar < 0:
            raise CliError("--gamma/--nbar: rates must be >= 0")
        bath = BathParams.from_nbar(args.gamma, args.nbar)
    return bath.channel(ops), bath


def _initial_state(args, j: SpinJ) -> np.ndarray:
    given = [args.bloch is not None, args.state is not None, args.coherence is not None or args.seed is not None]
    if sum(given) != 1:
        raise CliError("exactly one of --bloch, --state, or --seed with --coherence must be given")
    if args.bloch is not None:
        if j.dim != 2:
            raise CliError("--bloch: only valid for --j 1/2")
        return bloch_to_rho(_parse_bloch(args.bloch))
    if args.state is not None:
        rho = read_state_file(args.state)
        if rho.shape[0] != j.dim:
            raise CliError(f"--state: dimension {rho.shape[0]} does not match --j (dim {j.dim})")
        return check_density_matrix(rho)
    if args.coherence is None or args.seed is None:
        raise CliError("--seed and --coherence must be given together")
    return random_state_with_coherence(j.dim, args.coherence, args.seed)


def _time_column(channel, bath) -> tuple:
    """Scaled-time column name and scale factor; raw time if the rate is zero."""
    if isinstance(channel, DephasingChannel):
        return ("lambda_t", channel.lam) if channel.lam > 0 else ("t", 1.0)
    if bath is not None and bath.gamma_bar > 0:
        return "gamma_bar_t", bath.gamma_bar
    return "t", 1.0


def _common_metadata(args, j: SpinJ, grid: SphereGrid) -> dict:
    meta = {
        "channel": args.channel,
        "two_j": j.two_j,
        "grid": f"{grid.n_theta}x{grid.n_phi}",
        "deterministic": args.deterministic,
        "version": __version__,
    }
    if args.channel == "dephasing":
        meta["lambda"] = repr(args.lam)
    else:
        if args.tau_bar_z is not None:
            meta["tau_bar_z"] = repr(args.tau_bar_z)
            meta["gamma_bar"] = repr(1.0)
        else:
            meta["gamma"] = repr(args.gamma)
            meta["nbar"] = repr(args.nbar)
    return meta


def _sigma_vn_value(rho, tau, channel, bath, ops):
    """vN-route production rate, or NaN where the route is divergent/undefined."""
    try:
        if isinstance(channel, DephasingChannel):
            if tau is not None:
                return ep_vn_qubit_dephasing(tau, channel.lam)
            return vn_rate_dephasing(rho, channel.lam, ops)
        if tau is not None:
            return ep_vn_qubit_damping(tau, bath)
        if math.isinf(bath.nbar):
            rho_eq = np.eye(rho.shape[0]) / rho.shape[0]
        else:
            rho_eq = damping_stationary_state(SpinJ(rho.shape[0] - 1), bath.nbar)
        return ep_vn_general(rho, channel, rho_eq).sigma_dot
    except (PurityDivergence, TemperatureDivergence, SupportError):
        return math.nan


def _state_columns(j: SpinJ) -> list:
    if j.dim == 2:
        return ["tau_x", "tau_y", "tau_z"]
    cols = []
    for i in range(j.dim):
        for k in range(i, j.dim):
            cols.append(f"rho_{i}{k}_re")
            if k > i:
                cols.append(f"rho_{i}{k}_im")
    return cols


def _state_values(rho, j: SpinJ) -> list:
    if j.dim == 2:
        return list(rho_to_bloch(rho))
    vals = []
    for i in range(j.dim):
        for k in range(i, j.dim):
            vals.append(rho[i, k].real)
            if k > i:
                vals.append(rho[i, k].imag)
    return vals


def cmd_evolve(args) -> int:
    j = _parse_j(args.j)
    grid = SphereGrid(*_parse_grid(args.grid))
    channel, bath = _build_channel(args, j)
    rho0 = _initial_state(args, j)
    if rho0.shape[0] != j.dim:
        raise CliError(f"initial state dimension {rho0.shape[0]} does not match --j")
    if args.tmax <= 0:
        raise CliError("--tmax: must be > 0")
    ops = channel.ops
    traj = evolve(channel, rho0, args.tmax, args.steps)
    t_name, t_scale = _time_column(channel, bath)
    is_qubit = j.dim == 2

    def row_for(index):
        t = traj.times[index]
        rho = traj.states[index]
        field = husimi_field(rho, grid)
        if isinstance(channel, DephasingChannel):
            report = ep_rate_dephasing_quad(field, channel.lam, j)
        else:
            report = ep_rate_damping_quad(field, bath, j)
        s_q = wehrl_entropy(field)
        tau = rho_to_bloch(rho) if is_qubit else None
        row = [t * t_scale]
        row.extend(_state_values(rho, j))
        row.append(von_neumann_entropy(rho))
        row.append(s_q)
        row.append(l1_coherence(rho))
        row.append(report.sigma_dot)
        if is_qubit:
            if isinstance(channel, DephasingChannel):
                row.append(ep_qubit_dephasing_closed(tau, channel.lam))
            else:
                row.append(ep_qubit_damping_closed(tau, bath))
        row.append(_sigma_vn_value(rho, tau, channel, bath, ops))
        row.append(report.phi_dot)
        row.append(len(report.warnings))
        return row, list(report.warnings)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QFloorWarning)
        results = _run_tasks([lambda i=i: row_for(i) for i in range(len(traj.times))], args.deterministic)
    notes = []
    rows = []
    for row, floor_notes in results:
        rows.append(row)
        for note in floor_notes:
            if note not in notes:
                notes.append(note)

    header = [t_name] + _state_columns(j) + ["s_vn", "s_q", "c_l1", "sigma_quad"]
    if is_qubit:
        header.append("sigma_closed")
    header += ["sigma_vn", "phi_dot", "warnings_count"]

    meta = _common_metadata(args, j, grid)
    meta.update({"command": "evolve", "tmax": repr(args.tmax), "steps": args.steps})
    if args.seed is not None:
        meta["seed"] = args.seed
        meta["coherence"] = repr(args.coherence)
    if args.bloch is not None:
        meta["bloch"] = args.bloch
    if args.state is not None:
        meta["state_file"] = os.path.basename(args.state)
    write_csv(args.out, meta, header, rows, notes)
    return 0


def _sweep_rows_qubit(channel, bath, j, grid, tau_z, n_points, deterministic):
    """Transverse-coherence sweep at fixed tau_z, up to the pure-state boundary."""
    perp_max = math.sqrt(max(0.0, 1.0 - tau_z * tau_z))
    perps = np.linspace(0.0, perp_max, n_points)

    def row_for(perp):
        tau = np.array([perp, 0.0, tau_z])
        rho = bloch_to_rho(tau)
        field = husimi_field(rho, grid)
        if isinstance(channel, DephasingChannel):
            report = ep_rate_dephasing_quad(field, channel.lam, j)
        else:
            report = ep_rate_damping_quad(field, bath, j)
        try:
            if isinstance(channel, DephasingChannel):
                sigma_v = ep_vn_qubit_dephasing(tau, channel.lam)
            else:
                sigma_v = ep_vn_qubit_damping(tau, bath)
        except (PurityDivergence, TemperatureDivergence):
            sigma_v = math.nan
        return [2.0 * perp * perp, l1_coherence(rho), report.sigma_dot, sigma_v], list(report.warnings)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QFloorWarning)
        results = _run_tasks([lambda p=p: row_for(p) for p in perps], deterministic)
    rows, notes = [], []
    for row, floor_notes in results:
        rows.append(row)
        for note in floor_notes:
            if note not in notes:
                notes.append(note)
    return rows, notes


def _sweep_rows_random(channel, bath, j, grid, c_max, n_points, seed, deterministic):
    """Random-state sweep over l1-coherence targets for dimensions above 2."""
    ops = channel.ops
    targets = np.linspace(0.0, c_max, n_points)

    def row_for(target):
        rho = random_state_with_coherence(j.dim, float(target), seed)
        field = husimi_field(rho, grid)
        if isinstance(channel, DephasingChannel):
            report = ep_rate_dephasing_quad(field, channel.lam, j)
        else:
            report = ep_rate_damping_quad(field, bath, j)
        sigma_v = _sigma_vn_value(rho, None, channel, bath, ops)
        return [math.nan, l1_coherence(rho), report.sigma_dot, sigma_v], list(report.warnings)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QFloorWarning)
        results = _run_tasks([lambda c=c: row_for(c) for c in targets], deterministic)
    rows, notes = [], []
    for row, floor_notes in results:
        rows.append(row)
        for note in floor_notes:
            if note not in notes:
                notes.append(note)
    return rows, notes


def cmd_sweep_coherence(args) -> int:
    j = _parse_j(args.j)
    grid = SphereGrid(*_parse_grid(args.grid))
    channel, bath = _build_channel(args, j)
    if args.points < 2:
        raise CliError("--points: need at least 2 sweep points")
    if j.dim == 2:
        tau_z = 0.0
        if args.bloch is not None:
            tau_z = float(_parse_bloch(args.bloch)[2])
            if abs(tau_z) > 1.0:
                raise CliError("--bloch: |tau_z| must be <= 1")
        rows, notes = _sweep_rows_qubit(channel, bath, j, grid, tau_z, args.points, args.deterministic)
    else:
        if args.seed is None or args.coherence is None:
            raise CliError("dim > 2 sweeps need --seed and --coherence (the sweep's maximum)")
        rows, notes = _sweep_rows_random(
            channel, bath, j, grid, args.coherence, args.points, args.seed, args.deterministic
        )

    meta = _common_metadata(args, j, grid)
    meta.update({"command": "sweep-coherence", "points": args.points})
    if args.seed is not None:
        meta["seed"] = args.seed
    if args.coherence is not None:
        meta["coherence_max"] = repr(args.coherence)
    if args.bloch is not None:
        meta["bloch"] = args.bloch
    write_csv(args.out, meta, ["coherence_fig", "coherence_l1", "sigma_wehrl", "sigma_vn"], rows, notes)
    return 0


FIG_GRID = (128, 128)
FIG3_COHERENCES = (0.3, 0.6, 0.9, 1.2, 1.5, 1.8)
FIG4_COHERENCES = (0.2, 0.4, 0.6, 0.8)
FIG4_SEED = 2


def _fig1(out_dir: str) -> None:
    """Closed vs damped qubit observables: H = (omega0/2) sigma_x against a thermal bath."""
    omega0 = 1.0
    j = SpinJ(1)
    ops = make_spin_operators(j)
    rho0 = bloch_to_rho([0.0, 0.0, 1.0])
    closed = evolve(UnitaryChannel(hamiltonian=0.5 * omega0 * PAULI_X), rho0, 20.0, 2000)
    damped = evolve(AmplitudeDampingChannel(gamma=0.5, nbar=0.5, ops=ops), rho0, 20.0, 2000)
    rows = []
    for idx, t in enumerate(closed.times):
        tc = rho_to_bloch(closed.states[idx])
        td = rho_to_bloch(damped.states[idx])
        rows.append([t, tc[0], tc[1], tc[2], td[0], td[1], td[2]])
    meta = {
        "command": "fig",
        "figure": 1,
        "omega0": repr(omega0),
        "gamma": repr(0.5),
        "nbar": repr(0.5),
        "gamma_bar": repr(1.0),
        "steps": 2000,
        "tmax": repr(20.0),
        "version": __version__,
        "note": "damped trajectory is dissipator-only so the fixed point is (0, 0, tau_bar_z)",
    }
    header = ["t", "sx_closed", "sy_closed", "sz_closed", "sx_damped", "sy_damped", "sz_damped"]
    write_csv(os.path.join(out_dir, "fig1_observables.csv"), meta, header, rows, [])


def _fig2(out_dir: str) -> None:
    """Wehrl vs vN production rates across the coherence sweep, both channels."""
    j = SpinJ(1)
    ops = make_spin_operators(j)
    grid = SphereGrid(*FIG_GRID)
    for name, channel, bath in (
        ("dephasing", DephasingChannel(lam=1.0, ops=ops), None),
        ("damping", None, BathParams.from_tau_bar(1.0, 0.0)),
    ):
        if channel is None:
            channel = bath.channel(ops)
        rows, notes = _sweep_rows_qubit(channel, bath, j, grid, 0.0, 51, False)
        meta = {
            "command": "fig",
            "figure": 2,
            "panel": name,
            "tau_z": repr(0.0),
            "tau_bar_z": repr(0.0),
            "grid": f"{grid.n_theta}x{grid.n_phi}",
            "points": 51,
            "version": __version__,
        }
        if name == "dephasing":
            meta["lambda"] = repr(1.0)
        else:
            meta["gamma_bar"] = repr(1.0)
        write_csv(
            os.path.join(out_dir, f"fig2_{name}.csv"),
            meta,
            ["coherence_fig", "coherence_l1", "sigma_wehrl", "sigma_vn"],
            rows,
            notes,
        )


def _sigma_curve_qubit(channel, bath, j, grid, taus):
    """Quadrature production rate along a list of Bloch vectors."""
    out = []
    for tau in taus:
        field = husimi_field(bloch_to_rho(tau), grid)
        if isinstance(channel, DephasingChannel):
            out.append(ep_rate_dephasing_quad(field, channel.lam, j).sigma_dot)
        else:
            out.append(ep_rate_damping_quad(field, bath, j).sigma_dot)
    return out


def _fig3(out_dir: str) -> None:
    """Qubit production-rate curves over time, one curve per initial coherence."""
    j = SpinJ(1)
    ops = make_spin_operators(j)
    grid = SphereGrid(*FIG_GRID)
    times = np.linspace(0.0, 5.0, 251)

    lam = 1.0
    deph = DephasingChannel(lam=lam, ops=ops)
    tau_sq = 0.9

    def deph_curve(c):
        perp = math.sqrt(c / 2.0)
        tau_z = math.sqrt(tau_sq - c / 2.0)
        taus = [qubit_dephasing_bloch([perp, 0.0, tau_z], lam, t / lam) for t in times]
        return _sigma_curve_qubit(deph, None, j, grid, taus)

    curves = _run_tasks([lambda c=c: deph_curve(c) for c in FIG3_COHERENCES], False)
    rows = [[t] + [curves[k][i] for k in range(len(FIG3_COHERENCES))] for i, t in enumerate(times)]
    header = ["lambda_t"] + [f"sigma_c_{c:g}" for c in FIG3_COHERENCES]
    meta = {
        "command": "fig",
        "figure": 3,
        "panel": "dephasing",
        "lambda": repr(lam),
        "tau_sq": repr(tau_sq),
        "grid": f"{grid.n_theta}x{grid.n_phi}",
        "coherences": ",".join(f"{c:g}" for c in FIG3_COHERENCES),
        "version": __version__,
    }
    write_csv(os.path.join(out_dir, "fig3_dephasing.csv"), meta, header, rows, [])

    gamma, nbar = 0.5, 0.5
    bath = BathParams.from_nbar(gamma, nbar)
    damp = bath.channel(ops)
    tau_z0 = 0.1

    def damp_curve(c):
        perp = math.sqrt(c / 2.0)
        taus = [qubit_damping_bloch([perp, 0.0, tau_z0], gamma, nbar, t / bath.gamma_bar) for t in times]
        return _sigma_curve_qubit(damp, bath, j, grid, taus)

    curves = _run_tasks([lambda c=c: damp_curve(c) for c in FIG3_COHERENCES], False)
    rows = [[t] + [curves[k][i] for k in range(len(FIG3_COHERENCES))] for i, t in enumerate(times)]
    header = ["gamma_bar_t"] + [f"sigma_c_{c:g}" for c in FIG3_COHERENCES]
    meta = {
        "command": "fig",
        "figure": 3,
        "panel": "damping",
        "gamma": repr(gamma),
        "nbar": repr(nbar),
        "gamma_bar": repr(bath.gamma_bar),
        "tau_z0": repr(tau_z0),
        "grid": f"{grid.n_theta}x{grid.n_phi}",
        "coherences": ",".join(f"{c:g}" for c in FIG3_COHERENCES),
        "version": __version__,
    }
    write_csv(os.path.join(out_dir, "fig3_damping.csv"), meta, header, rows, [])


def _fig4(out_dir: str) -> None:
    """Qutrit production-rate curves for random states at fixed coherence targets."""
    j = SpinJ(2)
    ops = make_spin_operators(j)
    grid = SphereGrid(*FIG_GRID)
    lam = 1.0
    gamma, nbar = 0.5, 0.5
    bath = BathParams.from_nbar(gamma, nbar)
    n_steps = 250
    states = [random_state_with_coherence(3, c, FIG4_SEED) for c in FIG4_COHERENCES]

    for name, channel in (
        ("dephasing", DephasingChannel(lam=lam, ops=ops)),
        ("damping", bath.channel(ops)),
    ):
        scale = lam if name == "dephasing" else bath.gamma_bar
        t_raw = 5.0 / scale

        def curve(rho0, chan=channel, is_deph=(name == "dephasing")):
            traj = evolve(chan, rho0, t_raw, n_steps)
            sigmas = []
            for rho in traj.states:
                field = husimi_field(rho, grid)
                if is_deph:
                    sigmas.append(ep_rate_dephasing_quad(field, lam, j).sigma_dot)
                else:
                    sigmas.append(ep_rate_damping_quad(field, bath, j).sigma_dot)
            return traj.times, sigmas

        results = _run_tasks([lambda r=r: curve(r) for r in states], False)
        times = results[0][0]
        rows = [[scale * t] + [results[k][1][i] for k in range(len(FIG4_COHERENCES))] for i, t in enumerate(times)]
        t_name = "lambda_t" if name == "dephasing" else "gamma_bar_t"
        header = [t_name] + [f"sigma_c_{c:g}" for c in FIG4_COHERENCES]
        meta = {
            "command": "fig",
            "figure": 4,
            "panel": name,
            "seed": FIG4_SEED,
            "grid": f"{grid.n_theta}x{grid.n_phi}",
            "steps": n_steps,
            "coherences": ",".join(f"{c:g}" for c in FIG4_COHERENCES),
            "version": __version__,
        }
        if name == "dephasing":
            meta["lambda"] = repr(lam)
        else:
            meta["gamma"] = repr(gamma)
            meta["nbar"] = repr(nbar)
            meta["gamma_bar"] = repr(bath.gamma_bar)
        write_csv(os.path.join(out_dir, f"fig4_{name}.csv"), meta, header, rows, [])


def cmd_fig(args) -> int:
    builders = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig4}
    if args.id not in builders:
        raise CliError("--id: must be 1, 2, 3, or 4")
    os.makedirs(args.out, exist_ok=True)
    builders[args.id](args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinphase", description="Spin phase-space entropy production toolkit")
    parser.add_argument("--version", action="version", version=f"spinphase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", help="write one of the four reference figure datasets as CSV")
    fig.add_argument("--id", type=int, required=True, help="figure number, 1-4")
    fig.add_argument("--out", required=True, help="output directory")

    def add_run_flags(p):
        p.add_argument("--channel", choices=["dephasing", "damping"], required=True)
        p.add_argument("--j", default="1/2", help="spin as integer or half-integer, e.g. 1/2, 1, 3/2")
        p.add_argument("--bloch", help="initial qubit Bloch vector X,Y,Z")
        p.add_argument("--state", help="initial state file (dim d header, complex entries)")
        p.add_argument("--seed", type=int, help="seed for the random initial state")
        p.add_argument("--coherence", type=float, help="l1-coherence target for the random state")
        p.add_argument("--lambda", dest="lam", type=float, help="dephasing rate")
        p.add_argument("--gamma", type=float, help="damping rate")
        p.add_argument("--nbar", type=float, help="bath occupation")
        p.add_argument("--tau-bar-z", type=float, help="bath polarization in [-1, 0]; fixes gamma_bar = 1")
        p.add_argument("--grid", default="64x64", help="quadrature grid NTHETAxNPHI")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--deterministic", action="store_true", help="single worker, fixed reduction order")

    ev = sub.add_parser("evolve", help="integrate a trajectory and tabulate entropy rates")
    add_run_flags(ev)
    ev.add_argument("--tmax", type=float, default=5.0, help="integration time (raw units)")
    ev.add_argument("--steps", type=int, default=500, help="number of integrator steps")

    sw = sub.add_parser("sweep-coherence", help="production rates across initial coherence values")
    add_run_flags(sw)
    sw.add_argument("--points", type=int, default=51, help="number of sweep points")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fig":
            return cmd_fig(args)
        if args.command == "evolve":
            return cmd_evolve(args)
        return cmd_sweep_coherence(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
