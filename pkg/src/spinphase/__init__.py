"""Phase-space and von Neumann entropy production for damped spin systems."""

from .dynamics import (
    AmplitudeDampingChannel,
    DaviesChannel,
    DaviesPair,
    DephasingChannel,
    PauliRates,
    Trajectory,
    UnitaryChannel,
    amplitude_damping_dissipator,
    apply_liouvillian,
    classical_ep_rate,
    coherence_ep_rate,
    damping_stationary_state,
    davies_dissipator,
    dephasing_dissipator,
    dissipator,
    evolve,
    pauli_rates_from_davies,
    qubit_damping_bloch,
    qubit_dephasing_bloch,
)
from .entropy_production import (
    BathParams,
    EpReport,
    ep_qubit_damping_closed,
    ep_qubit_dephasing_closed,
    ep_rate_damping_quad,
    ep_rate_dephasing_quad,
    ep_vn_general,
    ep_vn_qubit_damping,
    ep_vn_qubit_dephasing,
    vn_rate_dephasing,
)
from .errors import (
    BasisError,
    BlochNormError,
    DetailedBalanceError,
    DimensionError,
    PositivityWarning,
    PurityDivergence,
    QFloorWarning,
    RangeError,
    StateValidationError,
    StepCountError,
    SupportError,
    TemperatureDivergence,
    UnreachableCoherence,
    ZeroRateError,
)
from .phase_space import (
    CoherentAmplitudes,
    HusimiField,
    SolidAngle,
    SphereGrid,
    coherent_amplitudes,
    dissipator_field,
    husimi_field,
    husimi_q,
    integrate,
    phase_space_jminus,
    phase_space_jplus,
    phase_space_jz,
    wehrl_entropy,
    wehrl_rate_dissipative,
)
from .spins import (
    FreeEnergySplit,
    SpinJ,
    SpinOperators,
    bloch_to_rho,
    check_density_matrix,
    figure_coherence_qubit,
    gibbs_state,
    l1_coherence,
    make_spin_operators,
    nonequilibrium_free_energy,
    quantum_relative_entropy,
    random_state_with_coherence,
    relative_entropy_of_coherence,
    rho_to_bloch,
    von_neumann_entropy,
)

__version__ = "0.1.0"
