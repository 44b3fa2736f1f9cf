"""Dispersive readout of molecular spin qudits coupled to a superconducting cavity."""

from .config import Scenario, load_scenario, parse_scenario, resolve_scenario
from .dispersive import (
    EffectiveModel,
    effective_hamiltonian,
    qnd_commutator,
    qnd_working_point_s1,
    sw_generator,
    sw_vs_ed_compare,
)
from .eigen import (
    EigenSystem,
    Explicit,
    Pure,
    SpectralModel,
    Thermal,
    build_spectral_model,
    diagonalize,
    lambda_giant_spin_explicit,
    lambda_tensor,
)
from .errors import (
    ConfigError,
    DegeneracyWarning,
    DispersiveRegimeWarning,
    InvalidArgumentError,
    NonDispersiveError,
    NoWorkingPointError,
    QuditReadoutError,
    ResonantDenominatorError,
    SingularEvaluationError,
    UnclassifiableError,
    UnsupportedOperatorError,
)
from .inout import (
    CavityParams,
    TransmissionTrace,
    classify_s1_phase,
    dispersive_shift,
    field_sweep_fixed_frequency,
    line_width,
    shift_table,
    transmission_amplitude,
    transmission_spectrum,
)
from .model import (
    CouplingVector,
    DimerConfig,
    ElectroNuclearConfig,
    FieldVector,
    GiantSpinConfig,
    coupling_operator,
    hamiltonian,
    spin_matrices,
    stevens_operator,
)
from .oracle import build_full_hamiltonian, cutoff_report, ed_cavity_frequency
from .optimize import WorkingPointResult, optimize_working_point

__version__ = "0.1.0"
