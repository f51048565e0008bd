"""Quantum dwell times in one dimension.

Closed-form and numerical dwell-time spectra for piecewise-constant
potentials, and the absorption-based route to the average dwell time.
"""
from .config import ConfigError, SweepConfig, load_config, parse_config
from .dwell import (
    BoundScan,
    DwellSpectrum,
    average_dwell,
    barrier_dwell_eigenvalues,
    classical_dwell,
    dwell_bound_scan,
    dwell_matrix,
    free_dwell_eigenvalues,
    on_shell_expectation,
    on_shell_phase_invariance,
)
from .errors import (
    AccuracyError,
    DegenerateWavenumberError,
    DivergenceError,
    DomainError,
    DwellTimeError,
    PoleError,
    UnitarityError,
)
from .operational import (
    EffectivePotential,
    EstimatorReport,
    LaserParams,
    absorption,
    detection_delay,
    dwell_via_absorption_derivative,
    effective_potential,
    estimator_report,
    feasibility_scan,
    fluorescence_feasibility,
    single_photon_regime,
    tau_approx,
)
from .quantities import (
    HBAR,
    NATURAL,
    SI,
    Kinematics,
    ParticleSpec,
    RegionSpec,
    cesium_defaults,
    convert,
)
from .scattering import (
    PiecewisePotential,
    ScatteringSolution,
    WaveField,
    absorption_probability,
    solve_scattering,
    wavefunction,
)

__version__ = "0.1.0"
