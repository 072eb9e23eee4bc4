"""Casimir energy of a massive vector field between concentric shells.

The public surface: overflow-safe scalars (ScaledReal), modified
Riccati-Bessel families, the TE/TM mode determinants, the spectral sum
(energy, force, sweeps), and unit conversion from laboratory inputs.
"""

from .backend import active_backend
from .bessel import RBFamily, eval_batch, eval_e, eval_family, eval_s
from .determinants import (
    DivergenceError,
    MassOrders,
    QBlocks,
    SpectralPoint,
    build_q_blocks,
    det_q0_expansion,
    det_q0_factored,
    det_q_direct,
    det_q_expansion,
    expansion_coefficients,
    log_delta_te,
    log_delta_tm,
    log_delta_tm_massless,
    reference_expansion_coefficients,
)
from .scaledrep import ScaledReal
from .spectrum import (
    ConvergenceError,
    EnergyResult,
    ProblemSpec,
    SweepRow,
    SweepTable,
    default_fd_step,
    energy,
    force,
    l_term,
    sweep_mass,
    sweep_ratio,
)
from .units import PhysicalInput, convert_units, energy_scale_joules

__version__ = "0.1.0"

__all__ = [
    "ScaledReal",
    "RBFamily",
    "eval_s",
    "eval_e",
    "eval_family",
    "eval_batch",
    "SpectralPoint",
    "QBlocks",
    "MassOrders",
    "DivergenceError",
    "build_q_blocks",
    "expansion_coefficients",
    "reference_expansion_coefficients",
    "det_q_expansion",
    "det_q0_expansion",
    "det_q0_factored",
    "det_q_direct",
    "log_delta_te",
    "log_delta_tm",
    "log_delta_tm_massless",
    "ProblemSpec",
    "EnergyResult",
    "ConvergenceError",
    "l_term",
    "energy",
    "force",
    "default_fd_step",
    "sweep_ratio",
    "sweep_mass",
    "SweepRow",
    "SweepTable",
    "PhysicalInput",
    "convert_units",
    "energy_scale_joules",
    "active_backend",
    "__version__",
]
