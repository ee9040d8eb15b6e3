"""Accretive Transform Modules Package

This package contains the modules of the accretive transform toolkit:
linear algebra core, transform and windows, certified numerical radius,
inequality catalog, generators, sweeps and the command line.
"""

__version__ = "1.0.0"
__author__ = "Accretive Toolkit Team"

# Import main modules
from .errors import AccretiveError
from .verdict import Verdict
from .linalg_core import Tolerance, DEFAULT_TOL
from .transform import Window, transform_C, accretive_via_disk
from .window_solver import Variant, optimal_window, feasible_window
from .numrad import Enclosure, numerical_radius, range_samples
from .catalog import REGISTRY, Instance, evaluate_case
from .generators import GeneratorSpec, gen_disk, gen_bidisk, gen_singular_band
from .sweep_manager import SweepConfig, SweepReport, SweepManager, run_sweep
from .config_manager import ConfigManager
from .worked_examples import demo_paper

# Export all modules
__all__ = [
    'AccretiveError',
    'Verdict',
    'Tolerance',
    'DEFAULT_TOL',
    'Window',
    'transform_C',
    'accretive_via_disk',
    'Variant',
    'optimal_window',
    'feasible_window',
    'Enclosure',
    'numerical_radius',
    'range_samples',
    'REGISTRY',
    'Instance',
    'evaluate_case',
    'GeneratorSpec',
    'gen_disk',
    'gen_bidisk',
    'gen_singular_band',
    'SweepConfig',
    'SweepReport',
    'SweepManager',
    'run_sweep',
    'ConfigManager',
    'demo_paper',
]
