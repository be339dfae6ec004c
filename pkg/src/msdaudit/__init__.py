"""Maximum subgroup discrepancy between two samples over binary protected literals."""

__version__ = "0.1.0"

from .bounds import ConvergenceLadder, ErrorBound, convergence_run, geometric_ladder, theorem1_epsilon
from .dataset import (
    MU,
    NU,
    BinaryDataset,
    DataError,
    EncodingSchema,
    RawTable,
    encode,
    fit_encoding,
    load_csv,
)
from .distances import linf_base, mmd_overlap, total_variation
from .mio import build_mio, export_mio
from .msdd import MsddResult, count_terms, mass_gap, msdd_enumerate
from .solver import (
    InfeasibleError,
    MsdResult,
    SolverConfig,
    TooManyFeaturesError,
    classification_losses,
    enumerate_exact,
    solve,
)
from .synth import Population, plant, sample
from .terms import Term
