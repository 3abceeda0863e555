"""Flow-field reconstruction from trajectory endpoint displacements.

Occupation kernels of simulated sensor paths in a Gaussian RKHS serve as an
adaptive basis; each iteration re-simulates the sensors under the current
estimate and re-fits the field to the observed endpoint mismatches.
"""
from occtomo._backend import NAME as BACKEND
from occtomo.diagnostics import SpectralReport, eigen_bounds, separation_distance
from occtomo.kernel import KernelSpec, eval_kernel
from occtomo.metrics import (
    FieldComparison,
    compare_fields,
    norm_difference_stats,
    relative_errors,
)
from occtomo.occupation import (
    GramMatrix,
    assemble_gram,
    cross_gram,
    occupation_eval,
    occupation_inner,
    simpson_weights,
)
from occtomo.solver import (
    FieldEstimate,
    GramFactorizationError,
    IterationRecord,
    SolverConfig,
    eval_field,
    mt_iterate,
    solve_weights,
)
from occtomo.synthfield import (
    AnalyticField,
    ConstantField,
    GaussianBump,
    experiment1_field,
    field_from_name,
    generate_samples,
)
from occtomo.trajectory import (
    Box,
    DivergenceError,
    SampledTrajectory,
    TomographySample,
    displacement,
    integrate_rk4,
    integrate_rk4_batch,
    simulate_samples,
)

__version__ = "0.1.0"
