"""Graph energies, Laplacians and the Dirichlet spectrum of the
Sierpinski tetrahedron, cross-validated by spectral decimation against
a dense eigensolver."""

from .fractal_graph import (
    Address,
    CELL_MIDPOINT_PAIRS,
    CORNER_COORDS,
    EmbeddedVertex,
    LevelCapError,
    LevelGraph,
    build_level,
    canonicalize,
    embed,
    embed_address,
    expected_vertex_count,
    graph_json,
    graph_obj,
    neighbors,
)
from .energy import (
    EnergyReport,
    RENORMALIZATION,
    VertexFunction,
    cell_restriction,
    energy,
    energy_bilinear,
    harmonic_extend,
    harmonic_extension_cell,
    harmonic_family,
    harmonize,
    vertex_function_csv,
)
from .laplacian import (
    LaplacianEstimate,
    MeasureModel,
    NonUniformMeasureError,
    NormalDerivativeEstimate,
    UNIFORM_MEASURE,
    gauss_green_residual,
    graph_laplacian,
    interior_laplacian,
    laplacian_csv,
    normal_derivative,
    pointwise_laplacian,
    pointwise_laplacian_profile,
    spline_integral,
)
from .decimation import (
    DIMENSION_CONSTANTS,
    DimensionConstants,
    EigenvalueRecord,
    ForbiddenEigenvalueError,
    LimitEigenvalue,
    Lineage,
    SpectrumTable,
    WeylFitDiagnostics,
    born_eigenbasis,
    born_multiplicities,
    counting_csv,
    counting_function,
    decimate_down,
    decimate_up,
    eigenfunction_extend,
    eigenfunction_family,
    enumerate_spectrum,
    limit_eigenvalue,
    limit_spectrum,
    limit_spectrum_json,
    lineage_eigenfunction,
    lineage_value,
    spectrum_from_json,
    spectrum_json,
    weyl_fit,
)
from .oracle import (
    DirichletMatrix,
    EigenDecomposition,
    JacobiConvergenceError,
    assemble,
    eigenvalue_multiset,
    eigenvalues_csv,
    jacobi_eigen,
    kernel_dimension,
)

__version__ = "0.1.0"
