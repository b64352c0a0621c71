"""Self-similar measure, renormalized Laplacian, and boundary flux.

With uniform weights 1/4 each cell at level m has measure 4^{-m}, and a
piecewise-harmonic bump at an interior vertex integrates to 2/4^{m+1}
(one 4^{-m-1} slice per incident cell).  Combining the energy scaling
(3/2)^m with the inverse bump integral 4^{m+1}/2 renormalizes the graph
Laplacian: the pointwise operator is the limit of 2 * 6^m * Delta_m.

Normal derivatives are the boundary fluxes (3/2)^k * sum(u(X) - u(Y))
over level-k neighbors; together with the interior Laplacian they make
the summation-by-parts (Gauss-Green) identity exact at every level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fractal_graph import Address, canonicalize
from .energy import VertexFunction, energy_bilinear

UNIFORM_WEIGHTS = (0.25, 0.25, 0.25, 0.25)


class NonUniformMeasureError(ValueError):
    """Raised where only the uniform measure is supported."""


@dataclass(frozen=True)
class MeasureModel:
    """Self-similar measure with one weight per contraction."""

    weights: tuple[float, float, float, float] = UNIFORM_WEIGHTS

    def __post_init__(self):
        if len(self.weights) != 4 or any(w <= 0 for w in self.weights):
            raise ValueError("measure needs four strictly positive weights")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("measure weights must sum to 1")

    @property
    def is_uniform(self) -> bool:
        return self.weights == UNIFORM_WEIGHTS

    def cell_measure(self, m: int) -> float:
        """Measure 4^{-m} of any level-m cell (uniform weights only)."""
        if not self.is_uniform:
            raise NonUniformMeasureError(
                "level-indexed cell measure assumes uniform weights; "
                "use word_measure for a specific cell"
            )
        return 4.0 ** -m

    def word_measure(self, word) -> float:
        out = 1.0
        for letter in word:
            out *= self.weights[letter]
        return out


UNIFORM_MEASURE = MeasureModel()


@dataclass(frozen=True)
class LaplacianEstimate:
    level: int
    vertex: Address
    value: float


@dataclass(frozen=True)
class NormalDerivativeEstimate:
    vertex: Address
    level: int
    value: float


def spline_integral(x: Address, m: int, measure: MeasureModel = UNIFORM_MEASURE) -> float:
    """Integral of the level-m harmonic bump at x: one 4^{-m}/4 slice per incident cell."""
    if not measure.is_uniform:
        raise NonUniformMeasureError("spline integrals are defined for the uniform measure")
    if len(x.word) > m:
        raise ValueError(f"{x} is not a vertex of V_{m}")
    incident = 1 if x.is_boundary else 2
    return incident / 4.0 ** (m + 1)


def graph_laplacian(u: VertexFunction, x: Address) -> float:
    """Delta_m u at an interior vertex: sum of u(y) - u(x) over the 6 neighbors.

    The difference form keeps constants exactly in the kernel; it equals
    the neighbor sum minus 6 u(x).
    """
    g = u.graph
    idx = g.index_of(x)
    if idx in g.boundary:
        raise ValueError(f"graph Laplacian is defined on interior vertices only, got {x}")
    return float(np.sum(u.values[g.neighbors(idx)] - u.values[idx]))


def interior_laplacian(u: VertexFunction) -> np.ndarray:
    """Delta_m u over all interior vertices, aligned with graph.interior order."""
    g = u.graph
    return np.array(
        [np.sum(u.values[g.neighbors(v)] - u.values[v]) for v in g.interior]
    )


def pointwise_laplacian(
    u_source,
    x: Address,
    m: int,
    measure: MeasureModel = UNIFORM_MEASURE,
) -> LaplacianEstimate:
    """Renormalized estimate 2 * 6^m * Delta_m u(x).

    ``u_source`` maps a level to the VertexFunction of one function
    restricted to that level (see harmonic_family, eigenfunction_family).
    The estimate converges only for functions with a continuous
    Laplacian; callers should inspect a profile across levels rather
    than trust a single m.
    """
    if not measure.is_uniform:
        raise NonUniformMeasureError(
            "pointwise renormalization 2*6^m is derived for uniform weights"
        )
    u = u_source(m)
    if u.graph.level != m:
        raise ValueError(f"u_source({m}) returned a level-{u.graph.level} function")
    value = 2.0 * 6.0 ** m * graph_laplacian(u, x)
    return LaplacianEstimate(level=m, vertex=canonicalize(x), value=value)


def pointwise_laplacian_profile(u_source, x: Address, levels) -> list[LaplacianEstimate]:
    """Convergence report: the renormalized estimate at each requested level."""
    return [pointwise_laplacian(u_source, x, m) for m in levels]


def normal_derivative(u_source, x: Address, k: int) -> NormalDerivativeEstimate:
    """Boundary-flux estimate (3/2)^k * sum over level-k neighbors of u(x) - u(y)."""
    u = u_source(k)
    g = u.graph
    idx = g.index_of(x)
    flux = float(np.sum(u.values[idx] - u.values[g.neighbors(idx)]))
    return NormalDerivativeEstimate(vertex=canonicalize(x), level=k, value=1.5 ** k * flux)


def gauss_green_residual(u: VertexFunction, v: VertexFunction) -> float:
    """Defect of the summation-by-parts identity; zero up to rounding.

    (3/2)^m E_m(u,v)  =  - sum_interior (3/2)^m v Delta_m u
                         + sum_boundary (3/2)^m v * flux(u)
    """
    g = u.graph
    if v.graph.level != g.level:
        raise ValueError("gauss_green_residual requires functions on the same graph")
    scale = 1.5 ** g.level
    lhs = scale * energy_bilinear(u, v)
    interior_term = -scale * float(
        np.sum(v.values[list(g.interior)] * interior_laplacian(u))
    )
    boundary_term = 0.0
    for b in g.boundary:
        flux = float(np.sum(u.values[b] - u.values[g.neighbors(b)]))
        boundary_term += scale * v.values[b] * flux
    return lhs - (interior_term + boundary_term)


def laplacian_csv(estimates) -> str:
    """CSV rows (level, address, value) for LaplacianEstimate tables."""
    lines = ["level,address,value"]
    for e in estimates:
        lines.append(f"{e.level},{e.vertex},{e.value!r}")
    return "\n".join(lines) + "\n"
