"""Command-line entry point.

Every subcommand writes a deterministic document (JSON, CSV or OBJ) to
--output or stdout, so repeated runs with the same flags are
byte-identical.  Exit codes: 0 ok, 2 usage, 3 domain error (caps,
invalid values), 4 I/O failure.  Relative --output paths resolve
against $TETRALAP_OUTDIR when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .fractal_graph import (
    Address,
    LevelCapError,
    build_level,
    graph_json,
    graph_obj,
)
from .energy import harmonic_family, harmonize, vertex_function_csv
from .laplacian import laplacian_csv, pointwise_laplacian_profile
from .decimation import (
    DIMENSION_CONSTANTS,
    counting_csv,
    counting_function,
    enumerate_spectrum,
    limit_spectrum,
    limit_spectrum_json,
    spectrum_json,
    weyl_fit,
)
from . import oracle

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

OUTDIR_ENV = "TETRALAP_OUTDIR"


@dataclass
class RunConfig:
    subcommand: str
    level: int = 0
    boundary_values: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    output_path: str | None = None
    format: str = "json"
    births: int = 6
    count: int = 100
    depth: int = 3
    use_limit: bool = False
    fit: bool = False
    tol: float = 1e-8
    vertex: str | None = None
    extra: dict = field(default_factory=dict)


def _boundary(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("boundary needs exactly four comma-separated values")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed boundary values: {text!r}")


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_build_graph(cfg: RunConfig) -> str:
    g = build_level(cfg.level)
    if cfg.format == "obj":
        return graph_obj(g)
    return _json_text(graph_json(g))


def _cmd_harmonic(cfg: RunConfig) -> str:
    u = harmonize(cfg.boundary_values, cfg.level)
    if cfg.format == "json":
        return _json_text(
            {
                "level": cfg.level,
                "boundary": list(cfg.boundary_values),
                "values": {str(a): float(v) for a, v in zip(u.graph.vertices, u.values)},
            }
        )
    return vertex_function_csv(u)


def _spectrum_csv(table) -> str:
    lines = ["value,multiplicity,birth_level,birth_value,branches"]
    for r in table.records:
        lines.append(
            f"{r.value!r},{r.multiplicity},{r.lineage.birth_level},"
            f"{r.lineage.birth_value!r},{r.lineage.branch_string}"
        )
    return "\n".join(lines) + "\n"


def _cmd_spectrum(cfg: RunConfig) -> str:
    table = enumerate_spectrum(cfg.level)
    if cfg.format == "csv":
        return _spectrum_csv(table)
    return _json_text(spectrum_json(table))


def _cmd_limit_spectrum(cfg: RunConfig) -> str:
    limits = limit_spectrum(cfg.births, cfg.count)
    if cfg.format == "csv":
        lines = ["value,multiplicity,birth_level,birth_value,branches,generations_used"]
        for l in limits:
            lines.append(
                f"{l.value!r},{l.multiplicity},{l.lineage.birth_level},"
                f"{l.lineage.birth_value!r},{l.lineage.branch_string},{l.generations_used}"
            )
        return "\n".join(lines) + "\n"
    payload = limit_spectrum_json(limits)
    if cfg.fit:
        alpha, diag = weyl_fit(limits)
        payload["weyl_fit"] = {
            "alpha_hat": alpha,
            "alpha_expected": DIMENSION_CONSTANTS.weyl_alpha,
            "n_used": diag.n_used,
            "n_total": diag.n_total,
            "window": list(diag.window),
            "intercept": diag.intercept,
            "rms_log_residual": diag.rms_log_residual,
        }
    return _json_text(payload)


def _cmd_counting(cfg: RunConfig) -> str:
    if cfg.use_limit:
        records = limit_spectrum(cfg.births, cfg.count)
    else:
        records = enumerate_spectrum(cfg.level)
    if cfg.format == "json":
        recs = records.records if hasattr(records, "records") else records
        return _json_text(
            {"points": [[r.value, counting_function(recs, r.value)] for r in recs]}
        )
    return counting_csv(records)


def _cmd_laplacian_check(cfg: RunConfig) -> str:
    u = harmonic_family(cfg.boundary_values)
    base = build_level(cfg.level)
    if cfg.vertex is not None:
        targets = [Address.from_string(cfg.vertex)]
    else:
        targets = [base.vertices[v] for v in base.interior]
    estimates = []
    for x in targets:
        estimates.extend(
            pointwise_laplacian_profile(u, x, range(cfg.level, cfg.level + cfg.depth + 1))
        )
    estimates.sort(key=lambda e: (e.level, str(e.vertex)))
    return laplacian_csv(estimates)


def _cmd_oracle_compare(cfg: RunConfig) -> str:
    g = build_level(cfg.level)
    decomp = oracle.jacobi_eigen(oracle.assemble(cfg.level, graph=g))
    table = enumerate_spectrum(cfg.level)
    expanded = []
    for r in table.records:
        expanded.extend([r.value] * r.multiplicity)
    expanded.sort()
    lines = ["level,index,oracle_eigenvalue,decimation_eigenvalue,abs_diff"]
    worst = 0.0
    for i, (ov, dv) in enumerate(zip(decomp.values, expanded)):
        diff = abs(float(ov) - dv)
        worst = max(worst, diff)
        lines.append(f"{cfg.level},{i},{float(ov)!r},{dv!r},{diff!r}")
    body = "\n".join(lines) + "\n"
    if worst > cfg.tol:
        raise ValueError(
            f"oracle and decimation disagree: max |diff| {worst:.3e} > tol {cfg.tol:.1e}"
        )
    return body


def _cmd_constants(cfg: RunConfig) -> str:
    table = DIMENSION_CONSTANTS.as_dict()
    if cfg.format == "json":
        return _json_text(table)
    lines = [f"{name}={entry['value']!r}  # {entry['formula']}" for name, entry in table.items()]
    return "\n".join(lines) + "\n"


_HANDLERS = {
    "build-graph": _cmd_build_graph,
    "harmonic": _cmd_harmonic,
    "spectrum": _cmd_spectrum,
    "limit-spectrum": _cmd_limit_spectrum,
    "counting": _cmd_counting,
    "laplacian-check": _cmd_laplacian_check,
    "oracle-compare": _cmd_oracle_compare,
    "constants": _cmd_constants,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured subcommand; returns the exit status."""
    try:
        text = _HANDLERS[cfg.subcommand](cfg)
    except (LevelCapError, ValueError, KeyError) as exc:
        message = str(exc) if not isinstance(exc, KeyError) else str(exc.args[0])
        print(json.dumps({"error": {"code": EXIT_DOMAIN, "message": message}}), file=sys.stderr)
        return EXIT_DOMAIN
    try:
        _write(text, cfg.output_path)
    except OSError as exc:
        print(json.dumps({"error": {"code": EXIT_IO, "message": str(exc)}}), file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    with open(path, "w") as fh:
        fh.write(text)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tetralap",
        description="Graph energies, Laplacians and the Dirichlet spectrum "
        "of the Sierpinski tetrahedron",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--output", default=None, help="output file (default stdout)")
        return p

    p = add("build-graph", help="export a level graph")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--format", choices=("json", "obj"), default="json")

    p = add("harmonic", help="harmonic function with given corner values")
    p.add_argument("--boundary", type=_boundary, required=True, metavar="a,b,c,d")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("spectrum", help="complete Dirichlet spectrum at one level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("limit-spectrum", help="smallest eigenvalues of the limit operator")
    p.add_argument("--births", type=int, default=6, help="largest birth level enumerated")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--fit", action="store_true", help="append the counting-exponent fit")

    p = add("counting", help="eigenvalue counting function")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--limit", action="store_true", dest="use_limit",
                   help="count limit eigenvalues instead of one graph level")
    p.add_argument("--births", type=int, default=6)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("laplacian-check", help="renormalized-Laplacian convergence table")
    p.add_argument("--boundary", type=_boundary, default=(1.0, 0.0, 0.0, 0.0),
                   metavar="a,b,c,d")
    p.add_argument("--level", type=int, default=1, help="level whose interior is probed")
    p.add_argument("--depth", type=int, default=3, help="how many further levels to report")
    p.add_argument("--vertex", default=None, help="probe one address, e.g. '0:1'")

    p = add("oracle-compare", help="dense-oracle vs decimation eigenvalues")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("constants", help="dimension and scaling constants")
    p.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in ("level", "output", "format", "births", "count", "depth",
                 "use_limit", "fit", "tol", "vertex", "boundary"):
        if hasattr(args, name):
            value = getattr(args, name)
            if name == "output":
                cfg.output_path = value
            elif name == "boundary":
                cfg.boundary_values = value
            else:
                setattr(cfg, name, value)
    return cfg


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
