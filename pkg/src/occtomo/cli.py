"""Command line interface.

Subcommands: ``simulate``, ``ingest-glider``, ``reconstruct``, ``diagnose``,
``evaluate`` and ``grid``. Run parameters come from an optional flat JSON
config file (``--config``); any command line flag overrides it.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from occtomo import io
from occtomo.diagnostics import eigen_bounds
from occtomo.kernel import KernelSpec
from occtomo.metrics import compare_fields, norm_difference_stats, relative_errors
from occtomo.occupation import assemble_gram
from occtomo.solver import SolverConfig, mt_iterate
from occtomo.synthfield import field_from_name, generate_samples
from occtomo.trajectory import Box, simulate_samples

log = logging.getLogger("occtomo")


@dataclass
class RunConfig:
    mu: float = 1.0
    iterations: int = 10
    steps: int = 100
    regularization: float = 0.0
    divergence_factor: float = 1e3
    region: tuple = (0.0, 1.0, 0.0, 1.0)
    grid_n: int = 20
    seed: int = 0
    n_samples: int = 20
    speed: float = 1.0
    horizon: float = 1.0
    oversample: int = 1
    scale_factor: float = 1.0
    dr_time: Optional[float] = None
    average_dr_time: bool = False

    def __post_init__(self):
        self.region = tuple(float(v) for v in self.region)
        if len(self.region) != 4:
            raise ValueError("region must be xmin, xmax, ymin, ymax")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.steps < 2 or self.steps % 2:
            raise ValueError("steps must be even and >= 2")
        if not self.scale_factor > 0:
            raise ValueError("scale_factor must be positive")
        Box(*self.region)

    @property
    def box(self) -> Box:
        return Box(*self.region)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(iterations=self.iterations, steps=self.steps, mu=self.mu,
                            regularization=self.regularization,
                            divergence_factor=self.divergence_factor, region=self.box)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["region"] = list(self.region)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


# -- commands ----------------------------------------------------------------

def cmd_simulate(config: RunConfig, field_name: str, M: int, out_path) -> list:
    truth = field_from_name(field_name)
    samples = generate_samples(truth, M, config.box, config.speed, config.horizon,
                               config.seed, config.steps, config.oversample)
    io.write_samples(out_path, samples)
    return samples


def cmd_ingest_glider(raw_path, config: RunConfig, out_path):
    samples, rejected = io.read_glider(raw_path, scale_factor=config.scale_factor,
                                       dr_time=config.dr_time,
                                       average_dr_time=config.average_dr_time)
    for rid, reason in rejected:
        log.warning("rejected row %s: %s", rid, reason)
    if not samples:
        raise ValueError("no usable rows in glider file")
    io.write_samples(out_path, samples)
    return samples, rejected


def cmd_reconstruct(samples_path, config: RunConfig, out_dir, reference: Optional[str] = None):
    """Run the solver and write ``estimate.json``, ``iterations.csv``, ``grid.csv``
    and ``run_config.json`` into ``out_dir``."""
    out_dir = Path(out_dir)
    samples = io.read_samples(samples_path)
    est, records = mt_iterate(samples, config.solver_config())
    grid = config.box.grid(config.grid_n)
    truth = field_from_name(reference) if reference else None

    header = ["iteration", "residual_norm", "gram_condition", "n_outside"]
    if truth is not None:
        header += ["max_error", "mean_error"]
    rows = []
    for r in records:
        row = [r.iteration, repr(r.residual_norm), repr(r.gram_condition), r.n_outside]
        if truth is not None:
            rel = relative_errors(truth, r.estimate, grid)
            row += [repr(rel.max_error), repr(rel.mean_error)]
        rows.append(row)

    cfg = config.to_dict()
    io.write_estimate(out_dir / "estimate.json", est, cfg)
    io.atomic_write_text(out_dir / "iterations.csv", io._csv_text(header, rows))
    io.write_grid(out_dir / "grid.csv", grid, est(grid))
    io.atomic_write_text(out_dir / "run_config.json", json.dumps(cfg, indent=1) + "\n")
    return est, records


def _load_trajectories(path, config: RunConfig):
    path = Path(path)
    if path.suffix.lower() == ".json":
        est, _ = io.read_estimate(path)
        return list(est.basis), est.kernel.mu
    samples = io.read_samples(path)
    # anticipated paths: straight lines under zero flow
    return simulate_samples(samples, None, config.steps), config.mu


def cmd_diagnose(path, config: RunConfig):
    trajs, mu = _load_trajectories(path, config)
    gram = assemble_gram(KernelSpec(mu), trajs)
    return eigen_bounds(gram, trajs)


def cmd_evaluate(estimate_path, config: RunConfig, reference: Optional[str] = None,
                 other_path=None):
    est, _ = io.read_estimate(estimate_path)
    if (reference is None) == (other_path is None):
        raise ValueError("give exactly one of a reference field or a second estimate")
    ref = field_from_name(reference) if reference else io.read_estimate(other_path)[0]
    grid = config.box.grid(config.grid_n)
    if reference:
        return compare_fields(ref, est, grid)
    stats = norm_difference_stats(ref, est, grid)
    return {"n_points": len(grid), "max_norm_diff": stats.max,
            "mean_norm_diff": stats.mean, "variance_norm_diff": stats.variance}


def cmd_grid(config: RunConfig, out_path, estimate_path=None, field_name=None):
    if (estimate_path is None) == (field_name is None):
        raise ValueError("give exactly one of an estimate file or a field name")
    f = io.read_estimate(estimate_path)[0] if estimate_path else field_from_name(field_name)
    grid = config.box.grid(config.grid_n)
    io.write_grid(out_path, grid, f(grid))


# -- argument parsing --------------------------------------------------------

_OVERRIDES = {
    "mu": float, "iterations": int, "steps": int, "regularization": float,
    "divergence_factor": float, "grid_n": int, "seed": int, "speed": float,
    "horizon": float, "oversample": int, "scale_factor": float, "dr_time": float,
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat JSON run configuration")
    for name, typ in _OVERRIDES.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    p.add_argument("--region", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.add_argument("--average-dr-time", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="occtomo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic samples CSV")
    _common(p)
    p.add_argument("--field", default="experiment1")
    p.add_argument("-M", "--n-samples", dest="n_samples", type=int, default=None)
    p.add_argument("-o", "--out", type=Path, required=True)

    p = sub.add_parser("ingest-glider", help="convert a glider CSV into samples")
    _common(p)
    p.add_argument("raw", type=Path)
    p.add_argument("-o", "--out", type=Path, required=True)

    p = sub.add_parser("reconstruct", help="estimate the flow field from samples")
    _common(p)
    p.add_argument("samples", type=Path)
    p.add_argument("-o", "--out-dir", type=Path, required=True)
    p.add_argument("--reference", help="analytic field for per-iteration error columns")

    p = sub.add_parser("diagnose", help="spectral report for samples or an estimate")
    _common(p)
    p.add_argument("input", type=Path, help="samples CSV or estimate JSON")
    p.add_argument("--json", type=Path, help="also write the report as JSON")

    p = sub.add_parser("evaluate", help="compare an estimate with a reference")
    _common(p)
    p.add_argument("estimate", type=Path)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--reference")
    g.add_argument("--other", type=Path)
    p.add_argument("--json", type=Path)

    p = sub.add_parser("grid", help="export a quiver grid CSV")
    _common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--estimate", type=Path)
    g.add_argument("--field")
    p.add_argument("-o", "--out", type=Path, required=True)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config is not None:
        data = json.loads(args.config.read_text(encoding="utf-8"))
    for name in list(_OVERRIDES) + ["region", "average_dr_time", "n_samples"]:
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    return RunConfig.from_dict(data)


def _emit(obj: dict, json_path=None) -> None:
    for k, v in obj.items():
        print(f"{k} = {v}")
    if json_path is not None:
        io.atomic_write_text(json_path, json.dumps(obj, indent=1) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args)
        if args.command == "simulate":
            samples = cmd_simulate(config, args.field, config.n_samples, args.out)
            print(f"wrote {len(samples)} samples to {args.out}")
        elif args.command == "ingest-glider":
            samples, rejected = cmd_ingest_glider(args.raw, config, args.out)
            print(f"wrote {len(samples)} samples to {args.out} ({len(rejected)} rejected)")
        elif args.command == "reconstruct":
            _, records = cmd_reconstruct(args.samples, config, args.out_dir, args.reference)
            last = records[-1]
            print(f"{len(records)} iterations; final residual {last.residual_norm:.6e}; "
                  f"outputs in {args.out_dir}")
        elif args.command == "diagnose":
            _emit(cmd_diagnose(args.input, config).to_dict(), args.json)
        elif args.command == "evaluate":
            res = cmd_evaluate(args.estimate, config, args.reference, args.other)
            out = res.to_dict() if hasattr(res, "to_dict") else res
            out["grid"] = {"region": list(config.region), "n": config.grid_n}
            _emit(out, args.json)
        elif args.command == "grid":
            cmd_grid(config, args.out, args.estimate, args.field)
            print(f"wrote grid to {args.out}")
    except (ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"occtomo {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
