"""File formats for samples, estimates and quiver grids, plus glider ingestion.

Samples CSV columns: ``id, p0_x, p0_y, theta_rad, speed, horizon_T, obs_x, obs_y``.
Glider CSV columns: ``id, init_x, init_y, dr_final_x, dr_final_y, true_final_x,
true_final_y, dr_time_hours``. Floats are written with ``repr`` so they
round-trip exactly.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from occtomo.kernel import KernelSpec
from occtomo.solver import FieldEstimate
from occtomo.trajectory import SampledTrajectory, TomographySample

SAMPLE_COLUMNS = ["id", "p0_x", "p0_y", "theta_rad", "speed", "horizon_T", "obs_x", "obs_y"]
GLIDER_COLUMNS = ["id", "init_x", "init_y", "dr_final_x", "dr_final_y",
                  "true_final_x", "true_final_y", "dr_time_hours"]
GRID_COLUMNS = ["x", "y", "Fx", "Fy"]
ESTIMATE_FORMAT = "occtomo-estimate"


def _fmt(x) -> str:
    return repr(float(x))


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_rows(path, required: Sequence[str]) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        return list(reader)


# -- samples -----------------------------------------------------------------

def samples_to_csv(samples: Sequence[TomographySample]) -> str:
    return _csv_text(SAMPLE_COLUMNS, (
        [s.id, _fmt(s.start[0]), _fmt(s.start[1]), _fmt(s.theta), _fmt(s.speed),
         _fmt(s.horizon), _fmt(s.observed_final[0]), _fmt(s.observed_final[1])]
        for s in samples))


def write_samples(path, samples: Sequence[TomographySample]) -> None:
    atomic_write_text(path, samples_to_csv(samples))


def read_samples(path) -> list:
    rows = _read_rows(path, SAMPLE_COLUMNS)
    if not rows:
        raise ValueError(f"{path}: no samples")
    return [
        TomographySample(
            r["id"], (float(r["p0_x"]), float(r["p0_y"])), float(r["theta_rad"]),
            float(r["speed"]), float(r["horizon_T"]), (float(r["obs_x"]), float(r["obs_y"])))
        for r in rows
    ]


# -- glider ingestion ----------------------------------------------------------

def ingest_glider_rows(rows: Sequence[dict], scale_factor: float = 1.0,
                       dr_time: Optional[float] = None, average_dr_time: bool = False):
    """Convert raw glider records into tomography samples.

    Coordinates are multiplied by ``scale_factor``. The heading and speed
    come from the straight segment between the initial and the
    dead-reckoned final position, travelled in the dead-reckoning time.
    That time is read per row unless ``dr_time`` fixes it; with
    ``average_dr_time`` the row mean is used instead.

    Returns ``(samples, rejected)`` where ``rejected`` lists ``(id, reason)``.
    """
    if not scale_factor > 0:
        raise ValueError("scale_factor must be positive")
    rejected = []
    parsed = []
    for r in rows:
        try:
            vals = {k: float(r[k]) for k in GLIDER_COLUMNS[1:]}
        except (KeyError, ValueError) as exc:
            rejected.append((r.get("id", "?"), f"unparseable row: {exc}"))
            continue
        parsed.append((r["id"], vals))

    times = [v["dr_time_hours"] for _, v in parsed]
    if dr_time is not None:
        if not dr_time > 0:
            raise ValueError("dr_time must be positive")
        times = [float(dr_time)] * len(parsed)
    elif average_dr_time:
        good = [t for t in times if t > 0]
        if not good:
            raise ValueError("no positive dead-reckoning times to average")
        times = [sum(good) / len(good)] * len(parsed)

    samples = []
    for (rid, v), t in zip(parsed, times):
        if not (t > 0 and math.isfinite(t)):
            rejected.append((rid, f"non-positive dead-reckoning time {t}"))
            continue
        ix, iy = v["init_x"] * scale_factor, v["init_y"] * scale_factor
        dx = v["dr_final_x"] * scale_factor - ix
        dy = v["dr_final_y"] * scale_factor - iy
        dist = math.hypot(dx, dy)
        if dist == 0:
            rejected.append((rid, "initial and dead-reckoned positions coincide"))
            continue
        samples.append(TomographySample(
            rid, (ix, iy), math.atan2(dy, dx), dist / t, t,
            (v["true_final_x"] * scale_factor, v["true_final_y"] * scale_factor)))
    return samples, rejected


def read_glider(path, **kwargs):
    return ingest_glider_rows(_read_rows(path, GLIDER_COLUMNS), **kwargs)


# -- estimate ----------------------------------------------------------------

def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def estimate_to_json(est: FieldEstimate, config: Optional[dict] = None) -> str:
    config = dict(config or {})
    doc = {
        "format": ESTIMATE_FORMAT,
        "version": 1,
        "kernel": est.kernel.to_dict(),
        "basis": [
            {"id": b.label, "horizon": b.horizon, "points": b.points.tolist()}
            for b in est.basis
        ],
        "weights_x": est.weights_x.tolist(),
        "weights_y": est.weights_y.tolist(),
        "config": config,
        "config_hash": config_hash(config),
    }
    return json.dumps(doc, indent=1) + "\n"


def write_estimate(path, est: FieldEstimate, config: Optional[dict] = None) -> None:
    atomic_write_text(path, estimate_to_json(est, config))


def read_estimate(path):
    """Load an estimate file; returns ``(FieldEstimate, config dict)``."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != ESTIMATE_FORMAT:
        raise ValueError(f"{path}: not an estimate file")
    kernel = KernelSpec.from_dict(doc["kernel"])
    basis = [SampledTrajectory(np.array(b["points"], dtype=float), b["horizon"], b["id"])
             for b in doc["basis"]]
    w = np.column_stack([doc["weights_x"], doc["weights_y"]]) if basis else np.zeros((0, 2))
    return FieldEstimate(basis, w, kernel), doc.get("config", {})


# -- grids -------------------------------------------------------------------

def grid_to_csv(points, values) -> str:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    vals = np.asarray(values, dtype=float).reshape(-1, 2)
    return _csv_text(GRID_COLUMNS, ([_fmt(p[0]), _fmt(p[1]), _fmt(v[0]), _fmt(v[1])]
                                    for p, v in zip(pts, vals)))


def write_grid(path, points, values) -> None:
    atomic_write_text(path, grid_to_csv(points, values))


def read_grid(path):
    rows = _read_rows(path, GRID_COLUMNS)
    arr = np.array([[float(r[c]) for c in GRID_COLUMNS] for r in rows]).reshape(-1, 4)
    return arr[:, :2], arr[:, 2:]
