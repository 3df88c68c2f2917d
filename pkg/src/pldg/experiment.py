"""Instance generation, trial orchestration and on-disk records."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .geometry import EPS, GeneralPositionError, circumdisk, delaunay
from .protocol import Variant
from .sim import RunReport, count_messages, run
from .udg import Graph, PointSet, build_udg
from .verify import graphs_equal, udel_oracle, verify_report

log = logging.getLogger(__name__)

GENERATORS = ("uniform", "clustered")
VARIANT_CHOICES = ("PLDG", "PLDG'", "both")
SCHEMA_VERSION = 1


class GenerationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    n: int = 50
    region: float = 3.0
    generator: str = "uniform"
    variant: str = "both"
    trials: int = 1
    clearance: float = 10.0
    max_retries: int = 1000

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not self.region > 0:
            raise ValueError(f"region side must be positive, got {self.region}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.variant not in VARIANT_CHOICES:
            object.__setattr__(self, "variant", _variant_name(self.variant))
        if self.clearance < 1:
            raise ValueError("clearance multiplier must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def variants(self) -> list[Variant]:
        if self.variant == "both":
            return [Variant.PLDG_PRIME, Variant.PLDG]
        return [Variant.parse(self.variant)]


def _variant_name(name: str) -> str:
    if name.lower() == "both":
        return "both"
    return Variant.parse(name).value


# -- validity predicates ----------------------------------------------------

def distance_clearance_ok(ps: PointSet, margin: float) -> bool:
    """No pairwise distance within ``margin`` of the unit radio range."""
    pts = ps.array()
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(len(pts), k=1)
    return bool(np.all(np.abs(dist[iu] - 1.0) > margin))


def collinearity_clearance_ok(ps: PointSet, margin: float, udg: Graph | None = None) -> bool:
    """Every triple inside some closed unit neighborhood is far from collinear.

    The measure is the height of the triangle over its longest side.
    """
    udg = udg or build_udg(ps)
    pts = ps.array()
    seen = set()
    for v in range(len(ps)):
        nb = sorted(udg.adjacency[v] | {v})
        if len(nb) < 3:
            continue
        key = tuple(nb)
        if key in seen:
            continue
        seen.add(key)
        tri = np.array(list(itertools.combinations(nb, 3)))
        a, b, c = pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]]
        area2 = np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                       - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
        longest = np.max(np.stack([np.hypot(*(b - a).T), np.hypot(*(c - a).T),
                                   np.hypot(*(c - b).T)]), axis=0)
        if np.any(area2 / longest <= margin):
            return False
    return True


def cocircularity_clearance_ok(ps: PointSet, margin: float, udg: Graph | None = None) -> bool:
    """No point near the circumcircle of any local Delaunay face it could be tested against.

    Circles of faces in LDT(x) are only ever compared with points of N_v for v
    in N_x, all of which lie within distance 2 of x.
    """
    udg = udg or build_udg(ps)
    pts = ps.array()
    for x in range(len(ps)):
        nb = sorted(udg.adjacency[x] | {x})
        if len(nb) < 3:
            continue
        ldt = delaunay([ps[i] for i in nb])
        near = np.nonzero(np.hypot(*(pts - pts[x]).T) <= 2.0)[0]
        for face in ldt.faces:
            verts = {nb[i] for i in face.vertices}
            disk = circumdisk(*(ps[i] for i in verts))
            others = np.array([i for i in near if i not in verts], dtype=int)
            if not len(others):
                continue
            gap = np.abs(np.hypot(*(pts[others] - np.asarray(disk.center)).T) - disk.radius)
            if np.any(gap <= margin * max(1.0, disk.radius)):
                return False
    return True


def instance_problems(ps: PointSet, clearance: float = 10.0) -> list[str]:
    """Names of the validity predicates ``ps`` fails (empty when valid)."""
    margin = clearance * EPS
    udg = build_udg(ps)
    problems = []
    if not distance_clearance_ok(ps, margin):
        problems.append("distance")
    if not collinearity_clearance_ok(ps, margin, udg):
        problems.append("collinear")
    if not problems:
        try:
            ok = cocircularity_clearance_ok(ps, margin, udg)
        except GeneralPositionError:
            ok = False
        if not ok:
            problems.append("cocircular")
    if not udg.is_connected():
        problems.append("disconnected")
    return problems


# -- generation -------------------------------------------------------------

def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _sample(config: ExperimentConfig, rng: np.random.Generator) -> np.ndarray:
    side = config.region
    if config.generator == "uniform":
        return rng.uniform(0.0, side, size=(config.n, 2))
    clusters = max(1, config.n // 10)
    centers = rng.uniform(0.0, side, size=(clusters, 2))
    which = rng.integers(0, clusters, size=config.n)
    pts = centers[which] + rng.normal(0.0, 0.5, size=(config.n, 2))
    return np.clip(pts, 0.0, side)


def generate(config: ExperimentConfig, trial: int = 0) -> PointSet:
    rng = trial_rng(config.seed, trial)
    for attempt in range(config.max_retries):
        pts = _sample(config, rng)
        if len(np.unique(pts, axis=0)) != len(pts):
            continue
        ps = PointSet(tuple(map(tuple, pts.tolist())), config.seed,
                      {"n": config.n, "region": config.region, "generator": config.generator,
                       "trial": trial, "attempt": attempt})
        if not instance_problems(ps, config.clearance):
            return ps
    raise GenerationExhausted(
        f"no valid instance after {config.max_retries} attempts "
        f"(n={config.n}, region={config.region})")


# -- records ----------------------------------------------------------------

def _edges_json(edges) -> list[list[int]]:
    return [list(e) for e in sorted(edges)]


def run_trial(config: ExperimentConfig, trial: int, ps: PointSet | None = None,
              reports: dict | None = None) -> dict:
    """Generate (unless given), run each configured variant, verify, and build the record."""
    ps = ps if ps is not None else generate(config, trial)
    udg = build_udg(ps)
    udel = udel_oracle(ps)
    record = {
        "schema": SCHEMA_VERSION,
        "config": asdict(config),
        "trial": trial,
        "points": [list(p) for p in ps.points],
        "udg_edges": _edges_json(udg.edges),
        "pldg_edges": {},
        "verdict": {},
        "message_histogram": {},
        "certificates": {},
    }
    results: dict[Variant, RunReport] = {}
    for variant in config.variants():
        report = run(ps, variant, udg=udg)
        results[variant] = report
        verdict = verify_report(ps, report, udg=udg, udel=udel)
        record["pldg_edges"][variant.value] = _edges_json(report.edges)
        record["verdict"][variant.value] = verdict.to_json()
        record["message_histogram"][variant.value] = {
            str(k): v for k, v in count_messages(report)[1].items()}
        record["certificates"][variant.value] = [c.to_json() for c in report.certificates]
    passed = all(record["verdict"][v.value]["passed"] for v in results)
    if len(results) == 2:
        equal, witness = graphs_equal(results[Variant.PLDG].graph, results[Variant.PLDG_PRIME].graph)
        record["verdict"]["graphs_equal"] = equal
        record["verdict"]["graphs_equal_witness"] = list(witness) if witness else None
        passed = passed and equal
    record["verdict"]["passed"] = passed
    if reports is not None:
        reports.update(results)
    return record


def dumps(record: dict) -> str:
    # json emits the shortest repr of each float, which round-trips exactly.
    return json.dumps(record, indent=1, sort_keys=True) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_points(path) -> PointSet:
    """Read a point set from a trial record or a bare ``{"points": [...]}`` file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    seed = data.get("config", {}).get("seed", data.get("seed"))
    return PointSet(tuple(tuple(p) for p in data["points"]), seed, data.get("params", {}))


def points_json(ps: PointSet) -> dict:
    return {"schema": SCHEMA_VERSION, "seed": ps.seed, "params": ps.params,
            "points": [list(p) for p in ps.points]}


CSV_FIELDS = ["trial", "seed", "n", "variant", "max_messages", "stretch", "plane", "consistent",
              "supergraph_of_udel", "stretch_ok", "messages_ok", "one_round",
              "certificates_replay", "graphs_equal", "passed"]


def summary_rows(record: dict) -> list[dict]:
    rows = []
    cfg = record["config"]
    for variant, verdict in record["verdict"].items():
        if not isinstance(verdict, dict):
            continue
        row = {"trial": record["trial"], "seed": cfg["seed"], "n": len(record["points"]),
               "variant": variant}
        for key in CSV_FIELDS[4:-2]:
            row[key] = verdict[key]
        row["graphs_equal"] = record["verdict"].get("graphs_equal", "")
        row["passed"] = verdict["passed"]
        rows.append(row)
    return rows


def summary_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerows(summary_rows(record))
    return buf.getvalue()


def _trial_job(args):
    config, trial, out_dir, svg = args
    record = run_trial(config, trial)
    write_atomic(out_dir / f"trial-{trial:04d}.json", dumps(record))
    if svg:
        from .render import render_record

        render_record(record, out_dir / f"trial-{trial:04d}.svg")
    return record


def run_experiment(config: ExperimentConfig, out_dir, svg: bool = False, jobs: int = 1) -> int:
    """Run every trial, write records plus ``summary.csv``; 0 iff all verdicts pass."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(config, t, out_dir, svg) for t in range(config.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_trial_job, tasks))
    else:
        records = [_trial_job(t) for t in tasks]
    write_atomic(out_dir / "summary.csv", summary_csv(records))
    failed = [r["trial"] for r in records if not r["verdict"]["passed"]]
    for t in failed:
        log.error("trial %d failed verification", t)
    return 1 if failed else 0


def stretch_value(value) -> float:
    return math.inf if value == "inf" else float(value)
