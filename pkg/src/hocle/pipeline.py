"""End-to-end ensemble pipeline and artifact writing.

base clusterings -> high-order families -> weighted targets -> structured
matrices (one per order) -> fused consensus -> labels -> ACC / NMI.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from ._backend import BACKEND
from .base_clustering import generate_ensemble
from .consensus_fusion import extract_labels, fuse_consensus
from .dataset import load_labels, load_matrix
from .exceptions import ConfigError, HocleError, LengthMismatch
from .high_order import ORDER_CODES, build_family
from .linalg import connected_components
from .metrics import accuracy, nmi
from .structuration import StructurationParams, structure
from .weighted_fusion import fuse_weighted

#: artifact file name of each order's structured matrix
MATRIX_FILES = {"1": "M1.csv", "2c": "M2.csv", "2p": "M3.csv", "m": "M4.csv"}
REPEAT_SEED_STRIDE = 1000


@dataclass
class RunConfig:
    data: str = None
    labels: str = None
    clusters: int = None
    members: int = 20
    seed: int = 0
    orders: tuple = ("1", "2c", "2p", "m")
    lambda0: float = 0.1
    tol: float = 1e-6
    max_iter: int = 30
    proj_iter: int = 1000
    proj_tol: float = 1e-9
    eig_eps: float = 1e-8
    weight_iter: int = 50
    weight_tol: float = 1e-6
    kmeans_iter: int = 100
    kmeans_tol: float = 1e-4
    repeats: int = 1
    format: str = "csv"
    out: str = None
    jobs: int = 4

    def validate(self):
        if self.clusters is None or self.clusters < 1:
            raise ConfigError("clusters must be a positive integer")
        if self.members < 1:
            raise ConfigError("members must be >= 1")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        orders = self.orders
        if isinstance(orders, str):
            orders = [o.strip() for o in orders.split(",") if o.strip()]
        orders = tuple(str(o) for o in orders)
        if not orders:
            raise ConfigError("orders must be nonempty")
        bad = [o for o in orders if o not in ORDER_CODES]
        if bad:
            raise ConfigError(f"unknown orders {bad}; choose from 1,2c,2p,m")
        # pipeline order, duplicates dropped
        self.orders = tuple(o for o in ORDER_CODES if o in orders)
        if self.format not in ("csv", "ws", "whitespace"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def structuration_params(self):
        return StructurationParams(
            lambda0=self.lambda0, outer_max_iter=self.max_iter,
            proj_max_iter=self.proj_iter, tol=self.tol,
            eig_eps=self.eig_eps, proj_tol=self.proj_tol)

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name for f in fields(cls)}
        kw = {}
        for key, value in mapping.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kw[key] = value
        return cls(**kw)


@dataclass
class RunReport:
    config: dict
    repeats: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    timings: list = field(default_factory=list)

    @property
    def converged(self):
        return self.summary.get("converged", True)

    def to_json(self):
        """Deterministic JSON (wall times are written separately)."""
        doc = {"hocle_version": __version__, "backend": BACKEND,
               "config": self.config, "repeats": self.repeats,
               "summary": self.summary}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class StageError(HocleError):
    """Wraps an error with the pipeline stage in which it happened."""

    def __init__(self, stage, error):
        super().__init__(f"[{stage}] {error}")
        self.stage = stage
        self.error = error


def export_matrix(matrix, path):
    """Write ``matrix`` as CSV with 17 significant digits (exact round trip)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    with open(path, "w", newline="\n") as fh:
        for row in matrix:
            fh.write(",".join("%.17g" % v for v in row))
            fh.write("\n")


def export_labels(labels, path):
    with open(path, "w", newline="\n") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)


def _floats(a):
    return [float(v) for v in np.ravel(a)]


def consensus_from_coassociations(S_list, c, config, seed, timings=None):
    """Run everything after the base clusterings for one repeat.

    Returns ``(labels, fusion_result, per_order_matrices, record)`` where
    ``record`` is the JSON-ready per-repeat report entry.
    """
    params = config.structuration_params()
    timings = timings if timings is not None else {}

    def one_order(code):
        t0 = time.perf_counter()
        family = build_family(code, S_list)
        if family.k == 0:
            raise HocleError(f"order {code} needs at least 2 members")
        s_hat, w, winfo = fuse_weighted(
            family, config.weight_iter, config.weight_tol, return_trace=True)
        t1 = time.perf_counter()
        res = structure(s_hat, c, params)
        t2 = time.perf_counter()
        return code, w, winfo, res, (t1 - t0, t2 - t1)

    try:
        jobs = max(1, min(config.jobs, len(config.orders)))
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outputs = list(pool.map(one_order, config.orders))
        else:
            outputs = [one_order(code) for code in config.orders]
    except HocleError as exc:
        raise StageError("structure", exc) from exc

    record = {"orders": {}}
    matrices = {}
    for code, w, winfo, res, (tw, ts) in outputs:
        matrices[code] = res.matrix
        timings[f"weighted_{code}"] = tw
        timings[f"structure_{code}"] = ts
        record["orders"][code] = {
            "weights": _floats(w),
            "weighted_iters": winfo["n_iter"],
            "weighted_converged": winfo["converged"],
            "structure_iters": res.n_iter,
            "structure_converged": res.converged,
            "feasible": res.feasible,
            "lambda": res.lambda_trace[-1],
            "components": res.components_trace[-1],
        }

    t0 = time.perf_counter()
    try:
        fused = fuse_consensus([matrices[k] for k in config.orders], c, params)
    except HocleError as exc:
        raise StageError("fusion", exc) from exc
    timings["fusion"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    count, _ = connected_components(fused.matrix, config.eig_eps)
    labels = extract_labels(fused.matrix, fused.embedding, c,
                            config.eig_eps, seed)
    timings["extract"] = time.perf_counter() - t0
    record["fusion"] = {
        "weights": _floats(fused.weights),
        "iters": fused.n_iter,
        "converged": fused.converged,
        "feasible": fused.feasible,
        "lambda": fused.lambda_trace[-1],
    }
    record["components"] = count
    record["label_source"] = "components" if count == c else "kmeans"
    record["converged"] = bool(
        fused.converged and fused.feasible
        and all(o["feasible"] for o in record["orders"].values()))
    return labels, fused, matrices, record


def _summarise(report, have_truth):
    reps = report.repeats
    summary = {"converged": all(r["converged"] for r in reps)}
    if have_truth:
        for key in ("acc", "nmi"):
            vals = np.array([r[key] for r in reps])
            summary[f"{key}_mean"] = float(vals.mean())
            summary[f"{key}_var"] = float(vals.var())
    report.summary = summary


class _ArtifactWriter:
    """Tracks written files so a failed run leaves nothing half-written."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.written = []

    def path(self, name):
        p = os.path.join(self.out_dir, name)
        self.written.append(p)
        return p

    def rollback(self):
        for p in self.written:
            try:
                os.remove(p)
            except OSError:
                pass


def write_artifacts(writer, report, labels, consensus, matrices, weights):
    export_labels(labels, writer.path("labels.csv"))
    export_matrix(consensus, writer.path("consensus.csv"))
    for code, M in matrices.items():
        export_matrix(M, writer.path(MATRIX_FILES[code]))
    with open(writer.path("weights.json"), "w") as fh:
        json.dump(weights, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(writer.path("report.json"), "w") as fh:
        fh.write(report.to_json())
    with open(writer.path("timings.json"), "w") as fh:
        json.dump(report.timings, fh, indent=2)
        fh.write("\n")


def _weights_doc(record):
    return {"orders": {k: v["weights"] for k, v in record["orders"].items()},
            "fusion": record["fusion"]["weights"]}


def _run(config, get_ensemble, n):
    """Shared repeat loop for ``ensemble`` and ``fuse``."""
    truth = None
    if config.labels:
        try:
            truth = load_labels(config.labels)
        except (OSError, HocleError) as exc:
            raise StageError("load", exc) from exc
        if truth.size != n:
            raise StageError("load", LengthMismatch(
                f"{truth.size} labels for {n} samples"))

    report = RunReport(config=_config_doc(config))
    first = None
    for r in range(config.repeats):
        seed = config.seed + REPEAT_SEED_STRIDE * r
        timings = {"repeat": r}
        t0 = time.perf_counter()
        S_list, member_seeds = get_ensemble(seed)
        timings["base"] = time.perf_counter() - t0
        labels, fused, matrices, record = consensus_from_coassociations(
            S_list, config.clusters, config, seed, timings)
        record = {"repeat": r, "seed": seed, "member_seeds": member_seeds,
                  **record}
        if truth is not None:
            record["acc"] = float(accuracy(labels, truth))
            record["nmi"] = float(nmi(labels, truth))
        report.repeats.append(record)
        report.timings.append(timings)
        if first is None:
            first = (labels, fused.matrix, matrices, _weights_doc(record))
    _summarise(report, truth is not None)
    return report, first


def _config_doc(config):
    doc = asdict(config)
    doc["orders"] = list(config.orders)
    doc.pop("jobs")
    doc.pop("out")
    return doc


def _finish(config, report, first):
    os.makedirs(config.out, exist_ok=True)
    writer = _ArtifactWriter(config.out)
    try:
        write_artifacts(writer, report, *first)
    except OSError as exc:
        writer.rollback()
        raise StageError("write", exc) from exc
    return report


def run_pipeline(config):
    """Execute the full pipeline described by ``config`` and write artifacts.

    Returns the :class:`RunReport`. Artifacts of the first repeat are written
    to ``config.out``; the report covers all repeats.
    """
    config.validate()
    try:
        X = load_matrix(config.data, config.format)
    except (OSError, HocleError) as exc:
        raise StageError("load", exc) from exc

    def get_ensemble(seed):
        try:
            S = generate_ensemble(
                X, config.clusters, config.members, seed=seed,
                max_iter=config.kmeans_iter, tol=config.kmeans_tol)
        except HocleError as exc:
            raise StageError("base", exc) from exc
        return S, [seed + i for i in range(config.members)]

    report, first = _run(config, get_ensemble, X.shape[0])
    return _finish(config, report, first)


def load_coassociations(directory):
    """Load ``S1.csv, S2.csv, ...`` from ``directory`` in numeric order."""
    names = [f for f in os.listdir(directory)
             if f.startswith("S") and f.endswith(".csv") and f[1:-4].isdigit()]
    names.sort(key=lambda f: int(f[1:-4]))
    if not names:
        raise StageError("load", ConfigError(
            f"no S<i>.csv matrices in {directory}"))
    try:
        mats = [load_matrix(os.path.join(directory, f)) for f in names]
    except (OSError, HocleError) as exc:
        raise StageError("load", exc) from exc
    n = mats[0].shape[0]
    if any(M.shape != (n, n) for M in mats):
        raise StageError("load", LengthMismatch(
            "co-association matrices must be square and of equal size"))
    return mats


def run_fusion(config, directory):
    """Like :func:`run_pipeline` but starting from saved co-association CSVs."""
    config.validate()
    S_list = load_coassociations(directory)
    config.members = len(S_list)
    report, first = _run(config, lambda seed: (S_list, []),
                         S_list[0].shape[0])
    return _finish(config, report, first)
