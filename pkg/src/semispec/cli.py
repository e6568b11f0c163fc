"""Spectral semidistance of a matrix pair, from the command line.

    semispec --example free-algebra --method all
    semispec --example l1 --n 4 --method all --out report.json
    semispec --input pair.json --method geometric --qe

Pair files are JSON: ``{"a": {"n": 2, "data": [[[re, im], ...], ...]}, "b": {...}}``
with row-major data.  A report written by this tool is itself accepted as
``--input``; its recorded options are reused unless overridden on the
command line.

Exit codes: 0 ok, 1 computation error, 2 input error, 3 fragile result.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__
from .corpus import PairSpec, free_algebra_pair, l1_discretization, random_diagonalizable_pair
from .errors import InputError, SemispecError
from .numkernel import NORM_KINDS, as_mat, norm
from .semidistance import (
    METHODS,
    GeometricOptions,
    commutator_sequence,
    quasinilpotent_equivalent,
    rho,
)

SCHEMA = 1
EXIT_OK, EXIT_COMPUTE, EXIT_INPUT, EXIT_FRAGILE = 0, 1, 2, 3
EXAMPLES = ("free-algebra", "l1", "random")


@dataclass
class RunConfig:
    input: Optional[str] = None
    example: Optional[str] = None
    n: Optional[int] = None
    seed: int = 0
    gap: float = 0.1
    method: str = "geometric"
    n_max: int = 400
    norm_kind: str = "fro"
    nodes_cap: int = 512
    cluster_tol: Optional[float] = None
    product_tol: float = 1e-8
    zero_radius: Optional[float] = None
    qe: bool = False
    out: Optional[str] = None
    format: str = "json"

    def validate(self) -> None:
        if (self.input is None) == (self.example is None):
            raise InputError("exactly one of --input and --example is required")
        if self.example is not None and self.example not in EXAMPLES:
            raise InputError(f"unknown example {self.example!r}")
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}")
        if self.format not in ("json", "csv"):
            raise InputError(f"unknown format {self.format!r}")
        for name in ("cluster_tol", "product_tol", "zero_radius", "gap"):
            v = getattr(self, name)
            if v is not None and not (v > 0 and math.isfinite(v)):
                if name == "zero_radius" and v == 0:
                    continue
                raise InputError(f"--{name.replace('_', '-')} must be positive, got {v}")
        if self.method in ("definition", "growth", "all") and self.n_max < 20:
            raise InputError("--n-max must be at least 20 for the definition-based methods")
        if self.nodes_cap < 16:
            raise InputError("--nodes-cap must be at least 16")


# ---------------------------------------------------------------------------
# pair files


def _parse_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object with 'n' and 'data'")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"{where}.n: expected a positive integer, got {n!r}")
    data = obj.get("data")
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"{where}.data: expected {n} rows")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InputError(f"{where}.data[{i}]: ragged row (expected {n} entries, got {got})")
        for j, entry in enumerate(row):
            field = f"{where}.data[{i}][{j}]"
            if not isinstance(entry, list) or len(entry) != 2:
                raise InputError(f"{field}: expected a [re, im] pair")
            for part, x in zip(("re", "im"), entry):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise InputError(f"{field}.{part}: expected a number, got {x!r}")
                if not math.isfinite(x):
                    raise InputError(f"{field}.{part}: non-finite value")
            out[i, j] = complex(entry[0], entry[1])
    return as_mat(out)


def matrix_to_json(m) -> dict:
    m = np.asarray(m)
    return {"n": int(m.shape[0]),
            "data": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def pair_to_json(a, b) -> dict:
    return {"a": matrix_to_json(a), "b": matrix_to_json(b)}


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def parse_pair(doc) -> tuple[np.ndarray, np.ndarray]:
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object")
    if "schema" in doc and "input" in doc:
        doc = doc["input"]
    if "a" not in doc or "b" not in doc:
        raise InputError("top level: missing 'a' or 'b'")
    a = _parse_matrix(doc["a"], "a")
    b = _parse_matrix(doc["b"], "b")
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: a is {a.shape[0]}x{a.shape[0]}, b is {b.shape[0]}x{b.shape[0]}")
    return a, b


def parse_input(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Load ``(a, b)`` from a pair file (or a previously written report)."""
    return parse_pair(_load_json(path))


# ---------------------------------------------------------------------------
# running


def build_pair(cfg: RunConfig) -> PairSpec:
    if cfg.input is not None:
        a, b = parse_input(cfg.input)
        return PairSpec(os.path.basename(cfg.input), a, b)
    if cfg.example == "free-algebra":
        return free_algebra_pair()
    if cfg.example == "l1":
        n = 4 if cfg.n is None else cfg.n
        if n < 2:
            raise InputError("--n must be at least 2 for the l1 example")
        return l1_discretization(n)
    n = 4 if cfg.n is None else cfg.n
    if n < 1:
        raise InputError("--n must be at least 1")
    return random_diagonalizable_pair(n, cfg.gap, cfg.seed)


def _agreement(values: dict) -> dict:
    out = {}
    keys = sorted(values)
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            for side, idx in (("ab", 0), ("ba", 1)):
                x, y = values[k1][idx], values[k2][idx]
                out[f"{k1}~{k2}:{side}"] = abs(x - y) / max(abs(x), abs(y), 1e-300) if x != y else 0.0
    return out


def _l1_adjudication(pair: PairSpec, report) -> dict:
    N = pair.meta["N"]
    fams = report.families
    out = {"claimed_rho": 0.5, "claimed_Q1_equals_P1": True, "N": N}
    if fams is not None:
        fa, fb = fams
        p1 = fa.projections[0]
        q1 = fb.projections[0]
        out["norm_Q1_minus_P1"] = norm(q1 - p1)
    out["computed_rho"] = report.rho
    out["analytic_varrho_TS"] = 1 - 1 / N
    out["analytic_varrho_ST"] = 1 - 1 / N**2
    return out


def execute(cfg: RunConfig) -> tuple[dict, int]:
    """Run ``cfg``; returns ``(report, exit_code)``. Input errors propagate."""
    cfg.validate()
    pair = build_pair(cfg)
    zero_radius = cfg.zero_radius
    if zero_radius is None:
        zero_radius = pair.zero_radius if (pair.zero_radius and cfg.method in ("charf", "all")) else 0.0
    if cfg.method == "charf" and zero_radius <= 0:
        raise InputError("--method charf needs a positive --zero-radius")
    opts = GeometricOptions(
        cluster_tol=cfg.cluster_tol if cfg.cluster_tol is not None else pair.cluster_tol,
        product_tol=cfg.product_tol,
        nodes_cap=cfg.nodes_cap,
    )
    doc = {
        "schema": SCHEMA,
        "version": __version__,
        "pair": pair.name,
        "note": pair.note,
        "config": {**{k: v for k, v in asdict(cfg).items() if k not in ("out",)},
                   "zero_radius": zero_radius, "cluster_tol": opts.cluster_tol},
        "input": pair_to_json(pair.a, pair.b),
    }
    code = EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = rho(pair.a, pair.b, cfg.method, n_max=cfg.n_max, norm_kind=cfg.norm_kind,
                      zero_radius=zero_radius, opts=opts)
            if cfg.qe:
                verdict, ev = quasinilpotent_equivalent(pair.a, pair.b, zero_radius=zero_radius,
                                                        opts=opts)
                rep.qe_verdict, rep.qe_evidence = verdict, ev
        doc["result"] = rep.to_dict()
        doc["agreement"] = _agreement(rep.values)
        if pair.name.startswith("l1-"):
            doc["adjudication"] = _l1_adjudication(pair, rep)
        seq_ab = commutator_sequence(pair.a, pair.b, cfg.n_max, cfg.norm_kind)
        seq_ba = commutator_sequence(pair.b, pair.a, cfg.n_max, cfg.norm_kind)
        doc["_plot"] = {"ab": seq_ab.log_norms, "ba": seq_ba.log_norms}
        if rep.fragile:
            code = EXIT_FRAGILE
    except SemispecError as e:
        doc["error"] = {"type": type(e).__name__, "message": str(e)}
        code = EXIT_COMPUTE
    doc["exit_code"] = code
    return doc, code


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    return x


def report_to_json(doc: dict) -> str:
    doc = {k: v for k, v in doc.items() if k != "_plot"}
    return json.dumps(_jsonable(doc), indent=2)


def report_to_csv(doc: dict) -> str:
    """Long-format plot data: ``series,index,x,y,label``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "index", "x", "y", "label"])
    for side, logs in doc.get("_plot", {}).items():
        for n, ln in enumerate(logs):
            if n == 0 or not math.isfinite(ln):
                continue
            w.writerow([f"root_{side}", n, n, repr(ln / n), "log||c_n||^(1/n)"])
    result = doc.get("result") or {}
    for name, fam in (result.get("spectra") or {}).items():
        for i, pt in enumerate(fam["spectrum"]["points"]):
            w.writerow([f"spectrum_{name}", i, repr(pt["re"]), repr(pt["im"]),
                        f"multiplicity={pt['multiplicity']}"])
    for side in ("ab", "ba"):
        bd = result.get(f"breakdown_{side}")
        if not bd:
            continue
        i = 0
        for kind in ("W", "W_lambda", "W_beta"):
            for t in bd[kind]:
                w.writerow([f"{kind}_{side}", i, repr(t["distance"]), repr(t["product_norm"]),
                            f"{t['kind']}:{complex(*t['left'])}->{complex(*t['right'])}"])
                i += 1
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semispec", description=__doc__.split("\n\n")[0])
    src = p.add_argument_group("input")
    src.add_argument("--input", metavar="PATH", help="pair file or earlier report (JSON)")
    src.add_argument("--example", choices=EXAMPLES)
    src.add_argument("--n", type=int, help="dimension (random) or number of blocks (l1)")
    src.add_argument("--seed", type=int, help="random example seed (SEMISPEC_SEED overrides)")
    src.add_argument("--gap", type=float, help="eigenvalue gap for the random example")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--norm", choices=NORM_KINDS, dest="norm_kind")
    p.add_argument("--nodes-cap", type=int, dest="nodes_cap")
    p.add_argument("--cluster-tol", type=float, dest="cluster_tol")
    p.add_argument("--product-tol", type=float, dest="product_tol")
    p.add_argument("--zero-radius", type=float, dest="zero_radius")
    p.add_argument("--qe", action="store_true", default=None, help="decide quasinilpotent equivalence")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def config_from_args(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    base = {}
    if args.get("input"):
        doc = _load_json(args["input"])
        if isinstance(doc, dict) and "schema" in doc and isinstance(doc.get("config"), dict):
            base = {k: v for k, v in doc["config"].items() if k not in ("input", "example")}
    fields = RunConfig.__dataclass_fields__
    merged = {k: v for k, v in base.items() if k in fields}
    merged.update({k: v for k, v in args.items() if v is not None})
    env_seed = os.environ.get("SEMISPEC_SEED")
    if env_seed is not None:
        try:
            merged["seed"] = int(env_seed)
        except ValueError:
            raise InputError(f"SEMISPEC_SEED must be an integer, got {env_seed!r}") from None
    return RunConfig(**merged)


def run(cfg: RunConfig) -> int:
    """Execute ``cfg``, write the report, return the exit code."""
    try:
        doc, code = execute(cfg)
    except InputError as e:
        doc, code = {"schema": SCHEMA, "error": {"type": "InputError", "message": str(e)},
                     "exit_code": EXIT_INPUT}, EXIT_INPUT
        print(f"semispec: input error: {e}", file=sys.stderr)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(report_to_json(doc))
        return code
    text = report_to_csv(doc) if cfg.format == "csv" else report_to_json(doc)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if code == EXIT_COMPUTE:
        print(f"semispec: computation error: {doc['error']['message']}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except InputError as e:
        print(f"semispec: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TypeError as e:
        print(f"semispec: input error: bad recorded config ({e})", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
