"""Command-line front end.

    rieszkit roots        secular roots over a delta grid (CSV, JSON, SVG/PNG)
    rieszkit construct    coefficient vectors phi_n / psi_n / e_n
    rieszkit diagnose     Gram-section frame bounds
    rieszkit semiregular  classification and non-GRS witness table
    rieszkit verify       residual suite of the delta family

Exit codes: 0 all checks pass, 2 invalid parameters, 3 numerical failure,
4 some check failed. Outputs are staged in memory and written atomically at
the end, so a failed run leaves no files behind.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .blocks import BlockOperator, apply, exp_sigma1_block
from .diagnostics import DiagnosticsReport, frame_bounds, gram, krein_residual_suite
from .errors import RieszkitError, ValidationError
from .families import (
    KreinFamily,
    SemiRegularFamily,
    classify_type,
    krein_e,
    krein_phi,
    krein_psi,
    semiregular_classify,
    witness_family,
)
from .secular import SecularProblem, solve_roots
from .seq import basis

DEFAULT_DELTAS = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
WITNESS_N = (100, 1000, 10000)

DEFAULTS = {
    "delta": None,
    "alpha": None,
    "beta": None,
    "pairs": 2000,
    "terms": 10_000,
    "roots": 5,
    "tol": 1e-12,
    "out": ".",
    "format": "csv",
    "phi": "",
    "psi": "",
    "e": "",
    "count": 7,
    "size": 32,
    "family": None,
}

EXIT_CHECK_FAILED = 4


def fmt(x) -> str:
    """Shortest round-trip decimal for floats, plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps_json(obj) -> bytes:
    return (json.dumps(_jsonable(obj), indent=2) + "\n").encode("utf-8")


def dumps_csv(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue().encode("utf-8")


class Outputs:
    """Files staged in memory, committed by temp file + rename."""

    def __init__(self, out_dir):
        self.dir = Path(out_dir)
        self.files: dict[str, bytes] = {}

    def add(self, name: str, data: bytes) -> None:
        self.files[name] = data

    @property
    def names(self) -> list:
        return list(self.files)

    def commit(self) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        done = []
        try:
            for name, data in self.files.items():
                fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=f".{name}.", suffix=".tmp")
                try:
                    with os.fdopen(fd, "wb") as fh:
                        fh.write(data)
                    os.replace(tmp, self.dir / name)
                except BaseException:
                    if os.path.exists(tmp):
                        os.unlink(tmp)
                    raise
                done.append(self.dir / name)
        except BaseException:
            for p in done:
                p.unlink(missing_ok=True)
            raise


# ---------------------------------------------------------------- config

def _floats(value) -> list:
    if value is None:
        return []
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, str):
        value = [value]
    out = []
    for item in value:
        if isinstance(item, str):
            out.extend(float(x) for x in item.split(",") if x.strip())
        else:
            out.append(float(item))
    return out


def _ints(value) -> list:
    if value in (None, ""):
        return []
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        return [int(x) for x in value.split(",") if x.strip()]
    return [int(x) for x in value]


def resolve_config(args: argparse.Namespace) -> dict:
    """Flags override the optional JSON config file, which overrides defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    cfg["command"] = args.command
    try:
        cfg["delta"] = _floats(cfg["delta"])
        for key in ("phi", "psi", "e"):
            cfg[key] = _ints(cfg[key])
        for key in ("pairs", "terms", "roots", "count", "size"):
            cfg[key] = int(cfg[key])
        for key in ("alpha", "beta"):
            if cfg[key] is not None:
                cfg[key] = float(cfg[key])
        cfg["tol"] = float(cfg["tol"])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad parameter: {exc}") from exc
    formats = cfg["format"] if isinstance(cfg["format"], list) else str(cfg["format"]).split(",")
    cfg["format"] = [f.strip() for f in formats if f.strip()]
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    for d in cfg["delta"]:
        if not 0.0 < d <= 2.0:
            raise ValidationError(f"delta={d!r} outside 0 < delta <= 2")
    if not cfg["tol"] >= 1e-14:
        raise ValidationError("tol must be >= 1e-14")
    if cfg["pairs"] < 1:
        raise ValidationError("pairs must be >= 1")
    if cfg["terms"] < 2:
        raise ValidationError("terms must be >= 2")
    if cfg["roots"] < 1:
        raise ValidationError("roots must be >= 1")
    if cfg["count"] < 1 or cfg["size"] < 1:
        raise ValidationError("count and size must be >= 1")
    for f in cfg["format"]:
        if f not in ("csv", "json", "svg", "png"):
            raise ValidationError(f"unknown format {f!r}")
    for key in ("phi", "psi", "e"):
        if any(n < 0 for n in cfg[key]):
            raise ValidationError("vector indices must be >= 0")


def _single_delta(cfg: dict, required=True):
    if len(cfg["delta"]) > 1:
        raise ValidationError(f"{cfg['command']} takes a single --delta")
    if not cfg["delta"]:
        if required:
            raise ValidationError(f"{cfg['command']} needs --delta")
        return None
    return cfg["delta"][0]


def _params(cfg: dict, *keys) -> dict:
    return {k: cfg[k] for k in keys}


def print_checks(report: DiagnosticsReport, stream=None) -> None:
    stream = stream or sys.stdout
    if not report.checks:
        return
    width = max((len(c.name) for c in report.checks), default=5)
    print(f"{'check':<{width}}  {'value':>12}  {'tol':>10}  result", file=stream)
    for c in report.checks:
        print(f"{c.name:<{width}}  {c.value:12.4e}  {c.tol:10.3e}  {'PASS' if c.passed else 'FAIL'}",
              file=stream)


# ---------------------------------------------------------------- commands

def cmd_roots(cfg: dict) -> tuple:
    deltas = cfg["delta"] or DEFAULT_DELTAS
    rows = []
    report = DiagnosticsReport("delta", {"deltas": deltas, "roots": cfg["roots"]},
                               {"terms": cfg["terms"], "tol": cfg["tol"]})
    for d in deltas:
        rs = solve_roots(SecularProblem.delta_family(d, cfg["terms"]), cfg["roots"], cfg["tol"])
        for r in rs.roots:
            rows.append({"delta": d, "root_index": r.index, "mu": r.mu,
                         "bracket_lo": 1.0 / (r.index + 2), "bracket_hi": 1.0 / (r.index + 1),
                         "residual": r.residual, "tail_bound": r.tail_bound})
    if rows:
        report.add("max_residual", max(r["residual"] for r in rows), 1e-9)
        outside = sum(not (r["bracket_lo"] < r["mu"] < r["bracket_hi"]) for r in rows)
        report.add("roots_outside_bracket", outside, 0)
    out = Outputs(cfg["out"])
    header = ["delta", "root_index", "mu", "bracket_lo", "bracket_hi", "residual", "tail_bound"]
    if "csv" in cfg["format"] or not cfg["format"]:
        out.add("roots.csv", dumps_csv(header, [[r[h] for h in header] for r in rows]))
    for fig_fmt in ("svg", "png"):
        if fig_fmt in cfg["format"]:
            from .plotting import plot_roots

            buf = io.BytesIO()
            plot_roots(rows, buf, fig_fmt)
            out.add(f"roots.{fig_fmt}", buf.getvalue())
    if "json" in cfg["format"]:
        report.outputs = out.names + ["roots.json"]
        d = report.as_dict()
        d["roots"] = rows
        out.add("roots.json", dumps_json(d))
    report.outputs = out.names
    return report, out


def _semiregular(cfg):
    if cfg["alpha"] is None or cfg["beta"] is None:
        raise ValidationError("semi-regular family needs --alpha and --beta")
    return SemiRegularFamily(cfg["alpha"], cfg["beta"])


def cmd_construct(cfg: dict) -> tuple:
    delta = _single_delta(cfg, required=False)
    out = Outputs(cfg["out"])
    vectors = []
    if delta is not None:
        fam = KreinFamily.delta_family(delta, cfg["pairs"], cfg["terms"], cfg["tol"])
        wanted = [(kind, n) for kind in ("phi", "psi", "e") for n in cfg[kind]]
        n_roots = max((n // 2 + 1 for _, n in wanted if n % 2), default=0)
        roots = fam.roots(n_roots) if n_roots else None
        makers = {"phi": krein_phi, "psi": krein_psi, "e": krein_e}
        for kind, n in wanted:
            vectors.append((f"{kind}_{n}", makers[kind](fam, n, roots)))
        family, params = "delta", {"delta": delta}
        truncation = {"pairs": cfg["pairs"], "terms": cfg["terms"], "tol": cfg["tol"]}
    else:
        fam = _semiregular(cfg)
        if cfg["e"]:
            raise ValidationError("the semi-regular family has no e_n vectors")
        for kind in ("phi", "psi"):
            for n in cfg[kind]:
                vectors.append((f"{kind}_{n}", getattr(fam, kind)(n)))
        family, params = "semiregular", {"alpha": fam.alpha, "beta": fam.beta}
        truncation = {}
    rows = []
    for name, v in vectors:
        for i, c in v.nonzero():
            rows.append([name, i, c.real, c.imag])
    out.add("vectors.csv", dumps_csv(["vector", "index", "re", "im"], rows))
    report = DiagnosticsReport(family, params, truncation)
    sidecar = report.as_dict()
    sidecar["vectors"] = [{"name": name, "length": len(v), "tail_bound": v.tail_bound}
                          for name, v in vectors]
    sidecar["outputs"] = ["vectors.csv", "vectors.json"]
    out.add("vectors.json", dumps_json(sidecar))
    report.outputs = out.names
    return report, out


def _constant_alpha_vectors(a0: float, size: int) -> list:
    pairs = (size + 1) // 2
    op = BlockOperator(np.broadcast_to(exp_sigma1_block(a0), (pairs, 2, 2)), True)
    return [apply(op, basis(n, 2 * pairs)) for n in range(size)]


def cmd_diagnose(cfg: dict) -> tuple:
    delta = _single_delta(cfg, required=False)
    kind = cfg["family"] or ("delta" if delta is not None else
                             "semiregular" if cfg["alpha"] is not None or cfg["beta"] is not None
                             else "basis")
    M = cfg["size"]
    report = None
    if kind == "basis":
        vecs = [basis(n, M) for n in range(M)]
        report = DiagnosticsReport("basis", {}, {"size": M})
    elif kind == "constant":
        if cfg["alpha"] is None:
            raise ValidationError("constant family takes a_0 via --alpha")
        a0 = cfg["alpha"]
        vecs = _constant_alpha_vectors(a0, M)
        report = DiagnosticsReport("constant", {"a0": a0}, {"size": M})
    elif kind == "semiregular":
        fam = _semiregular(cfg)
        vecs = [fam.phi(n, M + 1) for n in range(1, M + 1)]
        v = semiregular_classify(fam)
        report = DiagnosticsReport("semiregular", {"alpha": fam.alpha, "beta": fam.beta}, {"size": M},
                                   classification={"complete": v.complete, "grs": v.grs.value})
    elif kind == "delta":
        if delta is None:
            raise ValidationError("delta family needs --delta")
        fam = KreinFamily.delta_family(delta, cfg["pairs"], cfg["terms"], cfg["tol"])
        roots = fam.roots(max(M // 2, 1))
        vecs = [krein_phi(fam, n, roots) for n in range(M)]
        c = classify_type(fam)
        report = DiagnosticsReport("delta", {"delta": delta},
                                   {"size": M, "pairs": cfg["pairs"], "terms": cfg["terms"]},
                                   classification={"type": c.verdict.value})
    else:
        raise ValidationError(f"unknown family {kind!r}")
    G = gram(vecs)
    fb = frame_bounds(G)
    report.bounds = {"lambda_min": fb.lambda_min, "lambda_max": fb.lambda_max, "size": fb.size}
    report.add("gram_hermitian", float(np.max(np.abs(G.entries - G.entries.conj().T))), 1e-12)
    report.add("gram_psd", max(0.0, -fb.lambda_min), 1e-10)
    if kind == "basis":
        report.add("bounds_identity", max(abs(fb.lambda_min - 1), abs(fb.lambda_max - 1)), 1e-14)
    if kind == "constant":
        a0 = cfg["alpha"]
        excess = max(0.0, math.exp(-2 * a0) - fb.lambda_min, fb.lambda_max - math.exp(2 * a0))
        report.add("bounds_within_exp_2a0", excess, 1e-10)
    if kind == "delta":
        report.add("diagonal_at_least_one", max(0.0, 1.0 - float(np.min(G.entries.diagonal().real))), 1e-10)
    out = Outputs(cfg["out"])
    report.outputs = ["diagnose.json"]
    out.add("diagnose.json", dumps_json(report.as_dict()))
    return report, out


def cmd_semiregular(cfg: dict) -> tuple:
    fam = _semiregular(cfg)
    v = semiregular_classify(fam)
    report = DiagnosticsReport("semiregular", {"alpha": fam.alpha, "beta": fam.beta},
                               {"N": list(WITNESS_N)},
                               classification={"complete": v.complete, "grs": v.grs.value})
    out = Outputs(cfg["out"])
    if v.complete:
        rows = []
        for N in WITNESS_N:
            w = witness_family(fam, N)
            rows.append([N, w.D, w.s_form, w.dist_to_e0 ** 2, w.dist_to_e0 ** 2 * w.D, w.ratio])
            report.add(f"dist_sq_times_D[N={N}]", abs(w.dist_to_e0 ** 2 * w.D - 1.0), 1e-12)
            if fam.beta <= 0:
                report.add(f"s_form_le_inv_D[N={N}]", max(0.0, w.s_form - 1.0 / w.D), 1e-12)
        out.add("witness.csv", dumps_csv(
            ["N", "D_N", "s_form", "dist_to_e0_sq", "dist_sq_times_D", "s_form_times_D"], rows))
    report.outputs = out.names + ["semiregular.json"]
    out.add("semiregular.json", dumps_json(report.as_dict()))
    return report, out


def cmd_verify(cfg: dict) -> tuple:
    delta = _single_delta(cfg)
    fam = KreinFamily.delta_family(delta, cfg["pairs"], cfg["terms"], cfg["tol"])
    report = krein_residual_suite(fam, cfg["count"])
    report.classification = {"type": classify_type(fam).verdict.value}
    out = Outputs(cfg["out"])
    report.outputs = ["verify.json"]
    out.add("verify.json", dumps_json(report.as_dict()))
    return report, out


COMMANDS = {
    "roots": cmd_roots,
    "construct": cmd_construct,
    "diagnose": cmd_diagnose,
    "semiregular": cmd_semiregular,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", action="append", help="delta value(s); repeat or comma-separate")
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--pairs", type=int, help="pairs (e_2k, e_2k+1) kept; default 2000")
    common.add_argument("--terms", type=int, help="explicit secular terms; default 10000")
    common.add_argument("--roots", type=int, help="roots per delta; default 5")
    common.add_argument("--tol", type=float, help="root bracket width; default 1e-12")
    common.add_argument("--out", help="output directory; default .")
    common.add_argument("--format", help="comma list of csv, json, svg, png")
    common.add_argument("--config", help="JSON file of defaults (flags override it)")
    common.add_argument("--phi", help="phi_n indices, comma-separated")
    common.add_argument("--psi", help="psi_n indices, comma-separated")
    common.add_argument("--e", help="e_n indices, comma-separated")
    common.add_argument("--count", type=int, help="verify phi_0..phi_{count-1}; default 7")
    common.add_argument("--size", type=int, help="Gram section size; default 32")
    common.add_argument("--family", choices=["basis", "constant", "semiregular", "delta"])

    p = argparse.ArgumentParser(prog="rieszkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        report, out = COMMANDS[args.command](cfg)
        out.commit()
    except RieszkitError as exc:
        print(f"rieszkit {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    print_checks(report)
    if report.bounds:
        print("bounds: " + ", ".join(f"{k}={fmt(v)}" for k, v in report.bounds.items()))
    if report.classification:
        print("classification: " + ", ".join(f"{k}={v}" for k, v in report.classification.items()))
    for name in out.names:
        print(f"wrote {out.dir / name}")
    return 0 if report.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
