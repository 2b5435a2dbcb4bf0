"""Command-line front end.

Subcommands: ``analyze``, ``family``, ``enumerate``, ``count``, ``severi``
and ``trace``.  Complex numbers are written as two-element arrays of
strings: exact values as ``"p/q"``, floating values as the shortest decimal
string that round-trips.  Exit status is 0 on success, 1 on bad input and 2
when a numerical procedure gives up; failures print
``{"error", "operation", "message"}`` as JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from sympy.polys.domains import QQ_I

from . import curves, families, kodaira, modulipath
from .errors import K3LabError, K3LabInputError, NumericFailure
from .forms import INF, BinaryForm, ProjPoint, exact_to_fractions, is_exact_scalar, to_complex
from .weierstrass import WeierstrassData, smoothness_probe

COMMANDS = ("analyze", "family", "enumerate", "count", "severi", "trace")
FORMATS = ("json", "jsonl", "csv", "svg")
TRACE_MODES = ("connect", "transfer", "permute", "cusp", "beta")


# --------------------------------------------------------------------------
# serialization


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def encode_scalar(x) -> list[str]:
    if is_exact_scalar(x):
        re, im = exact_to_fractions(x)
        return [_fmt_fraction(re), _fmt_fraction(im)]
    z = to_complex(x)
    return [repr(float(z.real)), repr(float(z.imag))]


def _parse_part(s, exact: bool):
    if exact:
        return Fraction(str(s))
    return float(s)


def decode_scalar(v, exact: bool):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise K3LabInputError(f"complex value must be [re, im], got {v!r}", operation="cli.parse")
        re, im = (_parse_part(s, exact) for s in v)
    else:
        re, im = _parse_part(v, exact), 0
    if exact:
        return QQ_I(re) + QQ_I(0, 1) * QQ_I(im) if im else QQ_I(re)
    return complex(re, im)


def encode_form(f: BinaryForm) -> dict:
    return {"degree": f.degree, "exact": f.exact, "coeffs": [encode_scalar(c) for c in f.coeffs]}


def decode_form(obj: dict, degree: int) -> BinaryForm:
    try:
        coeffs = obj["coeffs"]
        deg = int(obj.get("degree", degree))
    except (TypeError, KeyError) as exc:
        raise K3LabInputError(f"form needs 'degree' and 'coeffs': {exc}", operation="cli.parse") from exc
    if deg != degree or len(coeffs) != degree + 1:
        raise K3LabInputError(f"expected degree {degree} with {degree + 1} coefficients",
                              operation="cli.parse")
    exact = obj.get("exact")
    if exact is None:
        exact = all(_looks_exact(c) for c in coeffs)
    try:
        return BinaryForm(tuple(decode_scalar(c, bool(exact)) for c in coeffs), exact=bool(exact))
    except (ValueError, ZeroDivisionError) as exc:
        raise K3LabInputError(f"bad coefficient: {exc}", operation="cli.parse") from exc


def _looks_exact(c) -> bool:
    parts = c if isinstance(c, (list, tuple)) else [c]
    for p in parts:
        if isinstance(p, float) or (isinstance(p, str) and any(ch in p for ch in ".eEn")):
            return False
    return True


def encode_weierstrass(W: WeierstrassData) -> dict:
    return {"A": encode_form(W.A), "B": encode_form(W.B)}


def decode_weierstrass(obj: dict) -> WeierstrassData:
    if not isinstance(obj, dict) or "A" not in obj or "B" not in obj:
        raise K3LabInputError("Weierstrass JSON needs keys 'A' and 'B'", operation="cli.parse")
    return WeierstrassData(decode_form(obj["A"], 8), decode_form(obj["B"], 12))


def _encode_order(x):
    return "inf" if x == INF else int(x)


def _encode_point(p: ProjPoint):
    return "inf" if p.is_infinity else encode_scalar(p.value)


def encode_fibre_report(W: WeierstrassData, report: kodaira.FibreReport, tol: float) -> dict:
    fibres = []
    for f in report.fibres:
        a, b, d = f.orders
        fibres.append({
            "position": _encode_point(f.position),
            "orders": {"a": _encode_order(a), "b": _encode_order(b), "d": _encode_order(d)},
            "type": str(f.type),
            "euler": f.euler,
            "rdp": f.rdp,
            "smooth_probe": smoothness_probe(W, f.position, tol),
        })
    return {
        "fibres": fibres,
        "total_euler": report.total_euler,
        "surface_smooth": report.surface_smooth,
        "minimal": report.minimal,
    }


def encode_sample(s: modulipath.ModuliPathSample) -> dict:
    return {
        "t": repr(float(s.t)),
        "K": encode_scalar(to_complex(s.params.K)),
        "a": [encode_scalar(to_complex(x)) for x in s.params.a],
        "fibres": [{"pos": encode_scalar(f.pos), "mult": f.mult} for f in s.fibres],
        "m": list(s.m),
        "provenance": s.provenance,
    }


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class JobConfig:
    command: str
    input: str | None = None
    output: str | None = None
    format: str | None = None
    tol: float = 1e-8
    sep: float = modulipath.EPS_SEP
    cont: float | None = None
    steps: int = modulipath.DEFAULT_STEPS
    family: str = "cuspidal"
    K: str | None = None
    g: int | None = None
    k: int = 1
    h: int | None = None
    s: int = 24
    l: int | None = None
    gmax: int = 10
    quartic: bool = False
    m: str | None = None
    sigma: str | None = None
    mode: str = "connect"
    svg: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise K3LabInputError(f"unknown command {self.command!r}", operation="cli.JobConfig")
        if self.format is not None and self.format not in FORMATS:
            raise K3LabInputError(f"unknown format {self.format!r}", operation="cli.JobConfig")
        for name in ("tol", "sep"):
            if not getattr(self, name) > 0:
                raise K3LabInputError(f"{name} must be positive", operation="cli.JobConfig")
        if self.cont is not None and not self.cont > 0:
            raise K3LabInputError("cont must be positive", operation="cli.JobConfig")
        if self.steps < 2:
            raise K3LabInputError("steps must be at least 2", operation="cli.JobConfig")
        if self.mode not in TRACE_MODES:
            raise K3LabInputError(f"unknown trace mode {self.mode!r}", operation="cli.JobConfig")


def _parse_K(text: str | None, default: str = "1/4"):
    text = default if text is None else text
    try:
        if "j" in text:
            return complex(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise K3LabInputError(f"cannot parse K = {text!r}", operation="cli.parse") from exc


def _parse_m(text: str | None, n: int = 12) -> tuple[int, ...]:
    if not text:
        raise K3LabInputError("--m is required (comma-separated multiplicities)", operation="cli.parse")
    try:
        m = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise K3LabInputError(f"cannot parse --m {text!r}", operation="cli.parse") from exc
    if len(m) > n:
        raise K3LabInputError(f"at most {n} multiplicities", operation="cli.parse")
    return tuple(m + [0] * (n - len(m)))


def _read_json(path: str | None) -> Any:
    try:
        text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise K3LabInputError(f"cannot read JSON input: {exc}", operation="cli.parse") from exc


def _points_from_input(cfg: JobConfig):
    if cfg.input:
        obj = _read_json(cfg.input)
        pts = obj.get("a") if isinstance(obj, dict) else obj
        exact = all(_looks_exact(p) for p in pts)
        return tuple(decode_scalar(p, exact) for p in pts)
    return families.roots_of_unity()


# --------------------------------------------------------------------------
# commands


def _build_family(cfg: JobConfig, a=None) -> WeierstrassData:
    a = _points_from_input(cfg) if a is None else a
    if cfg.family == "cuspidal":
        return families.cuspidal_family(a)
    if cfg.family == "nodal":
        K = _parse_K(cfg.K)
        return families.nodal_family(a, K)
    raise K3LabInputError(f"unknown family {cfg.family!r}", operation="cli.family")


def _cmd_analyze(cfg: JobConfig):
    if cfg.input:
        W = decode_weierstrass(_read_json(cfg.input))
    else:
        W = _build_family(cfg, families.roots_of_unity())
    return "json", encode_fibre_report(W, kodaira.fibre_report(W), cfg.tol)


def _cmd_family(cfg: JobConfig):
    return "json", encode_weierstrass(_build_family(cfg))


def _cmd_enumerate(cfg: JobConfig):
    if cfg.g is None:
        raise K3LabInputError("--g is required", operation="curves.enumerate_rational_members")
    members = curves.enumerate_rational_members(cfg.g, cfg.s)

    def rows():
        for c in members:
            yield {"g": c.g, "m": list(c.m)}
        yield {"count": members.count}

    return "jsonl", rows()


def _cmd_count(cfg: JobConfig):
    return "csv", (["g", "n_g"], [[g, n] for g, n in enumerate(curves.yau_zaslow(cfg.gmax))])


def _cmd_severi(cfg: JobConfig):
    if cfg.quartic:
        if cfg.l is None:
            raise K3LabInputError("--l is required with --quartic", operation="curves.quartic_severi_numbers")
        q = curves.quartic_severi_numbers(cfg.l)
        return "json", {"l": cfg.l, "dim_W_S": q.dim_W_S, "kernel_dim": q.kernel_dim, "fibre_dim": q.fibre_dim}
    if cfg.g is None:
        raise K3LabInputError("--g is required", operation="curves.severi_numbers")
    out: dict[str, Any] = {"g": cfg.g, "k": cfg.k}
    query = curves.SeveriQuery(cfg.g, cfg.k, cfg.h if cfg.h is not None else 0)
    out["arithmetic_genus"] = query.arithmetic_genus
    out["self_intersection"] = query.self_intersection
    if cfg.h is not None:
        sv = curves.severi_numbers(query)
        out.update(h=cfg.h, dimension=sv.dimension, node_count=sv.node_count)
    if cfg.g > 2:
        b = curves.very_ample_and_bound(cfg.g, cfg.k)
        out.update(
            k_very_ample_level=b.k_very_ample_level,
            multiple_very_ample_level=b.multiple_very_ample_level,
            h_min_irreducible=b.h_min_irreducible,
        )
    return "json", out


def _trace_report(cfg: JobConfig) -> modulipath.PathReport:
    K = float(_parse_K(cfg.K))
    if cfg.mode == "connect":
        return modulipath.connect_to_canonical(_parse_m(cfg.m), K, cfg.steps)
    if cfg.mode == "transfer":
        return modulipath.node_transfer_path(_parse_m(cfg.m), K, cfg.steps)
    if cfg.mode == "cusp":
        return modulipath.cusp_limit_path(modulipath.ALPHA, _parse_m(cfg.m), K, cfg.steps)
    if cfg.mode == "permute":
        return modulipath.permutation_path(modulipath.ALPHA, cfg.sigma or "()", _parse_m(cfg.m), K, cfg.steps)
    raise K3LabInputError(f"mode {cfg.mode!r} has no path report", operation="cli.trace")


def _cmd_trace(cfg: JobConfig):
    if cfg.mode == "beta":
        K = float(_parse_K(cfg.K))
        Ks = [K * (1 - i / cfg.steps) for i in range(cfg.steps + 1)]
        betas = modulipath.track_beta(Ks, 1.0)
        return "jsonl", ({"K": encode_scalar(k), "beta": encode_scalar(b)} for k, b in zip(Ks, betas))
    report = _trace_report(cfg)
    if cfg.sep != report.eps_sep or cfg.cont is not None:
        report = replace(report, eps_sep=cfg.sep, eps_cont=cfg.cont or report.eps_cont)
        report = modulipath.verify_path(report, report.g)
    summary = {
        "samples": len(report.samples),
        "continuous": report.continuous,
        "endpoint_match": report.endpoint_match,
        "endpoint_residuals": {k: repr(float(v)) for k, v in report.endpoint_residuals.items()},
        "invariant_violations": list(report.invariant_violations),
        "continuity_violations": list(report.continuity_violations[:20]),
        "final_m": list(report.last.m),
    }
    if cfg.svg:
        Path(cfg.svg).write_text(trace_svg(report))
    if cfg.format == "svg":
        return "svg", trace_svg(report)
    return "jsonl", _TraceRows(report, summary)


class _TraceRows:
    def __init__(self, report, summary):
        self.report, self.summary = report, summary

    def __iter__(self):
        return (encode_sample(s) for s in self.report.samples)


def trace_svg(report: modulipath.PathReport) -> str:
    """Scatter of every fibre position along the path, one colour per leg."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    legs: dict[str, list] = {}
    for s in report.samples:
        legs.setdefault(s.provenance, []).extend(f.pos for f in s.fibres)
    for name, pts in legs.items():
        ax.scatter([z.real for z in pts], [z.imag for z in pts], s=1, label=name)
    last = report.last
    carried = [f.pos for f, m in zip(last.fibres, last.m) if m]
    ax.scatter([z.real for z in carried], [z.imag for z in carried], s=40, marker="x", c="k")
    ax.set_aspect("equal")
    ax.legend(fontsize=6, markerscale=6, loc="upper right")
    buf = io.StringIO()
    fig.savefig(buf, format="svg")
    plt.close(fig)
    return buf.getvalue()


_HANDLERS = {
    "analyze": _cmd_analyze,
    "family": _cmd_family,
    "enumerate": _cmd_enumerate,
    "count": _cmd_count,
    "severi": _cmd_severi,
    "trace": _cmd_trace,
}


# --------------------------------------------------------------------------
# output


def _emit(kind: str, payload, cfg: JobConfig, out) -> None:
    fmt = cfg.format or kind
    if kind == "csv":
        header, rows = payload
        if fmt == "json":
            json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
            out.write("\n")
            return
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    if kind == "svg":
        out.write(payload)
        return
    if kind == "jsonl":
        if fmt == "json":
            json.dump(list(payload), out, indent=2)
            out.write("\n")
        else:
            for row in payload:
                out.write(json.dumps(row) + "\n")
        return
    if fmt == "csv" and isinstance(payload, dict):
        w = csv.writer(out, lineterminator="\n")
        flat = {k: v for k, v in payload.items() if not isinstance(v, (list, dict))}
        w.writerow(flat.keys())
        w.writerow(flat.values())
        return
    json.dump(payload, out, indent=2)
    out.write("\n")


def _error(exc: BaseException, operation: str, stream) -> None:
    stream.write(json.dumps({"error": type(exc).__name__, "operation": operation, "message": str(exc)}) + "\n")


def run(cfg: JobConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        kind, payload = _HANDLERS[cfg.command](cfg)
        if cfg.output:
            with open(cfg.output, "w", newline="") as fh:
                _emit(kind, payload, cfg, fh)
            summary = getattr(payload, "summary", None)
            if summary is not None:
                stdout.write(json.dumps(summary) + "\n")
        else:
            _emit(kind, payload, cfg, stdout)
    except NumericFailure as exc:
        _error(exc, exc.operation, stderr)
        return 2
    except K3LabError as exc:
        _error(exc, exc.operation, stderr)
        return 1
    except (ValueError, OSError) as exc:
        _error(exc, f"cli.{cfg.command}", stderr)
        return 1
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise K3LabInputError(message, operation="cli.parse")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3lab", description="Elliptic K3 surfaces in Weierstrass form.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="JSON input (Weierstrass data, or {'a': [...]} for families)")
    p.add_argument("--output", help="write the result here instead of stdout")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--sep", type=float, default=modulipath.EPS_SEP)
    p.add_argument("--cont", type=float)
    p.add_argument("--steps", type=int, default=modulipath.DEFAULT_STEPS)
    p.add_argument("--family", choices=("cuspidal", "nodal"), default="cuspidal")
    p.add_argument("--K", help="family parameter, e.g. 1/4")
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int, default=24, help="number of singular fibres for enumerate")
    p.add_argument("--l", type=int)
    p.add_argument("--gmax", type=int, default=10)
    p.add_argument("--quartic", action="store_true")
    p.add_argument("--m", help="comma-separated multiplicities on alpha_1, alpha_2, ...")
    p.add_argument("--sigma", help="permutation in cycle notation, e.g. '(1 2)(3 4 5)'")
    p.add_argument("--mode", choices=TRACE_MODES, default="connect")
    p.add_argument("--svg", help="also write an SVG plot of the trace here")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = JobConfig(**vars(ns))
    except K3LabError as exc:
        _error(exc, exc.operation, sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
