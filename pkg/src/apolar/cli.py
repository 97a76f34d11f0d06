"""Command line interface.

Exit codes: 0 success, 1 inadmissible or negative answer, 2 input error,
3 unsupported request.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .exactlin import ContractError
from .gradedness import certify_graded_s3, is_compressed_s3
from .hvectors import (
    InadmissibleError,
    UnsupportedError,
    construct,
    enumerate_admissible,
    macaulay_growth,
)
from .inverse_system import (
    InverseSystem,
    algebra_model,
    apolar_ideal_upto,
    build,
    is_level,
    module_equal,
    q0,
    q_decomposition,
    socle_dimension,
)
from .multipoly import PolySyntaxError, default_names, format_poly, frame_size, parse

SCHEMA_VERSION = 1
# apolar generators are skipped when the frame of degree <= s+1 is larger
DEFAULT_MAX_IDEAL_FRAME = 3000

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class InputError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


@dataclass
class InputFile:
    nvars: int
    names: list[str]
    polys: list


_HEADER = re.compile(r"^\s*vars\s*:\s*(\d+)\s*(?:as\s+(.*?))?\s*$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_CANONICAL = re.compile(r"^x[0-9]+$")


def parse_input(text: str) -> InputFile:
    """Parse the input format: a ``vars: m [as a,b,...]`` header, then one
    polynomial per line. Blank lines and lines starting with ``#`` are
    skipped."""
    nvars = None
    names = None
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if nvars is None:
            m = _HEADER.match(raw)
            if not m:
                raise InputError("expected a header 'vars: m' or 'vars: m as a,b,...'", lineno, 1)
            nvars = int(m.group(1))
            if nvars < 1:
                raise InputError("need at least one variable", lineno)
            if m.group(2):
                names = [a.strip() for a in m.group(2).split(",")]
                _check_aliases(names, nvars, lineno)
            continue
        try:
            p = parse(raw, nvars, names)
        except PolySyntaxError as e:
            raise InputError(e.msg, lineno, e.pos + 1) from None
        if p.is_zero():
            raise InputError("generator is zero", lineno)
        polys.append(p)
    if nvars is None:
        raise InputError("empty input")
    if not polys:
        raise InputError("no generators")
    return InputFile(nvars, names or default_names(nvars), polys)


def _check_aliases(names: list[str], nvars: int, lineno: int) -> None:
    if len(names) != nvars:
        raise InputError(f"{len(names)} names for {nvars} variables", lineno)
    if len(set(names)) != nvars:
        raise InputError("variable names must be distinct", lineno)
    for k, a in enumerate(names):
        if not _IDENT.match(a):
            raise InputError(f"bad variable name {a!r}", lineno)
        if _CANONICAL.match(a) and a != f"x{k + 1}":
            raise InputError(f"name {a!r} would shadow a standard variable", lineno)


def read_input(path: str | Path) -> InputFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_input(text)


# ---------------------------------------------------------------------------
# analysis report


def _graded_status(IS: InverseSystem, level: bool) -> tuple[str, dict | None, dict | None, str]:
    if not level:
        return "not_applicable", None, None, "the system is not level"
    if IS.socle_degree == 3:
        v = certify_graded_s3(IS)
        cert = None
        if v.certificate is not None and v.status == "graded":
            c = v.certificate
            cert = {"coeffs": [str(x) for x in c.coeffs.coeffs], "system_rank": c.system_rank,
                    "verified": c.verified, "method": c.method}
        return v.status, cert, v.witness, v.reason
    Q = q0(IS)
    if module_equal(IS, Q):
        return "graded", None, None, "the closure equals that of the leading forms"
    if Q.hvector != IS.hvector:
        return ("not_graded", None,
                {"hvector": list(IS.hvector), "q0_hvector": list(Q.hvector)},
                "the associated graded ring has a nonzero C(1) part")
    return "unknown", None, None, "no decision procedure for this socle degree"


def analyze(inp: InputFile, max_ideal_frame: int = DEFAULT_MAX_IDEAL_FRAME) -> dict:
    n, names = inp.nvars, inp.names
    IS = build(inp.polys, n)
    s = IS.socle_degree
    h = IS.hvector
    level, typ = is_level(IS)
    qd = q_decomposition(algebra_model(IS), s)
    report = {
        "schema": SCHEMA_VERSION,
        "num_vars": n,
        "variables": list(names),
        "generators": [format_poly(p, names) for p in inp.polys],
        "hvector": list(h),
        "embedding_dim": h[1] if s >= 1 else 0,
        "socle_degree": s,
        "closure_dim": IS.dim,
        "socle_dimension": socle_dimension(IS),
        "is_level": level,
        "type": typ,
        "is_compressed": is_compressed_s3(IS) if level and s == 3 else None,
        "q0_hvector": list(q0(IS).hvector) if level else None,
        "c_table": [list(r) for r in qd.c],
        "q_table": [list(r) for r in qd.q],
    }
    if frame_size(n, s + 1, "upto") <= max_ideal_frame:
        ideal = apolar_ideal_upto(IS)
        report["apolar_generators"] = [format_poly(g, names) for g in ideal.generators]
    else:
        report["apolar_generators"] = None
    status, cert, witness, reason = _graded_status(IS, level)
    report["graded_status"] = status
    report["graded_reason"] = reason
    report["certificate"] = cert
    report["witness"] = witness
    return report


def _tuple(xs) -> str:
    return "(" + ", ".join(str(x) for x in xs) + ")"


def _yes(b) -> str:
    return "n/a" if b is None else ("yes" if b else "no")


def format_report_text(r: dict) -> str:
    lines = [f"variables: {', '.join(r['variables'])}", "generators:"]
    lines += [f"  {g}" for g in r["generators"]]
    lines += [
        f"h-vector: {_tuple(r['hvector'])}",
        f"embedding dimension: {r['embedding_dim']} (of {r['num_vars']} variables)",
        f"socle degree: {r['socle_degree']}",
        f"length: {r['closure_dim']}",
        f"socle dimension: {r['socle_dimension']}",
        f"level: {_yes(r['is_level'])}" + (f", type {r['type']}" if r["is_level"] else ""),
        f"compressed: {_yes(r['is_compressed'])}",
        f"Q(0) h-vector: {_tuple(r['q0_hvector']) if r['q0_hvector'] else 'n/a'}",
        "C(a)_i dimensions:",
    ]
    lines += [f"  a={a}: {_tuple(row)}" for a, row in enumerate(r["c_table"])]
    lines.append("Q(a)_i dimensions:")
    lines += [f"  a={a}: {_tuple(row)}" for a, row in enumerate(r["q_table"])]
    if r["apolar_generators"] is None:
        lines.append("apolar ideal generators: skipped (frame too large)")
    else:
        lines.append("apolar ideal generators:")
        lines += [f"  {g}" for g in r["apolar_generators"]]
    lines.append(f"graded: {r['graded_status']} ({r['graded_reason']})")
    if r["certificate"]:
        c = r["certificate"]
        lines.append(f"certificate: method {c['method']}, system rank {c['system_rank']}, "
                     f"verified {_yes(c['verified'])}")
        lines.append(f"  automorphism coefficients: {' '.join(c['coeffs'])}")
    if r["witness"]:
        w = r["witness"]
        lines.append(f"witness: HF {_tuple(w['hvector'])} vs Q(0) {_tuple(w['q0_hvector'])}")
    return "\n".join(lines) + "\n"


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def _analyze_path(args: tuple[str, int]) -> tuple[dict | None, str | None]:
    path, limit = args
    try:
        return analyze(read_input(path), limit), None
    except (InputError, ContractError) as e:
        return None, str(e)


def cmd_analyze(ns, out) -> int:
    if ns.batch:
        files = sorted(p for p in Path(ns.batch).iterdir()
                       if p.is_file() and not p.name.startswith("."))
        jobs = [(str(p), ns.max_ideal_frame) for p in files]
        if ns.jobs == 1 or len(jobs) <= 1:
            results = list(map(_analyze_path, jobs))
        else:
            with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
                results = list(pool.map(_analyze_path, jobs))
        code = EXIT_OK
        if ns.format == "json":
            body = {}
            for p, (rep, err) in zip(files, results):
                body[p.name] = rep if err is None else {"error": err}
                code = code if err is None else EXIT_INPUT
            out.write(_dump_json({"schema": SCHEMA_VERSION, "results": body}))
        else:
            for p, (rep, err) in zip(files, results):
                out.write(f"== {p.name} ==\n")
                out.write(format_report_text(rep) if err is None else f"error: {err}\n")
                code = code if err is None else EXIT_INPUT
        return code
    if not ns.file:
        raise InputError("analyze needs FILE or --batch DIR")
    rep = analyze(read_input(ns.file), ns.max_ideal_frame)
    out.write(_dump_json(rep) if ns.format == "json" else format_report_text(rep))
    return EXIT_OK


def parse_hvector(text: str) -> tuple[int, ...]:
    body = text.strip().strip("()")
    try:
        H = tuple(int(x) for x in body.split(","))
    except ValueError:
        raise InputError(f"malformed h-vector {text!r}; expected e.g. 1,4,5,6") from None
    return H


def cmd_construct(ns, out) -> int:
    H = parse_hvector(ns.hvector)
    try:
        rep = construct(H)
    except InadmissibleError as e:
        out.write(f"inadmissible: {e.reason}\n")
        return EXIT_NO
    except UnsupportedError:
        out.write(f"unsupported socle degree {len(H) - 1}\n")
        return EXIT_UNSUPPORTED
    gens = [format_poly(g) for g in rep.generators]
    if ns.format == "json":
        out.write(_dump_json({
            "schema": SCHEMA_VERSION, "hvector": list(rep.target), "construction": rep.tag,
            "parameters": rep.parameters, "homogeneous": rep.homogeneous, "generators": gens,
            "verified_hvector": list(rep.verified_hvector), "level": rep.level}))
        return EXIT_OK
    # the text form is itself a valid input file
    lines = [f"# h-vector: {_tuple(rep.target)}", f"# construction: {rep.tag}"]
    if rep.parameters:
        lines.append("# parameters: " + ", ".join(f"{k}={v}" for k, v in rep.parameters.items()))
    lines.append(f"# homogeneous: {_yes(rep.homogeneous)}")
    lines.append(f"vars: {rep.target[1]}")
    lines += gens
    lines.append(f"# verified h-vector: {_tuple(rep.verified_hvector)}, level: {_yes(rep.level)}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_admissible(ns, out) -> int:
    try:
        rows = enumerate_admissible(ns.m, ns.socle, max_tau=ns.type)
    except UnsupportedError as e:
        out.write(f"unsupported: {e}\n")
        return EXIT_UNSUPPORTED
    except ValueError as e:
        raise InputError(str(e)) from None
    if ns.type is not None:
        rows = [r for r in rows if r.hvector[-1] == ns.type]
    rows.sort(key=lambda r: r.hvector)
    for r in rows:
        line = f"{','.join(map(str, r.hvector))}\t{r.tag}"
        if r.note:
            line += f"\t# {r.note}"
        out.write(line + "\n")
    return EXIT_OK


def cmd_growth(ns, out) -> int:
    if ns.n < 0 or ns.d < 1:
        raise InputError("growth needs N >= 0 and D >= 1")
    out.write(f"{macaulay_growth(ns.n, ns.d)}\n")
    return EXIT_OK


def cmd_module_equal(ns, out) -> int:
    a, b = read_input(ns.a), read_input(ns.b)
    if a.nvars != b.nvars:
        raise InputError(f"files declare {a.nvars} and {b.nvars} variables")
    same = module_equal(build(a.polys, a.nvars), build(b.polys, b.nvars))
    out.write("yes\n" if same else "no\n")
    return EXIT_OK if same else EXIT_NO


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apolar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"apolar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze an inverse system file")
    a.add_argument("file", nargs="?")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.add_argument("--batch", metavar="DIR", help="analyze every file in DIR")
    a.add_argument("--jobs", type=int, default=None, help="worker processes for --batch")
    a.add_argument("--max-ideal-frame", type=int, default=DEFAULT_MAX_IDEAL_FRAME,
                   help="skip apolar generators above this many monomials of degree <= s+1")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="inverse system realising an h-vector")
    c.add_argument("hvector", metavar="HVEC", help="e.g. 1,4,5,6")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("admissible", help="list admissible h-vectors")
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--socle", type=int, required=True)
    d.add_argument("--type", type=int, default=None)
    d.set_defaults(func=cmd_admissible)

    g = sub.add_parser("growth", help="Macaulay bound n^<d>")
    g.add_argument("n", type=int)
    g.add_argument("d", type=int)
    g.set_defaults(func=cmd_growth)

    e = sub.add_parser("module-equal", help="compare two inverse systems")
    e.add_argument("a")
    e.add_argument("b")
    e.set_defaults(func=cmd_module_equal)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ns = _parser().parse_args(argv)
    try:
        return ns.func(ns, out)
    except InputError as e:
        print(f"apolar: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
