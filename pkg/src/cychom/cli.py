"""Command line driver: ``cychom {hh,hc,hn,verify,lambda,selftest}``."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import lambda_cat as lc
from .hochschild import AlgebraPresentation, DEFAULT_SIZE_CAP, AlgebraError, cyclic_nerve, validate_algebra
from .rings import RingSpec

DATA_DIR = Path(__file__).parent / "data"


class AlgebraFileError(ValueError):
    def __init__(self, path, line, msg):
        self.path, self.line, self.msg = path, line, msg
        where = f"{path}:{line}" if line else str(path)
        super().__init__(f"{where}: {msg}")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebra files


def resolve_algebra_path(name) -> Path:
    """A path on disk, else a bundled file (``ground`` or ``ground.alg``)."""
    p = Path(name)
    if p.exists():
        return p
    for cand in (DATA_DIR / p.name, DATA_DIR / (p.name + ".alg")):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no algebra file {name!r} (bundled: {', '.join(bundled_names())})")


def bundled_names():
    return sorted(f.stem for f in DATA_DIR.glob("*.alg"))


def _parse_combination(text, labels, ring, path, lineno):
    text = text.strip()
    if text == "0":
        return {}
    pos = {lab: i for i, lab in enumerate(labels)}
    out: dict = {}
    # split on +/- that start a term (labels themselves never contain + or -)
    terms = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    if "".join(terms) != text.replace(" ", ""):
        raise AlgebraFileError(path, lineno, f"cannot parse linear combination {text!r}")
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        if "*" in term:
            coef, lab = term.split("*", 1)
            try:
                c = Fraction(coef)
            except (ValueError, ZeroDivisionError):
                raise AlgebraFileError(path, lineno, f"bad coefficient {coef!r}") from None
        else:
            c, lab = Fraction(1), term
        if lab not in pos:
            if lab == "0":
                continue
            raise AlgebraFileError(path, lineno, f"unknown basis element {lab!r}")
        try:
            val = ring(sign * c)
        except ValueError as e:
            raise AlgebraFileError(path, lineno, str(e)) from None
        k = pos[lab]
        out[k] = ring.norm(out.get(k, 0) + val)
    return {k: v for k, v in out.items() if v}


def parse_algebra_text(text: str, path="<string>", ring: RingSpec | None = None) -> AlgebraPresentation:
    """Parse the ``ring/dim/basis/unit/mul`` format; ``ring`` overrides the file's ring."""
    fields, muls = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise AlgebraFileError(path, lineno, f"expected 'field: value', got {line!r}")
        key, val = (s.strip() for s in line.split(":", 1))
        if key == "mul":
            muls.append((lineno, val))
        elif key in ("ring", "dim", "basis", "unit", "name"):
            if key in fields:
                raise AlgebraFileError(path, lineno, f"duplicate field {key!r}")
            fields[key] = (lineno, val)
        else:
            raise AlgebraFileError(path, lineno, f"unknown field {key!r}")
    for key in ("dim", "basis", "unit"):
        if key not in fields:
            raise AlgebraFileError(path, 0, f"missing field {key!r}")
    if ring is None:
        if "ring" not in fields:
            raise AlgebraFileError(path, 0, "missing field 'ring' (or pass --ring)")
        ln, val = fields["ring"]
        try:
            ring = RingSpec.parse(val)
        except ValueError as e:
            raise AlgebraFileError(path, ln, str(e)) from None
    ln, val = fields["dim"]
    try:
        dim = int(val)
    except ValueError:
        raise AlgebraFileError(path, ln, f"dim must be an integer, got {val!r}") from None
    if dim < 1:
        raise AlgebraFileError(path, ln, "dim must be positive")
    ln, val = fields["basis"]
    labels = val.split()
    if len(labels) != dim:
        raise AlgebraFileError(path, ln, f"basis lists {len(labels)} names, dim is {dim}")
    if len(set(labels)) != dim:
        raise AlgebraFileError(path, ln, "basis names must be distinct")
    for lab in labels:
        if re.search(r"[+\-*>]", lab):
            raise AlgebraFileError(path, ln, f"basis name {lab!r} may not contain + - * >")
    ln, val = fields["unit"]
    parts = val.split()
    if len(parts) != dim:
        raise AlgebraFileError(path, ln, f"unit has {len(parts)} coordinates, dim is {dim}")
    try:
        unit = [ring(Fraction(x)) for x in parts]
    except (ValueError, ZeroDivisionError) as e:
        raise AlgebraFileError(path, ln, f"bad unit coordinate: {e}") from None
    pos = {lab: i for i, lab in enumerate(labels)}
    mul = [[{} for _ in range(dim)] for _ in range(dim)]
    seen = {}
    for lineno, val in muls:
        if "->" not in val:
            raise AlgebraFileError(path, lineno, "mul needs 'a b -> combination'")
        lhs, rhs = val.split("->", 1)
        names = lhs.split()
        if len(names) != 2:
            raise AlgebraFileError(path, lineno, f"mul needs two factors, got {lhs.strip()!r}")
        for nm in names:
            if nm not in pos:
                raise AlgebraFileError(path, lineno, f"unknown basis element {nm!r}")
        i, j = pos[names[0]], pos[names[1]]
        if (i, j) in seen:
            raise AlgebraFileError(path, lineno, f"product {names[0]} {names[1]} already given on line {seen[(i, j)]}")
        seen[(i, j)] = lineno
        mul[i][j] = _parse_combination(rhs, labels, ring, path, lineno)
    name = fields["name"][1] if "name" in fields else Path(str(path)).stem
    A = AlgebraPresentation(ring, dim, labels, unit, mul, name)
    bad = validate_algebra(A)
    if bad:
        v = bad[0]
        if v[0] == "assoc":
            x, y, z = (labels[k] for k in v[1:])
            msg = f"not associative: ({x} {y}) {z} != {x} ({y} {z}) for the triple ({x}, {y}, {z})"
        else:
            msg = f"unit law fails ({v[0].replace('_', ' ')}) at {labels[v[1]]}"
        raise AlgebraFileError(path, 0, msg)
    return A


def parse_algebra_file(path, ring: RingSpec | None = None) -> AlgebraPresentation:
    p = resolve_algebra_path(path)
    return parse_algebra_text(p.read_text(), str(p), ring)


# ---------------------------------------------------------------------------
# jobs


@dataclass
class JobSpec:
    command: str
    ring: RingSpec | None = None
    algebra: str | None = None
    degrees: tuple | None = None
    truncation: int | None = None
    depth_cap: int | None = None
    output_format: str = "json"
    threads: int = 1
    normalized: bool = False

    def __post_init__(self):
        if self.command in ("hh", "hc") and self.degrees and self.truncation is not None:
            if self.degrees[1] + 1 >= self.truncation:
                raise UsageError(f"degree {self.degrees[1]} needs --trunc > {self.degrees[1] + 1}")
        if self.output_format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.output_format!r}")


def parse_range(text: str) -> tuple:
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.|:)\s*(-?\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
    elif re.fullmatch(r"\s*-?\d+\s*", text):
        lo = hi = int(text)
    else:
        raise UsageError(f"bad degree range {text!r} (use lo..hi)")
    if lo > hi:
        raise UsageError(f"empty degree range {text!r}")
    return lo, hi


def thread_count() -> int:
    raw = os.environ.get("CYCHOM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CYCHOM_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def run_homology(job: JobSpec, pool=None) -> tuple:
    from .cyclic_homology import hc, hh, hn, hn_required_truncation

    A = parse_algebra_file(job.algebra, job.ring)
    lo, hi = job.degrees
    width = hi - lo
    if job.command == "hn":
        N = job.truncation or hn_required_truncation(hi, width + 4)
    else:
        N = job.truncation or hi + 2
    M = cyclic_nerve(A, N, size_cap=DEFAULT_SIZE_CAP)
    degs = range(lo, hi + 1)
    if job.command == "hh":
        table = hh(M, degs, job.normalized, pool=pool)
    elif job.command == "hc":
        table = hc(M, degs, job.normalized, pool=pool)
    else:
        table = hn(M, degs, job.normalized, cap=job.depth_cap, pool=pool)
    doc = table.to_json()
    doc["algebra"] = A.name
    if job.output_format == "csv":
        return 0, table.to_csv()
    if job.output_format == "text":
        lines = [f"{table.kind}_{n}({A.name}; {A.ring}) = {g}" +
                 ("" if table.stabilized is None else ("" if s else "  [unstable]"))
                 for n, g, s in zip(table.degrees, table.groups,
                                    table.stabilized or [True] * len(table.groups))]
        return 0, "\n".join(lines) + "\n"
    return 0, _dump(doc) + "\n"


def run_verify(job: JobSpec, m: int, pool=None) -> tuple:
    from . import resolution as rs
    from .cyclic_module import check_functoriality, check_identities
    from .mixed import kassel_iso_check

    ring = job.ring or RingSpec.parse("Z")
    N = job.truncation or 6
    tasks = [
        lambda: rs.check_bicomplexes(m, N, ring),
        lambda: rs.check_phi_psi(m, N, ring),
        lambda: rs.check_resolution(m, N, ring),
    ]
    tasks += [(lambda n=n: rs.check_row_exactness(n, m, ring)) for n in range(min(N, 6) + 1)]
    if N >= 4:
        tasks.append(lambda: rs.check_delta_generator(N, ring))
    if m >= 1:
        tasks.append(lambda: rs.check_naturality(m, m - 1, min(N, 5), ring))
    tasks.append(lambda: rs.check_naturality(m, m + 1, min(N, 5), ring))

    def identities():
        from .reports import VerificationReport

        R = lc.representable_module(ring, m, N)
        rep = VerificationReport("operator_identities", {"m": m, "N": N, "ring": ring.name})
        for v in check_identities(R):
            rep.fail(*v)
        for f, g in check_functoriality(R, min(N, 4)):
            rep.fail("functoriality", str(f), str(g))
        return rep

    tasks.append(identities)
    tasks.append(lambda: kassel_iso_check(lc.representable_module(ring, m, N), max((N - 2) // 4, 0)))
    reports = _map(pool, lambda f: f(), tasks)
    ok = all(r.ok for r in reports)
    if job.output_format == "text":
        text = "\n".join(str(r) for r in reports) + "\n"
    else:
        text = _dump({"schema": 1, "command": "verify", "ok": ok,
                      "reports": [r.to_json() for r in reports]}) + "\n"
    return (0 if ok else 1), text


def run_lambda(n: int, m: int, fmt: str) -> tuple:
    homs = lc.hom_set(n, m)
    if fmt == "text":
        lines = [f"|Lambda({n},{m})| = {len(homs)}"] + [str(f) for f in homs]
        return 0, "\n".join(lines) + "\n"
    doc = {"schema": 1, "command": "lambda", "source": n, "target": m, "count": len(homs),
           "formula": lc.hom_count(n, m), "morphisms": [f.to_json() for f in homs]}
    return 0, _dump(doc) + "\n"


def run_selftest(only, fmt, pool=None, quick=False) -> tuple:
    from .acceptance import run_acceptance

    results = run_acceptance(only=only, pool=pool, quick=quick)
    ok = all(r.ok for r in results)
    if fmt == "text":
        text = "\n".join(r.line() for r in results) + "\n"
    else:
        text = _dump({"schema": 1, "command": "selftest", "ok": ok,
                      "criteria": [r.to_json() for r in results]}) + "\n"
    return (0 if ok else 1), text


def _map(pool, fn, items):
    if pool is None:
        return [fn(x) for x in items]
    return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cychom", description="Hochschild, cyclic and negative cyclic homology of small algebras, and checks of the cyclic-category resolution.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--ring", help="Z, Q or Fp (overrides the algebra file)")
        p.add_argument("--format", default="json", choices=["json", "csv", "text"])
        p.add_argument("--output", "-o", help="write the report here instead of stdout")

    for name, helptext in (("hh", "Hochschild homology"), ("hc", "cyclic homology"),
                           ("hn", "negative cyclic homology")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("algebra", help="algebra file, or a bundled name such as ground.alg")
        p.add_argument("--degrees", default="0..4", help="degree range lo..hi")
        p.add_argument("--trunc", type=int, help="simplicial truncation N")
        p.add_argument("--normalized", action="store_true", help="use the normalized mixed complex")
        if name == "hn":
            p.add_argument("--depth-cap", type=int, help="largest column depth tried")
        common(p)
    p = sub.add_parser("verify", help="check the resolution lemma and operator identities at [m]")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--N", type=int, default=6)
    common(p)
    p = sub.add_parser("lambda", help="list the morphisms [n] -> [m] of the cyclic category")
    p.add_argument("--hom", nargs=2, type=int, metavar=("N", "M"), required=True)
    common(p)
    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.add_argument("--quick", action="store_true", help="smaller parameter sets")
    common(p)
    return ap


def _error(msg, kind, fmt):
    if fmt == "json":
        return _dump({"schema": 1, "error": {"kind": kind, "message": msg}}) + "\n"
    return f"error ({kind}): {msg}\n"


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    fmt = getattr(args, "format", "json")
    try:
        threads = thread_count()
        ring = RingSpec.parse(args.ring) if getattr(args, "ring", None) else None
        pool = ThreadPoolExecutor(threads) if threads > 1 else None
        try:
            if args.command in ("hh", "hc", "hn"):
                job = JobSpec(args.command, ring, args.algebra, parse_range(args.degrees),
                              args.trunc, getattr(args, "depth_cap", None), fmt, threads,
                              args.normalized)
                code, text = run_homology(job, pool)
            elif args.command == "verify":
                job = JobSpec("verify", ring, truncation=args.N, output_format=fmt, threads=threads)
                code, text = run_verify(job, args.m, pool)
            elif args.command == "lambda":
                code, text = run_lambda(args.hom[0], args.hom[1], fmt)
            else:
                only = None
                if args.only:
                    only = [int(x) for x in args.only.split(",") if x.strip()]
                code, text = run_selftest(only, fmt, pool, args.quick)
        finally:
            if pool is not None:
                pool.shutdown()
    except AlgebraFileError as e:
        code, text = 2, _error(str(e), "algebra_file", fmt)
    except FileNotFoundError as e:
        code, text = 2, _error(str(e), "file_not_found", fmt)
    except (UsageError, AlgebraError, ValueError) as e:
        code, text = 2, _error(str(e), type(e).__name__, fmt)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
