"""Batch front end: read a JSON run description, certify, write a report.

Exit codes: 0 when every certificate is affirmed, 2 when any failed, 3 when
any is unknown, 1 for a malformed run description.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import algebra as alg
from .construct import DEFAULT_DEPTH, build_jlambda, check_family_f, classic_example, default_partition
from .errors import AmwError
from .poly import poly_from_json
from .realfn import Interval, affine, constant, exp_fn, power, scaled_sum, zero_fn
from .rng import DEFAULT_SEED, Lcg64, random_poly, random_realfn
from .scalarseq import (alternating, constant_seq, finite_support, make_logpower, make_power,
                        scaled, zero_seq)
from .series import certify_amw, lemma22_uniform_oracle, tail_sup_disjoint
from .spaces import (build_spaceable_family, build_thm31_family, independence_rank,
                     isometry_check, remark37_norm, scale_product)

SCHEMA = "amwkit-report-v1"
CSV_COLUMNS = ("N", "sum_norms", "tail_sup", "predicted_tail")
DEFAULT_N_LIST = (10, 100, 1000)
EXIT_OK, EXIT_MALFORMED, EXIT_FAILED, EXIT_UNKNOWN = 0, 1, 2, 3


class SpecError(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------- JSON output


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, 17 significant digits, non-finite floats as strings."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------- run description parsing


def _get(d: dict, key: str, path: str, default=..., kind=None):
    if not isinstance(d, dict):
        raise SpecError(path, "expected an object")
    if key not in d:
        if default is ...:
            raise SpecError(f"{path}.{key}" if path else key, "missing")
        return default
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SpecError(f"{path}.{key}" if path else key, f"expected {getattr(kind, '__name__', kind)}")
    return v


def _number(v, path: str) -> Fraction:
    if isinstance(v, bool):
        raise SpecError(path, "expected a number")
    try:
        q = Fraction(v) if isinstance(v, (int, str)) else Fraction(float(v))
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(path, f"not a number: {v!r}") from None
    return q


def _positive(v, path: str) -> float:
    x = float(_number(v, path))
    if not x > 0:
        raise SpecError(path, f"must be positive, got {v!r}")
    return x


def parse_interval(d: Any, path: str) -> Interval:
    if d is None:
        return Interval(0, 1)
    if not isinstance(d, list) or len(d) != 2:
        raise SpecError(path, "expected [lo, hi]")
    lo, hi = _number(d[0], f"{path}[0]"), _number(d[1], f"{path}[1]")
    if not lo < hi:
        raise SpecError(path, "need lo < hi")
    return Interval(lo, hi)


def parse_fn(d: Any, path: str, domain: Interval):
    kind = _get(d, "kind", path, kind=str)
    if kind == "power":
        return power(_positive(_get(d, "c", path), f"{path}.c"), domain)
    if kind == "exp":
        return exp_fn(float(_number(_get(d, "c", path), f"{path}.c")), domain)
    if kind == "affine":
        return affine(_number(_get(d, "slope", path), f"{path}.slope"),
                      _number(_get(d, "intercept", path, 0), f"{path}.intercept"), domain)
    if kind == "constant":
        return constant(_number(_get(d, "value", path), f"{path}.value"), domain)
    if kind == "zero":
        return zero_fn(domain)
    if kind == "sum":
        terms = _get(d, "terms", path, kind=list)
        parts = []
        for i, t in enumerate(terms):
            p = f"{path}.terms[{i}]"
            parts.append((_number(_get(t, "coef", p), f"{p}.coef"), parse_fn(_get(t, "f", p), f"{p}.f", domain)))
        return scaled_sum(parts, domain)
    raise SpecError(f"{path}.kind", f"unknown function kind {kind!r}")


def parse_scalar(d: Any, path: str):
    kind = _get(d, "kind", path, kind=str)
    if kind == "power":
        return make_power(_positive(_get(d, "c", path), f"{path}.c"))
    if kind == "log":
        return make_logpower(_positive(_get(d, "c", path), f"{path}.c"))
    if kind == "constant":
        return constant_seq(float(_number(_get(d, "value", path), f"{path}.value")))
    if kind == "finite":
        vals = _get(d, "values", path, kind=list)
        return finite_support([float(_number(v, f"{path}.values[{i}]")) for i, v in enumerate(vals)])
    if kind == "zero":
        return zero_seq()
    if kind == "alternating":
        return alternating(parse_scalar(_get(d, "base", path), f"{path}.base"))
    if kind == "scaled":
        return scaled(_number(_get(d, "factor", path), f"{path}.factor"),
                      parse_scalar(_get(d, "base", path), f"{path}.base"))
    raise SpecError(f"{path}.kind", f"unknown scalar kind {kind!r}")


def parse_family(d: Any, path: str):
    """A function sequence plus the (scalar, base) pair when it is a product."""
    kind = _get(d, "kind", path, kind=str)
    if kind == "classic":
        return classic_example(), None
    domain = parse_interval(_get(d, "interval", path, None), f"{path}.interval")
    Lam = default_partition(domain)
    f = parse_fn(_get(d, "f", path, {"kind": "power", "c": 1}), f"{path}.f", domain)
    u = build_jlambda(Lam, f)
    if kind == "jlambda":
        return u, None
    if kind == "power_scaled":
        a = make_power(_positive(_get(d, "c", path), f"{path}.c"))
    elif kind == "scaled":
        a = parse_scalar(_get(d, "scalar", path), f"{path}.scalar")
    else:
        raise SpecError(f"{path}.kind", f"unknown family kind {kind!r}")
    return scale_product(a, u), (a, u)


def _n_list(spec: dict) -> list[int]:
    raw = _get(spec, "N_list", "", list(DEFAULT_N_LIST), kind=list)
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise SpecError(f"N_list[{i}]", f"expected a positive integer, got {v!r}")
        out.append(v)
    return out


# ---------------------------------------------------------------- pipelines


def _cert_entry(name: str, status: str, reason: str, depth: int, **extra) -> dict:
    return {"name": name, "status": status, "reason": reason, "depth": depth, **extra}


def _num(x: Optional[float]) -> Optional[float]:
    return None if x is None else float(x)


def _series_rows(F, N_list, predicted) -> list[dict]:
    rows = []
    for N in N_list:
        tail = None
        if F.disjoint_tag is not None and N >= F.disjoint_from:
            t = tail_sup_disjoint(F, N)
            tail = t.lower if math.isfinite(t.upper) else None
        rows.append({"N": N, "sum_norms": F.partial_norm_sum(N), "tail_sup": tail,
                     "predicted_tail": _num(predicted(N))})
    return rows


def _predicted_tail(F):
    ns = F.norm_seq
    if ns is None or not ns.abs_nonincreasing:
        return lambda N: None
    k = F.norm_scale.lower if F.norm_scale is not None else 1.0
    return lambda N: abs(ns.term(N)) * k if N >= F.norm_from else None


def run_construct(spec: dict, depth: int, rng: Lcg64) -> tuple[dict, list]:
    F, _ = parse_family(_get(spec, "family", ""), "family")
    terms = []
    for n in range(1, depth + 1):
        sup = F.support(n)
        terms.append({"n": n, "norm": F.norm(n).to_dict(),
                      "support": None if sup is None else [str(sup.lo), str(sup.hi)]})
    certs = []
    if F.provenance.get("origin") == "jlambda":
        rep = check_family_f(F, depth)
        status = "affirmed" if rep.ok else ("unknown" if rep.depth_limited else "failed")
        certs.append(_cert_entry("family_F", status, rep.failure or "disjoint supports, L <= ||u_n|| <= M",
                                 depth, detail=rep.to_dict()))
    return {"family": F.label, "terms": terms, "certificates": certs}, []


def run_certify(spec: dict, depth: int, rng: Lcg64) -> tuple[dict, list]:
    F, meta = parse_family(_get(spec, "family", ""), "family")
    cert = certify_amw(F, meta, depth=depth)
    d = cert.to_dict()
    entry = _cert_entry("amw", cert.status, d["divergence"]["reason"], depth, certificate=d)
    rows = _series_rows(F, _n_list(spec), _predicted_tail(F))
    return {"family": F.label, "certificates": [entry]}, rows


def run_oracle(spec: dict, depth: int, rng: Lcg64) -> tuple[dict, list]:
    name = _get(spec, "oracle", "", kind=str)
    if name != "lemma22":
        raise SpecError("oracle", f"unknown oracle {name!r}")
    a = parse_scalar(_get(spec, "scalar", ""), "scalar")
    domain = parse_interval(_get(spec, "interval", "", None), "interval")
    f = parse_fn(_get(spec, "f", "", {"kind": "power", "c": 1}), "f", domain)
    u = build_jlambda(default_partition(domain), f)
    if u.f_cert is None:
        raise SpecError("f", "the zero function gives no family-F sequence")
    N_list = _n_list(spec)
    rep = lemma22_uniform_oracle(u, a, N_list)
    status = "affirmed" if rep.consistent else "failed"
    reason = (f"tail sup matches max |a_n| ||u_n|| at every N; uniform convergence "
              f"{'holds' if rep.uniform_converges else 'fails' if rep.uniform_converges is False else 'undecided'}")
    entry = _cert_entry("lemma22_oracle", status, reason if rep.consistent else "tail identity violated",
                        depth, detail=rep.to_dict())
    F = scale_product(a, u)
    rows = _series_rows(F, N_list, _predicted_tail(F))
    return {"scalar": a.label, "f": f.label, "certificates": [entry]}, rows


def run_algebra(spec: dict, depth: int, rng: Lcg64) -> tuple[dict, list]:
    mode = _get(spec, "mode", "", "thm43", kind=str)
    domain = parse_interval(_get(spec, "interval", "", None), "interval")
    Lam = default_partition(domain)
    if mode == alg.THM43:
        a = parse_scalar(_get(spec, "scalar", "", {"kind": "log", "c": 1}), "scalar")
        gs = tuple(parse_fn(g, f"gs[{i}]", domain)
                   for i, g in enumerate(_get(spec, "gs", "", kind=list)))
        try:
            gens = alg.build_thm43(alg.AlgebraSpec(alg.THM43, Lam, a, gs))
        except AmwError as e:
            raise SpecError("scalar", str(e)) from None
    elif mode == alg.THM45:
        basis = [parse_scalar(s, f"basis[{i}]") for i, s in enumerate(_get(spec, "basis", "", kind=list))]
        f = parse_fn(_get(spec, "f", "", {"kind": "power", "c": 2}), "f", domain)
        try:
            gens = alg.build_thm45(basis, build_jlambda(Lam, f), depth)
        except AmwError as e:
            raise SpecError("basis", str(e)) from None
    else:
        raise SpecError("mode", f"unknown algebra mode {mode!r}")
    if len(gens) == 0:
        raise SpecError("gs" if mode == alg.THM43 else "basis", "need at least one generator")
    polys = []
    for i, p in enumerate(_get(spec, "polys", "", [], kind=list)):
        try:
            polys.append(poly_from_json(len(gens), p))
        except (AmwError, TypeError, ValueError) as e:
            raise SpecError(f"polys[{i}]", str(e)) from None
    for _ in range(int(_get(spec, "random_polys", "", 0, kind=int))):
        polys.append(random_poly(rng, len(gens), 3))
    if not polys:
        raise SpecError("polys", "give polynomials or a random_polys count")
    certs = []
    for P in polys:
        E = alg.poly_combine(gens, P)
        c = alg.certify_algebra_element(E, gens, depth)
        certs.append(_cert_entry(f"P = {P}", c.status, c.divergence.reason, depth, certificate=c.to_dict()))
    free = alg.freeness_check(gens, polys, depth)
    fstat = "affirmed" if free.all_found else "failed"
    certs.append(_cert_entry("freeness", fstat, "nonzero witness for every polynomial" if free.all_found
                             else f"no witness for {free.violations}", depth, detail=free.to_dict()))
    return {"mode": mode, "certificates": certs}, []


def run_spaces(spec: dict, depth: int, rng: Lcg64) -> tuple[dict, list]:
    mode = _get(spec, "mode", "", kind=str)
    domain = parse_interval(_get(spec, "interval", "", None), "interval")
    Lam = default_partition(domain)
    certs = []
    if mode in ("thm31", "spaceable"):
        if mode == "thm31":
            basis = [parse_scalar(s, f"basis[{i}]") for i, s in enumerate(_get(spec, "basis", "", kind=list))]
            f = parse_fn(_get(spec, "f", "", {"kind": "power", "c": 1}), "f", domain)
            try:
                fam = build_thm31_family(basis, build_jlambda(Lam, f))
            except AmwError as e:
                raise SpecError("basis", str(e)) from None
        else:
            a = parse_scalar(_get(spec, "scalar", "", {"kind": "power", "c": 1}), "scalar")
            fs = [parse_fn(g, f"fs[{i}]", domain) for i, g in enumerate(_get(spec, "fs", "", kind=list))]
            try:
                fam = build_spaceable_family(Lam, a, fs)
            except AmwError as e:
                raise SpecError("scalar", str(e)) from None
        for i, g in enumerate(fam.generators):
            c = certify_amw(g, depth=depth)
            certs.append(_cert_entry(f"generator[{i}]", c.status, c.divergence.reason, depth,
                                     certificate=c.to_dict()))
        k = len(fam)
        for _ in range(int(_get(spec, "random_combinations", "", 0, kind=int)) if k else 0):
            coeffs = [rng.coeff() for _ in range(k)]
            r = fam.certify_combination(coeffs)
            status = r.certificate.status if r.structural else "unknown"
            certs.append(_cert_entry(f"combination {[str(c) for c in coeffs]}", status,
                                     r.certificate.divergence.reason, depth, structural=r.structural))
        extra = {"rank": independence_rank(fam.generators) if k else 0, "generators": k}
    elif mode == "isometry":
        count = int(_get(spec, "random_functions", "", 0, kind=int))
        fs = [parse_fn(g, f"fs[{i}]", domain) for i, g in enumerate(_get(spec, "fs", "", [], kind=list))]
        fs += [random_realfn(rng, domain) for _ in range(count)]
        rep = isometry_check(Lam, fs, depth)
        certs.append(_cert_entry("isometry", "affirmed" if rep.passed else "failed",
                                 "max_n ||J(f)_n|| encloses ||f||", depth, detail=rep.to_dict()))
        extra = {}
    elif mode == "remark37":
        a = parse_scalar(_get(spec, "scalar", ""), "scalar")
        fs = [parse_fn(g, f"fs[{i}]", domain) for i, g in enumerate(_get(spec, "fs", "", kind=list))]
        coeffs = [_number(c, f"coeffs[{i}]") for i, c in enumerate(_get(spec, "coeffs", "", kind=list))]
        if len(coeffs) != len(fs):
            raise SpecError("coeffs", f"{len(coeffs)} coefficients for {len(fs)} functions")
        rep = remark37_norm(Lam, a, fs, coeffs, depth)
        ok = rep.agree and rep.covered
        status = "affirmed" if ok else ("unknown" if not rep.covered else "failed")
        certs.append(_cert_entry("norm_identity", status, f"L = {rep.L!r} attained at n = {rep.argmax}",
                                 depth, detail=rep.to_dict()))
        extra = {}
    else:
        raise SpecError("mode", f"unknown spaces mode {mode!r}")
    return {"mode": mode, "certificates": certs, **extra}, []


COMMANDS = {
    "construct": run_construct,
    "certify": run_certify,
    "oracle": run_oracle,
    "algebra": run_algebra,
    "spaces": run_spaces,
}


def exit_code(certs: list[dict]) -> int:
    statuses = {c["status"] for c in certs}
    if "failed" in statuses:
        return EXIT_FAILED
    if "unknown" in statuses:
        return EXIT_UNKNOWN
    return EXIT_OK


def run(spec: dict, depth: int = DEFAULT_DEPTH, seed: int = DEFAULT_SEED) -> tuple[int, dict, list]:
    """Execute one run description; returns ``(exit code, report, csv rows)``."""
    if not isinstance(spec, dict):
        raise SpecError("spec", "expected a JSON object")
    command = _get(spec, "command", "", kind=str)
    if command not in COMMANDS:
        raise SpecError("command", f"unknown command {command!r}; expected one of {sorted(COMMANDS)}")
    try:
        body, rows = COMMANDS[command](spec, depth, Lcg64(seed))
    except SpecError:
        raise
    except AmwError as e:
        raise SpecError("spec", str(e)) from None
    code = exit_code(body.get("certificates", []))
    report = {"schema": SCHEMA, "command": command, "depth": depth, "seed": f"0x{seed:X}",
              "input": spec, "exit_code": code, **body}
    return code, report, rows


def csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(["" if r[k] is None else (r[k] if isinstance(r[k], int) else "%.17g" % r[k])
                    for k in CSV_COLUMNS])
    return buf.getvalue()


def _default_depth() -> int:
    env = os.environ.get("AMWKIT_DEPTH")
    if env is None:
        return DEFAULT_DEPTH
    try:
        d = int(env)
    except ValueError:
        raise SpecError("AMWKIT_DEPTH", f"not an integer: {env!r}") from None
    if d < 1:
        raise SpecError("AMWKIT_DEPTH", "must be positive")
    return d


def _hex(s: str) -> int:
    return int(s, 16)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amwkit", description="Certify Anti M-Weierstrass function sequences.")
    p.add_argument("--spec", required=True, help="JSON run description")
    p.add_argument("--out", help="directory for report.json (and series.csv); stdout when omitted")
    p.add_argument("--depth", type=int, default=None, help="finite-check depth (default 20, or $AMWKIT_DEPTH)")
    p.add_argument("--seed", type=_hex, default=DEFAULT_SEED, help="hex seed for random draws (default 0x5EED)")
    p.add_argument("--csv", action="store_true", help="also write series.csv")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        depth = args.depth if args.depth is not None else _default_depth()
        if depth < 1:
            raise SpecError("--depth", "must be positive")
        try:
            spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        except OSError as e:
            raise SpecError("--spec", f"cannot read: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SpecError("--spec", f"invalid JSON: {e.msg} at line {e.lineno}") from None
        code, report, rows = run(spec, depth, args.seed)
    except SpecError as e:
        print(f"amwkit: malformed spec: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    text = dumps(report) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text, encoding="utf-8")
        if args.csv:
            (out / "series.csv").write_text(csv_text(rows), encoding="utf-8")
    else:
        sys.stdout.write(text)
        if args.csv:
            sys.stdout.write(csv_text(rows))
    return code


if __name__ == "__main__":
    sys.exit(main())
