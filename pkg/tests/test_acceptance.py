"""Acceptance criteria 1 to 10.

Each ``check_*`` returns ``(ok, detail)``.  Under pytest every criterion prints a
``criterion k: PASS|FAIL`` line and the terminal summary repeats them.  Run the
file directly to get the same lines without pytest.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy as sp

from amwkit.algebra import (THM43, AlgebraSpec, build_thm43, build_thm45, certify_algebra_element,
                            expand_affine, freeness_check, poly_combine, witness_point)
from amwkit.construct import build_jlambda, classic_example, default_partition, from_terms
from amwkit.poly import PolyNoConst
from amwkit.realfn import Interval, exp_fn, power, sup_norm
from amwkit.rng import Lcg64, random_poly, random_realfn
from amwkit.scalarseq import constant_seq, make_logpower, make_power
from amwkit.series import c00_perturb, certify_amw, tail_sup_disjoint
from amwkit.spaces import (build_thm31_family, independence_rank, isometry_check, remark37_norm,
                           scale_product)

LAM = default_partition()
RESULTS: dict[int, tuple[bool, str]] = {}


def check_1():
    t0 = time.perf_counter()
    F = classic_example()
    for n in range(1, 21):
        e = F.norm(n)
        if not (e.exact and e.upper - e.lower <= 1e-12 and abs(e.lower - 1 / n) <= 1e-12):
            return False, f"norm of term {n} is {e}"
    s = F.partial_norm_sum(10 ** 4)
    tail = tail_sup_disjoint(F, 100)
    elapsed = time.perf_counter() - t0
    ok = (abs(s - (math.log(10 ** 4) + 0.5772156649)) <= 1e-3
          and abs(tail.lower - 0.01) <= 1e-12 and abs(tail.upper - 0.01) <= 1e-12 and elapsed < 1.0)
    return ok, f"sum={s:.9f} tail={tail.lower} t={elapsed:.3f}s"


def check_2():
    grid = Interval(0, 1).grid(101)
    for f in (power(1), power(2), power(3), exp_fn(1)):
        u = build_jlambda(LAM, f)
        fn = sup_norm(f)
        for n in range(1, 21):
            t = u.term(n)
            if t(LAM.alpha(3 * n - 1)) != f(0) or t(LAM.alpha(3 * n)) != f(1):
                return False, f"{f.label}: boundary values at n={n}"
            lo, hi = LAM.alpha(3 * n - 2), LAM.alpha(3 * n + 1)
            if any(t(x) != 0.0 for x in grid if not lo < x < hi):
                return False, f"{f.label}: nonzero outside block {n}"
            if not (sup_norm(t, use_known=False).contains(fn.lower, 1e-12) and u.norm(n).exact
                    and u.norm(n).lower == fn.lower):
                return False, f"{f.label}: norm mismatch at n={n}"
    return True, "4 functions, 20 terms"


def check_3():
    u = build_jlambda(LAM, power(1))
    F = scale_product(make_power(1), u)
    tails = [tail_sup_disjoint(F, N) for N in (10, 100, 1000)]
    exact_ok = all(t.exact and t.lower == 1 / N for t, N in zip(tails, (10, 100, 1000)))
    C = scale_product(constant_seq(1), u)
    const_ok = all(tail_sup_disjoint(C, N).lower == 1.0 for N in (1, 10, 100, 1000))
    c = certify_amw(C)
    div = certify_amw(scale_product(make_power(2), u)).divergence.kind
    ok = exact_ok and const_ok and c.uniform.kind == "failed" and div == "failed"
    return ok, f"tails={[t.lower for t in tails]} constant uniform={c.uniform.kind} 1/n^2 divergence={div}"


def check_4():
    rng = Lcg64()
    iso = isometry_check(LAM, [random_realfn(rng) for _ in range(10)])
    r = remark37_norm(LAM, make_power(1), [power(1), power(2)], [1, -1])
    ok = iso.passed and r.covered and abs(r.lhs.value - 0.25) <= 1e-9 and abs(r.rhs.value - 0.25) <= 1e-9
    return ok, f"isometry={iso.passed} lhs={r.lhs.value} rhs={r.rhs.value}"


def check_5():
    u = build_jlambda(LAM, power(1))
    fam = build_thm31_family([make_power(c) for c in (0.3, 0.5, 0.7)], u)
    gens_ok = all(certify_amw(g).affirmed for g in fam.generators)
    rng = Lcg64()
    combos = [fam.certify_combination([rng.coeff() for _ in range(3)]) for _ in range(25)]
    combos_ok = sum(c.affirmed for c in combos)
    rank = independence_rank(fam.generators)
    return gens_ok and combos_ok == 25 and rank == 3, f"generators={gens_ok} combos={combos_ok}/25 rank={rank}"


def _naive_expansion(P, alphas, betas):
    xs = sp.symbols(f"x1:{P.nvars + 1}")
    subs = [sp.Rational(str(a)) * x + sp.Rational(str(b)) for x, a, b in zip(xs, alphas, betas)]
    expr = sp.expand(sum(sp.Rational(str(c)) * sp.Mul(*[s ** e for s, e in zip(subs, j)])
                         for j, c in P.terms.items()))
    return {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in sp.Poly(expr, *xs).terms() if c != 0}


def check_6():
    rng = Lcg64()
    for i in range(100):
        k = rng.randint(1, 3)
        P = random_poly(rng, k, 4)
        al = [rng.rational(nonzero=True) for _ in range(k)]
        be = [rng.rational() for _ in range(k)]
        if expand_affine(P, al, be).terms != _naive_expansion(P, al, be):
            return False, f"case {i}: {P} alphas={al} betas={be}"
    return True, "100 cases"


def check_7():
    a = make_logpower(1)
    G = build_thm43(AlgebraSpec(THM43, LAM, a, (power(1), power(2))))
    rng = Lcg64()
    worst, certified, nonzero = 0.0, 0, 0
    grid = Interval(0, 1).grid(101)
    for _ in range(10):
        E = poly_combine(G, random_poly(rng, 2, 3))
        if E.eval_poly is None:
            continue
        nonzero += 1
        for n in range(1, 21):
            x = LAM.alpha(3 * n - 1)
            worst = max(worst, abs(E.realized.term(n)(x) - float(E.eval_poly(a.term(n)))))
            lo, hi = LAM.alpha(3 * n - 2), LAM.alpha(3 * n + 1)
            if any(E.realized.term(n)(y) != 0.0 for y in grid if not lo < y < hi):
                return False, f"product support leaves block {n}"
        certified += certify_algebra_element(E).affirmed
    free = freeness_check(G, [random_poly(rng, 2, 3) for _ in range(25)])
    ok = worst <= 1e-12 and certified == nonzero and nonzero > 0 and free.all_found
    return ok, f"identity err={worst:.2e} certified={certified}/{nonzero} freeness={free.all_found}"


def _witness_cancels(P):
    # basis c = 1, 2 gives witness value sum of lambda / ln^(j1 + 2 j2)(n+1); it vanishes iff each power cancels
    by_power = {}
    for (j1, j2), lam in P.terms.items():
        by_power[j1 + 2 * j2] = by_power.get(j1 + 2 * j2, 0) + lam
    return all(v == 0 for v in by_power.values())


def check_8():
    basis = [make_logpower(1), make_logpower(2)]
    u = build_jlambda(LAM, power(2))
    H = build_thm45(basis, u)
    worst = 0.0
    for n in range(1, 21):
        x = witness_point(u, n, 1.0)
        worst = max(worst, abs(H[0].term(n)(x) * H[1].term(n)(x) - basis[0].term(n) * basis[1].term(n)))
    rng = Lcg64()
    polys = [PolyNoConst(2, {(1, 1): 1})] + [random_poly(rng, 2, 3) for _ in range(10)]
    certified, eligible, wrongly_failed = 0, 0, 0
    for P in polys:
        c = certify_algebra_element(poly_combine(H, P))
        wrongly_failed += c.status == "failed"
        if not _witness_cancels(P):
            eligible += 1
            certified += c.affirmed
    ok = worst <= 1e-10 and certified == eligible and eligible > 0 and not wrongly_failed
    return ok, f"witness err={worst:.2e} certified={certified}/{eligible} failed={wrongly_failed}"


def check_9():
    rng = Lcg64()
    u = build_jlambda(LAM, power(1))
    for i in range(10):
        c = rng.choice([0.3, 0.5, 0.7, 1.0])
        F = classic_example() if i % 3 == 0 else scale_product(make_power(c), u)
        G = from_terms([random_realfn(rng) for _ in range(rng.randint(1, 5))])
        before, after = certify_amw(F), certify_amw(c00_perturb(F, G))
        if not (after.affirmed and after.core() == before.core()):
            return False, f"pair {i}: {before.status} -> {after.status}"
    return True, "10 pairs"


CLI_EXAMPLES = [
    ({"command": "certify", "family": {"kind": "classic"}}, 0),
    ({"command": "certify", "family": {"kind": "power_scaled", "c": 2}}, 2),
    ({"command": "oracle", "oracle": "lemma22", "scalar": {"kind": "power", "c": 1}, "N_list": [10, 100, 1000]}, 0),
]


def check_10(tmp_dir):
    details = []
    for i, (spec, expected) in enumerate(CLI_EXAMPLES):
        path = tmp_dir / f"spec{i}.json"
        path.write_text(json.dumps(spec), encoding="utf-8")
        outs = []
        for run in range(2):
            out = tmp_dir / f"out{i}_{run}"
            r = subprocess.run([sys.executable, "-m", "amwkit", "--spec", str(path), "--out", str(out), "--csv"],
                               capture_output=True)
            if r.returncode != expected:
                return False, f"example {i} exited {r.returncode}, expected {expected}"
            outs.append(((out / "report.json").read_bytes(), (out / "series.csv").read_bytes()))
        if outs[0] != outs[1]:
            return False, f"example {i} output differs between runs"
        details.append(str(expected))
    return True, "exit codes " + "/".join(details) + ", byte-stable"


def _report(k, result):
    ok, detail = result
    RESULTS[k] = (ok, detail)
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    return ok, line


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k):
    ok, line = _report(k, globals()[f"check_{k}"]())
    assert ok, line


def test_criterion_10(tmp_path):
    ok, line = _report(10, check_10(tmp_path))
    assert ok, line


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failures = 0
    for k in range(1, 11):
        if k == 10:
            with tempfile.TemporaryDirectory() as d:
                ok, _ = _report(k, check_10(Path(d)))
        else:
            ok, _ = _report(k, globals()[f"check_{k}"]())
        failures += not ok
    sys.exit(1 if failures else 0)
