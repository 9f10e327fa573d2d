"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import os
import re
import subprocess
import sys
from fractions import Fraction
from math import comb

from conftest import ACCEPTANCE, CORPUS, MODELS, cpn, lie_m11, lie_s3, s3xs3, sphere
from loopstring.ce import CapProduct, CoadjointModule, TrivialModule, fundamental_cycle
from loopstring.cohomology import transfer
from loopstring.comparison import HochschildSide, LoopSide, identify_algebras
from loopstring.diagrams import theorem_diagram_checks
from loopstring.gca import AlgebraMap, FreeGCA
from loopstring.hochschild import FiniteAlgebra, hochschild_cohomology
from loopstring.lie import EnvelopingAlgebra, chain_algebra, cochain_algebra, coproduct_terms
from loopstring.lie_models import coformal_path_composition
from loopstring.models import (
    LoopSpaceModel,
    PathCompositionModel,
    RelativeMultiplicationModel,
    bar,
    prime,
)
from loopstring.string_topology import gysin_maps, loop_product, string_bracket

LABEL = re.compile(r"([abt])_\{(-?\d+)(?:,(-?\d+))?\}")


def _report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line


def _parse(label):
    kind, p, q = LABEL.fullmatch(label).groups()
    return kind, int(p), None if q is None else int(q)


def _mul(table, u, v):
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            for c, z in table[(a, b)].items():
                out[c] = out.get(c, 0) + x * y * z
    return {k: w for k, w in out.items() if w}


# -- 1 ---------------------------------------------------------------------------


def _cpn_expected(n, X, Y):
    kx, p, q = _parse(X)
    ky, r, s = _parse(Y)
    P, Q = p + r - n, q + s
    if kx == ky == "a":
        # the point class is a_{0,0}; a_{0,q} with q > 0 is not a basis element
        return {f"a_{{{P},{Q}}}": 1} if 1 <= P <= n or (P, Q) == (0, 0) else {}
    if "b" in (kx, ky) and kx != ky:
        return {f"b_{{{P},{Q}}}": 1} if 0 <= P <= n - 1 else {}
    return {}


def test_criterion_1_cpn_loop_products():
    compared, wrong = 0, []
    for n in (1, 2, 3):
        P = loop_product(cpn(n), 2 * n, 6 * n)
        table = P.table()
        for (X, Y), v in table.items():
            compared += 1
            if v != _cpn_expected(n, X, Y):
                wrong.append((n, X, Y, v))
        a = {f"a_{{{n - 1},0}}": Fraction(1)}
        power = a
        for _ in range(n - 1):
            power = _mul(table, power, a)
        if power != {"a_{0,0}": 1}:
            wrong.append((n, "(a_{n-1,0})^n", power))
        if P.unit() != {f"a_{{{n},0}}": 1}:
            wrong.append((n, "unit", P.unit()))
        if _mul(table, {"a_{0,0}": Fraction(1)}, {f"a_{{{n},1}}": Fraction(1)}):
            wrong.append((n, "1 . a_{n,1}"))
    _report(1, not wrong, f"CP^1..CP^3, {compared} basis pairs of total degree <= 6n, "
                          f"exact rational equality, mismatches {wrong[:3]}")


# -- 2 ---------------------------------------------------------------------------


def _cpn_free_loop_dims(n, top):
    """Q·1 ⊕ (∧⁺(x, x̄)/(x^{n+1}, xⁿx̄) ⊗ ∧ȳ), |x| = 2, |x̄| = 1, |ȳ| = 2n."""
    dims = [0] * (top + 1)
    dims[0] = 1
    for i in range(n + 1):
        for e in (0, 1):
            if (i, e) in ((0, 0), (n, 1)):
                continue
            for j in range(top // (2 * n) + 1):
                deg = 2 * i + e + 2 * n * j
                if deg <= top:
                    dims[deg] += 1
    return dims


def test_criterion_2_cpn_free_loop_cohomology():
    wrong = []
    for n in (1, 2, 3):
        L = LoopSpaceModel(cpn(n)).total
        got = [L.H(k).dim for k in range(6 * n + 1)]
        want = _cpn_free_loop_dims(n, 6 * n)
        if got != want:
            wrong.append((n, got, want))
    _report(2, not wrong, f"dimension tables of H^*(LCP^n), n = 1..3, degrees 0..6n, exact; "
                          f"mismatches {wrong}")


# -- 3 ---------------------------------------------------------------------------


def _s3xs3_expected(X, Y):
    """The published tables; the [b, a] row is taken with the opposite global sign."""
    kx, k, t = _parse(X)
    ky, l, m = _parse(Y)
    if "t" in (kx, ky) or (k + l) * (t + m) == 0:
        return None
    c = Fraction(comb(k + l, k) * comb(m + t, t), (k + l) * (t + m))
    if kx == "b" and ky == "a":
        c, out = -c * (k * m - l * t), "b"
    elif kx == ky == "a":
        c, out = c * (l * t - k * m), "a"
    elif kx == ky == "b":
        return {}
    else:
        return None
    label = f"{out}_{{{k + l - 1},{t + m - 1}}}"
    if label == "a_{0,0}":
        label = "t_{0}"
    return {label: c} if c else {}


def test_criterion_3_s3xs3_string_bracket():
    S = string_bracket(s3xs3(), 6, 26)
    compared, wrong = 0, []
    for (X, Y), v in S.table().items():
        want = _s3xs3_expected(X, Y)
        if want is None:
            continue
        compared += 1
        if v != want:
            wrong.append((X, Y, v, want))
    special = []
    for r in range(0, 8):
        for s in range(0, 8):
            Y = f"a_{{{r},{s}}}"
            if Y in S.degree_of and ("a_{1,1}", Y) in S.table():
                want = {Y: r - s} if r != s else {}
                if S.bracket("a_{1,1}", Y) != want:
                    special.append(Y)
                compared += 1
    ok = not wrong and not special and compared > 0
    _report(3, ok, f"S3xS3, {compared} constants of [b,a], [a,a], [b,b] and [a_(1,1), a_(r,s)] "
                   f"with output degree <= 26 (covers 20 in either grading), exact, [b,a] row "
                   f"with the documented global sign -1; mismatches {(wrong + special)[:3]}")


# -- 4 ---------------------------------------------------------------------------


def test_criterion_4_bracket_vanishes():
    spaces = [("S2", sphere(2), 2), ("S3", sphere(3), 3), ("S7", sphere(7), 7),
              ("CP2", cpn(2), 4), ("CP3", cpn(3), 6)]
    compared, nonzero = 0, []
    for name, model, m in spaces:
        S = string_bracket(model, m, 20)
        for key, v in S.table().items():
            compared += 1
            if v:
                nonzero.append((name, key, {k: str(c) for k, c in v.items()}))
    _report(4, not nonzero, f"S2, S3, S7, CP2, CP3, {compared} bracket constants through degree 20, "
                            f"exact zero expected; nonzero {nonzero[:3]}")


# -- 5 ---------------------------------------------------------------------------


def test_criterion_5_hochschild_vs_loop_homology():
    notes, ok = [], True
    for name, model, m in (("S3", sphere(3), 3), ("CP2", cpn(2), 4)):
        hi = 12
        LP = loop_product(model, m, hi + 2 * m)
        A = FiniteAlgebra.from_model(model, m)
        HH = hochschild_cohomology(A, -12, hi)
        loop_dims = {k: len(LP.basis.labels.get(k + m, [])) for k in range(-12, hi + 1)}
        dims_ok = HH.dims() == loop_dims
        ident = identify_algebras(LoopSide(LP), HochschildSide(hochschild_cohomology(A, -m, hi)),
                                  -12, hi, bottom=-m)
        pairs, bad = ident.check_products(-m, hi)
        ok = ok and dims_ok and not ident.problems and not bad and pairs >= 10
        notes.append(f"{name}: dims {'agree' if dims_ok else 'differ'} on lower degrees [-12, 12], "
                     f"{pairs} product pairs, {len(bad)} disagree")
    _report(5, ok, "; ".join(notes) + "; exact")


# -- 6 ---------------------------------------------------------------------------


def test_criterion_6_cap_product_duality():
    notes, ok = [], True
    for name, L, m in (("S3", lie_s3(), 3), ("M11", lie_m11(), 11)):
        c = fundamental_cycle(L, m)
        U = EnvelopingAlgebra(L, 15 + m + 2)
        for N in (TrivialModule(L), CoadjointModule(U)):
            cap = CapProduct(L, N, c, m)
            iso = all(cap.is_iso(n) for n in range(16))
            chain = all(cap.chain_map_defect(n) is None for n in range(16))
            ok = ok and iso and chain
            notes.append(f"{name}/{N.name}: {'iso' if iso else 'NOT iso'}")
    _report(6, ok, "cap_c rank check on degrees [0, 15]; " + ", ".join(notes))


# -- 7 ---------------------------------------------------------------------------


def test_criterion_7_diagram_suite():
    results = theorem_diagram_checks(lie_s3(), 3, 9)
    ok = len(results) >= 3 and all(r.ok for r in results)
    _report(7, ok, "S3 through degree 9, exact matrices: " + "; ".join(r.line() for r in results))


# -- 8 ---------------------------------------------------------------------------


def test_criterion_8_coformal_example():
    L = lie_m11()
    cf = coformal_path_composition(L, 16)
    g = cf.iterated.alg.gen
    phi = g("zb") + g("zb'") + (g("xb") * g("yb'") - g("xb'") * g("yb")) * Fraction(1, 2)
    exact = (cf.c.values["zb"] == phi
             and all(cf.c.values[bar(n)] == g(bar(n)) + g(prime(bar(n))) for n in "xy")
             and all(cf.c.values[n] == g(n) for n in "xyz"))
    pc = PathCompositionModel(cochain_algebra(L))
    LM, E = pc.loop.total, pc.iterated.total
    compared, differ = 0, []
    for n in range(16):
        HL, HE = LM.H(n), E.H(n)
        for i, z in enumerate(HL.reps):
            compared += 1
            ours = transfer(cf.c(transfer(z, cf.loop.alg)), E.alg)
            if HE.coords(ours) != HE.coords(pc.c(z)):
                differ.append((n, i))
    _report(8, exact and not differ,
            f"phi(zb) {'equals' if exact else 'differs from'} zb + zb' + 1/2 xb yb' - 1/2 xb' yb; "
            f"H(c) agrees on {compared - len(differ)}/{compared} classes through degree 15; exact")


# -- 9 ---------------------------------------------------------------------------


def _loop_properties(P):
    table, m, bad = P.table(), P.m, []
    hdeg = P.hdegree
    for (A, B), v in table.items():
        s = -1 if (hdeg(A) * hdeg(B)) % 2 else 1
        if v != {k: s * c for k, c in P.product(B, A).items()}:
            bad.append(("commutativity", A, B))
    labels = sorted(P.degree_of)
    one = Fraction(1)
    for A in labels:
        for B in labels:
            for C in labels:
                da, db, dc = P.degree_of[A], P.degree_of[B], P.degree_of[C]
                if max(da + db, db + dc, da + db + dc - m) > P.maxdeg:
                    continue
                if (_mul(table, _mul(table, {A: one}, {B: one}), {C: one})
                        != _mul(table, {A: one}, _mul(table, {B: one}, {C: one}))):
                    bad.append(("associativity", A, B, C))
    return bad


def _bracket_properties(S):
    table, deg, bad = S.table(), S.hdegree, []

    def br(u, v):
        if u is None or v is None:
            return None
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                val = table.get((a, b))
                if val is None:
                    return None
                for c, z in val.items():
                    out[c] = out.get(c, 0) + x * y * z
        return {k: w for k, w in out.items() if w}

    for (A, B), v in table.items():
        s = -1 if (deg(A) * deg(B)) % 2 else 1
        if v != {k: -s * c for k, c in table[(B, A)].items()}:
            bad.append(("antisymmetry", A, B))
    one = Fraction(1)
    labels = sorted(S.degree_of)
    for A in labels:
        for B in labels:
            for C in labels:
                a, b, c = {A: one}, {B: one}, {C: one}
                lhs, r1, r2 = br(a, br(b, c)), br(br(a, b), c), br(b, br(a, c))
                if lhs is None or r1 is None or r2 is None:
                    continue
                s = -1 if (deg(A) * deg(B)) % 2 else 1
                rhs = dict(r1)
                for k, w in r2.items():
                    rhs[k] = rhs.get(k, 0) + s * w
                if lhs != {k: w for k, w in rhs.items() if w}:
                    bad.append(("Jacobi", A, B, C))
    return bad


def _fibre_coassociativity(P):
    """(Δ⊗1)Δ = (1⊗Δ)Δ for Δ = path composition modulo V, on generators."""
    E = P.iterated.alg
    names = P.base.alg.names
    T = FreeGCA([(f"{bar(n)}{i}", E.degrees[E.index[bar(n)]]) for i in (1, 2, 3) for n in names])

    def place(i, j):
        return AlgebraMap(E, T, {**{n: T.zero() for n in names},
                                 **{bar(n): T.gen(f"{bar(n)}{i}") for n in names},
                                 **{prime(bar(n)): T.gen(f"{bar(n)}{j}") for n in names}})

    d12 = {n: place(1, 2)(P.c.values[bar(n)]) for n in names}
    d23 = {n: place(2, 3)(P.c.values[bar(n)]) for n in names}
    left = AlgebraMap(E, T, {**{n: T.zero() for n in names}, **{bar(n): d12[n] for n in names},
                             **{prime(bar(n)): T.gen(f"{bar(n)}3") for n in names}})
    right = AlgebraMap(E, T, {**{n: T.zero() for n in names},
                              **{bar(n): T.gen(f"{bar(n)}1") for n in names},
                              **{prime(bar(n)): d23[n] for n in names}})
    return [n for n in names if left(P.c.values[bar(n)]) != right(P.c.values[bar(n)])]


def _shuffle_coassociativity(L, top):
    C = chain_algebra(L)
    for n in range(top + 1):
        for mon in C.basis(n):
            left, right = {}, {}
            for c, a, b in coproduct_terms(C, mon):
                for c2, a1, a2 in coproduct_terms(C, a):
                    left[(a1, a2, b)] = left.get((a1, a2, b), 0) + c * c2
                for c2, b1, b2 in coproduct_terms(C, b):
                    right[(a, b1, b2)] = right.get((a, b1, b2), 0) + c * c2
            if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                return False
    return True


def _cli_json(seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    argv = [sys.executable, "-m", "loopstring.cli", "loop-product", str(MODELS / "cp2.model"),
            "--max-degree", "12", "--format", "json"]
    return subprocess.run(argv, capture_output=True, check=True, env=env).stdout


def test_criterion_9_property_suites():
    failures = []
    for name, model, m in CORPUS:
        top = 2 * m + 4
        model.check_d_squared(top)
        LoopSpaceModel(model).total.check_d_squared(top)
        R = RelativeMultiplicationModel(model)
        R.check(2 * m)
        failures += [(name,) + f for f in _loop_properties(loop_product(model, m, 2 * m + 2))]
        failures += [(name,) + f for f in _bracket_properties(string_bracket(model, m, 12))]
        if gysin_maps(model, top).exactness_defects():
            failures.append((name, "Gysin"))
        if _fibre_coassociativity(PathCompositionModel(model, maxdeg=2 * m)):
            failures.append((name, "path composition coassociativity"))
    for L in (lie_s3(), lie_m11()):
        if not _shuffle_coassociativity(L, 12):
            failures.append((L.name, "shuffle coassociativity"))
        U = EnvelopingAlgebra(L, 10)
        for n in range(9):
            for w in U.basis(n):
                left, right = {}, {}
                for (a, b), c in U.coproduct(w).items():
                    for (a1, a2), c2 in U.coproduct(a).items():
                        left[(a1, a2, b)] = left.get((a1, a2, b), 0) + c * c2
                    for (b1, b2), c2 in U.coproduct(b).items():
                        right[(a, b1, b2)] = right.get((a, b1, b2), 0) + c * c2
                if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                    failures.append((L.name, "UL coassociativity", w))
    first = loop_product(cpn(2), 4, 12).table()
    second = loop_product(cpn(2), 4, 12).table()
    deterministic = first == second and _cli_json(1) == _cli_json(2)
    if not deterministic:
        failures.append(("determinism",))
    _report(9, not failures,
            f"corpus {', '.join(c[0] for c in CORPUS)}: d^2 = 0, loop product commutative and "
            f"associative, bracket antisymmetric with Jacobi, Gysin exact, coproducts coassociative, "
            f"reruns byte-identical; failures {failures[:3]}")
