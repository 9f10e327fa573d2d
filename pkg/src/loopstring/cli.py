"""Command-line interface: ``loopstring <command> <model file> --max-degree N``.

Every command builds a result document (a plain dict, see
``docs/result.schema.json``) and prints it as JSON or as a text table.
Exit codes: 0 success, 1 bad input, 2 an internal invariant failed.
"""

import argparse
import json
import sys
from fractions import Fraction

from .cohomology import ModelError, NotQuasiIso
from .complexes import ComplexError
from .gca import AlgebraError
from .lie import LieError, check_dgla, cochain_algebra
from .linalg import SingularMatrix
from .modelfile import ModelFileError, load_model

__all__ = ["main", "run_command", "InputError", "InvariantError"]

FORMAT = "loopstring-result"
VERSION = 1
COMMANDS = ("cohomology", "loop-cohomology", "equivariant-cohomology", "loop-product",
            "string-bracket", "intersection", "hochschild", "check")


class InputError(Exception):
    """Bad command line or bad model; exit code 1."""


class InvariantError(Exception):
    """A computed object failed one of its defining identities; exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _build_parser():
    p = _Parser(prog="loopstring", description="String topology of simply connected "
                "manifolds from Sullivan and Lie models, in exact rational arithmetic.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    helps = {
        "cohomology": "cohomology of M, LM or LM_hS1 (see --space)",
        "loop-cohomology": "H^*(LM) with representatives",
        "equivariant-cohomology": "H^*_S1(LM) with representatives",
        "loop-product": "structure constants of the loop product",
        "string-bracket": "structure constants of the string bracket",
        "intersection": "the intersection morphism to H_*(ΩM)",
        "hochschild": "Hochschild cohomology HH^*(A;A)",
        "check": "validate a model file",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("model", help="model description file")
        sp.add_argument("--max-degree", type=int, required=name != "check",
                        help="highest degree computed")
        sp.add_argument("--format", choices=("json", "table"), default="table")
        if name == "cohomology":
            sp.add_argument("--space", choices=("base", "loop", "equivariant"), default="base")
        if name == "hochschild":
            sp.add_argument("--truncation", type=int, default=None,
                            help="degree J at which UL is truncated (Lie models only)")
            sp.add_argument("--products", action="store_true",
                            help="also list cup-product structure constants")
    return p


# -- document helpers ---------------------------------------------------------------


def _q(c):
    c = Fraction(c)
    return [c.numerator, c.denominator]


def _terms(vec):
    return [{"label": k, "coeff": _q(v)} for k, v in vec.items() if v]


def _doc(args, mf, grading):
    opts = {"max_degree": args.max_degree, "format": args.format}
    for key in ("space", "truncation", "products"):
        if hasattr(args, key):
            opts[key] = getattr(args, key)
    return {
        "format": FORMAT,
        "version": VERSION,
        "command": {"name": args.command, "model_file": args.model,
                    "model": mf.name, "options": opts},
        "truncation": {"max_degree": args.max_degree, "ul_degree": None},
        "grading": grading,
        "dimensions": [],
        "bases": [],
        "structure_constants": [],
        "diagnostics": [],
    }


def _cohomology_doc(doc, model, top):
    for n in range(0, top + 1):
        H = model.H(n)
        doc["dimensions"].append({"degree": n, "dim": H.dim})
        if H.dim:
            doc["bases"].append({"degree": n, "labels": [f"h{n}_{i}" for i in range(H.dim)],
                                 "representatives": [str(r) for r in H.reps]})


def _named_reps(model, basis, n):
    out = []
    for _, coords in basis.classes.get(n, []):
        p = model.alg.zero()
        for i, c in coords.items():
            p = p + model.H(n).reps[i] * c
        out.append(str(p))
    return out


def _table_doc(doc, table, basis, model, shift, lo, hi):
    for n in range(lo, hi + 1):
        labels = basis.labels.get(n, [])
        doc["dimensions"].append({"degree": n - shift, "dim": len(labels)})
        if labels:
            doc["bases"].append({"degree": n - shift, "labels": list(labels),
                                 "representatives": _named_reps(model, basis, n)})
    for (a, b), v in table.items():
        if v:
            doc["structure_constants"].append({"left": a, "right": b, "terms": _terms(v)})


# -- commands ---------------------------------------------------------------------


def _cmd_cohomology(args, mf):
    from .models import LoopSpaceModel
    from .string_topology import EquivariantModel

    space = getattr(args, "space", "base")
    if args.command == "loop-cohomology":
        space = "loop"
    elif args.command == "equivariant-cohomology":
        space = "equivariant"
    base = mf.sullivan()
    if space == "base":
        model, grading = base, "H^n(M)"
    elif space == "loop":
        model, grading = LoopSpaceModel(base).total, "H^n(LM)"
    else:
        model, grading = EquivariantModel(base).total, "H^n_S1(LM)"
    doc = _doc(args, mf, grading)
    _cohomology_doc(doc, model, args.max_degree)
    return doc


def _cmd_loop_product(args, mf):
    from .string_topology import loop_product

    m = mf.dim
    LP = loop_product(mf.sullivan(), m, args.max_degree)
    doc = _doc(args, mf, "loop homology in degree k = H_{k+m}(LM), dual to H^{k+m}(LM)")
    _table_doc(doc, LP.table(), LP.basis, LP.cop.L, m, 0, args.max_degree)
    unit = LP.unit()
    doc["unit"] = _terms(unit)
    return doc


def _cmd_string_bracket(args, mf):
    from .string_topology import string_bracket

    m = mf.dim
    S = string_bracket(mf.sullivan(), m, args.max_degree)
    doc = _doc(args, mf, "equivariant homology in degree k = H^S1_{k+m}(LM), dual to H^{k+m}_S1(LM)")
    _table_doc(doc, S.table(), S.basis, S.eq.total, m, 0, args.max_degree + m)
    return doc


def _cmd_intersection(args, mf):
    from .string_topology import intersection_morphism

    m = mf.dim
    I = intersection_morphism(mf.sullivan(), m, args.max_degree)
    L = I.cop.L
    fa = I.fiber_alg
    doc = _doc(args, mf, "loop homology in degree k -> H_k(ΩM); H_*(ΩM) has the basis dual to monomials of ΛV̄")
    doc["maps"] = []
    for k in range(0, args.max_degree + 1):
        n = k + m
        H = L.H(n)
        doc["dimensions"].append({"degree": k, "dim": H.dim})
        if H.dim:
            doc["bases"].append({"degree": k, "labels": [f"h{n}_{i}" for i in range(H.dim)],
                                 "representatives": [str(r) for r in H.reps]})
        mons = fa.basis(k)
        for i, row in sorted(I.homology_matrix(n).items()):
            vec = {fa.mon_str(mons[j]): c for j, c in sorted(row.items())}
            doc["maps"].append({"source": f"h{n}_{i}", "degree": k, "terms": _terms(vec)})
    return doc


def _cmd_hochschild(args, mf):
    m = mf.dim
    lo, hi = -m, args.max_degree
    doc = _doc(args, mf, "lower degree k = HH^{-k}, matched with loop homology in degree k")
    if mf.lie is not None:
        from .lie_models import lie_hochschild

        h = lie_hochschild(mf.lie_algebra(), m, lo, hi, J=args.truncation)
        doc["truncation"]["ul_degree"] = h.J
        doc["diagnostics"].append(f"computed as H^*(L;(UL)_a) with UL truncated at degree {h.J}")
        for k, d in h.dims.items():
            doc["dimensions"].append({"degree": k, "dim": d})
        if not h.stable:
            raise InvariantError(
                f"dimensions change between truncation {h.J} and {h.J + 2} in degrees "
                f"{h.unstable_degrees()}; pass a larger --truncation")
        return doc
    from .hochschild import FiniteAlgebra, hochschild_cohomology

    if args.truncation is not None:
        raise InputError("--truncation only applies to models with a lie block")
    base = mf.sullivan()
    A = FiniteAlgebra.from_model(base, m)
    HH = hochschild_cohomology(A, lo, hi)
    doc["diagnostics"].append("computed for A = H^*(M); this is HH^*(C^*M) when M is formal")
    dims = HH.dims()
    for k, d in dims.items():
        doc["dimensions"].append({"degree": k, "dim": d})
        if d:
            doc["bases"].append({"degree": k, "labels": [f"hh{k}_{i}" for i in range(d)]})
    if args.products:
        for (k1, i, k2, j), v in HH.structure_constants().items():
            if v:
                vec = {f"hh{k1 + k2}_{t}": c for t, c in sorted(v.items())}
                doc["structure_constants"].append(
                    {"left": f"hh{k1}_{i}", "right": f"hh{k2}_{j}", "terms": _terms(vec)})
    return doc


def _cmd_check(args, mf):
    from .string_topology import NotPoincareDuality, poincare_data

    if args.max_degree is None:
        args.max_degree = 2 * mf.dim + 1
    doc = _doc(args, mf, "H^n(M)")
    checks = []
    base = mf.sullivan()
    checks.append({"name": "d^2 = 0", "ok": True, "detail": "checked on generators"})
    sc = all(d >= 2 for d in base.alg.degrees)
    checks.append({"name": "simply connected", "ok": sc,
                   "detail": "all generators in degree >= 2" if sc else "a generator has degree 1"})
    checks.append({"name": "minimal", "ok": base.is_minimal,
                   "detail": "d(V) lies in the decomposables" if base.is_minimal
                   else "some differential has a linear term"})
    try:
        pd = poincare_data(base, mf.dim)
        ok, detail = True, f"H^{mf.dim} is spanned by {pd.omega}"
        w = mf.fundamental_cocycle
        if w is not None and not base.H(mf.dim).coords(w):
            ok, detail = False, "fundamental_cocycle is exact"
    except NotPoincareDuality as e:
        ok, detail = False, str(e)
    checks.append({"name": "Poincaré duality", "ok": ok, "detail": detail})
    if mf.lie is not None:
        L = mf.lie_algebra()
        rep = check_dgla(L)
        checks.append({"name": "DG Lie algebra axioms", "ok": rep.ok,
                       "detail": f"{rep.checked} identities checked"})
        if mf.generators:
            C = cochain_algebra(L)
            a = [base.H(n).dim for n in range(args.max_degree + 1)]
            b = [C.H(n).dim for n in range(args.max_degree + 1)]
            checks.append({"name": "C^*L has the cohomology of the Sullivan model",
                           "ok": a == b, "detail": f"Betti numbers {a} vs {b}"})
    _cohomology_doc(doc, base, args.max_degree)
    doc["checks"] = checks
    failed = [c["name"] for c in checks if not c["ok"] and c["name"] != "minimal"]
    if failed:
        doc["diagnostics"].append("failed: " + ", ".join(failed))
    return doc


_COMMANDS = {
    "cohomology": _cmd_cohomology,
    "loop-cohomology": _cmd_cohomology,
    "equivariant-cohomology": _cmd_cohomology,
    "loop-product": _cmd_loop_product,
    "string-bracket": _cmd_string_bracket,
    "intersection": _cmd_intersection,
    "hochschild": _cmd_hochschild,
    "check": _cmd_check,
}


# -- rendering --------------------------------------------------------------------


def _fmt_q(pair):
    p, q = pair
    return str(p) if q == 1 else f"{p}/{q}"


def _fmt_vec(terms):
    if not terms:
        return "0"
    parts = []
    for t in terms:
        c = _fmt_q(t["coeff"])
        parts.append(t["label"] if c == "1" else f"-{t['label']}" if c == "-1"
                     else f"{c} {t['label']}")
    return " + ".join(parts).replace("+ -", "- ")


def render_table(doc):
    cmd = doc["command"]
    out = [f"{cmd['name']} {cmd['model']} (max degree {doc['truncation']['max_degree']})",
           f"grading: {doc['grading']}"]
    if doc["truncation"]["ul_degree"] is not None:
        out.append(f"UL truncated at degree {doc['truncation']['ul_degree']}")
    if doc["dimensions"]:
        out.append("")
        out.append("degree  dim")
        out += [f"{d['degree']:>6}  {d['dim']}" for d in doc["dimensions"]]
    for b in doc["bases"]:
        reps = b.get("representatives")
        for i, lab in enumerate(b["labels"]):
            line = f"  [{b['degree']}] {lab}"
            if reps:
                line += f" = {reps[i]}"
            out.append(line)
    if "unit" in doc:
        out.append(f"unit: {_fmt_vec(doc['unit'])}")
    if doc["structure_constants"]:
        out.append("")
        op = "[{a}, {b}]" if cmd["name"] == "string-bracket" else \
             "{a} . {b}" if cmd["name"] == "loop-product" else "{a} u {b}"
        for s in doc["structure_constants"]:
            out.append(f"{op.format(a=s['left'], b=s['right'])} = {_fmt_vec(s['terms'])}")
    for m in doc.get("maps", []):
        out.append(f"I({m['source']}) = {_fmt_vec(m['terms'])}")
    for c in doc.get("checks", []):
        out.append(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']}: {c['detail']}")
    for d in doc["diagnostics"]:
        out.append(f"note: {d}")
    return "\n".join(out) + "\n"


def render_json(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- entry points -----------------------------------------------------------------


def run_command(argv):
    """Run one command; returns (document or None, exit code, error message or None)."""
    try:
        args = _build_parser().parse_args(argv)
        if args.max_degree is not None and args.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")
        try:
            mf = load_model(args.model)
        except OSError as e:
            raise InputError(f"cannot read {args.model}: {e.strerror}") from None
        doc = _COMMANDS[args.command](args, mf)
    except (InputError, ModelFileError, ModelError, AlgebraError, LieError) as e:
        return None, 1, _describe(e)
    except (InvariantError, ComplexError, NotQuasiIso, SingularMatrix) as e:
        return None, 2, _describe(e)
    except ArithmeticError as e:          # e.g. a model without Poincaré duality
        return None, 1, _describe(e)
    failed = [c["name"] for c in doc.get("checks", [])
              if not c["ok"] and c["name"] != "minimal"]
    if failed:
        return doc, 1, "check failed: " + ", ".join(failed)
    return doc, 0, None


def _describe(e):
    msg = str(e)
    deg = getattr(e, "degree", None)
    if deg is not None and "degree" not in msg:
        msg += f" (degree {deg})"
    return msg


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if argv in ([], ["-h"], ["--help"]):
        _build_parser().print_help()
        return 0 if argv else 1
    if "-h" in argv or "--help" in argv:
        try:
            _build_parser().parse_args(argv)
        except SystemExit as e:
            return e.code or 0
    doc, code, err = run_command(argv)
    if doc is not None:
        json_out = doc["command"]["options"]["format"] == "json"
        sys.stdout.write(render_json(doc) if json_out else render_table(doc))
    if err is not None:
        sys.stderr.write(f"loopstring: error: {err}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
