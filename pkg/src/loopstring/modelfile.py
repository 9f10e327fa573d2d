"""Reading and writing model description files.

A file describes one manifold::

    # complex projective plane
    manifold CP2 {
      dim = 4
      generator x : 2
      generator y : 5
      d y = x^3
    }

Statements may be separated by newlines, spaces or ``;``.  Besides
``dim``, ``generator`` and ``d`` there is an optional
``fundamental_cocycle = <expr>`` and an optional Lie block::

    lie {
      element a : 2
      element b : 2
      element c : 4
      bracket [a, b] = c
      dual a = x            # name of the generator of C^*L dual to s a
    }

An expression is a sum of terms; a term is an optional rational ``p/q``
followed by factors ``name`` or ``name^k`` (an optional ``*`` may separate
them).  Factors are multiplied in the order written, so ``y x`` with both
odd reads as ``-x y``.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import ModelError, SullivanModel
from .gca import AlgebraError, FreeGCA
from .lie import DGLieAlgebra, LieError, check_dgla, cochain_algebra

__all__ = [
    "ModelFileError",
    "ModelSyntaxError",
    "ModelSemanticError",
    "LieBlock",
    "ModelFile",
    "parse_model",
    "format_model",
    "load_model",
]

KEYWORDS = frozenset({
    "manifold", "dim", "generator", "d", "fundamental_cocycle",
    "lie", "element", "bracket", "dual",
})


class ModelFileError(ValueError):
    """Anything wrong with a model file."""


class ModelSyntaxError(ModelFileError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class ModelSemanticError(ModelFileError):
    """A well-formed file describing an invalid model.

    ``name`` is the offending generator or element, ``degree`` the degree
    where the problem shows up (when there is one).
    """

    def __init__(self, msg, name=None, degree=None):
        super().__init__(msg)
        self.name, self.degree = name, degree


# -- tokens ---------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>[{}\[\]=:;,+\-*/^])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str       # "id", "int", "sym" or "eof"
    text: str
    line: int
    col: int


def _tokenize(text):
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            out.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(_Tok("eof", "", line, col))
    return out


# -- raw expressions -------------------------------------------------------------

@dataclass(frozen=True)
class _Term:
    coeff: Fraction
    factors: tuple      # ((name, exponent, token), ...)


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ModelSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def expect_sym(self, s):
        if self.tok.kind != "sym" or self.tok.text != s:
            self.fail(f"expected {s!r}")
        return self.next()

    def expect_kw(self, kw):
        if self.tok.kind != "id" or self.tok.text != kw:
            self.fail(f"expected {kw!r}")
        return self.next()

    def ident(self, what):
        t = self.tok
        if t.kind != "id":
            self.fail(f"expected {what}")
        if t.text in KEYWORDS:
            self.fail(f"expected {what} (keywords cannot be used as names)")
        return self.next()

    def integer(self, what):
        sign = 1
        if self.tok.kind == "sym" and self.tok.text == "-":
            self.next()
            sign = -1
        if self.tok.kind != "int":
            self.fail(f"expected {what}")
        return sign * int(self.next().text)

    def skip_semis(self):
        while self.tok.kind == "sym" and self.tok.text == ";":
            self.next()

    def _starts_factor(self):
        t = self.tok
        return t.kind == "id" and t.text not in KEYWORDS

    def expression(self):
        """Parse ``[±] term (± term)*``; returns a list of _Term."""
        terms = []
        sign = 1
        if self.tok.kind == "sym" and self.tok.text in "+-":
            sign = -1 if self.next().text == "-" else 1
        while True:
            terms.append(self.term(sign))
            if self.tok.kind == "sym" and self.tok.text in ("+", "-"):
                sign = -1 if self.next().text == "-" else 1
                continue
            return terms

    def term(self, sign):
        coeff = Fraction(sign)
        seen = False
        if self.tok.kind == "int":
            num = int(self.next().text)
            den = 1
            if self.tok.kind == "sym" and self.tok.text == "/":
                self.next()
                if self.tok.kind != "int":
                    self.fail("expected a denominator")
                t = self.next()
                den = int(t.text)
                if den == 0:
                    raise ModelSyntaxError("zero denominator", t.line, t.col)
            coeff *= Fraction(num, den)
            seen = True
        factors = []
        while True:
            if self.tok.kind == "sym" and self.tok.text == "*":
                self.next()
                if not self._starts_factor():
                    self.fail("expected a factor after '*'")
            if not self._starts_factor():
                break
            t = self.next()
            exp = 1
            if self.tok.kind == "sym" and self.tok.text == "^":
                self.next()
                if self.tok.kind != "int":
                    self.fail("expected an exponent")
                exp = int(self.next().text)
            factors.append((t.text, exp, t))
        if not seen and not factors:
            self.fail("expected a term")
        return _Term(coeff, tuple(factors))


# -- the model ------------------------------------------------------------------


@dataclass
class LieBlock:
    """A DG Lie algebra as written: elements, brackets, differential, dual names."""

    elements: list = field(default_factory=list)        # [(name, degree)]
    brackets: dict = field(default_factory=dict)        # (a, b) -> {name: Fraction}
    d: dict = field(default_factory=dict)               # a -> {name: Fraction}
    dual: dict = field(default_factory=dict)            # a -> generator name

    def algebra(self, name=None):
        return DGLieAlgebra(self.elements, self.brackets, self.d, name=name,
                            dual_names=self.dual)


@dataclass
class ModelFile:
    """A parsed model file.  ``differentials`` only lists nonzero values."""

    name: str
    dim: int
    generators: list = field(default_factory=list)      # [(name, degree)]
    differentials: dict = field(default_factory=dict)   # name -> Polynomial
    fundamental_cocycle: object = None                  # Polynomial or None
    lie: LieBlock = None

    def algebra(self):
        return FreeGCA(self.generators)

    def sullivan(self):
        """The Sullivan model; taken to be C^*L when only a Lie block is given."""
        if self.generators:
            alg = self.algebra()
            vals = {g: alg.zero() for g in alg.names}
            vals.update(self.differentials)
            return SullivanModel(alg, vals, name=self.name)
        if self.lie is not None:
            return cochain_algebra(self.lie_algebra())
        raise ModelSemanticError(f"manifold {self.name} declares neither generators nor a lie block")

    def lie_algebra(self):
        if self.lie is None:
            raise ModelSemanticError(f"manifold {self.name} has no lie block")
        return self.lie.algebra(self.name)


def _poly(alg, terms, where):
    out = alg.zero()
    for t in terms:
        p = alg.const(t.coeff)
        for name, exp, tok in t.factors:
            if name not in alg.index:
                raise ModelSyntaxError(f"unknown generator {name!r} in {where}", tok.line, tok.col)
            p = p * alg.gen(name) ** exp
        out = out + p
    return out


def _linear(index, terms, where):
    out = {}
    for t in terms:
        if len(t.factors) != 1 or t.factors[0][1] != 1:
            raise ModelSemanticError(f"{where} must be a linear combination of elements")
        name, _, tok = t.factors[0]
        if name not in index:
            raise ModelSyntaxError(f"unknown element {name!r} in {where}", tok.line, tok.col)
        out[name] = out.get(name, 0) + t.coeff
    return {k: v for k, v in out.items() if v}


def parse_model(text):
    """Parse and validate a model file; returns a :class:`ModelFile`."""
    P = _Parser(text)
    P.skip_semis()
    P.expect_kw("manifold")
    name = P.ident("a manifold name").text
    P.expect_sym("{")
    dim = None
    gens, gen_tok = [], {}
    draw = {}       # generator -> (terms, token)
    cocycle = None
    lie = None
    while True:
        P.skip_semis()
        t = P.tok
        if t.kind == "sym" and t.text == "}":
            P.next()
            break
        if t.kind != "id" or t.text not in ("dim", "generator", "d", "fundamental_cocycle", "lie"):
            P.fail("expected dim, generator, d, fundamental_cocycle, lie or '}'")
        kw = P.next().text
        if kw == "dim":
            if dim is not None:
                raise ModelSyntaxError("dim given twice", t.line, t.col)
            P.expect_sym("=")
            dim = P.integer("an integer dimension")
        elif kw == "generator":
            g = P.ident("a generator name")
            P.expect_sym(":")
            deg = P.integer("an integer degree")
            if g.text in gen_tok:
                raise ModelSyntaxError(f"generator {g.text!r} declared twice", g.line, g.col)
            gens.append((g.text, deg))
            gen_tok[g.text] = g
        elif kw == "d":
            g = P.ident("a generator name")
            P.expect_sym("=")
            if g.text in draw:
                raise ModelSyntaxError(f"d {g.text} given twice", g.line, g.col)
            draw[g.text] = (P.expression(), g)
        elif kw == "fundamental_cocycle":
            P.expect_sym("=")
            cocycle = (P.expression(), t)
        else:
            if lie is not None:
                raise ModelSyntaxError("only one lie block is allowed", t.line, t.col)
            lie = _lie_block(P)
    P.skip_semis()
    if P.tok.kind != "eof":
        P.fail("expected end of input after the closing '}'")
    if dim is None:
        raise ModelSemanticError(f"manifold {name} does not declare dim")
    if dim < 0:
        raise ModelSemanticError(f"dim must be nonnegative, got {dim}")

    for g, deg in gens:
        if deg < 1:
            tok = gen_tok[g]
            raise ModelSemanticError(
                f"generator {g} must have degree >= 1 (line {tok.line}, column {tok.col})", g, deg)
    mf = ModelFile(name=name, dim=dim, generators=gens, lie=lie)
    alg = mf.algebra() if gens else None
    for g, (terms, tok) in draw.items():
        if alg is None or g not in alg.index:
            raise ModelSyntaxError(f"d of unknown generator {g!r}", tok.line, tok.col)
        p = _poly(alg, terms, f"d {g}")
        want = dict(gens)[g] + 1
        degs = p.degrees()
        if len(degs) > 1:
            raise ModelSemanticError(
                f"d {g} is inhomogeneous: it has terms of degrees {degs}, expected {want}", g, want)
        if degs and degs[0] != want:
            raise ModelSemanticError(
                f"d {g} has degree {degs[0]} but must have degree {want} = |{g}| + 1", g, want)
        if alg.one in p.terms:
            raise ModelSemanticError(f"d {g} has a constant term", g, want)
        if p:
            mf.differentials[g] = p
    if cocycle is not None:
        terms, tok = cocycle
        if alg is None:
            raise ModelSyntaxError("fundamental_cocycle needs generators", tok.line, tok.col)
        mf.fundamental_cocycle = _poly(alg, terms, "fundamental_cocycle")
    _validate(mf)
    return mf


def _lie_block(P):
    block = LieBlock()
    toks = {}
    raw_br, raw_d = [], []
    P.expect_sym("{")
    while True:
        P.skip_semis()
        t = P.tok
        if t.kind == "sym" and t.text == "}":
            P.next()
            break
        if t.kind != "id" or t.text not in ("element", "bracket", "d", "dual"):
            P.fail("expected element, bracket, d, dual or '}' in the lie block")
        kw = P.next().text
        if kw == "element":
            e = P.ident("an element name")
            P.expect_sym(":")
            deg = P.integer("an integer degree")
            if e.text in toks:
                raise ModelSyntaxError(f"element {e.text!r} declared twice", e.line, e.col)
            toks[e.text] = e
            block.elements.append((e.text, deg))
        elif kw == "bracket":
            P.expect_sym("[")
            a = P.ident("an element name")
            P.expect_sym(",")
            b = P.ident("an element name")
            P.expect_sym("]")
            P.expect_sym("=")
            raw_br.append((a, b, P.expression()))
        elif kw == "d":
            a = P.ident("an element name")
            P.expect_sym("=")
            raw_d.append((a, P.expression()))
        else:
            a = P.ident("an element name")
            P.expect_sym("=")
            block.dual[a.text] = P.ident("a generator name").text
    for a, b, terms in raw_br:
        for x in (a, b):
            if x.text not in toks:
                raise ModelSyntaxError(f"unknown element {x.text!r}", x.line, x.col)
        key = (a.text, b.text)
        if key in block.brackets:
            raise ModelSyntaxError(f"bracket [{a.text}, {b.text}] given twice", a.line, a.col)
        block.brackets[key] = _linear(toks, terms, f"[{a.text}, {b.text}]")
    for a, terms in raw_d:
        if a.text not in toks:
            raise ModelSyntaxError(f"unknown element {a.text!r}", a.line, a.col)
        if a.text in block.d:
            raise ModelSyntaxError(f"d {a.text} given twice", a.line, a.col)
        v = _linear(toks, terms, f"d {a.text}")
        if v:
            block.d[a.text] = v
    for a in block.dual:
        if a not in toks:
            raise ModelSemanticError(f"dual name given for unknown element {a!r}", a)
    return block


def _validate(mf):
    """Semantic checks that need the whole file: d² = 0, Lie axioms, cocycle."""
    if mf.generators:
        try:
            model = mf.sullivan()
        except (ModelError, AlgebraError) as e:
            raise ModelSemanticError(str(e), degree=getattr(e, "degree", None)) from None
        # d² is a derivation, so it vanishes as soon as it vanishes on generators
        for g in model.alg.generators:
            dd = model.dpoly(model.dpoly(model.alg.gen(g.name)))
            if dd:
                raise ModelSemanticError(
                    f"d^2 != 0 on generator {g.name}: d(d {g.name}) = {dd} (degree {g.degree + 2})",
                    g.name, g.degree + 2)
        w = mf.fundamental_cocycle
        if w is not None:
            if w.degrees() != [mf.dim]:
                raise ModelSemanticError(
                    f"fundamental_cocycle must have degree {mf.dim}", degree=mf.dim)
            if model.dpoly(w):
                raise ModelSemanticError("fundamental_cocycle is not a cocycle", degree=mf.dim + 1)
    if mf.lie is not None:
        try:
            L = mf.lie_algebra()
        except LieError as e:
            raise ModelSemanticError(f"lie block: {e}") from None
        report = check_dgla(L)
        if not report.ok:
            raise ModelSemanticError(f"lie block: {report.violations[0]}")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


# -- printing -------------------------------------------------------------------


def _linear_str(vec):
    terms = []
    for name, c in vec.items():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        terms.append((sign, name if a == 1 else f"{a} {name}"))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def format_model(mf):
    """Canonical text of a model file; ``parse_model`` reads it back unchanged."""
    lines = [f"manifold {mf.name} {{", f"  dim = {mf.dim}"]
    for g, deg in mf.generators:
        lines.append(f"  generator {g} : {deg}")
    for g, _ in mf.generators:
        if g in mf.differentials:
            lines.append(f"  d {g} = {mf.differentials[g]}")
    if mf.fundamental_cocycle is not None:
        lines.append(f"  fundamental_cocycle = {mf.fundamental_cocycle}")
    if mf.lie is not None:
        lines.append("  lie {")
        for e, deg in mf.lie.elements:
            lines.append(f"    element {e} : {deg}")
        for (a, b), v in mf.lie.brackets.items():
            lines.append(f"    bracket [{a}, {b}] = {_linear_str(v)}")
        for a, v in mf.lie.d.items():
            lines.append(f"    d {a} = {_linear_str(v)}")
        for a, g in mf.lie.dual.items():
            lines.append(f"    dual {a} = {g}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
