"""Lie models of LM and LM ×_M LM compared with CE complexes with coefficients.

For a Lie model L of M, L^S = L ⊕ L̄ models LM and L^T = L ⊕ L̄₁ ⊕ L̄₂ models
LM ×_M LM.  The PBW symmetrization φ: ∧sL̄ -> UL identifies

    C_*(L^S) ≅ C_*(L; (UL)_a)            (:func:`symmetrization_map`)
    C^*(L^S) ≅ C^*(L; (UL)_a^∨)          (:func:`loop_cochain_map`, one copy)
    C^*(L^T) ≅ C^*(L; (UL)_a^∨ ⊗ (UL)_a^∨)  (two copies)

The cochain maps start from the Sullivan algebras :func:`cochain_algebra`
builds, so they can be composed with the Sullivan-side constructions of
:mod:`loopstring.string_topology`.
"""

from fractions import Fraction

from .ce import (
    AdjointModule,
    CEChains,
    CECochains,
    CoadjointModule,
    TensorModule,
    TrivialModule,
    chain_differential,
    multiplication_dual,
)
from .cohomology import CDGAMorphism
from .complexes import ComplexError, GradedComplex, LinearMap
from .lie import (
    EnvelopingAlgebra,
    LieError,
    chain_algebra,
    chain_word,
    cochain_algebra,
    construct_LS,
    construct_LT,
    coproduct_terms,
    normalize_indices,
    pairing_value,
)
from .linalg import Echelon, axpy
from .models import bar, prime

__all__ = [
    "LieLoopModel",
    "symmetrization_map",
    "check_symmetrization",
    "loop_cochain_map",
    "LoopCochainMap",
    "CoformalPathComposition",
    "coformal_path_composition",
    "LieHochschild",
    "lie_hochschild",
]


def _sign(k):
    return -1 if k % 2 else 1


_RENAMES = (lambda n: n, bar, lambda n: prime(bar(n)))


class LieLoopModel:
    """L^X = L plus ``copies`` bar copies (0, 1 or 2), with bookkeeping.

    ``split(mon)`` takes a monomial of ∧s(L^X) to (sign, L-part, letter
    lists per copy) with mon = sign · (L-part)(copy 1)(copy 2).
    """

    def __init__(self, L, copies):
        if copies not in (0, 1, 2):
            raise ValueError("copies must be 0, 1 or 2")
        self.L = L
        self.copies = copies
        self.LX = (L, construct_LS(L), construct_LT(L))[copies]
        self.C = chain_algebra(L)
        self.CX = chain_algebra(self.LX)
        self.where = {}
        for k in range(copies + 1):
            for i, nm in enumerate(L.names):
                self.where[self.LX.index[_RENAMES[k](nm)]] = (k, i)
        self.back = {v: j for j, v in self.where.items()}
        self._split = {}

    def split(self, mon):
        r = self._split.get(mon)
        if r is not None:
            return r
        parts = [[] for _ in range(self.copies + 1)]
        for j in chain_word(self.CX, mon):
            k, i = self.where[j]
            parts[k].append(i)
        parts = [sorted(p) for p in parts]
        word = [self.back[(k, i)] for k in range(self.copies + 1) for i in parts[k]]
        s, mon2 = normalize_indices(self.CX, word)
        assert mon2 == mon
        lmon = [0] * self.C.ngens
        for i in parts[0]:
            lmon[i] += 1
        r = (s, tuple(lmon), [tuple(p) for p in parts[1:]])
        self._split[mon] = r
        return r

    def join(self, lmon, letters):
        """Inverse of :meth:`split`: (sign, monomial of ∧s(L^X)) or None."""
        word = [self.back[(0, i)] for i in chain_word(self.C, lmon)]
        for k, ls in enumerate(letters, start=1):
            word += [self.back[(k, i)] for i in sorted(ls)]
        return normalize_indices(self.CX, word)


def symmetrization_map(L, U, J=None, chain_max=None):
    """1⊗φ: C_*(L^S) -> C_*(L; (UL)_a), c ∧ v̄ ↦ c ⊗ sym(v).

    Returns (source, target, map); the source is truncated so that its
    L̄-part has degree at most J.
    """
    J = U.maxdeg if J is None else J
    model = LieLoopModel(L, 1)
    N = AdjointModule(U, J)
    tgt = CEChains(L, N, chain_max)
    C, CX = model.C, model.CX

    def src_basis(n):
        out = []
        for mon in CX.basis(n):
            s, lmon, (v,) = model.split(mon)
            if C.mon_degree(lmon) <= tgt.chain_max and U.word_degree(v) <= J:
                out.append((mon, "1"))
        return out

    def src_d(lab):
        return {(m2, "1"): c for m2, c in chain_differential(model.LX, lab[0]).items()}

    src = GradedComplex(src_basis, src_d, -1, name="C_*(L^S)")

    def on_label(lab):
        mon, _ = lab
        s, lmon, (v,) = model.split(mon)
        return {(lmon, w): s * c for w, c in U.sym(v).items()}

    return src, tgt, LinearMap(src, tgt, on_label, name="1⊗φ")


def check_symmetrization(L, U, lo, hi, chain_max=None):
    """Check 1⊗φ in degrees [lo, hi]: chain map, bijective, coalgebra map.

    Returns a list of failures (empty when everything holds).
    """
    src, tgt, phi = symmetrization_map(L, U, chain_max=chain_max)
    model = LieLoopModel(L, 1)
    C, CX = model.C, model.CX
    bad = []
    for n in range(lo, hi + 1):
        if n <= U.maxdeg and phi.commutator_defect(n) is not None:
            bad.append(f"1⊗φ does not commute with d in degree {n}")
        cols = [tgt.to_indices(phi.label(lab), n) for lab in src.basis(n)]
        e = Echelon()
        for col in cols:
            e.insert(col)
        if len(e) != len(cols) or len(cols) != tgt.dim(n):
            bad.append(f"1⊗φ is not bijective in degree {n}")
        for lab in src.basis(n):
            mon = lab[0]
            # (φ⊗φ)Δ versus Δφ, both in (∧sL ⊗ UL) ⊗ (∧sL ⊗ UL)
            lhs = {}
            for c, left, right in coproduct_terms(CX, mon):
                for (l1, w1), a in phi.label((left, "1")).items():
                    for (l2, w2), b in phi.label((right, "1")).items():
                        key = (l1, w1, l2, w2)
                        lhs[key] = lhs.get(key, 0) + c * a * b
            rhs = {}
            for (lm, w), a in phi.label(lab).items():
                for c1, left, right in coproduct_terms(C, lm):
                    for (w1, w2), c2 in U.coproduct(w).items():
                        # (c'⊗c'')⊗(w'⊗w'') -> (c'⊗w')⊗(c''⊗w'')
                        s = _sign(C.mon_degree(right) * U.word_degree(w1))
                        key = (left, w1, right, w2)
                        rhs[key] = rhs.get(key, 0) + s * a * c1 * c2
            diff = dict(lhs)
            axpy(diff, -1, rhs)
            if diff:
                bad.append(f"1⊗φ is not a coalgebra map on {CX.mon_str(mon)}")
                break
    return bad


class LoopCochainMap:
    """ι: C^*(L^X) -> C^*(L; N) for X = ∅, S, T (copies 0, 1, 2).

    N is Q, (UL)_a^∨ or (UL)_a^∨ ⊗ (UL)_a^∨.  A cochain of the Sullivan algebra
    C^*(L^X) is read as a functional on ∧s(L^X), composed with the inverse
    of 1⊗φ(⊗φ) and curried into the coefficients; the dual of w₁⊗w₂ is
    (-1)^{|w₁||w₂|} w₁^∨⊗w₂^∨.  ``sullivan`` is C^*(L^X), ``target`` the CE
    cochain complex; the map is a bijection with inverse :meth:`inverse`.
    """

    def __init__(self, L, copies, U, J=None, chain_max=None):
        self.U = U
        self.J = U.maxdeg if J is None else J
        self.copies = copies
        self.model = model = LieLoopModel(L, copies)
        self.sullivan = sul = cochain_algebra(model.LX)
        W = sul.alg
        self._widx = [W.index[sul.lie_to_cochain[nm]] for nm in model.LX.names]
        if copies == 0:
            N = TrivialModule(L)
        elif copies == 1:
            N = CoadjointModule(U, self.J)
        else:
            Nd = CoadjointModule(U, self.J)
            N = TensorModule(Nd, Nd)
        self.module = N
        self.target = CECochains(L, N, chain_max)
        self._cache = {}

    def _coefficient_labels(self, letters):
        """{module label: coefficient of the curried functional} for fixed letters."""
        U = self.U
        if self.copies == 0:
            return {"1": Fraction(1)}
        cols = []
        for v in letters:
            col = {}
            for w in U.basis(U.word_degree(v)):
                t = _sym_coord(U, w, v)
                if t:
                    col[w] = t
            cols.append(col)
        if self.copies == 1:
            return {("*", w): t for w, t in cols[0].items()}
        out = {}
        for w1, t1 in cols[0].items():
            for w2, t2 in cols[1].items():
                k = _sign(U.word_degree(w1) * U.word_degree(w2))
                out[(("*", w1), ("*", w2))] = k * t1 * t2
        return out

    def on_monomial(self, wmon):
        r = self._cache.get(wmon)
        if r is None:
            CX = self.model.CX
            mon = tuple(wmon[self._widx[j]] for j in range(CX.ngens))
            s, lmon, letters = self.model.split(mon)
            val = s * pairing_value(CX, mon)
            r = {(lmon, n): val * t for n, t in self._coefficient_labels(letters).items()}
            self._cache[wmon] = r
        return r

    def __call__(self, poly):
        out = {}
        for wmon, c in poly.terms.items():
            axpy(out, c, self.on_monomial(wmon))
        return out

    def _letters_of(self, lab):
        n = lab[1]
        if self.copies == 0:
            return []
        if self.copies == 1:
            return [n[1]]
        return [n[0][1], n[1][1]]

    def inverse(self, vec):
        """The Sullivan cochain whose image is ``vec``."""
        U, model, CX = self.U, self.model, self.model.CX
        W = self.sullivan.alg
        groups = {}
        for lab, c in vec.items():
            degs = tuple(U.word_degree(w) for w in self._letters_of(lab))
            groups.setdefault((lab[0], degs), {})[lab] = c
        out = {}
        for (lmon, degs), part in groups.items():
            for letters in _letter_choices(U, degs):
                val = sum((c * part.get((lmon, n), 0)
                           for n, c in self._evaluation_labels(letters).items()), Fraction(0))
                if not val:
                    continue
                r = model.join(lmon, letters)
                if r is None:
                    raise LieError("cochain is not in the image of the curried map")
                s, mon = r
                wm = [0] * W.ngens
                for j, e in enumerate(mon):
                    wm[self._widx[j]] = e
                key = tuple(wm)
                out[key] = out.get(key, 0) + val / (s * pairing_value(CX, mon))
        return W.poly({k: v for k, v in out.items() if v})

    def _evaluation_labels(self, letters):
        """Weights that evaluate a curried cochain on c ⊗ sym(v₁) (⊗ sym(v₂))."""
        U = self.U
        if self.copies == 0:
            return {"1": Fraction(1)}
        if self.copies == 1:
            return {("*", w): c for w, c in U.sym(letters[0]).items()}
        out = {}
        for w1, c1 in U.sym(letters[0]).items():
            for w2, c2 in U.sym(letters[1]).items():
                k = _sign(U.word_degree(w1) * U.word_degree(w2))
                out[(("*", w1), ("*", w2))] = k * c1 * c2
        return out


def loop_cochain_map(L, copies, U, J=None, chain_max=None):
    return LoopCochainMap(L, copies, U, J, chain_max)


def _letter_choices(U, degs):
    if not degs:
        yield []
        return
    for v in U.basis(degs[0]):
        for rest in _letter_choices(U, degs[1:]):
            yield [v] + rest


def _sym_coord(U, w, v):
    """Coefficient of sym(v) when the PBW word w is written on the symmetrized basis."""
    return U.to_sym({w: Fraction(1)}).get(tuple(sorted(v)), 0)


class CoformalPathComposition:
    """c = id⊗Δ: C^*(L^S) -> C^*(L^T) for L with zero differential.

    Δ is the coproduct of ∧V̄ ≅ (UL)^∨ dual to the product of UL; on
    cochains this is C^*(L;μ^∨) read through the curried identifications.
    ``loop`` and ``iterated`` are the Sullivan algebras C^*(L^S) = ΛV⊗ΛV̄
    and C^*(L^T) = ΛV⊗ΛV̄⊗ΛV̄'; ``c`` is the CDGA morphism between them.
    """

    def __init__(self, L, maxdeg):
        if any(L.d_basis(i) for i in range(L.dim_total)):
            raise LieError("coformal path composition needs L with zero differential; "
                           "use path_composition_model for the general case")
        self.L = L
        self.U = EnvelopingAlgebra(L, maxdeg)
        self.iota_S = LoopCochainMap(L, 1, self.U)
        self.iota_T = LoopCochainMap(L, 2, self.U)
        self.loop = self.iota_S.sullivan
        self.iterated = self.iota_T.sullivan
        mu = multiplication_dual(self.iota_S.module, self.iota_T.module)
        W = self.loop.alg
        vals = {}
        for g in W.generators:
            f = self.iota_S(W.gen(g.name))
            image = {}
            for (mon, n), c in f.items():
                for n2, c2 in mu.label(n).items():
                    key = (mon, n2)
                    image[key] = image.get(key, 0) + c * c2
            vals[g.name] = self.iota_T.inverse(image)
        self.c = CDGAMorphism(self.loop, self.iterated, vals)

    def coproduct(self, name):
        """Δ on the generator ``name`` of V̄, as a polynomial in V̄⊗V̄'."""
        return self.c.values[name]


def coformal_path_composition(L, maxdeg):
    return CoformalPathComposition(L, maxdeg)


class LieHochschild:
    """HH^*(UL; UL) as H^*(L; (UL)_a), reported in ℍ-degrees k = -n.

    UL is truncated at degree J (default ``hi + m + 2``).  The same window
    is recomputed with J + 2; ``stable`` is False when the two disagree,
    which means J was too small for the window.
    """

    def __init__(self, L, m, lo, hi, J=None, chain_max=None):
        self.L, self.m = L, m
        self.lo, self.hi = lo, hi
        self.J = hi + m + 2 if J is None else J
        self.chain_max = chain_max
        self.dims = self._dims(self.J)
        self.check_dims = self._dims(self.J + 2)
        self.stable = self.dims == self.check_dims

    def _dims(self, J):
        U = EnvelopingAlgebra(self.L, J)
        cx = CECochains(self.L, AdjointModule(U, J), self.chain_max)
        try:
            return {k: cx.homology(-k).dim for k in range(self.lo, self.hi + 1)}
        except ComplexError:
            raise LieError(f"truncation J = {J} is too small for the window "
                           f"[{self.lo}, {self.hi}]") from None

    def unstable_degrees(self):
        return [k for k in self.dims if self.dims[k] != self.check_dims[k]]


def lie_hochschild(L, m, lo, hi, J=None, chain_max=None):
    return LieHochschild(L, m, lo, hi, J, chain_max)
