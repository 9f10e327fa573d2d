"""Chevalley–Eilenberg chains and cochains with coefficients, and the cap product.

C_*(L;N) = ∧sL ⊗ N has basis labels ``(mon, n)`` with ``mon`` a monomial of
:func:`loopstring.lie.chain_algebra` and ``n`` a basis label of the module N.
C^*(L;N) = Hom_UL(C_*(L;UL), N) ≅ Hom(∧sL, N) uses the same labels, read as
the map sending ``mon`` to ``n`` and every other monomial to 0.  Chains are
graded by lower degree |mon| + |n|; cochains by upper degree |mon| - |n|.
"""

from fractions import Fraction

from .complexes import ComplexError, GradedComplex, LinearMap
from .linalg import Echelon, axpy
from .lie import (
    EnvelopingAlgebra,
    LieError,
    chain_algebra,
    chain_word,
    coproduct_terms,
    normalize_indices,
    pairing_value,
)

__all__ = [
    "chain_differential",
    "removal_terms",
    "LieModule",
    "TrivialModule",
    "LeftRegularModule",
    "AdjointModule",
    "CoadjointModule",
    "TensorModule",
    "ModuleMap",
    "multiplication_dual",
    "augmentation_dual",
    "check_module",
    "CEChains",
    "CECochains",
    "ce_chains",
    "ce_cochains",
    "fundamental_cycle",
    "CapProduct",
    "cap_product",
    "diagonal_chain_map",
    "TensorComplex",
]


def _sign(k):
    return -1 if k % 2 else 1


def _accumulate(out, c, word, alg):
    r = normalize_indices(alg, word)
    if r is None:
        return
    s, mon = r
    v = out.get(mon, 0) + s * c
    if v:
        out[mon] = v
    else:
        out.pop(mon, None)


def chain_differential(L, mon):
    """(d_0 + d_1)(mon) in C_*L, as {monomial: coeff}."""
    cache = L.__dict__.setdefault("_ce_d", {})
    r = cache.get(mon)
    if r is not None:
        return r
    C = chain_algebra(L)
    w = chain_word(C, mon)
    sdeg = [C.degrees[i] for i in w]
    out = {}
    # d_0: -Σ (-1)^{Σ_{j<i}|sx_j|} ... s(d x_i) ...
    for pos, i in enumerate(w):
        dx = L.d_basis(i)
        if not dx:
            continue
        s = -_sign(sum(sdeg[:pos]))
        for k, c in dx.items():
            _accumulate(out, s * c, w[:pos] + [k] + w[pos + 1:], C)
    # d_1: Σ_{i<j} (-1)^{e_ij} s[x_i, x_j] ∧ (rest)
    k = len(w)
    for a in range(k):
        for b in range(a + 1, k):
            br = L.br(w[a], w[b])
            if not br:
                continue
            e = sdeg[a] * (1 + sum(sdeg[:a])) + sdeg[b] * (sum(sdeg[:b]) - sdeg[a])
            s = _sign(e)
            rest = [w[t] for t in range(k) if t != a and t != b]
            for kk, c in br.items():
                _accumulate(out, s * c, [kk] + rest, C)
    cache[mon] = out
    return out


def removal_terms(L, mon):
    """Terms ε_i·(mon without sx_i) ⊗ x_i of the coefficient part of d_1.

    ε_i = (-1)^{Σ_j|sx_j| + |x_i| + |sx_i|Σ_{j>i}|sx_j|}; returns a list of
    (coeff, monomial, i).
    """
    cache = L.__dict__.setdefault("_ce_rm", {})
    r = cache.get(mon)
    if r is not None:
        return r
    C = chain_algebra(L)
    w = chain_word(C, mon)
    sdeg = [C.degrees[i] for i in w]
    total = sum(sdeg)
    acc = {}
    for pos, i in enumerate(w):
        e = total + L.degrees[i] + sdeg[pos] * sum(sdeg[pos + 1:])
        res = normalize_indices(C, w[:pos] + w[pos + 1:])
        if res is None:
            continue
        s, m2 = res
        key = (m2, i)
        acc[key] = acc.get(key, 0) + s * _sign(e)
    r = [(c, m2, i) for (m2, i), c in acc.items() if c]
    cache[mon] = r
    return r


# -- modules -------------------------------------------------------------------


class LieModule:
    """A left dg L-module with finite bases in each degree.

    Subclasses provide ``basis(n)``, ``degree(label)``, ``act(i, label)``
    (action of the i-th basis element of L), ``d_label(label)`` and the
    degree bounds ``lo``/``hi`` outside which the basis is empty.
    """

    name = "N"

    def __init__(self, L):
        self.L = L
        self._act = {}
        self._dl = {}

    def act_vec(self, i, vec):
        out = {}
        for lab, c in vec.items():
            key = (i, lab)
            r = self._act.get(key)
            if r is None:
                r = {k: Fraction(v) for k, v in self.act(i, lab).items() if v}
                self._act[key] = r
            axpy(out, c, r)
        return out

    def act_lie(self, u, vec):
        out = {}
        for i, c in u.items():
            axpy(out, c, self.act_vec(i, vec))
        return out

    def d_vec(self, vec):
        out = {}
        for lab, c in vec.items():
            r = self._dl.get(lab)
            if r is None:
                r = {k: Fraction(v) for k, v in self.d_label(lab).items() if v}
                self._dl[lab] = r
            axpy(out, c, r)
        return out

    def d_label(self, lab):
        return {}

    def right_act_vec(self, vec, i):
        """n·x := -(-1)^{|n||x|} x·n."""
        out = {}
        dx = self.L.degrees[i]
        for lab, c in vec.items():
            s = -_sign(self.degree(lab) * dx)
            axpy(out, s * c, self.act_vec(i, {lab: 1}))
        return out

    def degrees(self):
        return range(self.lo, self.hi + 1)


class TrivialModule(LieModule):
    """Q in degree 0 with the trivial action."""

    name = "Q"
    lo = hi = 0

    def basis(self, n):
        return ["1"] if n == 0 else []

    def degree(self, lab):
        return 0

    def act(self, i, lab):
        return {}


class _ULModule(LieModule):
    def __init__(self, U, J=None):
        super().__init__(U.L)
        self.U = U
        self.J = U.maxdeg if J is None else J


class LeftRegularModule(_ULModule):
    """UL with x·u = xu (truncated at degree J)."""

    name = "UL"

    @property
    def lo(self):
        return 0

    @property
    def hi(self):
        return self.J

    def basis(self, n):
        return list(self.U.basis(n)) if 0 <= n <= self.J else []

    def degree(self, w):
        return self.U.word_degree(w)

    def act(self, i, w):
        return self.U.mul_words((i,), w)

    def d_label(self, w):
        return self.U.d({w: 1})


class AdjointModule(LeftRegularModule):
    """(UL)_a: x·u = [x, u]."""

    name = "(UL)_a"

    def act(self, i, w):
        return self.U.ad(i, {w: 1})


class CoadjointModule(_ULModule):
    """(UL)_a^∨ with (l·f)(x) = -(-1)^{|l||f|} f([l, x]).

    Labels are ``("*", w)`` for the dual basis, in degree -|w|.
    """

    name = "(UL)_a^∨"

    def __init__(self, U, J=None):
        super().__init__(U, J)
        self._adT = {}
        self._dT = {}

    @property
    def lo(self):
        return -self.J

    @property
    def hi(self):
        return 0

    def basis(self, n):
        return [("*", w) for w in self.U.basis(-n)] if -self.J <= n <= 0 else []

    def degree(self, lab):
        return -self.U.word_degree(lab[1])

    def _ad_transpose(self, i, t):
        """{target word of degree t: {source word: coeff}} for ad(x_i)."""
        key = (i, t)
        r = self._adT.get(key)
        if r is None:
            r = {}
            src = t - self.L.degrees[i]
            if src >= 0:
                for x in self.U.basis(src):
                    for w, c in self.U.ad(i, {x: 1}).items():
                        r.setdefault(w, {})[x] = c
            self._adT[key] = r
        return r

    def act(self, i, lab):
        w = lab[1]
        t = self.U.word_degree(w)
        s = -_sign(self.L.degrees[i] * t)
        col = self._ad_transpose(i, t).get(w, {})
        return {("*", x): s * c for x, c in col.items()}

    def d_label(self, lab):
        # (df)(x) = -(-1)^{|f|} f(dx)
        w = lab[1]
        t = self.U.word_degree(w)
        if t + 1 > self.J:
            return {}
        r = self._dT.get(t)
        if r is None:
            r = {}
            for x in self.U.basis(t + 1):
                for y, c in self.U.d({x: 1}).items():
                    r.setdefault(y, {})[x] = c
            self._dT[t] = r
        s = -_sign(t)
        return {("*", x): s * c for x, c in r.get(w, {}).items()}


class TensorModule(LieModule):
    """N1 ⊗ N2 with the diagonal action and Koszul signs; labels (n1, n2)."""

    def __init__(self, N1, N2):
        super().__init__(N1.L)
        self.N1, self.N2 = N1, N2
        self.name = f"{N1.name}⊗{N2.name}"
        self.lo = N1.lo + N2.lo
        self.hi = N1.hi + N2.hi

    def basis(self, n):
        out = []
        for a in self.N1.degrees():
            b = n - a
            if self.N2.lo <= b <= self.N2.hi:
                for x in self.N1.basis(a):
                    for y in self.N2.basis(b):
                        out.append((x, y))
        return out

    def degree(self, lab):
        return self.N1.degree(lab[0]) + self.N2.degree(lab[1])

    def act(self, i, lab):
        x, y = lab
        out = {}
        for x2, c in self.N1.act_vec(i, {x: 1}).items():
            out[(x2, y)] = out.get((x2, y), 0) + c
        s = _sign(self.L.degrees[i] * self.N1.degree(x))
        for y2, c in self.N2.act_vec(i, {y: 1}).items():
            out[(x, y2)] = out.get((x, y2), 0) + s * c
        return out

    def d_label(self, lab):
        x, y = lab
        out = {}
        for x2, c in self.N1.d_vec({x: 1}).items():
            out[(x2, y)] = out.get((x2, y), 0) + c
        s = _sign(self.N1.degree(x))
        for y2, c in self.N2.d_vec({y: 1}).items():
            out[(x, y2)] = out.get((x, y2), 0) + s * c
        return out


class ModuleMap:
    """A degree-0 linear map g: N -> P given on labels."""

    def __init__(self, source, target, on_label, name=None):
        self.source = source
        self.target = target
        self._fn = on_label
        self.name = name
        self._cache = {}

    def label(self, lab):
        r = self._cache.get(lab)
        if r is None:
            r = {k: Fraction(v) for k, v in self._fn(lab).items() if v}
            self._cache[lab] = r
        return r

    def __call__(self, vec):
        out = {}
        for lab, c in vec.items():
            axpy(out, c, self.label(lab))
        return out


def multiplication_dual(Nd, Nd2=None):
    """μ^∨: (UL)^∨ -> (UL)^∨ ⊗ (UL)^∨, (μ^∨f)(x⊗y) = f(xy).

    With (f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)g(y) the coefficient of x^*⊗y^* is
    (-1)^{|x||y|} f(xy).
    """
    U = Nd.U
    T = Nd2 or TensorModule(Nd, Nd)
    cache = {}

    def transpose(t):
        r = cache.get(t)
        if r is None:
            r = {}
            for a in range(0, t + 1):
                for x in U.basis(a):
                    for y in U.basis(t - a):
                        s = _sign(a * (t - a))
                        for w, c in U.mul_words(x, y).items():
                            r.setdefault(w, {})[(("*", x), ("*", y))] = s * c
            cache[t] = r
        return r

    def on_label(lab):
        w = lab[1]
        return transpose(U.word_degree(w)).get(w, {})

    return ModuleMap(Nd, T, on_label, name="mu^v")


def augmentation_dual(Nd, N1=None):
    """ε': Q -> (UL)^∨, 1 ↦ dual of the unit word."""
    return ModuleMap(N1 or TrivialModule(Nd.L), Nd, lambda lab: {("*", ()): 1}, name="eps^v")


def check_module(N, lo=None, hi=None):
    """Verify the module axioms on basis elements; returns a list of failures.

    Checks x·(y·n) - (-1)^{|x||y|} y·(x·n) = [x,y]·n, d² = 0 and
    d(x·n) = (dx)·n + (-1)^{|x|} x·dn, within the module's degree range.
    """
    L = N.L
    lo = N.lo if lo is None else lo
    hi = N.hi if hi is None else hi
    bad = []
    for n in range(lo, hi + 1):
        for lab in N.basis(n):
            v = {lab: Fraction(1)}
            if N.d_vec(N.d_vec(v)):
                bad.append(f"d^2 != 0 on {lab!r}")
            for i in range(L.dim_total):
                di = L.degrees[i]
                if not (lo <= n + di <= hi) or not (lo <= n - 1 <= hi) or not (lo <= n + di - 1 <= hi):
                    continue
                lhs = N.d_vec(N.act_vec(i, v))
                rhs = N.act_lie(L.d({i: 1}), v)
                axpy(rhs, _sign(di), N.act_vec(i, N.d_vec(v)))
                diff = dict(lhs)
                axpy(diff, -1, rhs)
                if diff:
                    bad.append(f"d is not compatible with the action of {L.names[i]} on {lab!r}")
                for j in range(L.dim_total):
                    dj = L.degrees[j]
                    if not (lo <= n + di + dj <= hi):
                        continue
                    lhs = N.act_vec(i, N.act_vec(j, v))
                    axpy(lhs, -_sign(di * dj), N.act_vec(j, N.act_vec(i, v)))
                    rhs = N.act_lie(L.br(i, j), v)
                    diff = dict(lhs)
                    axpy(diff, -1, rhs)
                    if diff:
                        bad.append(f"action of [{L.names[i]}, {L.names[j]}] fails on {lab!r}")
    return bad


def _chain_range(L, chain_max):
    C = chain_algebra(L)
    if chain_max is None:
        if any(d % 2 == 0 for d in C.degrees):
            raise LieError("∧sL is infinite (L has odd elements); pass chain_max")
        chain_max = sum(C.degrees)
    return C, chain_max


class CEChains(GradedComplex):
    """C_*(L;N) with the differential d_0 + d_1 (lower grading)."""

    def __init__(self, L, N, chain_max=None):
        self.L = L
        self.N = N
        self.C, self.chain_max = _chain_range(L, chain_max)
        super().__init__(self._basis_of, self._d_of, -1, name=f"C_*(L;{N.name})")

    def _basis_of(self, n):
        out = []
        for j in range(0, self.chain_max + 1):
            k = n - j
            if self.N.lo <= k <= self.N.hi:
                for mon in self.C.basis(j):
                    for lab in self.N.basis(k):
                        out.append((mon, lab))
        return out

    def _d_of(self, label):
        mon, lab = label
        L, N, C = self.L, self.N, self.C
        out = {}
        for m2, c in chain_differential(L, mon).items():
            out[(m2, lab)] = out.get((m2, lab), 0) + c
        s = _sign(C.mon_degree(mon))
        for l2, c in N.d_vec({lab: 1}).items():
            out[(mon, l2)] = out.get((mon, l2), 0) + s * c
        for c, m2, i in removal_terms(L, mon):
            for l2, c2 in N.act_vec(i, {lab: 1}).items():
                out[(m2, l2)] = out.get((m2, l2), 0) + c * c2
        return out

    def degree_of_label(self, label):
        return self.C.mon_degree(label[0]) + self.N.degree(label[1])


class CECochains(GradedComplex):
    """C^*(L;N) = Hom_UL(C_*(L;UL), N) ≅ Hom(∧sL, N) (upper grading).

    N is a left module, used as a right module through n·x = -(-1)^{|n||x|}x·n.
    (Df)(c) = d_N f(c) - (-1)^{|f|} f(∂(c⊗1)), where the terms c'⊗x_i of
    ∂(c⊗1) are evaluated as f(c')·x_i.
    """

    def __init__(self, L, N, chain_max=None):
        self.L = L
        self.N = N
        self.C, self.chain_max = _chain_range(L, chain_max)
        self._T = {}
        super().__init__(self._basis_of, self._d_of, 1, name=f"C^*(L;{N.name})")

    def _basis_of(self, n):
        out = []
        for j in range(0, self.chain_max + 1):
            k = j - n
            if self.N.lo <= k <= self.N.hi:
                for mon in self.C.basis(j):
                    for lab in self.N.basis(k):
                        out.append((mon, lab))
        return out

    def _transpose(self, j):
        """For target monomials of degree j: who hits them under ∂ (from degree > j)."""
        r = self._T.get(j)
        if r is None:
            r = {"d": {}, "rm": {}}
            for jj in range(j + 1, self.chain_max + 1):
                for mon in self.C.basis(jj):
                    if jj == j + 1:
                        for m2, c in chain_differential(self.L, mon).items():
                            r["d"].setdefault(m2, []).append((mon, c))
                    for c, m2, i in removal_terms(self.L, mon):
                        if self.C.mon_degree(m2) == j:
                            r["rm"].setdefault(m2, []).append((mon, c, i))
            self._T[j] = r
        return r

    def _d_of(self, label):
        mon0, n0 = label
        L, N, C = self.L, self.N, self.C
        j = C.mon_degree(mon0)
        fdeg = N.degree(n0) - j  # lower degree of f
        out = {}
        for l2, c in N.d_vec({n0: 1}).items():
            out[(mon0, l2)] = out.get((mon0, l2), 0) + c
        s = -_sign(fdeg)
        T = self._transpose(j)
        for mon, c in T["d"].get(mon0, []):
            out[(mon, n0)] = out.get((mon, n0), 0) + s * c
        for mon, c, i in T["rm"].get(mon0, []):
            for l2, c2 in N.right_act_vec({n0: 1}, i).items():
                out[(mon, l2)] = out.get((mon, l2), 0) + s * c * c2
        return out

    def lower_degree(self, label):
        return self.N.degree(label[1]) - self.C.mon_degree(label[0])


def ce_chains(L, N=None, chain_max=None):
    return CEChains(L, N or TrivialModule(L), chain_max)


def ce_cochains(L, N=None, chain_max=None):
    return CECochains(L, N or TrivialModule(L), chain_max)


def fundamental_cycle(L, m, omega=None, chain_max=None):
    """A cycle of C_*L spanning H_m, as {monomial: coeff}.

    The echelon representative is used; when a cocycle ``omega`` of the
    Sullivan algebra C^*L is given it is rescaled so that ⟨ω, c⟩ = 1.
    """
    chains = ce_chains(L, chain_max=chain_max)
    H = chains.homology(m)
    if H.dim != 1:
        raise ComplexError(f"H_{m}(C_*L) has dimension {H.dim}, expected 1", m)
    c = {mon: v for (mon, _), v in H.reps[0].items()}
    if omega is not None:
        C = chain_algebra(L)
        W = omega.alg
        val = Fraction(0)
        for mon, v in c.items():
            wm = tuple(mon[i] for i in range(C.ngens))
            val += omega.terms.get(wm, 0) * v * pairing_value(C, mon)
        if not val:
            raise ComplexError("the fundamental cycle pairs to zero with omega", m)
        c = {mon: v / val for mon, v in c.items()}
    return c


class CapProduct:
    """cap_c: C^{q-r}(L;N) -> C_r(L;N) for a cycle c of degree m.

    f ∩ c = (-1)^m Σ (-1)^{|f||c'|} c' ⊗ f(c''), summed over the shuffle
    coproduct Δc = Σ c'⊗c''.  Summing over all of Σ_q instead repeats every
    shuffle term r!(q-r)! times with the same sign; the shuffle form is the
    one that commutes with differentials.
    """

    def __init__(self, L, N, c, m, chain_max=None):
        self.L = L
        self.N = N
        self.c = c
        self.m = m
        self.cochains = CECochains(L, N, chain_max)
        self.chains = CEChains(L, N, chain_max)
        C = self.C = chain_algebra(L)
        by_right = {}
        for mon, v in c.items():
            for coef, left, right in coproduct_terms(C, mon):
                by_right.setdefault(right, []).append((left, coef * v))
        self._by_right = by_right

    def label(self, lab):
        mon0, n0 = lab
        C = self.C
        fdeg = self.N.degree(n0) - C.mon_degree(mon0)
        s0 = _sign(self.m)
        out = {}
        for left, v in self._by_right.get(mon0, []):
            s = s0 * _sign(fdeg * C.mon_degree(left))
            key = (left, n0)
            out[key] = out.get(key, 0) + s * v
        return {k: v for k, v in out.items() if v}

    def __call__(self, f):
        out = {}
        for lab, c in f.items():
            axpy(out, c, self.label(lab))
        return out

    def as_map(self):
        return LinearMap(self.cochains, self.chains, self.label, name="cap")

    def chain_map_defect(self, n):
        """First cochain label of degree n where cap∘D != d∘cap, or None."""
        src, tgt = self.cochains, self.chains
        for lab in src.basis(n):
            lhs = self(src.d_label(lab))
            rhs = tgt.d(self.label(lab))
            diff = dict(lhs)
            axpy(diff, -1, rhs)
            if diff:
                return lab
        return None

    def homology_matrix(self, n):
        """Matrix of H^n(C^*(L;N)) -> H_{m-n}(C_*(L;N)) (columns per class)."""
        hs = self.cochains.homology(n)
        ht = self.chains.homology(self.m - n)
        return [ht.coords(self(z)) for z in hs.reps], hs.dim, ht.dim

    def is_iso(self, n):
        cols, a, b = self.homology_matrix(n)
        if a != b:
            return False
        e = Echelon()
        for col in cols:
            e.insert(col)
        return len(e) == a


def cap_product(L, N, c, m, chain_max=None):
    return CapProduct(L, N, c, m, chain_max)


class TensorComplex(GradedComplex):
    """A ⊗ B for complexes with the same step; labels (a, b), Koszul signs.

    ``range_a`` bounds the degrees of the left factor that are searched.
    """

    def __init__(self, A, B, range_a):
        if A.step != B.step:
            raise ValueError("tensor of complexes with different steps")
        self.A, self.B = A, B
        self.range_a = range_a
        self._deg_a = {}
        super().__init__(self._basis_of, self._d_of, A.step)

    def _basis_of(self, n):
        out = []
        for a in self.range_a:
            for x in self.A.basis(a):
                self._deg_a[x] = a
                for y in self.B.basis(n - a):
                    out.append((x, y))
        return out

    def _d_of(self, lab):
        x, y = lab
        out = {}
        for x2, c in self.A.d_label(x).items():
            out[(x2, y)] = out.get((x2, y), 0) + c
        s = _sign(self._deg_a[x])
        for y2, c in self.B.d_label(y).items():
            out[(x, y2)] = out.get((x, y2), 0) + s * c
        return out


def diagonal_chain_map(L, N1, N2, chain_max=None):
    """C_*(Δ;id): C_*(L;N1⊗N2) -> C_*(L;N1) ⊗ C_*(L;N2).

    c⊗(n1⊗n2) ↦ Σ (-1)^{|c''||n1|} (c'⊗n1) ⊗ (c''⊗n2) over Δc = Σ c'⊗c''.
    Returns (source, target, map).
    """
    N = TensorModule(N1, N2)
    src = CEChains(L, N, chain_max)
    A = CEChains(L, N1, chain_max)
    B = CEChains(L, N2, chain_max)
    C = chain_algebra(L)
    lo = N1.lo
    hi = A.chain_max + N1.hi
    tgt = TensorComplex(A, B, range(lo, hi + 1))

    def on_label(lab):
        mon, (n1, n2) = lab
        out = {}
        d1 = N1.degree(n1)
        for coef, left, right in coproduct_terms(C, mon):
            s = _sign(C.mon_degree(right) * d1)
            key = ((left, n1), (right, n2))
            out[key] = out.get(key, 0) + s * coef
        return out

    return src, tgt, LinearMap(src, tgt, on_label, name="C_*(Δ;id)")
