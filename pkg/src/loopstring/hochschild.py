"""Bar constructions and Hochschild cochains of augmented graded algebras.

Everything here is graded by lower degree: a cochain algebra A = H^*(M) sits
in degrees <= 0 (A_{-n} = A^n), an enveloping algebra UL in degrees >= 0.
A bar word [a_1|...|a_k] is a tuple of basis labels of the augmentation
ideal Ā and has degree Σ(|a_i| + 1).

The Hochschild complex Hom(T(sĀ), N) has basis labels ``(word, n)``: the map
sending ``word`` to the basis element ``n`` of N and every other word to 0.
Its differential is the one induced from Hom_{A^e}(B(A;A;A), N),

    D f = d_N∘f - (-1)^{|f|} f̃∘d,     f̃(p[w]q) = (-1)^{|p||f|} p·f(w)·q.
"""

from fractions import Fraction

from .complexes import ComplexError, GradedComplex, LinearMap
from .linalg import axpy

__all__ = [
    "AlgebraError",
    "FiniteAlgebra",
    "EnvelopingAdapter",
    "bar_words",
    "BarComplex",
    "bar",
    "HochschildComplex",
    "HochschildCohomology",
    "hochschild_cohomology",
    "ce_to_bar",
]


def _sign(k):
    return -1 if k % 2 else 1


class AlgebraError(ValueError):
    """The algebra does not meet the finiteness or connectivity requirements."""


class FiniteAlgebra:
    """A finite-dimensional connected augmented dg algebra.

    ``labels`` list the basis with the unit first; ``degrees`` are lower
    degrees; ``table[(a, b)]`` is the product as ``{label: coeff}`` (missing
    pairs multiply to 0, products with the unit are implicit); ``d`` maps a
    label to its differential (default 0).
    """

    def __init__(self, labels, degrees, table, d=None, unit=None, name=None):
        self.labels = list(labels)
        self.unit = self.labels[0] if unit is None else unit
        self.degree_of = dict(degrees)
        self.name = name
        if self.degree_of.get(self.unit) != 0:
            raise AlgebraError("the unit must have degree 0")
        zero_deg = [x for x in self.labels if self.degree_of[x] == 0 and x != self.unit]
        if zero_deg:
            raise AlgebraError(f"A is not connected: extra degree-0 elements {zero_deg}")
        self.ideal = [x for x in self.labels if x != self.unit]
        if any(self.degree_of[x] == -1 for x in self.ideal):
            raise AlgebraError("elements in cohomological degree 1 make each bar degree "
                               "infinite; use a simply connected model")
        self._table = {k: {x: Fraction(c) for x, c in v.items() if c} for k, v in table.items()}
        self._d = {k: {x: Fraction(c) for x, c in v.items() if c} for k, v in (d or {}).items()}
        self._by_deg = {}
        for x in self.labels:
            self._by_deg.setdefault(self.degree_of[x], []).append(x)

    @classmethod
    def from_model(cls, model, top, prefix="h"):
        """H^*(model) in degrees 0..top, with the echelon representatives as basis.

        Labels are ``f"{prefix}{n}_{i}"`` and the unit is ``"1"``.
        """
        labels, degrees, reps = ["1"], {"1": 0}, {"1": model.alg.unit()}
        if model.H(0).dim != 1:
            raise AlgebraError("H^0 of the model is not Q")
        for n in range(1, top + 1):
            for i, r in enumerate(model.H(n).reps):
                lab = f"{prefix}{n}_{i}"
                labels.append(lab)
                degrees[lab] = -n
                reps[lab] = r
        table = {}
        for a in labels[1:]:
            for b in labels[1:]:
                n = -(degrees[a] + degrees[b])
                if n > top:
                    continue
                co = model.H(n).coords(model.mul(reps[a], reps[b]))
                if co:
                    table[(a, b)] = {f"{prefix}{n}_{i}": c for i, c in co.items()}
        alg = cls(labels, degrees, table, name=f"H^*({model.name})" if model.name else None)
        alg.representatives = reps
        return alg

    def basis(self, n):
        return self._by_deg.get(n, [])

    def degree(self, lab):
        return self.degree_of[lab]

    def ideal_degrees(self):
        return sorted({self.degree_of[x] for x in self.ideal})

    def mul_labels(self, a, b):
        if a == self.unit:
            return {b: Fraction(1)}
        if b == self.unit:
            return {a: Fraction(1)}
        return self._table.get((a, b), {})

    def mul(self, u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                axpy(out, x * y, self.mul_labels(a, b))
        return out

    def d_label(self, a):
        return self._d.get(a, {})

    def d_is_zero(self):
        return not any(self._d.values())

    def augmentation(self, a):
        return 1 if a == self.unit else 0

    def check(self):
        """Associativity, unit and Leibniz on all basis triples; returns failures."""
        bad = []
        one = Fraction(1)
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    lhs = self.mul(self.mul({a: one}, {b: one}), {c: one})
                    rhs = self.mul({a: one}, self.mul({b: one}, {c: one}))
                    if lhs != rhs:
                        bad.append(f"associativity fails on ({a}, {b}, {c})")
                lhs = self._dvec(self.mul_labels(a, b))
                rhs = self.mul(self._dvec({a: one}), {b: one})
                axpy(rhs, _sign(self.degree_of[a]), self.mul({a: one}, self._dvec({b: one})))
                if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                    bad.append(f"Leibniz rule fails on ({a}, {b})")
            if self._dvec(self._dvec({a: one})):
                bad.append(f"d^2 != 0 on {a}")
        return bad

    def _dvec(self, u):
        out = {}
        for a, c in u.items():
            axpy(out, c, self.d_label(a))
        return out

    def is_graded_commutative(self):
        one = Fraction(1)
        for a in self.ideal:
            for b in self.ideal:
                s = _sign(self.degree_of[a] * self.degree_of[b])
                ab = self.mul({a: one}, {b: one})
                ba = self.mul({b: one}, {a: one})
                if ab != {k: s * v for k, v in ba.items()}:
                    return False
        return True


class EnvelopingAdapter:
    """Presents an :class:`~loopstring.lie.EnvelopingAlgebra` with the same
    interface as :class:`FiniteAlgebra` (PBW words as labels, unit ``()``)."""

    def __init__(self, U):
        self.U = U
        self.unit = ()

    def basis(self, n):
        return list(self.U.basis(n)) if n >= 0 else []

    def degree(self, w):
        return self.U.word_degree(w)

    def ideal_degrees_upto(self, hi):
        return [n for n in range(1, hi + 1) if self.U.basis(n)]

    def mul_labels(self, a, b):
        return self.U.mul_words(a, b)

    def mul(self, u, v):
        return self.U.mul(u, v)

    def d_label(self, a):
        return self.U.d({a: 1})

    def augmentation(self, a):
        return 1 if a == () else 0


def _letters(A, lo, hi):
    """Ā-basis labels with |s a| in [lo, hi], grouped by |s a|."""
    out = {}
    if isinstance(A, EnvelopingAdapter):
        degs = A.ideal_degrees_upto(max(hi - 1, 0))
    else:
        degs = A.ideal_degrees()
    for d in degs:
        sd = d + 1
        if lo <= sd <= hi and sd != 0:
            out[sd] = [x for x in A.basis(d) if x != A.unit]
    return out


def bar_words(A, n):
    """All words of T(sĀ) of lower degree n (including the empty word for n = 0)."""
    cache = A.__dict__.setdefault("_bar_words", {})
    r = cache.get(n)
    if r is not None:
        return r
    if n == 0:
        r = [()]
    else:
        letters = _letters(A, min(n, 0), max(n, 0))
        r = []
        for sd, labs in letters.items():
            if (n > 0 and sd <= 0) or (n < 0 and sd >= 0):
                continue
            for rest in bar_words(A, n - sd):
                for x in labs:
                    r.append((x,) + rest)
        r.sort(key=lambda w: (len(w), [str(x) for x in w]))
    cache[n] = r
    return r


def word_degree(A, w):
    return sum(A.degree(x) + 1 for x in w)


def bar_terms(A, p, w, q, left="A", right="A"):
    """d(p[w]q) in B(P;A;N) with P, N each A or Q: list of (coeff, p', w', q').

    ``p``/``q`` are labels of A, or None when the side is Q.  With Q the
    outer products act through the augmentation.
    """
    out = []
    pd = A.degree(p) if p is not None else 0
    k = len(w)
    sdeg = [A.degree(x) + 1 for x in w]
    eps = [pd]
    for s in sdeg:
        eps.append(eps[-1] + s)
    # eps[i] is ε_{i+1} in the 1-based notation: |p| + Σ_{j<=i}|sa_j|
    if p is not None:
        for p2, c in A.d_label(p).items():
            out.append((c, p2, w, q))
    for i in range(k):
        for x, c in A.d_label(w[i]).items():
            out.append((-_sign(eps[i]) * c, p, w[:i] + (x,) + w[i + 1:], q))
    if q is not None:
        for q2, c in A.d_label(q).items():
            out.append((_sign(eps[k]) * c, p, w, q2))
    if k == 0:
        return out
    # p a_1 [a_2|...]
    if p is not None:
        for p2, c in A.mul_labels(p, w[0]).items():
            out.append((_sign(pd) * c, p2, w[1:], q))
    # Σ_{i>=2} (-1)^{ε_i} [.. a_{i-1} a_i ..]
    for i in range(1, k):
        for x, c in A.mul_labels(w[i - 1], w[i]).items():
            if x == A.unit:
                continue
            out.append((_sign(eps[i]) * c, p, w[:i - 1] + (x,) + w[i + 1:], q))
    # -(-1)^{ε_k} [a_1|...|a_{k-1}] a_k q
    if q is not None:
        for q2, c in A.mul_labels(w[-1], q).items():
            out.append((-_sign(eps[k - 1]) * c, p, w[:-1], q2))
    return out


class BarComplex(GradedComplex):
    """B(P;A;N) for P, N ∈ {A, Q} (``left``/``right`` = "A" or "Q").

    Labels are ``(p, word, q)`` with p/q None on a Q side.  For the coalgebra
    BA = B(Q;A;Q) the deconcatenation coproduct is :meth:`coproduct`.
    """

    def __init__(self, A, left="Q", right="Q"):
        for side in (left, right):
            if side not in ("A", "Q"):
                raise ValueError("bar sides must be 'A' or 'Q'")
        self.A = A
        self.left, self.right = left, right
        super().__init__(self._basis_of, self._d_of, -1,
                         name=f"B({left};A;{right})")

    def _side(self, side):
        if side == "Q":
            return {0: [None]}
        A = self.A
        if isinstance(A, EnvelopingAdapter):
            raise AlgebraError("two-sided bar constructions need a finite algebra")
        out = {}
        for x in A.labels:
            out.setdefault(A.degree(x), []).append(x)
        return out

    def _basis_of(self, n):
        A = self.A
        P, N = self._side(self.left), self._side(self.right)
        out = []
        for dp, ps in sorted(P.items()):
            for dq, qs in sorted(N.items()):
                for w in bar_words(A, n - dp - dq):
                    for p in ps:
                        for q in qs:
                            out.append((p, w, q))
        return out

    def _d_of(self, label):
        p, w, q = label
        out = {}
        for c, p2, w2, q2 in bar_terms(self.A, p, w, q):
            if (p is None) != (p2 is None) or (q is None) != (q2 is None):
                continue
            key = (p2, w2, q2)
            out[key] = out.get(key, 0) + c
        return out

    def coproduct(self, label):
        """Deconcatenation Δ[a_1|...|a_r] = Σ [a_1|...|a_i] ⊗ [a_{i+1}|...|a_r]."""
        if self.left != "Q" or self.right != "Q":
            raise AlgebraError("the coproduct is defined on B(Q;A;Q)")
        _, w, _ = label
        return {((None, w[:i], None), (None, w[i:], None)): Fraction(1)
                for i in range(len(w) + 1)}

    def augmentation_map(self, target):
        """B(A;A;A) -> A, p[ ]q ↦ pq; ``target`` is a complex of A (see :func:`algebra_complex`)."""
        A = self.A

        def on_label(lab):
            p, w, q = lab
            if w:
                return {}
            return A.mul_labels(p, q)

        return LinearMap(self, target, on_label, name="augmentation")


def algebra_complex(A):
    """A as a chain complex (lower grading) with its differential."""
    return GradedComplex(lambda n: A.basis(n), A.d_label, -1, name="A")


def bar(A, left="Q", right="Q"):
    return BarComplex(A, left, right)


class HochschildComplex(GradedComplex):
    """Hom(T(sĀ), N) with N = A (``coefficients="A"``) or Q through ε.

    Lower grading: the label (w, n) has degree |n| - |w|.  The cup product
    is f∪g = μ∘(f⊗g)∘Δ with (f⊗g)(u⊗v) = (-1)^{|g||u|} f(u)g(v), μ being
    the product of A or of Q.
    """

    def __init__(self, A, coefficients="A"):
        if not isinstance(A, FiniteAlgebra):
            raise AlgebraError("Hochschild cochains need a finite-dimensional algebra; "
                               "pass a finite quasi-isomorphic model such as H^*(M) for formal M")
        if coefficients not in ("A", "Q"):
            raise ValueError("coefficients must be 'A' or 'Q'")
        self.A = A
        self.coefficients = coefficients
        self._incoming = {}
        self._scanned = set()
        weight = self._internal_weight if A.d_is_zero() else None
        super().__init__(self._basis_of, self._d_of, -1,
                         name=f"C^*(A;{coefficients})", weight=weight)

    def _internal_weight(self, lab):
        # with d_A = 0 only the merging terms survive, and they keep |n| - Σ|a_i|
        w, n = lab
        return self.value_degree(n) - sum(self.A.degree(a) for a in w)

    def _values(self):
        A = self.A
        if self.coefficients == "Q":
            return {0: ["1"]}
        out = {}
        for x in A.labels:
            out.setdefault(A.degree(x), []).append(x)
        return out

    def value_degree(self, n):
        return 0 if self.coefficients == "Q" else self.A.degree(n)

    def label_degree(self, lab):
        w, n = lab
        return self.value_degree(n) - word_degree(self.A, w)

    def _basis_of(self, k):
        out = []
        for dn, ns in sorted(self._values().items()):
            for w in bar_words(self.A, dn - k):
                for n in ns:
                    out.append((w, n))
        return out

    def _scan(self, e):
        """Index the terms of d(1[w]1) for all words w of degree e by the inner word."""
        if e in self._scanned:
            return
        self._scanned.add(e)
        A = self.A
        one = A.unit
        for w in bar_words(A, e):
            for c, p, v, q in bar_terms(A, one, w, one):
                self._incoming.setdefault(v, []).append((w, c, p, q))

    def _d_of(self, label):
        u, n = label
        A = self.A
        fdeg = self.label_degree(label)
        out = {}
        if self.coefficients == "A":
            for n2, c in A.d_label(n).items():
                out[(u, n2)] = out.get((u, n2), 0) + c
        # words w with d(1[w]1) ∋ p[u]q satisfy |w| = |u| + 1 - |p| - |q|
        du = word_degree(A, u)
        shifts = {0}
        if self.coefficients == "A":
            degs = [0] + A.ideal_degrees()
            shifts = {a + b for a in degs for b in degs}
        for sh in shifts:
            self._scan(du + 1 - sh)
        s0 = -_sign(fdeg)
        for w, c, p, q in self._incoming.get(u, []):
            if self.coefficients == "Q":
                if p != A.unit or q != A.unit:
                    continue
                out[(w, n)] = out.get((w, n), 0) + s0 * c
                continue
            s = s0 * _sign(A.degree(p) * fdeg)
            val = A.mul(A.mul({p: Fraction(1)}, {n: Fraction(1)}), {q: Fraction(1)})
            for n2, c2 in val.items():
                out[(w, n2)] = out.get((w, n2), 0) + s * c * c2
        return out

    def cup_labels(self, f, g):
        (u, a), (v, b) = f, g
        s = _sign(self.label_degree(g) * word_degree(self.A, u))
        if self.coefficients == "Q":
            return {(u + v, "1"): Fraction(s)}
        return {(u + v, x): s * c for x, c in self.A.mul_labels(a, b).items()}

    def cup(self, f, g):
        out = {}
        for x, a in f.items():
            for y, b in g.items():
                axpy(out, a * b, self.cup_labels(x, y))
        return out

    def unit_cochain(self):
        return {((), "1" if self.coefficients == "Q" else self.A.unit): Fraction(1)}

    def change_of_coefficients(self, other):
        """The map induced by ε: A -> Q, as a LinearMap into ``other`` (coefficients Q)."""
        A = self.A

        def on_label(lab):
            w, n = lab
            return {(w, "1"): Fraction(1)} if n == A.unit else {}

        return LinearMap(self, other, on_label, name="HH(eps)")


class HochschildCohomology:
    """HH of a finite algebra in a window of lower degrees, with cup products.

    Lower degree k corresponds to HH^{-k} in cohomological grading.
    """

    def __init__(self, A, lo, hi, coefficients="A"):
        self.A = A
        self.complex = HochschildComplex(A, coefficients)
        self.lo, self.hi = lo, hi

    def dims(self):
        return {k: self.complex.homology(k).dim for k in range(self.lo, self.hi + 1)}

    def reps(self, k):
        return self.complex.homology(k).reps

    def coords(self, k, cocycle):
        return self.complex.homology(k).coords(cocycle)

    def cup_class(self, k1, v1, k2, v2):
        """Product of classes given by coordinate dicts, as coordinates in degree k1+k2."""
        H1, H2 = self.complex.homology(k1), self.complex.homology(k2)
        z1 = _combine(H1.reps, v1)
        z2 = _combine(H2.reps, v2)
        return self.complex.homology(k1 + k2).coords(self.complex.cup(z1, z2))

    def structure_constants(self):
        """{(k1, i, k2, j): coords} for all basis pairs with k1+k2 in the window."""
        out = {}
        dims = self.dims()
        for k1 in range(self.lo, self.hi + 1):
            for k2 in range(self.lo, self.hi + 1):
                if not self.lo <= k1 + k2 <= self.hi:
                    continue
                for i in range(dims[k1]):
                    for j in range(dims[k2]):
                        out[(k1, i, k2, j)] = self.cup_class(k1, {i: 1}, k2, {j: 1})
        return out


def _combine(reps, coords):
    out = {}
    for i, c in coords.items():
        axpy(out, Fraction(c), reps[i])
    return out


def hochschild_cohomology(A, lo, hi, coefficients="A"):
    return HochschildCohomology(A, lo, hi, coefficients)


def ce_to_bar(L, U, chain_max=None):
    """φ: C_*L -> B(UL), sx_1∧...∧sx_n ↦ Σ_σ ε_σ [x_σ(1)|...|x_σ(n)].

    Returns (source complex, bar complex, LinearMap).  ``U`` is an
    :class:`~loopstring.lie.EnvelopingAlgebra` covering the needed degrees.
    """
    from itertools import permutations

    from .ce import ce_chains
    from .lie import chain_algebra, chain_word

    src = ce_chains(L, chain_max=chain_max)
    A = EnvelopingAdapter(U)
    tgt = BarComplex(A)
    C = chain_algebra(L)

    def on_label(lab):
        mon, _ = lab
        w = chain_word(C, mon)
        sdeg = [C.degrees[i] for i in w]
        out = {}
        for perm in permutations(range(len(w))):
            s = _perm_sign(perm, sdeg)
            key = (None, tuple((w[i],) for i in perm), None)
            out[key] = out.get(key, 0) + s
        return out

    return src, tgt, LinearMap(src, tgt, on_label, name="phi")


def _perm_sign(perm, degs):
    """Koszul sign of rearranging elements of the given degrees into ``perm`` order."""
    s = 1
    n = len(perm)
    for a in range(n):
        for b in range(a + 1, n):
            if perm[a] > perm[b] and degs[perm[a]] % 2 and degs[perm[b]] % 2:
                s = -s
    return s
