"""Differential graded Lie algebras and their enveloping algebras.

Elements of a Lie algebra are sparse vectors ``{basis index: Fraction}``; the
basis is ordered by (degree, declaration order), as generators are in
:mod:`loopstring.gca`.  Elements of the enveloping algebra are sparse vectors
over PBW words: nondecreasing tuples of basis indices in which an odd index
appears at most once.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial

from .cohomology import Derivation, SullivanModel
from .gca import FreeGCA, Generator
from .linalg import Echelon, axpy
from .models import bar, prime

__all__ = [
    "LieError",
    "DGLieAlgebra",
    "LieReport",
    "check_dgla",
    "construct_LS",
    "construct_LT",
    "EnvelopingAlgebra",
    "ULBasis",
    "chain_algebra",
    "chain_word",
    "normalize_indices",
    "coproduct_terms",
    "pairing_value",
    "cochain_algebra",
]


class LieError(ValueError):
    """Malformed Lie-algebra input."""


def _sign(k):
    return -1 if k % 2 else 1


def _vec(spec, index, what):
    """Coerce a bracket/differential value to an index-keyed vector."""
    if spec is None:
        return {}
    if isinstance(spec, str):
        spec = {spec: 1}
    out = {}
    for name, c in dict(spec).items():
        if name not in index:
            raise LieError(f"unknown basis element {name!r} in {what}")
        c = Fraction(c)
        if c:
            out[index[name]] = out.get(index[name], 0) + c
    return {k: v for k, v in out.items() if v}


class DGLieAlgebra:
    """A degreewise-finite differential graded Lie algebra.

    ``basis`` is a list of ``(name, degree)``; ``bracket`` maps pairs of names
    to values (a name or ``{name: coeff}``); brackets not given are filled in
    by graded antisymmetry, or are zero.  ``d`` maps names to values of degree
    one less.  ``dual_names`` names the generator of C^*L dual to ``s x``.
    """

    def __init__(self, basis, bracket=None, d=None, name=None, dual_names=None):
        entries = []
        for item in basis:
            nm, deg = item
            if not isinstance(deg, int) or deg < 0:
                raise LieError(f"basis element {nm!r} needs an integer degree >= 0")
            entries.append((nm, deg))
        names = [nm for nm, _ in entries]
        if len(set(names)) != len(names):
            raise LieError("duplicate basis names")
        decl = {nm: i for i, nm in enumerate(names)}
        entries.sort(key=lambda e: (e[1], decl[e[0]]))
        self.name = name
        self.names = tuple(nm for nm, _ in entries)
        self.degrees = tuple(dg for _, dg in entries)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.dim_total = len(self.names)
        dual_names = dict(dual_names or {})
        self.dual_names = tuple(dual_names.get(nm, "s" + nm) for nm in self.names)
        if len(set(self.dual_names)) != len(self.dual_names):
            raise LieError("dual generator names collide")

        self._br = {}
        given = {}
        for (a, b), val in (bracket or {}).items():
            for x in (a, b):
                if x not in self.index:
                    raise LieError(f"unknown basis element {x!r} in bracket [{a}, {b}]")
            i, j = self.index[a], self.index[b]
            v = _vec(val, self.index, f"[{a}, {b}]")
            for k in v:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise LieError(
                        f"[{a}, {b}] must have degree {self.degrees[i] + self.degrees[j]}, "
                        f"but contains {self.names[k]!r} of degree {self.degrees[k]}")
            given[(i, j)] = v
        for (i, j), v in given.items():
            self._br[(i, j)] = v
            if (j, i) not in given:
                s = -_sign(self.degrees[i] * self.degrees[j])
                self._br[(j, i)] = {k: s * c for k, c in v.items()}

        self._d = {}
        for a, val in (d or {}).items():
            if a not in self.index:
                raise LieError(f"unknown basis element {a!r} in differential")
            i = self.index[a]
            v = _vec(val, self.index, f"d {a}")
            for k in v:
                if self.degrees[k] != self.degrees[i] - 1:
                    raise LieError(f"d {a} must have degree {self.degrees[i] - 1}")
            if v:
                self._d[i] = v

    def __repr__(self):
        inner = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"DGLieAlgebra({inner})"

    # -- structure ---------------------------------------------------------

    def basis(self, n):
        return [i for i, d in enumerate(self.degrees) if d == n]

    def dim(self, n):
        return len(self.basis(n))

    @property
    def max_degree(self):
        return max(self.degrees, default=0)

    def br(self, i, j):
        return self._br.get((i, j), {})

    def d_basis(self, i):
        return self._d.get(i, {})

    @property
    def is_abelian(self):
        return not any(self._br.values())

    @property
    def has_differential(self):
        return bool(self._d)

    def bracket(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                axpy(out, a * b, self.br(i, j))
        return out

    def d(self, u):
        out = {}
        for i, a in u.items():
            axpy(out, a, self.d_basis(i))
        return out

    def element(self, spec):
        return _vec(spec, self.index, "element")

    def degree_of(self, u):
        degs = {self.degrees[i] for i in u}
        if len(degs) > 1:
            raise LieError("element is not homogeneous")
        return degs.pop() if degs else None

    def format(self, u):
        if not u:
            return "0"
        return " + ".join(f"{c}*{self.names[i]}" for i, c in sorted(u.items()))

    def structure(self):
        """Plain-data description (names, degrees, bracket, differential)."""
        br = {}
        for (i, j), v in sorted(self._br.items()):
            if v:
                br[(self.names[i], self.names[j])] = {self.names[k]: c for k, c in v.items()}
        dd = {self.names[i]: {self.names[k]: c for k, c in v.items()} for i, v in sorted(self._d.items())}
        return {"basis": list(zip(self.names, self.degrees)), "bracket": br, "d": dd}


class LieReport:
    """Outcome of :func:`check_dgla`: ``ok`` and a list of violations."""

    def __init__(self, violations, checked):
        self.violations = violations
        self.checked = checked
        self.ok = not violations

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"LieReport(ok, {self.checked} identities checked)"
        return f"LieReport({len(self.violations)} violations: {self.violations[:3]})"


def check_dgla(L, limit=None):
    """Check antisymmetry, Jacobi, d² = 0 and the Leibniz rule on basis elements."""
    bad = []
    n = L.dim_total
    deg = L.degrees
    count = 0
    for i in range(n):
        for j in range(n):
            count += 1
            lhs = L.br(i, j)
            rhs = {k: -_sign(deg[i] * deg[j]) * c for k, c in L.br(j, i).items()}
            if lhs != rhs:
                bad.append(f"antisymmetry fails on ({L.names[i]}, {L.names[j]})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                count += 1
                x, y, z = {i: 1}, {j: 1}, {k: 1}
                lhs = L.bracket(x, L.bracket(y, z))
                rhs = L.bracket(L.bracket(x, y), z)
                axpy(rhs, _sign(deg[i] * deg[j]), L.bracket(y, L.bracket(x, z)))
                diff = dict(lhs)
                axpy(diff, -1, rhs)
                if diff:
                    bad.append(f"Jacobi fails on ({L.names[i]}, {L.names[j]}, {L.names[k]})")
    for i in range(n):
        count += 1
        if L.d(L.d({i: 1})):
            bad.append(f"d^2 != 0 on {L.names[i]}")
        for j in range(n):
            count += 1
            lhs = L.d(L.br(i, j))
            rhs = L.bracket(L.d({i: 1}), {j: 1})
            axpy(rhs, _sign(deg[i]), L.bracket({i: 1}, L.d({j: 1})))
            diff = dict(lhs)
            axpy(diff, -1, rhs)
            if diff:
                bad.append(f"Leibniz rule fails on ({L.names[i]}, {L.names[j]})")
        if limit and len(bad) >= limit:
            break
    return LieReport(bad, count)


def _with_bars(L, copies):
    """L ⊕ copies of L̄, with (-1)^{|a|}[a, b̄] = \\bar{[a,b]} and abelian L̄."""
    if any(d < 1 for d in L.degrees):
        raise LieError("the L^S construction needs L concentrated in degrees >= 1")
    basis = list(zip(L.names, L.degrees))
    duals = dict(zip(L.names, L.dual_names))
    bracket = {}
    d = {}
    for (i, j), v in L._br.items():
        if v:
            bracket[(L.names[i], L.names[j])] = {L.names[k]: c for k, c in v.items()}
    for i, v in L._d.items():
        d[L.names[i]] = {L.names[k]: c for k, c in v.items()}
    for ren in copies:
        for nm, dg in zip(L.names, L.degrees):
            basis.append((ren(nm), dg - 1))
            duals[ren(nm)] = ren(duals[nm])
        for i in range(L.dim_total):
            for j in range(L.dim_total):
                v = L.br(i, j)
                if not v:
                    continue
                s = _sign(L.degrees[i])
                bracket[(L.names[i], ren(L.names[j]))] = {ren(L.names[k]): s * c for k, c in v.items()}
        for i, v in L._d.items():
            d[ren(L.names[i])] = {ren(L.names[k]): -c for k, c in v.items()}
    return DGLieAlgebra(basis, bracket, d, name=f"{L.name or 'L'}^S", dual_names=duals)


def construct_LS(L):
    """The Lie model L^S = L ⊕ L̄ of the free loop space (L̄_n = L_{n+1}).

    The copy of ``x`` is named ``xb``.
    """
    return _with_bars(L, [bar])


def construct_LT(L):
    """L ⊕ L̄₁ ⊕ L̄₂, the Lie model of LM ×_M LM; copies named ``xb`` and ``xb'``."""
    return _with_bars(L, [bar, lambda n: prime(bar(n))])


# -- the exterior coalgebra ∧sL ------------------------------------------------


def chain_algebra(L):
    """∧sL as a free graded-commutative algebra; generator i is s(x_i)."""
    alg = getattr(L, "_chain_alg", None)
    if alg is None:
        alg = FreeGCA([Generator("s" + nm, dg + 1) for nm, dg in zip(L.names, L.degrees)])
        # declaration order equals the Lie order, so generator i is s(x_i)
        assert all(alg.names[i] == "s" + L.names[i] for i in range(L.dim_total))
        L._chain_alg = alg
    return alg


def chain_word(alg, mon):
    """Expand a monomial into its word of generator indices (with repeats)."""
    w = []
    for i, e in enumerate(mon):
        w.extend([i] * e)
    return w


def normalize_indices(alg, word):
    """(sign, monomial) for a word of generator indices, or None if it vanishes."""
    sign = 1
    exps = [0] * alg.ngens
    placed = []
    odd = alg._oddset
    for i in word:
        if i in odd:
            if exps[i]:
                return None
            if sum(1 for j in placed if j > i) & 1:
                sign = -sign
            placed.append(i)
        exps[i] += 1
    return sign, tuple(exps)


def coproduct_terms(alg, mon):
    """The shuffle coproduct of a monomial: list of (coeff, left, right).

    Generators are primitive and Δ is multiplicative with the Koszul rule
    (a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd.
    """
    terms = [(Fraction(1), [0] * alg.ngens, [0] * alg.ngens, 0)]
    for g, e in enumerate(mon):
        if not e:
            continue
        dg = alg.degrees[g]
        new = []
        for c, left, right, rdeg in terms:
            for k in range(e + 1):
                coef = c * _binom(e, k)
                if (rdeg * k * dg) % 2:
                    coef = -coef
                l2 = list(left)
                r2 = list(right)
                l2[g] += k
                r2[g] += e - k
                new.append((coef, l2, r2, rdeg + (e - k) * dg))
        terms = new
    return [(c, tuple(l), tuple(r)) for c, l, r, _ in terms if c]


def _binom(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


def pairing_value(alg, mon):
    """⟨m^∨-monomial, m⟩ between a monomial of C^*L and the same monomial of ∧sL.

    With f·g = (f⊗g)∘Δ and (f⊗g)(a⊗b) = (-1)^{|g||a|} f(a)g(b), this is
    ∏ e_i! times (-1)^{k(k-1)/2}, k the number of odd factors.
    """
    v = 1
    k = 0
    for i, e in enumerate(mon):
        if e:
            v *= factorial(e)
            if alg.degrees[i] % 2:
                k += 1
    return Fraction(_sign(k * (k - 1) // 2) * v)


def cochain_algebra(L, maxdeg=None, names=None):
    """C^*L = Hom(C_*L, Q) as a Sullivan algebra Λ(V), V dual to sL.

    D f = -(-1)^{|f|} f∘(d_0 + d_1); the generator dual to s x_i is named
    ``L.dual_names[i]`` (or ``names[x_i]``).  Only the differential on
    generators is needed, so ``maxdeg`` is unused beyond validation.
    """
    from .ce import chain_differential  # local import: ce builds on this module

    C = chain_algebra(L)
    names = names or {}
    gens = [Generator(names.get(nm, dn), dg + 1)
            for nm, dn, dg in zip(L.names, L.dual_names, L.degrees)]
    W = FreeGCA(gens)
    # W's order follows Lie order (degree, declaration); map index i -> W index
    widx = [W.index[g.name] for g in gens]
    dvals = {}
    for i, g in enumerate(gens):
        n = g.degree
        acc = {}
        for mon in C.basis(n + 1):
            dc = chain_differential(L, mon)
            c = dc.get(C.gen_mon(C.names[i]))
            if not c:
                continue
            val = -_sign(n) * c / pairing_value(C, mon)
            wm = [0] * W.ngens
            for j, e in enumerate(mon):
                if e:
                    wm[widx[j]] = e
            acc[tuple(wm)] = acc.get(tuple(wm), 0) + val
        dvals[g.name] = W.poly(acc)
    model = SullivanModel(W, Derivation(W, 1, dvals), name=f"C^*({L.name or 'L'})")
    model.lie_to_cochain = {nm: g.name for nm, g in zip(L.names, gens)}
    return model


# -- the enveloping algebra ----------------------------------------------------


class EnvelopingAlgebra:
    """UL with its PBW basis, straightening product, adjoint action and d.

    Requires L in degrees >= 1 so that each UL_n is finite.  ``maxdeg`` (the
    truncation J) bounds the degrees of the bases handed out by
    :meth:`basis_upto`; products themselves are always exact.
    """

    def __init__(self, L, maxdeg):
        if any(d < 1 for d in L.degrees):
            raise LieError("UL is only degreewise finite for L in degrees >= 1")
        self.L = L
        self.maxdeg = maxdeg
        self._shadow = FreeGCA([Generator(f"g{i}", d) for i, d in enumerate(L.degrees)])
        self._odd = frozenset(i for i, d in enumerate(L.degrees) if d % 2)
        self._mul_letter = {}
        self._sym = {}
        self._tosym = {}
        self._basis = {}
        self._index = {}
        self._ad = {}
        self._d = {}
        self._cop = {}

    # -- bases -------------------------------------------------------------

    def basis(self, n):
        b = self._basis.get(n)
        if b is None:
            b = tuple(tuple(chain_word(self._shadow, m)) for m in self._shadow.basis(n))
            self._basis[n] = b
        return b

    def index(self, n):
        ix = self._index.get(n)
        if ix is None:
            ix = {w: i for i, w in enumerate(self.basis(n))}
            self._index[n] = ix
        return ix

    def dim(self, n):
        return len(self.basis(n))

    def word_degree(self, w):
        return sum(self.L.degrees[i] for i in w)

    def degree_of(self, u):
        degs = {self.word_degree(w) for w in u}
        if len(degs) > 1:
            raise LieError("element of UL is not homogeneous")
        return degs.pop() if degs else None

    def format(self, u):
        if not u:
            return "0"
        names = self.L.names
        parts = []
        for w, c in sorted(u.items()):
            mono = "*".join(names[i] for i in w) or "1"
            parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # -- algebra -----------------------------------------------------------

    @staticmethod
    def one():
        return {(): Fraction(1)}

    def from_lie(self, u):
        return {(i,): Fraction(c) for i, c in u.items() if c}

    def word_times_letter(self, w, i):
        key = (w, i)
        r = self._mul_letter.get(key)
        if r is not None:
            return r
        deg = self.L.degrees
        if not w:
            r = {(i,): Fraction(1)}
        else:
            j = w[-1]
            w0 = w[:-1]
            if j < i or (j == i and i not in self._odd):
                r = {w + (i,): Fraction(1)}
            elif j == i:
                # x x = ½[x, x] for odd x
                r = {}
                for k, c in self.L.br(i, i).items():
                    axpy(r, c / 2, self.word_times_letter(w0, k))
            else:
                # x_j x_i = (-1)^{|i||j|} x_i x_j + [x_j, x_i]
                r = {}
                s = _sign(deg[i] * deg[j])
                for w1, c1 in self.word_times_letter(w0, i).items():
                    axpy(r, s * c1, self.word_times_letter(w1, j))
                for k, c in self.L.br(j, i).items():
                    axpy(r, c, self.word_times_letter(w0, k))
        self._mul_letter[key] = r
        return r

    def mul_words(self, w1, w2):
        cur = {w1: Fraction(1)}
        for i in w2:
            nxt = {}
            for w, c in cur.items():
                axpy(nxt, c, self.word_times_letter(w, i))
            cur = nxt
        return cur

    def mul(self, u, v):
        out = {}
        for w1, a in u.items():
            for w2, b in v.items():
                axpy(out, a * b, self.mul_words(w1, w2))
        return out

    def counit(self, u):
        return u.get((), Fraction(0))

    def ad(self, i, u):
        """[x_i, u] = x_i u - (-1)^{|x_i||u|} u x_i."""
        out = {}
        xi = (i,)
        di = self.L.degrees[i]
        for w, c in u.items():
            r = self._ad.get((i, w))
            if r is None:
                r = dict(self.mul_words(xi, w))
                axpy(r, -_sign(di * self.word_degree(w)), self.mul_words(w, xi))
                self._ad[(i, w)] = r
            axpy(out, c, r)
        return out

    def d(self, u):
        """The derivation of UL extending d_L."""
        out = {}
        deg = self.L.degrees
        for w, c in u.items():
            r = self._d.get(w)
            if r is None:
                r = {}
                for pos, i in enumerate(w):
                    di = self.L.d_basis(i)
                    if not di:
                        continue
                    s = _sign(sum(deg[j] for j in w[:pos]))
                    left = {w[:pos]: Fraction(1)} if pos else self.one()
                    mid = self.mul(left, self.from_lie(di))
                    axpy(r, s, self.mul(mid, self._word_elem(w[pos + 1:])))
                self._d[w] = r
            axpy(out, c, r)
        return out

    def _word_elem(self, letters):
        """The product of the letters, in the given order."""
        return self.mul_words((), tuple(letters)) if letters else self.one()

    def product_of_letters(self, letters):
        return self._word_elem(letters)

    def coproduct(self, w):
        """Δ(w) with primitive letters: {(w1, w2): coeff}."""
        r = self._cop.get(w)
        if r is not None:
            return r
        cur = {((), ()): Fraction(1)}
        deg = self.L.degrees
        for i in w:
            nxt = {}
            for (a, b), c in cur.items():
                # (a⊗b)(x⊗1) = (-1)^{|b||x|} ax⊗b ;  (a⊗b)(1⊗x) = a⊗bx
                s = _sign(self.word_degree(b) * deg[i])
                for a2, c2 in self.word_times_letter(a, i).items():
                    k = (a2, b)
                    nxt[k] = nxt.get(k, 0) + s * c * c2
                for b2, c2 in self.word_times_letter(b, i).items():
                    k = (a, b2)
                    nxt[k] = nxt.get(k, 0) + c * c2
            cur = {k: v for k, v in nxt.items() if v}
        self._cop[w] = cur
        return cur

    # -- symmetrization ----------------------------------------------------

    def sym(self, letters):
        """(1/k!) Σ_σ ε_σ x_σ(1)⋯x_σ(k) for a word of letters (the PBW map)."""
        letters = tuple(sorted(letters))
        r = self._sym.get(letters)
        if r is not None:
            return r
        k = len(letters)
        if k == 0:
            r = self.one()
        elif k == 1:
            r = {letters: Fraction(1)}
        else:
            deg = self.L.degrees
            r = {}
            for pos in range(k):
                i = letters[pos]
                # Koszul sign for moving letter `pos` to the front
                s = _sign(deg[i] * sum(deg[j] for j in letters[:pos]))
                rest = letters[:pos] + letters[pos + 1:]
                axpy(r, Fraction(s, k), self.mul({(i,): Fraction(1)}, self.sym(rest)))
        self._sym[letters] = r
        return r

    def to_sym(self, u):
        """Coordinates of u on the symmetrized basis {sym(w)}: {w: coeff}."""
        out = {}
        for n in sorted({self.word_degree(w) for w in u}):
            part = {w: c for w, c in u.items() if self.word_degree(w) == n}
            e = self._sym_echelon(n)
            ix = self.index(n)
            combo = e.express({ix[w]: c for w, c in part.items()})
            if combo is None:
                raise LieError("symmetrized elements do not span UL")
            for w, c in combo.items():
                if c:
                    out[w] = out.get(w, 0) + c
        return out

    def _sym_echelon(self, n):
        e = self._tosym.get(n)
        if e is None:
            e = Echelon(track=True)
            ix = self.index(n)
            for w in self.basis(n):
                e.insert({ix[x]: c for x, c in self.sym(w).items()}, w)
            self._tosym[n] = e
        return e


ULBasis = EnvelopingAlgebra
