"""Loop coproduct, loop product, string bracket and intersection morphism.

Homology classes are always handled through their dual cohomology
representatives: a basis element of ℍ_*(LM) is the dual of a chosen basis
class of H^*(LM).  Degrees are recorded cohomologically (the degree of the
dual class); the ℍ-degree of such an element is that degree minus m.
"""

from fractions import Fraction
from math import factorial

from .cohomology import (
    CDGA,
    CDGAMorphism,
    Derivation,
    LiftingSystem,
    ModelError,
    MonomialQuotient,
    NoSolution,
    SullivanModel,
    transfer,
)
from .gca import AlgebraMap, FreeGCA, Generator
from .linalg import SingularMatrix, inverse, mat_vec
from .models import (
    IteratedLoopModel,
    LoopSpaceModel,
    PathCompositionModel,
    RelativeMultiplicationModel,
    bar,
    diag,
    mu_T_extension,
    prime,
)

__all__ = [
    "NotPoincareDuality",
    "PoincareData",
    "poincare_data",
    "diagonal_class",
    "LoopCoproduct",
    "loop_coproduct",
    "NamedBasis",
    "LoopAlgebra",
    "loop_product",
    "EquivariantModel",
    "equivariant_model",
    "GysinMaps",
    "gysin_maps",
    "StringLieAlgebra",
    "string_bracket",
    "IntersectionMorphism",
    "intersection_morphism",
]


class NotPoincareDuality(ArithmeticError):
    """The cohomology of the model does not satisfy Poincaré duality."""

    def __init__(self, msg, degree=None):
        super().__init__(msg)
        self.degree = degree


class PoincareData:
    """Fundamental cocycle, cohomology basis and the Poincaré-dual basis."""

    def __init__(self, model, m):
        self.model = model
        self.m = m
        top = model.H(m)
        if top.dim != 1:
            raise NotPoincareDuality(f"H^{m} has dimension {top.dim}, expected 1", m)
        for k in range(m + 1, 2 * m + 2):
            if model.H(k).dim:
                raise NotPoincareDuality(f"H^{k} is nonzero above the dimension {m}", k)
        self.omega = top.reps[0]
        self.alpha = []          # (degree, index, representative)
        for p in range(m + 1):
            for i, r in enumerate(model.H(p).reps):
                self.alpha.append((p, i, r))
        N = len(self.alpha)
        cols = []
        for k, (pk, _, rk) in enumerate(self.alpha):
            col = {}
            for i, (pi, _, ri) in enumerate(self.alpha):
                if pi + pk == m:
                    c = top.coords(model.mul(ri, rk)).get(0, 0)
                    if c:
                        col[i] = Fraction(c)
            cols.append(col)
        self.pairing = cols      # pairing[k][i] = <alpha_i alpha_k, u_M>
        try:
            X = inverse(cols, N)
        except SingularMatrix:
            raise NotPoincareDuality("the cup-product pairing is degenerate") from None
        self.dual_coords = X     # alpha_j^# = sum_k X[j][k] alpha_k
        self.alpha_sharp = []
        for j in range(N):
            p = model.alg.zero()
            for k, c in X[j].items():
                p = p + self.alpha[k][2] * c
            self.alpha_sharp.append(model.project(p))

    def pairing_value(self, a, b):
        """<a b, [M]> for cocycles a, b of complementary degrees."""
        return self.model.H(self.m).coords(self.model.mul(a, b)).get(0, Fraction(0))


def poincare_data(model, dim):
    return PoincareData(model, dim)


def diagonal_class(pd, vv=None):
    """T = sum_i (-1)^{|a_i|} a_i ⊗ a_i^# in ΛV⊗ΛV'."""
    from .models import tensor_square

    if vv is None:
        vv = tensor_square(pd.model)
    ren = {n: prime(n) for n in pd.model.alg.names}
    T = vv.alg.zero()
    for (p, _, a), a_sharp in zip(pd.alpha, pd.alpha_sharp):
        term = transfer(a, vv.alg) * transfer(a_sharp, vv.alg, ren)
        T = T + (term if p % 2 == 0 else -term)
    return T


def _split_apply(poly, left_indices, fn_left, fn_right, out):
    """Accumulate sum c * sign * fn_left(left) * fn_right(right) into ``out``."""
    alg = poly.alg
    for mon, c in poly.terms.items():
        sign = alg.split_sign(mon, left_indices)
        left = tuple(e if i in left_indices else 0 for i, e in enumerate(mon))
        right = tuple(e if i not in left_indices else 0 for i, e in enumerate(mon))
        out.append((c * sign, left, right))
    return out


class LoopCoproduct:
    """The dual θ of the loop product on H^*(LM) from a Sullivan model.

    θ: H^k(LM) -> (H^*(LM)⊗H^*(LM))^{k+m} is H(μ_T⊗1)∘H(φ⊗1)^{-1}∘H(c).
    H(φ⊗1)^{-1} is realised by an algebra section σ of the surjective
    quasi-isomorphism φ⊗1, constructed generator by generator.
    """

    def __init__(self, model, pd):
        self.base = model
        self.pd = pd
        self.m = pd.m
        self.loop = LoopSpaceModel(model)
        self.L = self.loop.total
        self.rel = RelativeMultiplicationModel(model, loop=self.loop)
        self.pc = PathCompositionModel(model, rel=self.rel)
        self.T = diagonal_class(pd, self.rel.vv)
        self.mu_T = mu_T_extension(self.rel, self.T, self.m)
        self._build_P()
        self._build_LL()
        self._theta = {}

    def _build_P(self):
        base = self.base
        names = base.alg.names
        R = self.rel
        gens = list(R.alg.generators)
        for g in base.alg.generators:
            gens.append(Generator(bar(g.name), g.degree - 1))
            gens.append(Generator(prime(bar(g.name)), g.degree - 1))
        palg = FreeGCA(gens)
        s1 = Derivation(palg, -1, {n: palg.gen(bar(n)) for n in names})
        s2 = Derivation(palg, -1, {prime(n): palg.gen(prime(bar(n))) for n in names})
        D = {}
        for n in R.alg.names:
            D[n] = transfer(R.total.d.values[n], palg)
        for n in names:
            D[bar(n)] = -s1(transfer(base.d.values[n], palg))
            D[prime(bar(n))] = -s2(D[prime(n)])
        self.P = SullivanModel(palg, D)
        E = self.pc.iterated
        self.E = E.total
        phi = {}
        for n in names:
            phi[n] = E.alg.gen(n)
            phi[prime(n)] = E.alg.gen(n)
            phi[bar(n)] = E.alg.gen(bar(n))
            phi[prime(bar(n))] = E.alg.gen(prime(bar(n)))
        self.phi1 = CDGAMorphism(self.P, self.E, phi)
        phimap = self.phi1._map
        sigma = {}
        for n in names:
            sigma[n] = palg.gen(n)
            sigma[bar(n)] = palg.gen(bar(n))
        for g in base.alg.generators:
            n = g.name
            deg = g.degree - 1
            smap = AlgebraMap(E.alg, palg, sigma)
            target = smap(self.E.d.values[prime(bar(n))])
            system = LiftingSystem(palg, palg.basis(deg), [(self.P.d, self.P, deg + 1),
                                                            (phimap, self.E, deg)])
            w = system.solve([target, E.alg.gen(prime(bar(n)))])
            if w is NoSolution:
                raise ModelError(f"no section of phi⊗1 on {prime(bar(n))}", deg)
            sigma[prime(bar(n))] = w
        self.sigma = CDGAMorphism(self.E, self.P, sigma)
        self._p_left = frozenset(i for i, nm in enumerate(palg.names) if not nm.endswith("_d"))

    def _build_LL(self):
        base = self.base
        names = base.alg.names
        gens = []
        for g in base.alg.generators:
            gens += [Generator(g.name, g.degree), Generator(bar(g.name), g.degree - 1)]
        for g in base.alg.generators:
            gens += [Generator(prime(g.name), g.degree),
                     Generator(prime(bar(g.name)), g.degree - 1)]
        lalg = FreeGCA(gens)
        s1 = Derivation(lalg, -1, {n: lalg.gen(bar(n)) for n in names})
        s2 = Derivation(lalg, -1, {prime(n): lalg.gen(prime(bar(n))) for n in names})
        D = {}
        pr = {n: prime(n) for n in names}
        for n in names:
            D[n] = transfer(base.d.values[n], lalg)
            D[prime(n)] = transfer(base.d.values[n], lalg, pr)
            D[bar(n)] = -s1(D[n])
            D[prime(bar(n))] = -s2(D[prime(n)])
        self.LL = SullivanModel(lalg, D)
        self._ll_left = frozenset(lalg.index[k] for n in names for k in (n, bar(n)))
        self._unprime = {prime(n): n for n in names}
        self._unprime.update({prime(bar(n)): bar(n) for n in names})

    def F(self, p):
        """μ_T⊗1: P -> LL' (module map, V̄-monomials moved to the right)."""
        lalg = self.LL.alg
        out = lalg.zero()
        for c, left, right in _split_apply(p, self._p_left, None, None, []):
            fw = self.mu_T(transfer(p.alg.monomial(right), self.rel.alg))
            if fw:
                out = out + transfer(p.alg.monomial(left), lalg) * transfer(fw, lalg) * c
        return out

    def cocycle_image(self, z):
        """F(σ(c(z))): a cocycle of LL' representing θ([z])."""
        return self.F(self.sigma(self.pc.c(z)))

    def decompose(self, w):
        """(r⊗r)(w) as {(p, i, q, j): coeff} for w in LL'."""
        out = {}
        L = self.L
        lalg = self.LL.alg
        for c, left, right in _split_apply(w, self._ll_left, None, None, []):
            a = transfer(lalg.monomial(left), L.alg)
            b = transfer(lalg.monomial(right), L.alg, self._unprime)
            if not a or not b:
                continue
            p, q = a.degree(), b.degree()
            ca = L.H(p).coords(a)
            if not ca:
                continue
            cb = L.H(q).coords(b)
            for i, x in ca.items():
                for j, y in cb.items():
                    key = (p, i, q, j)
                    v = out.get(key, 0) + c * x * y
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return out

    def theta(self, k, i):
        key = (k, i)
        r = self._theta.get(key)
        if r is None:
            z = self.L.H(k).reps[i]
            r = self.decompose(self.cocycle_image(z))
            self._theta[key] = r
        return r

    def matrix(self, k):
        """Columns θ(h_{k,i}) for every basis class of H^k(LM)."""
        return [self.theta(k, i) for i in range(self.L.H(k).dim)]


def loop_coproduct(model, pd, maxdeg):
    lc = LoopCoproduct(model, pd)
    return {k: lc.matrix(k) for k in range(0, maxdeg + 1)}, lc


# -- named bases --------------------------------------------------------------


class NamedBasis:
    """Labels for a basis of H^*(X) per degree, as coordinates on the reps.

    ``classes[n]`` is a list of ``(label, coords)``; ``dual[n]`` gives for
    each label its dual homology coordinates (rows of the inverse matrix).
    """

    def __init__(self, classes):
        self.classes = classes
        self.dual = {}
        self.labels = {}
        for n, items in classes.items():
            N = len(items)
            inv = inverse([c for _, c in items], N)
            # inv[j] = coordinates of rep j in the named basis
            rows = [dict() for _ in range(N)]
            for j, col in enumerate(inv):
                for a, v in col.items():
                    rows[a][j] = v
            self.dual[n] = rows
            self.labels[n] = [lab for lab, _ in items]

    def label_degree(self):
        return {lab: n for n, labs in self.labels.items() for lab in labs}

    @classmethod
    def generic(cls, model, lo, hi, prefix="h"):
        classes = {}
        for n in range(lo, hi + 1):
            d = model.H(n).dim
            classes[n] = [(f"{prefix}{n}_{i}", {i: Fraction(1)}) for i in range(d)]
        return cls(classes)

    def to_named(self, n, coords):
        """Cohomology coords on reps -> coords on named classes."""
        out = {}
        for a, row in enumerate(self.dual[n]):
            v = sum((row.get(j, 0) * c for j, c in coords.items()), Fraction(0))
            if v:
                out[self.labels[n][a]] = v
        return out


def _named_from_quotient(L, Q, q, lo, hi, named):
    """Build a NamedBasis from named cocycles of a quasi-isomorphic quotient."""
    classes = {}
    for n in range(lo, hi + 1):
        hq = Q.H(n)
        HL = L.H(n)
        items = named(n)
        if len(items) != HL.dim or hq.dim != HL.dim:
            raise ModelError(f"named basis does not match H^{n}", n)
        mat = [hq.coords(q(r)) for r in HL.reps]
        inv = inverse(mat, HL.dim)
        cols = []
        for lab, cocycle in items:
            cq = hq.coords(cocycle, check=True)
            cols.append((lab, mat_vec(inv, cq)))
        classes[n] = cols
    return NamedBasis(classes)


def detect_cpn(model):
    """Return n if the model is (Λ(x,y), dy = c x^{n+1}) with |x| = 2."""
    gens = model.alg.generators
    if len(gens) != 2 or gens[0].degree != 2 or gens[1].degree % 2 == 0:
        return None
    n = (gens[1].degree - 1) // 2
    x, y = gens[0].name, gens[1].name
    dy = model.d.values[y]
    if model.d.values[x] or len(dy.terms) != 1:
        return None
    mon = next(iter(dy.terms))
    if mon != (n + 1, 0):
        return None
    return n


def cpn_loop_basis(loop, n, lo, hi):
    """Basis x^p ȳ^{[q]} and x^p x̄ ȳ^{[q]} of H^*(LCP^n), labelled a_{p,q}, b_{p,q}.

    Classes are defined on Λ(x, x̄, ȳ)/(x^{n+1}), which receives a
    quasi-isomorphism from the loop model (y ↦ 0).
    """
    base = loop.base
    x, y = base.alg.names
    xb, yb = bar(x), bar(y)
    qalg = FreeGCA([(x, 2), (xb, 1), (yb, 2 * n)])
    ix = qalg.index[x]
    coeff = next(iter(base.d.values[y].terms.values()))
    Dq = {yb: qalg.gen(x) ** n * qalg.gen(xb) * (-(n + 1) * coeff)}
    Q = MonomialQuotient(qalg, Dq, killed=lambda mon: mon[ix] > n)
    q = CDGAMorphism(loop.total, Q, {x: qalg.gen(x), xb: qalg.gen(xb), yb: qalg.gen(yb)})

    def named(deg):
        out = []
        if deg == 0:
            return [("a_{0,0}", qalg.unit())]
        for s in range(0, deg // (2 * n) + 1):
            rest = deg - 2 * n * s
            div = Fraction(1, factorial(s))
            ys = qalg.gen(yb) ** s * div
            if rest % 2 == 0:
                p = rest // 2
                if 1 <= p <= n:
                    out.append((f"a_{{{p},{s}}}", qalg.gen(x) ** p * ys))
            else:
                r = (rest - 1) // 2
                if 0 <= r <= n - 1:
                    out.append((f"b_{{{r},{s}}}", qalg.gen(x) ** r * qalg.gen(xb) * ys))
        return out

    return _named_from_quotient(loop.total, Q, q, lo, hi, named)


# -- loop product -------------------------------------------------------------


class LoopAlgebra:
    """Structure constants of the loop product on ℍ_*(LM).

    ⟨A•B, γ⟩ = (-1)^{|A||B| + m|A|} ⟨A⊗B, θ(γ)⟩, degrees taken in H^*.
    """

    def __init__(self, coproduct, basis, maxdeg):
        self.cop = coproduct
        self.basis = basis
        self.m = coproduct.m
        self.maxdeg = maxdeg
        self.degree_of = basis.label_degree()
        self._table = None

    def hdegree(self, label):
        return self.degree_of[label] - self.m

    def _theta_named(self, k):
        """{label_gamma: {(labelA, labelB): coeff}} for gamma of degree k."""
        L = self.cop.L
        out = {}
        raw = self.cop.matrix(k)
        for lab, col in self.basis.classes.get(k, []):
            acc = {}
            for i, c in col.items():
                for (p, a, q, b), v in raw[i].items():
                    if p + q > self.maxdeg:
                        continue
                    rowA = self.basis.dual[p]
                    rowB = self.basis.dual[q]
                    for ia, ra in enumerate(rowA):
                        x = ra.get(a)
                        if not x:
                            continue
                        for ib, rb in enumerate(rowB):
                            y = rb.get(b)
                            if not y:
                                continue
                            key = (self.basis.labels[p][ia], self.basis.labels[q][ib])
                            w = acc.get(key, 0) + c * v * x * y
                            if w:
                                acc[key] = w
                            else:
                                acc.pop(key, None)
            out[lab] = acc
        return out

    def table(self):
        """{(A, B): {C: coeff}} for all pairs with |A| + |B| <= maxdeg."""
        if self._table is not None:
            return self._table
        m = self.m
        tab = {}
        for k in range(0, self.maxdeg - m + 1):
            if k not in self.basis.classes:
                continue
            for C, pairs in self._theta_named(k).items():
                for (A, B), v in pairs.items():
                    dA, dB = self.degree_of[A], self.degree_of[B]
                    sign = -1 if (dA * dB + m * dA) % 2 else 1
                    tab.setdefault((A, B), {})[C] = v * sign
        labels = [lab for n in sorted(self.basis.labels) for lab in self.basis.labels[n]]
        full = {}
        for A in labels:
            for B in labels:
                if self.degree_of[A] + self.degree_of[B] <= self.maxdeg:
                    full[(A, B)] = tab.get((A, B), {})
        self._table = full
        return full

    def product(self, A, B):
        return self.table()[(A, B)]

    def unit(self):
        """The constant-loop fundamental class, as {label: coeff}.

        ⟨U, γ⟩ is the value of γ restricted to constant loops on [M].
        """
        pd = self.cop.pd
        proj = self.cop.loop.projection
        top = pd.model.H(self.m)
        out = {}
        for lab, col in self.basis.classes.get(self.m, []):
            v = Fraction(0)
            for i, c in col.items():
                r = self.cop.L.H(self.m).reps[i]
                v += c * top.coords(proj(r)).get(0, 0)
            if v:
                out[lab] = v
        return out


def loop_product(model, dim, maxdeg, basis=None, coproduct=None):
    pd = poincare_data(model, dim)
    cop = coproduct or LoopCoproduct(model, pd)
    if basis is None:
        n = detect_cpn(model)
        if n is not None and dim == 2 * n:
            basis = cpn_loop_basis(cop.loop, n, 0, maxdeg)
        else:
            basis = NamedBasis.generic(cop.L, 0, maxdeg)
    return LoopAlgebra(cop, basis, maxdeg)


# -- equivariant model, Gysin sequence, string bracket --------------------------


class EquivariantModel:
    """(ΛV⊗ΛsV⊗Λu, D): D(u) = 0, D(v) = dv + u·s(v), D(sv) = -s(dv)."""

    def __init__(self, base, loop=None):
        self.base = base
        self.loop = loop if loop is not None else LoopSpaceModel(base)
        names = base.alg.names
        taken = set(self.loop.alg.names)
        u = "u"
        while u in taken:
            u += "_"
        self.u = u
        alg = FreeGCA(list(self.loop.alg.generators) + [Generator(u, 2)])
        self.alg = alg
        self.s = Derivation(alg, -1, {n: alg.gen(bar(n)) for n in names})
        D = {}
        for n in names:
            dv = transfer(base.d.values[n], alg)
            D[n] = dv + alg.gen(u) * alg.gen(bar(n))
            D[bar(n)] = -self.s(dv)
        self.total = SullivanModel(alg, D)
        L = self.loop.total
        self.pi = CDGAMorphism(self.total, L, {n: L.alg.gen(n) for n in L.alg.names})

    def cup_u(self, p):
        return p * self.alg.gen(self.u)

    def s_of_loop(self, z):
        """The Gysin map on a cocycle of the loop model: z ↦ s(z)."""
        return self.s(transfer(z, self.alg))


def equivariant_model(model, loop=None):
    return EquivariantModel(model, loop)


class GysinMaps:
    """Matrices of H(π), ∪u and the map s of the Gysin ladder.

    ``pi[n]``: H^n_{S¹} -> H^n(LM); ``cup_u[n]``: H^{n-2}_{S¹} -> H^n_{S¹};
    ``s[n]``: H^{n}(LM) -> H^{n-1}_{S¹}.
    """

    def __init__(self, eq, maxdeg):
        self.eq = eq
        self.maxdeg = maxdeg
        Eq, L = eq.total, eq.loop.total
        self.pi, self.cup_u, self.s = {}, {}, {}
        for n in range(0, maxdeg + 1):
            self.pi[n] = [L.H(n).coords(eq.pi(r)) for r in Eq.H(n).reps]
            self.cup_u[n] = [Eq.H(n).coords(eq.cup_u(r), check=True)
                             for r in Eq.H(n - 2).reps] if n >= 2 else []
            self.s[n] = [Eq.H(n - 1).coords(eq.s_of_loop(r), check=True)
                         for r in L.H(n).reps] if n >= 1 else []

    def exactness_defects(self):
        """Degrees/positions where the long exact sequence fails to be exact.

        The sequence is ... -> H^{n-2}_{S¹} -∪u-> H^n_{S¹} -π-> H^n(LM)
        -s-> H^{n-1}_{S¹} -∪u-> H^{n+1}_{S¹} -> ...
        """
        from .linalg import rank

        Eq, L = self.eq.total, self.eq.loop.total
        bad = []

        def check(label, n, f, g, mid_dim):
            # exactness at the middle space: ker g == im f
            comp = [dict() for _ in f]
            from .linalg import mat_vec
            comp = [mat_vec(g, col) for col in f] if g else []
            if any(comp):
                bad.append((label, n, "composite nonzero"))
                return
            rf = rank(f)
            rg = rank(g) if g else 0
            if rf != mid_dim - rg:
                bad.append((label, n, f"rank(in)={rf}, dim ker(out)={mid_dim - rg}"))

        top = self.maxdeg
        for n in range(0, top):
            # at H^n_{S¹}: in = cup_u[n], out = pi[n]
            check("H_S1", n, self.cup_u.get(n, []), self.pi[n], Eq.H(n).dim)
            # at H^n(LM): in = pi[n], out = s[n]
            check("H_L", n, self.pi[n], self.s[n], L.H(n).dim)
            # at H^{n-1}_{S¹}: in = s[n], out = cup_u[n+1]
            if n >= 1:
                check("H_S1'", n - 1, self.s[n], self.cup_u.get(n + 1, []), Eq.H(n - 1).dim)
        return bad


def gysin_maps(model, maxdeg, eq=None):
    return GysinMaps(eq or EquivariantModel(model), maxdeg)


def detect_odd_sphere_square(model):
    """N if the model is (Λ(x, y), 0) with |x| = |y| = N odd."""
    gens = model.alg.generators
    if len(gens) != 2 or gens[0].degree != gens[1].degree or gens[0].degree % 2 == 0:
        return None
    if any(model.d.values[g.name] for g in gens):
        return None
    return gens[0].degree


def odd_sphere_square_basis(eq, lo, hi):
    """u^r, e_{a,b} = x̄^a ȳ^b, f_{a,b} = (y x̄ - x ȳ) x̄^a ȳ^b, as t_r, a_{a,b}, b_{a,b}."""
    x, y = eq.base.alg.names
    N = eq.base.alg.degrees[0]
    alg = eq.alg
    X, Y, XB, YB, U = (alg.gen(k) for k in (x, y, bar(x), bar(y), eq.u))
    f00 = Y * XB - X * YB
    Eq = eq.total
    classes = {}
    for n in range(lo, hi + 1):
        items = []
        if n % 2 == 0:
            items.append((f"t_{{{n // 2}}}", U ** (n // 2)))
        if (N - 1) and n % (N - 1) == 0 and n > 0:
            k = n // (N - 1)
            for a in range(k, -1, -1):
                items.append((f"a_{{{a},{k - a}}}", XB ** a * YB ** (k - a)))
        r = n - (2 * N - 1)
        if r >= 0 and r % (N - 1) == 0:
            k = r // (N - 1)
            for a in range(k, -1, -1):
                items.append((f"b_{{{a},{k - a}}}", f00 * XB ** a * YB ** (k - a)))
        H = Eq.H(n)
        if len(items) != H.dim:
            raise ModelError(f"named equivariant basis does not match H^{n}", n)
        classes[n] = [(lab, H.coords(c, check=True)) for lab, c in items]
    return NamedBasis(classes)


class StringLieAlgebra:
    """Structure constants of the string bracket on 𝓗_* = H_{*+m}^{S¹}(LM).

    The bracket is dual to b^∨ = (s⊗s)∘θ∘H(π):
    ⟨[A, B], γ⟩ = (-1)^{|A|} ⟨A⊗B, b^∨(γ)⟩ with the plain pairing of dual
    bases; |A| is the 𝓗-degree (dual degree minus m).  With
    ``pairing="loop_product"`` the two factors are instead paired with the
    Koszul sign used for the loop product, which computes
    (-1)^{|A|} H(p)(𝕄(A) • 𝕄(B)) from the loop-product structure constants.
    """

    def __init__(self, coproduct, eq, basis, maxdeg, pairing="dual"):
        if pairing not in ("dual", "loop_product"):
            raise ValueError(f"unknown pairing convention {pairing!r}")
        self.pairing = pairing
        self.cop = coproduct
        self.eq = eq
        self.basis = basis
        self.m = coproduct.m
        self.maxdeg = maxdeg
        self.degree_of = basis.label_degree()
        self._table = None

    def hdegree(self, label):
        return self.degree_of[label] - self.m

    def table(self):
        """{(A, B): {C: coeff}} for all pairs whose bracket has degree <= maxdeg."""
        if self._table is not None:
            return self._table
        m = self.m
        Eq, L = self.eq.total, self.cop.L
        tab = {}
        s_cache = {}

        def s_named(p, i):
            key = (p, i)
            r = s_cache.get(key)
            if r is None:
                coords = Eq.H(p - 1).coords(self.eq.s_of_loop(L.H(p).reps[i]), check=True)
                r = self.basis.to_named(p - 1, coords)
                s_cache[key] = r
            return r

        for k in range(0, self.maxdeg + 1):
            for C, col in self.basis.classes.get(k, []):
                pic = {}
                for j, c in col.items():
                    r = Eq.H(k).reps[j]
                    for i, v in L.H(k).coords(self.eq.pi(r)).items():
                        pic[i] = pic.get(i, 0) + c * v
                acc = {}
                for i, c in pic.items():
                    if not c:
                        continue
                    for (p, a, q, b), v in self.cop.theta(k, i).items():
                        if p == 0 or q == 0:
                            continue
                        eps = 1
                        if self.pairing == "loop_product" and (p * q + m * p) % 2:
                            eps = -1
                        sa, sb = s_named(p, a), s_named(q, b)
                        for A, x in sa.items():
                            for B, y in sb.items():
                                key = (A, B)
                                w = acc.get(key, 0) + c * v * x * y * eps
                                if w:
                                    acc[key] = w
                                else:
                                    acc.pop(key, None)
                for (A, B), v in acc.items():
                    sign = -1 if self.hdegree(A) % 2 else 1
                    tab.setdefault((A, B), {})[C] = v * sign
        labels = [lab for n in sorted(self.basis.labels) for lab in self.basis.labels[n]]
        full = {}
        for A in labels:
            for B in labels:
                if self.degree_of[A] + self.degree_of[B] + 2 - m <= self.maxdeg:
                    full[(A, B)] = tab.get((A, B), {})
        self._table = full
        return full

    def bracket(self, A, B):
        return self.table()[(A, B)]


def string_bracket(model, dim, maxdeg, basis=None, coproduct=None, pairing="dual"):
    pd = poincare_data(model, dim)
    cop = coproduct or LoopCoproduct(model, pd)
    eq = EquivariantModel(model, loop=cop.loop)
    hi = maxdeg + dim
    if basis is None:
        if detect_odd_sphere_square(model) and dim == 2 * detect_odd_sphere_square(model):
            basis = odd_sphere_square_basis(eq, 0, hi)
        else:
            basis = NamedBasis.generic(eq.total, 0, hi, prefix="g")
    return StringLieAlgebra(cop, eq, basis, maxdeg, pairing)


# -- intersection morphism -----------------------------------------------------


class IntersectionMorphism:
    """I: ℍ_*(LM) -> H_*(ΩM) and its dual I^∨: H^*(ΩM) -> H^{*+m}(LM).

    A = ΛV/J with J = (ΛV)^{>m} ⊕ S, S spanned by the degree-m monomials
    other than the leading monomial of ω.  On A⊗ΛV̄ the dual is
    a ↦ (-1)^m ω⊗a, transported to the loop model through H(q)^{-1}.
    H^*(ΩM) = ΛV̄ (zero differential, the model being minimal) with the
    coproduct induced by the path-composition model modulo V.
    """

    def __init__(self, coproduct, maxdeg):
        cop = coproduct
        self.cop = cop
        self.m = m = cop.m
        self.maxdeg = maxdeg
        base = cop.base
        if not base.is_minimal:
            raise ModelError("the intersection morphism needs a minimal model")
        L = cop.L
        lalg = L.alg
        H = base.H(m)
        ecol = H.hcols[0]
        self.p0 = base.basis(m)[ecol]
        omega = H.reps[0]
        self.omega = omega
        vidx = [lalg.index[n] for n in base.alg.names]
        p0_in_L = transfer(base.alg.monomial(self.p0), lalg)
        (p0L, _), = p0_in_L.terms.items()
        p0v = tuple(p0L[i] for i in vidx)
        degs = [lalg.degrees[i] for i in vidx]

        def killed(mon):
            vpart = tuple(mon[i] for i in vidx)
            dv = sum(e * d for e, d in zip(vpart, degs))
            return dv > m or (dv == m and vpart != p0v)

        self.A = MonomialQuotient(lalg, L.d, killed)
        self.A.check_ideal_stable(maxdeg + m + 1)
        self.q = CDGAMorphism(L, self.A, {n: lalg.gen(n) for n in lalg.names}, check=False)
        self.fiber_alg = FreeGCA([(bar(g.name), g.degree - 1) for g in base.alg.generators])
        self.fiber = SullivanModel(self.fiber_alg, {})
        sign = -1 if m % 2 else 1
        self._omega_L = transfer(omega, lalg) * sign
        self.dual = {}
        self._qinv = {}
        for k in range(0, maxdeg + 1):
            cols = []
            for mon in self.fiber_alg.basis(k):
                a = transfer(self.fiber_alg.monomial(mon), lalg)
                cols.append(self._to_loop_coords(self._omega_L * a, k + m))
            self.dual[k] = cols  # column per ΛV̄-monomial: coords in H^{k+m}(LM)

    def _to_loop_coords(self, cocycle, n):
        inv = self._qinv.get(n)
        if inv is None:
            HL, HA = self.cop.L.H(n), self.A.H(n)
            mat = [HA.coords(self.q(r)) for r in HL.reps]
            if HA.dim != HL.dim:
                raise ModelError(f"the quotient A⊗ΛV̄ is not quasi-isomorphic in degree {n}", n)
            try:
                inv = inverse(mat, HL.dim)
            except SingularMatrix:
                raise ModelError(f"the quotient A⊗ΛV̄ is not quasi-isomorphic in degree {n}", n) from None
            self._qinv[n] = inv
        return mat_vec(inv, self.A.H(n).coords(cocycle, check=True))

    def homology_matrix(self, n):
        """I on the dual basis of H^n(LM): rows indexed by ΛV̄-monomials of degree n-m.

        Returns {i: {fiber_index: coeff}} for the dual h_i of each rep of H^n(LM).
        The dual of the degree-m map I^∨ carries the Koszul sign (-1)^{m n}.
        """
        k = n - self.m
        out = {i: {} for i in range(self.cop.L.H(n).dim)}
        if k < 0:
            return out
        sign = -1 if (self.m * n) % 2 else 1
        for j, col in enumerate(self.dual[k]):
            for i, c in col.items():
                out[i][j] = c * sign
        return out

    def pontryagin(self, k1, v1, k2, v2):
        """Product in H_*(ΩM) of dual vectors on ΛV̄ in degrees k1, k2."""
        fa = self.fiber_alg
        E = self.cop.pc.iterated
        out = {}
        for j, mon in enumerate(fa.basis(k1 + k2)):
            z = transfer(fa.monomial(mon), self.cop.L.alg)
            cz = self.cop.pc.c(z)
            val = Fraction(0)
            for t, c in cz.terms.items():
                if any(t[E.alg.index[n]] for n in self.cop.base.alg.names):
                    continue
                left = {E.alg.index[bar(n)] for n in self.cop.base.alg.names}
                s = E.alg.split_sign(t, left)
                lm = tuple(e if i in left else 0 for i, e in enumerate(t))
                rm = tuple(e if i not in left else 0 for i, e in enumerate(t))
                a = transfer(E.alg.monomial(lm), fa)
                b = transfer(E.alg.monomial(rm), fa,
                             {prime(bar(n)): bar(n) for n in self.cop.base.alg.names})
                if not a or not b:
                    continue
                (ma, ca), = a.terms.items()
                (mb, cb), = b.terms.items()
                if fa.mon_degree(ma) != k1:
                    continue
                ia = fa.basis_index(k1)[ma]
                ib = fa.basis_index(k2)[mb]
                val += c * s * ca * cb * v1.get(ia, 0) * v2.get(ib, 0)
            if val:
                out[j] = val
        return out


def intersection_morphism(model, dim, maxdeg, coproduct=None):
    pd = poincare_data(model, dim)
    cop = coproduct or LoopCoproduct(model, pd)
    return IntersectionMorphism(cop, maxdeg)
