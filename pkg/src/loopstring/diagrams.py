"""Executable checks of the squares relating loop homology to Lie models.

Every check returns a :class:`SquareResult`: the highest degree through
which the square was verified, how many elements were compared, and the
first witness of failure if there is one.  :func:`theorem_diagram_checks`
runs them all for a Lie model of a Poincaré duality space.

* ``cap_naturality``: cap_c∘C^*(L;μ^∨) = C_*(L;μ^∨)∘cap_c on cochains.
* ``diagonal_square``: on homology, C_*(Δ;id)∘cap_u∘ι_T∘Φ agrees with
  (cap_u⊗cap_u)∘(ι_S⊗ι_S)∘(μ_T⊗1), for cocycles of the relative model.
* ``diagonal_square_trivial``: the same with trivial coefficients, i.e.
  H(Δ)∘cap = (cap⊗cap)∘μ_T^* on H^*(L).
* ``intersection_square``: Ψ∘I = HH(ε)∘Φ with Φ the identification of
  loop homology with HH^*(A;A) and Ψ multiplicative.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .ce import (
    CECochains,
    CEChains,
    CapProduct,
    CoadjointModule,
    TensorModule,
    TrivialModule,
    diagonal_chain_map,
    fundamental_cycle,
    multiplication_dual,
)
from .cohomology import transfer
from .comparison import HochschildSide, Identification, LoopSide, identify_algebras, indecomposables
from .hochschild import FiniteAlgebra, HochschildCohomology
from .lie import EnvelopingAlgebra, cochain_algebra
from .lie_models import loop_cochain_map
from .linalg import Echelon, axpy
from .models import prime
from .string_topology import (
    IntersectionMorphism,
    LoopCoproduct,
    NamedBasis,
    PoincareData,
    LoopAlgebra,
)

__all__ = [
    "SquareResult",
    "LieDiagrams",
    "theorem_diagram_checks",
]


def _sign(k):
    return -1 if k % 2 else 1


def _clean(v):
    return {k: Fraction(c) for k, c in v.items() if c}


@dataclass
class SquareResult:
    name: str
    lo: int
    hi: int
    compared: int = 0
    witness: object = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.witness is None

    def line(self):
        status = "commutes" if self.ok else f"FAILS at {self.witness!r}"
        return f"{self.name}: degrees [{self.lo}, {self.hi}], {self.compared} compared, {status}"


def _module_image(g, lab):
    """C^*(L;g) or C_*(L;g) on a label (mon, n)."""
    mon, n = lab
    return {(mon, n2): c for n2, c in g.label(n).items()}


class _PontryaginSide:
    """H_*(ΩM) as ΛV̄-dual vectors with the Pontryagin product."""

    def __init__(self, I):
        self.I = I

    def dim(self, k):
        return len(self.I.fiber_alg.basis(k)) if k >= 0 else 0

    def mul(self, k1, v1, k2, v2):
        if not v1 or not v2:
            return {}
        return _clean(self.I.pontryagin(k1, v1, k2, v2))

    def unit(self):
        return {0: Fraction(1)}


class LieDiagrams:
    """All the maps needed for the squares, built once for a Lie model L of M.

    ``m`` is the dimension of M and ``J`` the truncation degree of UL.  The
    Sullivan side uses C^*L as the model of M so that generator names agree
    with the Sullivan algebras C^*(L^S) and C^*(L^T).
    """

    def __init__(self, L, m, J, chain_max=None):
        self.L, self.m, self.J = L, m, J
        self.chain_max = chain_max
        self.U = EnvelopingAlgebra(L, J)
        self.Nd = CoadjointModule(self.U, J)
        self.NN = TensorModule(self.Nd, self.Nd)
        self.base = cochain_algebra(L)
        self.pd = PoincareData(self.base, m)
        self.u = fundamental_cycle(L, m, omega=self.pd.omega, chain_max=chain_max)
        self.cap_Q = CapProduct(L, TrivialModule(L), self.u, m, chain_max)
        self.cap_S = CapProduct(L, self.Nd, self.u, m, chain_max)
        self.cap_T = CapProduct(L, self.NN, self.u, m, chain_max)
        self._cop = None

    @property
    def cop(self):
        if self._cop is None:
            self._cop = LoopCoproduct(self.base, self.pd)
        return self._cop

    # -- cap naturality --------------------------------------------------

    def cap_naturality(self, hi):
        """cap_c∘C^*(L;μ^∨) = C_*(L;μ^∨)∘cap_c on every cochain label of degree <= hi."""
        mu = multiplication_dual(self.Nd, self.NN)
        res = SquareResult("cap naturality for mu^v", 0, hi)
        src = self.cap_S.cochains
        for n in range(0, hi + 1):
            for lab in src.basis(n):
                lhs = self.cap_T(_module_image(mu, lab))
                rhs = {}
                for lab2, c in self.cap_S.label(lab).items():
                    axpy(rhs, c, _module_image(mu, lab2))
                res.compared += 1
                if _clean(lhs) != _clean(rhs):
                    res.witness = lab
                    return res
        return res

    # -- the diagonal squares -------------------------------------------

    def _cap_tensor(self, cap, pairs):
        """(f⊗g) ∩ (u⊗u) = (-1)^{m|g|} (f∩u)⊗(g∩u), summed over Σ c·(f⊗g)."""
        out = {}
        m = self.m
        for c, f, g, gdeg in pairs:
            cf, cg = cap(f), cap(g)
            s = _sign(m * gdeg)
            for a, x in cf.items():
                for b, y in cg.items():
                    key = (a, b)
                    out[key] = out.get(key, 0) + s * c * x * y
        return _clean(out)

    def diagonal_square(self, hi):
        """The diagonal square on cohomology classes of the relative model P, degrees <= hi."""
        cop, m = self.cop, self.m
        iota_T = loop_cochain_map(self.L, 2, self.U, self.J, self.chain_max)
        sul_T = iota_T.sullivan
        iota_S = loop_cochain_map(self.L, 1, self.U, self.J, self.chain_max)
        sul_S = iota_S.sullivan
        _, tgt, delta = diagonal_chain_map(self.L, self.Nd, self.Nd, self.chain_max)
        LL = cop.LL.alg
        left = cop._ll_left
        res = SquareResult("diagonal square (N = (UL)^v)", 0, hi)
        for n in range(0, hi + 1):
            H = cop.P.H(n)
            for z in H.reps:
                route_a = delta(self.cap_T(iota_T(transfer(cop.phi1(z), sul_T.alg))))
                w = cop.F(z)
                pairs = []
                for mon, c in w.terms.items():
                    s = LL.split_sign(mon, left)
                    lm = tuple(e if i in left else 0 for i, e in enumerate(mon))
                    rm = tuple(e if i not in left else 0 for i, e in enumerate(mon))
                    f = iota_S(transfer(LL.monomial(lm), sul_S.alg))
                    g = iota_S(transfer(LL.monomial(rm), sul_S.alg, cop._unprime))
                    pairs.append((c * s, f, g, LL.mon_degree(rm)))
                route_b = self._cap_tensor(self.cap_S, pairs)
                res.compared += 1
                if not self._same_class(tgt, m - n, route_a, route_b):
                    res.witness = (n, z)
                    return res
        return res

    def diagonal_square_trivial(self, hi):
        """H(Δ)∘cap = (cap⊗cap)∘μ_T^* on H^*(L) in degrees <= hi."""
        cop, m = self.cop, self.m
        iota_Q = loop_cochain_map(self.L, 0, self.U, self.J, self.chain_max)
        sul_Q = iota_Q.sullivan
        _, tgt, delta = diagonal_chain_map(self.L, TrivialModule(self.L), TrivialModule(self.L), self.chain_max)
        vv = cop.rel.vv
        vv_alg = vv.alg
        left = frozenset(vv_alg.index[nm] for nm in self.base.alg.names)
        unprime = {prime(nm): nm for nm in self.base.alg.names}
        res = SquareResult("diagonal square (N = Q)", 0, hi)
        for n in range(0, min(hi, m) + 1):
            for a in self.base.H(n).reps:
                chain = self.cap_Q(iota_Q(transfer(a, sul_Q.alg)))
                route_a = delta({(mon, ("1", "1")): c for (mon, _), c in chain.items()})
                w = transfer(cop.mu_T(transfer(a, cop.rel.alg)), vv_alg)
                pairs = []
                for mon, c in w.terms.items():
                    s = vv_alg.split_sign(mon, left)
                    lm = tuple(e if i in left else 0 for i, e in enumerate(mon))
                    rm = tuple(e if i not in left else 0 for i, e in enumerate(mon))
                    f = iota_Q(transfer(vv_alg.monomial(lm), sul_Q.alg))
                    g = iota_Q(transfer(vv_alg.monomial(rm), sul_Q.alg, unprime))
                    pairs.append((c * s, f, g, vv_alg.mon_degree(rm)))
                route_b = self._cap_tensor(self.cap_Q, pairs)
                res.compared += 1
                if not self._same_class(tgt, m - n, route_a, route_b):
                    res.witness = (n, a)
                    return res
        return res

    @staticmethod
    def _same_class(cx, n, a, b, sign=1):
        diff = dict(a)
        axpy(diff, -sign, b)
        diff = _clean(diff)
        if not diff:
            return True
        return not cx.homology(n).coords(diff)

    # -- the intersection square ---------------------------------------------

    def intersection_square(self, lo, hi):
        """Ψ∘I = HH(ε)∘Φ on ℍ_k(LM) for k in [lo, hi] (M formal, A = H^*(M)).

        Φ is the multiplicative identification of ℍ_*(LM) with HH^*(A;A)
        built by :func:`identify_algebras`; Ψ is defined on indecomposables
        of H_*(ΩM) by Ψ(g) = HH(ε)Φ(ξ) for any ξ with I(ξ) = g, and extended
        multiplicatively.
        """
        cop, m = self.cop, self.m
        res = SquareResult("intersection square", lo, hi)
        top = hi + 2 * m
        LP = LoopAlgebra(cop, NamedBasis.generic(cop.L, 0, top), top)
        I = IntersectionMorphism(cop, hi + 1)
        A = FiniteAlgebra.from_model(self.base, m)
        HA = HochschildCohomology(A, lo, hi, "A")
        HQ = HochschildCohomology(A, lo, hi, "Q")
        eps = HA.complex.change_of_coefficients(HQ.complex)
        src, tgt = LoopSide(LP), HochschildSide(HA)
        phi = identify_algebras(src, tgt, lo, hi, bottom=-m)
        if phi.problems:
            res.witness = ("Phi", phi.problems[0])
            return res

        def I_vec(k, v):
            out = {}
            mat = I.homology_matrix(k + m)
            for i, c in v.items():
                axpy(out, c, mat.get(i, {}))
            return _clean(out)

        def eps_vec(k, v):
            cols = eps.homology_matrix(k)
            out = {}
            for i, c in v.items():
                axpy(out, c, cols[i])
            return _clean(out)

        omega = _PontryaginSide(I)
        qside = HochschildSide(HQ)
        psi = Identification(omega, qside, 0, hi)
        psi._add(0, omega.unit(), qside.unit())
        for k in range(1, hi + 1):
            for j in indecomposables(omega, k, 0, hi):
                g = {j: Fraction(1)}
                xi = _preimage([I_vec(k, {i: Fraction(1)}) for i in range(src.dim(k))], g)
                if xi is None:
                    res.witness = ("I not onto", k, j)
                    return res
                image = eps_vec(k, phi.apply(k, xi))
                psi.generators.append((k, g, image))
                psi._add(k, g, image)
        psi.close()
        if psi.problems:
            res.witness = ("Psi", psi.problems[0])
            return res
        for k in range(lo, hi + 1):
            if k >= 0 and not psi.is_bijective(k):
                res.witness = ("Psi not bijective", k)
                return res
            for i in range(src.dim(k)):
                e = {i: Fraction(1)}
                lhs = psi.apply(k, I_vec(k, e)) if k >= 0 else {}
                rhs = eps_vec(k, phi.apply(k, e))
                res.compared += 1
                if lhs != rhs:
                    res.witness = (k, i)
                    return res
        checked, bad = psi.check_products(0, hi)
        res.notes.append(f"Psi multiplicative on {checked} pairs")
        if bad:
            res.witness = ("Psi products", bad[0])
        return res


def _preimage(columns, target):
    """Some x with Σ x_i columns[i] = target, or None."""
    e = Echelon(track=True)
    for i, col in enumerate(columns):
        e.insert(col, i)
    combo = e.express(target)
    if combo is None:
        return None
    return _clean(combo)


def theorem_diagram_checks(L, m, hi, J=None, intersection=True):
    """Run every square for a Lie model L of an m-dimensional M through degree hi."""
    J = hi + m + 2 if J is None else J
    D = LieDiagrams(L, m, J)
    out = [D.cap_naturality(hi), D.diagonal_square_trivial(hi), D.diagonal_square(hi)]
    if intersection:
        out.append(D.intersection_square(-m, hi))
    return out
