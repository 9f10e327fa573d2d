"""Sullivan models attached to a simply connected model (ΛV, d).

Naming of generator copies (all built as single free algebras):

* ``x'`` and ``x''``  second and third copies of ``x`` (ΛV' and ΛV'')
* ``xb``              the suspension sx of the free loop model, degree |x|-1
* ``xb'``             the second suspension s'x of LM x_M LM
* ``x_d``             the generator x̄ of the relative model of the
                      multiplication ΛV⊗ΛV' -> ΛV (the diagonal direction)
* ``x_d'``            its copy relative to ΛV'⊗ΛV''

Lifting problems (relative model, path composition, μ_T) are solved degree by
degree with exact linear algebra; every free variable of a solve is set to 0.
"""

from fractions import Fraction

from .cohomology import (
    CDGA,
    CDGAMorphism,
    Derivation,
    LiftingSystem,
    ModelError,
    NoSolution,
    SullivanModel,
    h_star_of_morphism,
    transfer,
)
from .gca import AlgebraMap, FreeGCA, Generator

__all__ = [
    "bar",
    "prime",
    "diag",
    "LoopSpaceModel",
    "IteratedLoopModel",
    "RelativeMultiplicationModel",
    "PathCompositionModel",
    "ModuleMorphism",
    "loop_space_model",
    "iterated_loop_model",
    "relative_multiplication_model",
    "path_composition_model",
    "mu_T_extension",
    "tensor_square",
]


def bar(name):
    return name + "b"


def prime(name, k=1):
    return name + "'" * k


def diag(name):
    return name + "_d"


def _require_simply_connected(m):
    low = [g.name for g in m.alg.generators if g.degree < 2]
    if low:
        raise ModelError(f"model is not simply connected: generators of degree 1: {low}", 1)


def _build_algebra(base, parts):
    """Free GCA on renamed copies of base generators.

    ``parts`` is a list of (rename function, degree shift).
    """
    gens = []
    for fn, shift in parts:
        for g in base.alg.generators:
            gens.append(Generator(fn(g.name), g.degree + shift))
    try:
        return FreeGCA(gens)
    except Exception as exc:
        raise ModelError(f"generator names collide when building a derived model: {exc}") from None


def _ident(n):
    return n


class LoopSpaceModel:
    """(ΛV⊗ΛsV, D) with D(sv) = -s(dv)."""

    def __init__(self, base):
        _require_simply_connected(base)
        self.base = base
        alg = _build_algebra(base, [(_ident, 0), (bar, -1)])
        self.alg = alg
        self.s = Derivation(alg, -1, {n: alg.gen(bar(n)) for n in base.alg.names})
        D = {}
        for n in base.alg.names:
            dv = transfer(base.d.values[n], alg)
            D[n] = dv
            D[bar(n)] = -self.s(dv)
        self.total = SullivanModel(alg, D, name=f"L({base.name})" if base.name else None)
        self.projection = CDGAMorphism(
            self.total, base, {n: base.alg.gen(n) for n in base.alg.names}, check=False)

    def include_base(self, p):
        return transfer(p, self.alg)


class IteratedLoopModel:
    """Model of LM x_M LM: (ΛV⊗ΛsV⊗Λs'V, D)."""

    def __init__(self, base):
        _require_simply_connected(base)
        self.base = base
        alg = _build_algebra(base, [(_ident, 0), (bar, -1), (lambda n: prime(bar(n)), -1)])
        self.alg = alg
        self.s = Derivation(alg, -1, {n: alg.gen(bar(n)) for n in base.alg.names})
        self.s2 = Derivation(alg, -1, {n: alg.gen(prime(bar(n))) for n in base.alg.names})
        D = {}
        for n in base.alg.names:
            dv = transfer(base.d.values[n], alg)
            D[n] = dv
            D[bar(n)] = -self.s(dv)
            D[prime(bar(n))] = -self.s2(dv)
        self.total = SullivanModel(alg, D)


def loop_space_model(m):
    return LoopSpaceModel(m)


def iterated_loop_model(m):
    return IteratedLoopModel(m)


def tensor_square(base, k=1):
    """(ΛV⊗ΛV', d⊗d) (``k`` = 1) or with a third copy ΛV'' (``k`` = 2)."""
    parts = [(lambda n, i=i: prime(n, i), 0) for i in range(k + 1)]
    alg = _build_algebra(base, parts)
    D = {}
    for i in range(k + 1):
        ren = {n: prime(n, i) for n in base.alg.names}
        for n in base.alg.names:
            D[prime(n, i)] = transfer(base.d.values[n], alg, ren)
    return SullivanModel(alg, D)


def _word_length(mon):
    return sum(mon)


class RelativeMultiplicationModel:
    """Relative model (ΛV⊗ΛV'⊗ΛV̄, D) of the multiplication ΛV⊗ΛV' -> ΛV.

    D(x_d) = x - x' - η_x with η_x of word length >= 2, chosen so that
    μ(η_x) = s(dx) where μ identifies x, x' with x and x_d with xb.  Pushing
    the model out along μ then reproduces the loop model exactly.
    """

    def __init__(self, base, loop=None):
        _require_simply_connected(base)
        self.base = base
        self.loop = loop if loop is not None else LoopSpaceModel(base)
        names = base.alg.names
        alg = _build_algebra(base, [(_ident, 0), (prime, 0), (diag, -1)])
        self.alg = alg
        self.vv = tensor_square(base)
        D = {}
        pr = {n: prime(n) for n in names}
        for n in names:
            D[n] = transfer(base.d.values[n], alg)
            D[prime(n)] = transfer(base.d.values[n], alg, pr)
        mu_vals = {}
        for n in names:
            mu_vals[n] = self.loop.alg.gen(n)
            mu_vals[prime(n)] = self.loop.alg.gen(n)
            mu_vals[diag(n)] = self.loop.alg.gen(bar(n))
        mu_map = AlgebraMap(alg, self.loop.alg, mu_vals)
        self.eta = {}
        defined = set()
        for g in base.alg.generators:
            n = g.name
            deriv = Derivation(alg, 1, D)
            stage = CDGA(alg, deriv)
            allowed = {alg.index[diag(k)] for k in defined}
            dgens = {alg.index[diag(k)] for k in names}
            cand = [
                mon for mon in alg.basis(g.degree)
                if _word_length(mon) >= 2
                and all(not mon[i] or i in allowed for i in dgens)
            ]
            system = LiftingSystem(
                alg, cand,
                [(deriv, stage, g.degree + 1), (mu_map, self.loop.total, g.degree)])
            dv = D[n] - D[prime(n)]
            s_dv = self.loop.s(transfer(base.d.values[n], self.loop.alg))
            eta = system.solve([dv, s_dv])
            if eta is NoSolution:
                raise ModelError(
                    f"relative model: no correction term for {diag(n)} in degree {g.degree}",
                    g.degree)
            eta = self._antisymmetrize(eta, defined, deriv, mu_map, dv, s_dv)
            self.eta[n] = eta
            D[diag(n)] = alg.gen(n) - alg.gen(prime(n)) - eta
            defined.add(n)
        self.total = SullivanModel(alg, D)
        self.phi = CDGAMorphism(
            self.total, base,
            {**{n: base.alg.gen(n) for n in names},
             **{prime(n): base.alg.gen(n) for n in names}})
        self.mu = CDGAMorphism(self.total, self.loop.total, mu_vals)
        self.diag_indices = frozenset(alg.index[diag(n)] for n in names)
        self.vv_indices = frozenset(i for i in range(alg.ngens) if i not in self.diag_indices)

    def _antisymmetrize(self, eta, defined, deriv, mu_map, dv, s_dv):
        """½(η - τη) for the swap τ: x <-> x', x_d -> -x_d, if it still solves.

        The solver's particular solution favours one factor; the swap-odd
        part is the canonical choice (for the 11-manifold it is the
        correction ½x̄(y+y') - ½(x+x')ȳ).
        """
        alg = self.alg
        vals = {}
        for k in self.base.alg.names:
            vals[k] = alg.gen(prime(k))
            vals[prime(k)] = alg.gen(k)
            vals[diag(k)] = -alg.gen(diag(k)) if k in defined else alg.gen(diag(k))
        tau = AlgebraMap(alg, alg, vals)
        sym = (eta - tau(eta)) * Fraction(1, 2)
        if deriv(sym) == deriv(eta) and mu_map(sym) == mu_map(eta):
            return sym
        return eta

    def check(self, maxdeg):
        """Verify D² = 0 and that phi is a quasi-isomorphism through maxdeg."""
        self.total.check_d_squared(maxdeg)
        h_star_of_morphism(self.phi, 0, maxdeg, invert=True)
        return True

    def split(self, mon):
        """mon = sign * (ΛV⊗ΛV' part) * (V̄ part)."""
        alg = self.alg
        left = tuple(e if i in self.vv_indices else 0 for i, e in enumerate(mon))
        right = tuple(e if i in self.diag_indices else 0 for i, e in enumerate(mon))
        return alg.split_sign(mon, self.vv_indices), left, right


def relative_multiplication_model(m, maxdeg=None):
    rel = RelativeMultiplicationModel(m)
    if maxdeg is not None:
        rel.total.check_d_squared(maxdeg)
    return rel


class PathCompositionModel:
    """A model c: (ΛV⊗ΛsV, D) -> (ΛV⊗ΛsV⊗Λs'V, D) of path composition.

    First c' is built on the relative model: c'(x) = x, c'(x') = x'' and
    c'(x_d) solves D c'(x_d) = c'(D x_d) in Z = R⊗_{ΛV'}R' with the strict
    condition that c'(x_d) maps to zero in ΛV.  Then c is the pushout of c'
    along the identifications x, x', x'' -> x.
    """

    def __init__(self, base, rel=None, maxdeg=None):
        self.base = base
        self.rel = rel if rel is not None else RelativeMultiplicationModel(base)
        self.loop = self.rel.loop
        self.iterated = IteratedLoopModel(base)
        names = base.alg.names
        R = self.rel
        zalg = _build_algebra(base, [(_ident, 0), (prime, 0), (lambda n: prime(n, 2), 0),
                                     (diag, -1), (lambda n: prime(diag(n)), -1)])
        self.zalg = zalg
        shift = {}
        for n in names:
            shift[n] = prime(n)
            shift[prime(n)] = prime(n, 2)
            shift[diag(n)] = prime(diag(n))
        D = {}
        for n in names:
            D[n] = transfer(R.total.d.values[n], zalg)
            D[prime(n)] = transfer(R.total.d.values[prime(n)], zalg)
            D[prime(n, 2)] = transfer(R.total.d.values[prime(n)], zalg, shift)
            D[diag(n)] = transfer(R.total.d.values[diag(n)], zalg)
            D[prime(diag(n))] = transfer(R.total.d.values[diag(n)], zalg, shift)
        self.Z = SullivanModel(zalg, D)
        Phi = AlgebraMap(zalg, base.alg, {
            **{n: base.alg.gen(n) for n in names},
            **{prime(n): base.alg.gen(n) for n in names},
            **{prime(n, 2): base.alg.gen(n) for n in names},
        })
        cvals = {}
        for n in names:
            cvals[n] = zalg.gen(n)
            cvals[prime(n)] = zalg.gen(prime(n, 2))
        for g in base.alg.generators:
            n = g.name
            deg = g.degree - 1
            cmap = AlgebraMap(R.alg, zalg, cvals)
            target = cmap(R.total.d.values[diag(n)])
            system = LiftingSystem(
                zalg, zalg.basis(deg), [(self.Z.d, self.Z, deg + 1), (Phi, base, deg)])
            w = system.solve([target, base.alg.zero()])
            if w is NoSolution:
                raise ModelError(f"path composition: lifting failed for {diag(n)}", deg)
            cvals[diag(n)] = w
        self.c_prime = CDGAMorphism(R.total, self.Z, cvals)
        E = self.iterated
        pi = AlgebraMap(zalg, E.alg, {
            **{n: E.alg.gen(n) for n in names},
            **{prime(n): E.alg.gen(n) for n in names},
            **{prime(n, 2): E.alg.gen(n) for n in names},
            **{diag(n): E.alg.gen(bar(n)) for n in names},
            **{prime(diag(n)): E.alg.gen(prime(bar(n))) for n in names},
        })
        vals = {}
        for n in names:
            vals[n] = E.alg.gen(n)
            vals[bar(n)] = pi(cvals[diag(n)])
        self.c = CDGAMorphism(self.loop.total, E.total, vals)
        if maxdeg is not None:
            self.Z.check_d_squared(maxdeg)


def path_composition_model(m, maxdeg=None, rel=None):
    return PathCompositionModel(m, rel=rel, maxdeg=maxdeg)


class ModuleMorphism:
    """A (ΛV⊗ΛV')-linear chain map f from the relative model to ΛV⊗ΛV'.

    Values are kept on V̄-monomials; f(a·w) = a·f(w) for a in ΛV⊗ΛV'.
    """

    def __init__(self, rel, T, degree):
        self.rel = rel
        self.T = transfer(T, rel.vv.alg)
        self.degree = degree
        self.target = rel.vv
        if not self.target.is_cocycle(self.T):
            raise ModelError("diagonal class T is not a cocycle", degree)
        self.values = {rel.alg.one: self.T}

    def value(self, w):
        r = self.values.get(w)
        if r is not None:
            return r
        rel = self.rel
        rhs = self(rel.total.d(rel.alg.monomial(w)))
        sol = self.target.solve_preimage(rhs, rel.alg.mon_degree(w) + self.degree + 1)
        if sol is NoSolution:
            raise ModelError(
                "mu_T extension has no solution at "
                f"{rel.alg.mon_str(w)} (degree {rel.alg.mon_degree(w)}); "
                "the model does not satisfy Poincaré duality in the needed range",
                rel.alg.mon_degree(w))
        self.values[w] = sol
        return sol

    def __call__(self, p):
        rel = self.rel
        tgt = self.target.alg
        out = tgt.zero()
        for mon, c in p.terms.items():
            sign, left, right = rel.split(mon)
            fw = self.value(right)
            if fw:
                out = out + transfer(rel.alg.monomial(left), tgt) * fw * (sign * c)
        return out

    def check(self, maxdeg):
        """d f(w) = f(D w) on every V̄-monomial of degree <= maxdeg."""
        rel = self.rel
        alg = rel.alg
        for n in range(0, maxdeg + 1):
            for mon in alg.basis(n):
                if any(mon[i] for i in rel.vv_indices):
                    continue
                lhs = self.target.dpoly(self.value(mon))
                rhs = self(rel.total.d(alg.monomial(mon)))
                if lhs != rhs:
                    raise ModelError(f"mu_T is not a chain map at {alg.mon_str(mon)}", n)
        return True


def mu_T_extension(rel, T, degree, maxdeg=None):
    f = ModuleMorphism(rel, T, degree)
    if maxdeg is not None:
        f.check(maxdeg)
    return f
