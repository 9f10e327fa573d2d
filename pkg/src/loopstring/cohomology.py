"""Differentials, derivations and cohomology of (quotients of) free CDGAs.

Everything is computed degreewise by exact Gaussian elimination.  For a
degree ``n`` the columns of ``d: A^n -> A^{n+1}`` are inserted one by one
into a tracked :class:`~loopstring.linalg.Echelon`; a column that turns out
dependent is a *free* column and carries a kernel vector with coefficient 1
on itself and support otherwise on pivot columns.  Cohomology
representatives are the kernel vectors whose free column survives reduction
modulo the image of the previous differential.
"""

from fractions import Fraction

from .gca import AlgebraError, AlgebraMap, FreeGCA, Polynomial
from .linalg import Echelon, SingularMatrix, axpy, inverse, mat_mul

__all__ = [
    "Derivation",
    "CDGA",
    "SullivanModel",
    "MonomialQuotient",
    "CDGAMorphism",
    "CohomologyBasis",
    "NoSolution",
    "NotQuasiIso",
    "ModelError",
    "cohomology",
    "solve_preimage",
    "d_matrix",
    "apply_derivation",
    "h_star_of_morphism",
]


class ModelError(ValueError):
    """A model violates one of its defining invariants."""

    def __init__(self, msg, degree=None):
        super().__init__(msg)
        self.degree = degree


class NotQuasiIso(ArithmeticError):
    def __init__(self, degree):
        super().__init__(f"morphism is not a quasi-isomorphism in degree {degree}")
        self.degree = degree


class _NoSolution:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "NoSolution"


NoSolution = _NoSolution()


class Derivation:
    """A derivation of a free GCA, determined by its values on generators.

    theta(ab) = theta(a) b + (-1)^{|theta||a|} a theta(b).
    """

    def __init__(self, alg, degree, values):
        self.alg = alg
        self.degree = degree
        self.values = {}
        for name in alg.names:
            v = values.get(name)
            if v is None or (isinstance(v, int) and v == 0):
                v = alg.zero()
            if v and v.alg != alg:
                raise AlgebraError(f"value of {name!r} lives in another algebra")
            if v:
                want = alg.degrees[alg.index[name]] + degree
                if set(v.degrees()) != {want}:
                    raise ModelError(
                        f"derivation value on {name!r} must be homogeneous of degree {want}, "
                        f"got degrees {v.degrees()}", want)
            self.values[name] = v
        self._gen = [self.values[n] for n in alg.names]
        self._cache = {}

    def on_monomial(self, mon):
        r = self._cache.get(mon)
        if r is not None:
            return r
        alg = self.alg
        out = {}
        odd_before = 0
        for i, e in enumerate(mon):
            if not e:
                continue
            val = self._gen[i]
            if val:
                pre = tuple(x if j < i else 0 for j, x in enumerate(mon))
                post = tuple(x if j > i else 0 for j, x in enumerate(mon))
                mid = [0] * alg.ngens
                mid[i] = e - 1
                sign = -1 if (self.degree % 2 and odd_before % 2) else 1
                coeff = sign * e
                term = alg.monomial(pre) * alg.monomial(tuple(mid)) * val * alg.monomial(post)
                for m, c in term.terms.items():
                    v = out.get(m, 0) + coeff * c
                    if v:
                        out[m] = v
                    else:
                        del out[m]
            if alg.degrees[i] % 2:
                odd_before += e
        r = Polynomial(alg, out)
        self._cache[mon] = r
        return r

    def __call__(self, p):
        out = {}
        for mon, c in p.terms.items():
            for m2, c2 in self.on_monomial(mon).terms.items():
                v = out.get(m2, 0) + c * c2
                if v:
                    out[m2] = v
                else:
                    del out[m2]
        return Polynomial(self.alg, out)


def apply_derivation(theta, p):
    return theta(p)


class CDGA:
    """A free GCA with a differential, optionally modulo a monomial ideal.

    ``killed(mon)`` decides membership of a monomial in the ideal; the ideal
    must be stable under the differential.
    """

    def __init__(self, alg, d, killed=None, name=None):
        if isinstance(d, dict):
            d = Derivation(alg, 1, d)
        if d.degree != 1:
            raise ModelError("differential must have degree +1")
        self.alg = alg
        self.d = d
        self.killed = killed
        self.name = name
        self._basis = {}
        self._index = {}
        self._ech = {}
        self._H = {}
        self._rel_ech = {}

    # -- graded pieces -----------------------------------------------------

    def basis(self, n):
        b = self._basis.get(n)
        if b is None:
            b = self.alg.basis(n)
            if self.killed is not None:
                b = tuple(m for m in b if not self.killed(m))
            self._basis[n] = b
        return b

    def index(self, n):
        ix = self._index.get(n)
        if ix is None:
            ix = {m: i for i, m in enumerate(self.basis(n))}
            self._index[n] = ix
        return ix

    def dim(self, n):
        return len(self.basis(n))

    def project(self, p):
        if self.killed is None:
            return p
        return Polynomial(self.alg, {m: c for m, c in p.terms.items() if not self.killed(m)})

    def mul(self, p, q):
        return self.project(p * q)

    def dpoly(self, p):
        return self.project(self.d(p))

    def gen(self, name):
        return self.project(self.alg.gen(name))

    def to_vector(self, p, n):
        ix = self.index(n)
        out = {}
        for m, c in p.terms.items():
            if self.killed is not None and self.killed(m):
                continue
            try:
                out[ix[m]] = c
            except KeyError:
                raise AlgebraError(
                    f"monomial {self.alg.mon_str(m)} is not of degree {n}") from None
        return out

    def from_vector(self, vec, n):
        b = self.basis(n)
        return Polynomial(self.alg, {b[i]: Fraction(c) for i, c in vec.items() if c})

    def d_column(self, n, j):
        return self.to_vector(self.dpoly(self.alg.monomial(self.basis(n)[j])), n + 1)

    def d_matrix(self, n):
        """Columns of d: A^n -> A^{n+1} in the deterministic bases."""
        return [self.d_column(n, j) for j in range(self.dim(n))]

    # -- elimination -------------------------------------------------------

    def echelon(self, n):
        """(tracked echelon of d on degree n, kernel dict free_col -> vector)."""
        r = self._ech.get(n)
        if r is None:
            e = Echelon(track=True)
            ker = {}
            if n >= 0:
                for j in range(self.dim(n)):
                    dep = e.insert(self.d_column(n, j), j)
                    if dep is not None:
                        ker[j] = dep
            r = (e, ker)
            self._ech[n] = r
        return r

    def H(self, n):
        """Cohomology data in degree n."""
        h = self._H.get(n)
        if h is None:
            h = _HDegree(self, n)
            self._H[n] = h
        return h

    def cohomology(self, lo, hi):
        return CohomologyBasis(self, lo, hi)

    def solve_preimage(self, target, n=None):
        """Some p with d(p) = target (free variables zero), else NoSolution."""
        target = self.project(target)
        if not target:
            return self.alg.zero()
        if n is None:
            n = target.degree()
        e, _ = self.echelon(n - 1)
        sol = e.express(self.to_vector(target, n))
        if sol is None:
            return NoSolution
        return self.from_vector(sol, n - 1)

    def is_cocycle(self, p):
        return not self.dpoly(p)

    def check_d_squared(self, maxdeg, mindeg=0):
        """Raise ModelError with the first degree where d o d != 0."""
        for n in range(mindeg, maxdeg + 1):
            for m in self.basis(n):
                p = self.alg.monomial(m)
                if self.dpoly(self.dpoly(p)):
                    raise ModelError(f"d^2 != 0 on {self.alg.mon_str(m)} (degree {n})", n)
        return True

    def check_ideal_stable(self, maxdeg):
        if self.killed is None:
            return True
        for n in range(0, maxdeg + 1):
            for m in self.alg.basis(n):
                if self.killed(m):
                    dv = self.d(self.alg.monomial(m))
                    if self.project(dv):
                        raise ModelError(
                            f"ideal is not d-stable at {self.alg.mon_str(m)} (degree {n})", n)
        return True

    def betti(self, lo, hi):
        return [self.H(n).dim for n in range(lo, hi + 1)]


class SullivanModel(CDGA):
    """A free CDGA (Lambda V, d)."""

    def __init__(self, alg, d, name=None, check_upto=None):
        super().__init__(alg, d, None, name)
        for g in alg.generators:
            v = self.d.values[g.name]
            if alg.one in v.terms:
                raise ModelError(f"d({g.name}) has a constant term", g.degree + 1)
        if check_upto is not None:
            self.check_d_squared(check_upto)

    @classmethod
    def from_dict(cls, gens, dvals, name=None, check_upto=None):
        """Build from ``[(name, degree), ...]`` and ``{name: poly_builder}``.

        Values in ``dvals`` may be Polynomials or callables receiving the
        algebra's generator polynomials as keyword arguments.
        """
        alg = FreeGCA(gens)
        vals = {}
        g = {n: alg.gen(n) for n in alg.names}
        for k, v in dvals.items():
            vals[k] = v(**g) if callable(v) else v
        return cls(alg, vals, name=name, check_upto=check_upto)

    @property
    def is_minimal(self):
        for g in self.alg.generators:
            v = self.d.values[g.name]
            for m in v.terms:
                if sum(m) < 2:
                    return False
        return True

    @property
    def simply_connected(self):
        return all(d >= 2 for d in self.alg.degrees)


class MonomialQuotient(CDGA):
    """A free CDGA modulo a d-stable ideal spanned by monomials."""

    def __init__(self, alg, d, killed, name=None):
        super().__init__(alg, d, killed, name)


class _HDegree:
    def __init__(self, model, n):
        self.model = model
        self.n = n
        e, ker = model.echelon(n)
        self.free = ker
        prev, _ = model.echelon(n - 1)
        bf = Echelon()
        free = ker.keys()
        for row in prev.rows.values():
            proj = {k: v for k, v in row.items() if k in free}
            if proj:
                bf.insert(proj)
        self.image = bf
        self.hcols = sorted(k for k in free if k not in bf.rows)
        self.hpos = {k: i for i, k in enumerate(self.hcols)}
        self.dim = len(self.hcols)
        self._reps = None

    @property
    def rep_vectors(self):
        return [self.free[k] for k in self.hcols]

    @property
    def reps(self):
        if self._reps is None:
            self._reps = [self.model.from_vector(v, self.n) for v in self.rep_vectors]
        return self._reps

    def coords_of_vector(self, vec):
        free = self.free
        proj = {k: v for k, v in vec.items() if k in free}
        rem, _ = self.image.reduce(proj)
        return {self.hpos[k]: v for k, v in rem.items()}

    def coords(self, p, check=False):
        """Coordinates of the class of p (a cocycle) on the representatives.

        Without ``check`` this is the chain retraction onto cohomology, which
        is defined on every element.
        """
        if check and not self.model.is_cocycle(p):
            raise ModelError(f"{p} is not a cocycle", self.n)
        return self.coords_of_vector(self.model.to_vector(p, self.n))

    def coords_list(self, p, check=False):
        c = self.coords(p, check)
        return [c.get(i, Fraction(0)) for i in range(self.dim)]

    def is_exact(self, p):
        return not self.coords(p)


class CohomologyBasis:
    """Per-degree cohomology representatives with reduction and primitives."""

    def __init__(self, model, lo, hi):
        self.model = model
        self.lo = lo
        self.hi = hi

    def degree(self, n):
        return self.model.H(n)

    def dims(self):
        return {n: self.model.H(n).dim for n in range(self.lo, self.hi + 1)}

    def reps(self, n):
        return self.model.H(n).reps

    def reduce(self, p, n=None, check=True):
        if n is None:
            n = p.degree() if p else self.lo
        return self.model.H(n).coords_list(p, check)

    def primitive(self, p):
        return self.model.solve_preimage(p)


def cohomology(model, lo, hi):
    return CohomologyBasis(model, lo, hi)


def solve_preimage(model, target):
    return model.solve_preimage(target)


def d_matrix(model, n):
    return model.d_matrix(n)


class CDGAMorphism:
    """Degree-0 algebra map between CDGAs given on generators of the source."""

    def __init__(self, source, target, values, check=True):
        self.source = source
        self.target = target
        vals = {}
        for name in source.alg.names:
            v = values.get(name, 0)
            if isinstance(v, (int, Fraction)):
                v = target.alg.const(v)
            vals[name] = v
        self._map = AlgebraMap(source.alg, target.alg, vals)
        self.values = vals
        if check:
            self.check_chain_map()

    def __call__(self, p):
        return self.target.project(self._map(p))

    def check_chain_map(self):
        for g in self.source.alg.generators:
            x = self.source.alg.gen(g.name)
            lhs = self(self.source.dpoly(x))
            rhs = self.target.dpoly(self(x))
            if lhs != rhs:
                raise ModelError(f"morphism does not commute with d on generator {g.name}", g.degree)
        return True

    def h_matrix(self, n):
        """Matrix (list of columns) of the induced map on H^n."""
        hs = self.source.H(n)
        ht = self.target.H(n)
        return [ht.coords(self(r)) for r in hs.reps]


def h_star_of_morphism(f, lo, hi, invert=False):
    """Per-degree matrices of H(f); with ``invert`` also their inverses."""
    out = {}
    inv = {}
    for n in range(lo, hi + 1):
        mat = f.h_matrix(n)
        out[n] = mat
        if invert:
            ds, dt = f.source.H(n).dim, f.target.H(n).dim
            if ds != dt:
                raise NotQuasiIso(n)
            try:
                inv[n] = inverse(mat, ds)
            except SingularMatrix:
                raise NotQuasiIso(n) from None
    if invert:
        return out, inv
    return out


def compose(a, b):
    return mat_mul(a, b)


def add_into(target, coeff, vec):
    return axpy(target, coeff, vec)


class LiftingSystem:
    """Solve simultaneous linear conditions on an element of a graded piece.

    ``conditions`` is a list of ``(fn, model, degree)``; a solution ``p`` of
    ``solve(targets)`` satisfies ``model.to_vector(fn(p)) == targets[i]`` for
    every condition.  The unknown ranges over the monomials of
    ``domain_basis`` (monomials of ``alg``); free variables are set to zero.
    """

    def __init__(self, alg, domain_basis, conditions):
        self.alg = alg
        self.domain_basis = list(domain_basis)
        self.conditions = conditions
        self._offsets = []
        off = 0
        for _, model, deg in conditions:
            self._offsets.append(off)
            off += model.dim(deg)
        self.ech = Echelon(track=True)
        for j, mon in enumerate(self.domain_basis):
            p = alg.monomial(mon)
            self.ech.insert(self._stack([fn(p) for fn, _, _ in conditions]), j)

    def _stack(self, values):
        out = {}
        for (fn, model, deg), off, v in zip(self.conditions, self._offsets, values):
            for k, c in model.to_vector(v, deg).items():
                out[off + k] = c
        return out

    def solve(self, targets):
        sol = self.ech.express(self._stack(targets))
        if sol is None:
            return NoSolution
        b = self.domain_basis
        return Polynomial(self.alg, {b[j]: c for j, c in sol.items() if c})


_transfer_cache = {}


def transfer(p, target_alg, rename=None):
    """Re-express a polynomial in another free GCA by generator names.

    Reordering signs are applied, so this is the algebra inclusion/renaming
    determined by the names (``rename`` maps source names to target names).
    """
    from .gca import normalize_word

    src = p.alg
    out = {}
    for mon, c in p.terms.items():
        key = (src, target_alg, mon, None if rename is None else tuple(sorted(rename.items())))
        r = _transfer_cache.get(key)
        if r is None:
            word = [((rename or {}).get(n, n), e) for n, e in src.mon_factors(mon)]
            r = normalize_word(target_alg, word)
            _transfer_cache[key] = r
        if r is None:
            continue
        s, m = r
        v = out.get(m, 0) + (c if s > 0 else -c)
        if v:
            out[m] = v
        else:
            del out[m]
    return Polynomial(target_alg, out)
