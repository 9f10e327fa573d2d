"""Degreewise-finite complexes with arbitrary hashable basis labels.

The Lie-algebra and Hochschild constructions produce complexes whose bases are
not monomials of a single free algebra (pairs of words, tensors of dual
elements, ...).  :class:`GradedComplex` handles them uniformly: a basis per
degree, a differential given on basis labels, and homology with chosen
representatives and coordinates.

Vectors are dicts ``label -> Fraction``.
"""

from fractions import Fraction

from .linalg import Echelon, axpy

__all__ = ["GradedComplex", "Homology", "add_scaled", "LinearMap", "ComplexError"]


class ComplexError(ValueError):
    """A complex or map failed one of its defining identities."""

    def __init__(self, msg, degree=None):
        super().__init__(msg if degree is None else f"{msg} (degree {degree})")
        self.degree = degree


def add_scaled(out, c, vec):
    """out += c * vec for label-keyed vectors."""
    return axpy(out, c, vec)


class GradedComplex:
    """A complex given by ``basis(n)`` and ``d(label)``.

    ``step`` is the degree of the differential (+1 for cochains, -1 for
    chains).  ``d(label)`` must return a vector over labels of degree
    ``n + step``.  An optional ``weight(label)`` preserved by ``d`` lets
    homology be computed one weight block at a time.
    """

    def __init__(self, basis, d, step, name=None, weight=None):
        if step not in (1, -1):
            raise ValueError("step must be +1 or -1")
        self.weight = weight
        self._basis_fn = basis
        self._d_fn = d
        self.step = step
        self.name = name
        self._basis = {}
        self._index = {}
        self._dcache = {}
        self._H = {}

    def basis(self, n):
        b = self._basis.get(n)
        if b is None:
            b = tuple(self._basis_fn(n))
            self._basis[n] = b
        return b

    def index(self, n):
        ix = self._index.get(n)
        if ix is None:
            ix = {lab: i for i, lab in enumerate(self.basis(n))}
            if len(ix) != len(self.basis(n)):
                raise ComplexError("repeated basis label", n)
            self._index[n] = ix
        return ix

    def dim(self, n):
        return len(self.basis(n))

    def d_label(self, lab):
        v = self._dcache.get(lab)
        if v is None:
            v = {k: Fraction(c) for k, c in self._d_fn(lab).items() if c}
            self._dcache[lab] = v
        return v

    def d(self, vec):
        out = {}
        for lab, c in vec.items():
            axpy(out, c, self.d_label(lab))
        return out

    def to_indices(self, vec, n):
        ix = self.index(n)
        out = {}
        for lab, c in vec.items():
            if c:
                try:
                    out[ix[lab]] = c
                except KeyError:
                    raise ComplexError(f"label {lab!r} is not a basis element", n) from None
        return out

    def from_indices(self, vec, n):
        b = self.basis(n)
        return {b[i]: c for i, c in vec.items() if c}

    def matrix(self, n):
        """Columns of d on degree n, in index coordinates of degree n+step."""
        return [self.to_indices(self.d_label(lab), n + self.step) for lab in self.basis(n)]

    def check_d_squared(self, lo, hi):
        for n in range(lo, hi + 1):
            for lab in self.basis(n):
                dd = self.d(self.d_label(lab))
                if dd:
                    raise ComplexError(f"d^2 != 0 on {lab!r}", n)
        return True

    def homology(self, n):
        h = self._H.get(n)
        if h is None:
            h = Homology(self, n)
            self._H[n] = h
        return h

    def betti(self, lo, hi):
        return {n: self.homology(n).dim for n in range(lo, hi + 1)}


class Homology:
    """Homology of a :class:`GradedComplex` in one degree."""

    def __init__(self, cx, n):
        self.complex = cx
        self.n = n
        wt = cx.weight or (lambda lab: 0)
        blocks = {}
        for j, col in enumerate(cx.matrix(n)):
            blocks.setdefault(wt(cx.basis(n)[j]), ([], []))[0].append((j, col))
        for j, col in enumerate(cx.matrix(n - cx.step)):
            blocks.setdefault(wt(cx.basis(n - cx.step)[j]), ([], []))[1].append((j, col))
        self._ech = {}
        self._weight_of = {}
        reps = []
        for w in sorted(blocks, key=repr):
            cols, into = blocks[w]
            e = Echelon(track=True)
            cycles = []
            for j, col in cols:
                dep = e.insert(col, j)
                if dep is not None:
                    cycles.append(dep)
            bnd = Echelon(track=True)
            for j, col in into:
                bnd.insert(col, ("b", j))
            for z in cycles:
                if bnd.insert(z, ("h", len(reps))) is None:
                    reps.append(z)
            self._ech[w] = bnd
        self._wt = wt
        self.rep_vectors = reps
        self.dim = len(reps)
        self._reps = None

    @property
    def reps(self):
        if self._reps is None:
            self._reps = [self.complex.from_indices(v, self.n) for v in self.rep_vectors]
        return self._reps

    def coords(self, vec, check=True):
        """Coordinates of the class of the cycle ``vec`` (label-keyed)."""
        cx = self.complex
        if check and cx.d(vec):
            raise ComplexError("element is not a cycle", self.n)
        parts = {}
        for lab, c in vec.items():
            if c:
                parts.setdefault(self._wt(lab), {})[lab] = c
        out = {}
        for w, part in parts.items():
            e = self._ech.get(w)
            combo = None if e is None else e.express(cx.to_indices(part, self.n))
            if combo is None:
                raise ComplexError("cycle not in the span of boundaries and representatives", self.n)
            for lab, c in combo.items():
                if lab[0] == "h" and c:
                    out[lab[1]] = out.get(lab[1], 0) + c
        return {i: c for i, c in out.items() if c}

    def coords_list(self, vec, check=True):
        c = self.coords(vec, check)
        return [c.get(i, Fraction(0)) for i in range(self.dim)]

    def is_boundary(self, vec):
        return not self.coords(vec)


class LinearMap:
    """A graded linear map between complexes, given on basis labels.

    ``shift`` is the degree of the map.  ``on_label(lab)`` returns a vector in
    the target complex.
    """

    def __init__(self, source, target, on_label, shift=0, name=None):
        self.source = source
        self.target = target
        self._fn = on_label
        self.shift = shift
        self.name = name
        self._cache = {}

    def label(self, lab):
        v = self._cache.get(lab)
        if v is None:
            v = {k: Fraction(c) for k, c in self._fn(lab).items() if c}
            self._cache[lab] = v
        return v

    def __call__(self, vec):
        out = {}
        for lab, c in vec.items():
            axpy(out, c, self.label(lab))
        return out

    def commutator_defect(self, n, sign=1):
        """First basis label of degree n where f∘d != sign·d∘f, or None."""
        s, t = self.source, self.target
        for lab in s.basis(n):
            lhs = self(s.d_label(lab))
            rhs = t.d(self.label(lab))
            diff = dict(lhs)
            axpy(diff, -sign, rhs)
            if diff:
                return lab
        return None

    def homology_matrix(self, n):
        """Columns: image of each homology representative, in target coordinates."""
        hs = self.source.homology(n)
        ht = self.target.homology(n + self.shift)
        return [ht.coords(self(z)) for z in hs.reps]
