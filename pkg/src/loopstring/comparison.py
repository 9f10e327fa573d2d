"""Comparing loop homology with Hochschild cohomology.

Both sides are presented as graded algebras through a small interface
(``dim(k)``, ``mul(k1, v1, k2, v2)``, ``unit()``), with vectors given as
``{basis index: coeff}``.  :func:`identify_algebras` builds the multiplicative
isomorphism determined by matching indecomposables degree by degree and
reports every place where that fails.
"""

from fractions import Fraction

from .linalg import Echelon, axpy

__all__ = [
    "LoopSide",
    "HochschildSide",
    "Identification",
    "identify_algebras",
    "indecomposables",
]


def _clean(v):
    return {k: Fraction(c) for k, c in v.items() if c}


class LoopSide:
    """ℍ_*(LM) from a :class:`~loopstring.string_topology.LoopAlgebra`, in ℍ-degrees."""

    def __init__(self, loop_algebra):
        self.LP = loop_algebra
        self.m = loop_algebra.m
        self._ix = {}
        for n, labs in loop_algebra.basis.labels.items():
            for i, lab in enumerate(labs):
                self._ix[lab] = (n - self.m, i)

    def labels(self, k):
        return self.LP.basis.labels.get(k + self.m, [])

    def dim(self, k):
        return len(self.labels(k))

    def mul(self, k1, v1, k2, v2):
        out = {}
        l1, l2 = self.labels(k1), self.labels(k2)
        for i, a in v1.items():
            for j, b in v2.items():
                for lab, c in self.LP.product(l1[i], l2[j]).items():
                    k, idx = self._ix[lab]
                    out[idx] = out.get(idx, 0) + a * b * c
        return _clean(out)

    def unit(self):
        return _clean({self._ix[lab][1]: c for lab, c in self.LP.unit().items()})


class HochschildSide:
    """HH(A; A) or HH(A; Q) from a :class:`~loopstring.hochschild.HochschildCohomology`."""

    def __init__(self, hh):
        self.hh = hh
        self.cx = hh.complex

    def dim(self, k):
        return self.cx.homology(k).dim

    def mul(self, k1, v1, k2, v2):
        if not v1 or not v2:
            return {}
        return _clean(self.hh.cup_class(k1, v1, k2, v2))

    def unit(self):
        return _clean(self.cx.homology(0).coords(self.cx.unit_cochain()))


def _augmentation_basis(side, k):
    """Basis vectors of degree k spanning a complement of the unit line."""
    n = side.dim(k)
    if k != 0:
        return [{i: Fraction(1)} for i in range(n)]
    e = Echelon()
    e.insert(side.unit())
    out = []
    for i in range(n):
        if e.insert({i: Fraction(1)}) is None:
            out.append({i: Fraction(1)})
    return out


def indecomposables(side, k, lo, hi):
    """Basis indices of degree k spanning a complement of the decomposables.

    Decomposables are products of augmentation-ideal classes whose degrees
    lie in [lo, hi] and add up to k; in degree 0 the unit is also excluded.
    """
    e = Echelon()
    if k == 0:
        e.insert(side.unit())
    for k1 in range(lo, hi + 1):
        k2 = k - k1
        if not lo <= k2 <= hi:
            continue
        for a in _augmentation_basis(side, k1):
            for b in _augmentation_basis(side, k2):
                p = side.mul(k1, a, k2, b)
                if p:
                    e.insert(p)
    comp = [i for i in range(side.dim(k)) if not e.contains({i: Fraction(1)})]
    # the standard vectors outside the span may be too many; keep an independent set
    keep = []
    for i in comp:
        if e.insert({i: Fraction(1)}) is None:
            keep.append(i)
    return keep


class Identification:
    """A degreewise linear map between two graded algebras in a window."""

    def __init__(self, source, target, lo, hi):
        self.source, self.target = source, target
        self.lo, self.hi = lo, hi
        self.generators = []      # (degree, source vector, target vector)
        self.problems = []
        self._span = {}           # k -> (Echelon over source with tracked labels, images)

    def _slot(self, k):
        r = self._span.get(k)
        if r is None:
            r = (Echelon(track=True), [], [])
            self._span[k] = r
        return r

    def _add(self, k, sv, tv):
        """Record sv ↦ tv; returns True if sv was new, checks consistency otherwise."""
        if not sv:
            if tv:
                self.problems.append(("relation", k, "a vanishing product maps to a nonzero class"))
            return False
        e, images, vectors = self._slot(k)
        combo = e.express(sv)
        if combo is None:
            e.insert(sv, len(images))
            images.append(tv)
            vectors.append(sv)
            return True
        pred = {}
        for j, c in combo.items():
            axpy(pred, c, images[j])
        if _clean(pred) != _clean(tv):
            self.problems.append(("relation", k, "a linear relation is not preserved"))
        return False

    def close(self):
        """Close the recorded span under left multiplication by generators."""
        todo = [(k, j) for k in sorted(self._span) for j in range(len(self._span[k][1]))]
        while todo:
            k, j = todo.pop()
            _, images, vectors = self._span[k]
            sv, tv = vectors[j], images[j]
            for d, gs, gt in self.generators:
                k2 = k + d
                if not self.lo <= k2 <= self.hi:
                    continue
                ps = self.source.mul(d, gs, k, sv)
                pt = self.target.mul(d, gt, k, tv)
                if self._add(k2, ps, pt):
                    todo.append((k2, len(self._span[k2][1]) - 1))

    def matrix(self, k):
        """Columns: image of each source basis vector of degree k (None if not spanned)."""
        e, images, _ = self._slot(k)
        cols = []
        for i in range(self.source.dim(k)):
            combo = e.express({i: Fraction(1)})
            if combo is None:
                cols.append(None)
                continue
            v = {}
            for j, c in combo.items():
                axpy(v, c, images[j])
            cols.append(_clean(v))
        return cols

    def apply(self, k, vec):
        out = {}
        cols = self.matrix(k)
        for i, c in vec.items():
            if cols[i] is None:
                raise ValueError(f"degree {k} is not spanned by products of generators")
            axpy(out, c, cols[i])
        return _clean(out)

    def is_bijective(self, k):
        cols = self.matrix(k)
        if any(c is None for c in cols) or len(cols) != self.target.dim(k):
            return False
        e = Echelon()
        return all(e.insert(c) is None for c in cols) and len(cols) == len(e)

    def check_products(self, lo=None, hi=None):
        """Φ(A·B) = Φ(A)·Φ(B) on all basis pairs; returns (pairs checked, failures)."""
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        checked, bad = 0, []
        for k1 in range(lo, hi + 1):
            for k2 in range(lo, hi + 1):
                k = k1 + k2
                if not self.lo <= k <= self.hi:
                    continue
                for i in range(self.source.dim(k1)):
                    for j in range(self.source.dim(k2)):
                        a, b = {i: Fraction(1)}, {j: Fraction(1)}
                        lhs = self.apply(k, self.source.mul(k1, a, k2, b))
                        rhs = self.target.mul(k1, self.apply(k1, a), k2, self.apply(k2, b))
                        checked += 1
                        if lhs != rhs:
                            bad.append((k1, i, k2, j))
        return checked, bad


def identify_algebras(source, target, lo, hi, bottom=None, reach=None):
    """The multiplicative map matching indecomposables, on degrees [lo, hi].

    ``bottom`` is the lowest nonzero degree of both algebras (default lo);
    indecomposables in degree k are computed from products with factors in
    [bottom, k + reach] (default ``reach = -bottom``).  Generator images are
    the first target basis vectors outside the decomposables, with
    coefficient 1; the scalars are a choice, and any relation that this
    choice fails to preserve is reported in ``problems``.
    """
    bottom = lo if bottom is None else bottom
    reach = -bottom if reach is None else reach
    ident = Identification(source, target, bottom, hi)
    ident._add(0, source.unit(), target.unit())
    for k in range(bottom, hi + 1):
        if source.dim(k) == 0 and target.dim(k) == 0:
            continue
        top = max(k + reach, 0)
        si = indecomposables(source, k, bottom, top)
        ti = indecomposables(target, k, bottom, top)
        if len(si) != len(ti):
            ident.problems.append(("indecomposables", k, f"{len(si)} vs {len(ti)}"))
            continue
        for i, j in zip(si, ti):
            ident.generators.append((k, {i: Fraction(1)}, {j: Fraction(1)}))
            ident._add(k, {i: Fraction(1)}, {j: Fraction(1)})
    ident.close()
    for k in range(lo, hi + 1):
        if source.dim(k) != target.dim(k):
            ident.problems.append(("dimension", k, f"{source.dim(k)} vs {target.dim(k)}"))
        elif not ident.is_bijective(k):
            ident.problems.append(("bijectivity", k, "not spanned or not injective"))
    return ident
