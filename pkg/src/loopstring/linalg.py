"""Sparse exact linear algebra over Q.

Vectors are dicts ``index -> Fraction`` with no zero entries.  The workhorse
is :class:`Echelon`, an incrementally built reduced echelon basis that can
optionally track, for every stored row, the combination of inserted vectors
it came from.  That tracking gives kernels and preimages for free.
"""

from fractions import Fraction

__all__ = [
    "Echelon",
    "axpy",
    "scale",
    "rank",
    "kernel",
    "solve",
    "mat_vec",
    "mat_mul",
    "identity",
    "inverse",
    "to_dense",
    "SingularMatrix",
]


class SingularMatrix(ArithmeticError):
    pass


def axpy(y, a, x):
    """y += a*x in place (sparse)."""
    if not a:
        return y
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if w:
            y[k] = w
        else:
            y.pop(k, None)
    return y


def scale(x, a):
    a = Fraction(a)
    if not a:
        return {}
    return {k: v * a for k, v in x.items()}


class Echelon:
    """Reduced echelon basis of a growing set of sparse vectors.

    Each stored row has a pivot (its smallest index, normalised to 1) and is
    zero at every other pivot, so reduction is a single pass.
    """

    def __init__(self, track=False):
        self.rows = {}      # pivot -> vector
        self.tracks = {}    # pivot -> combination of inserted labels
        self.track = track

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def reduce(self, vec):
        """Return (remainder, combo) with vec = sum combo[p]*row[p] + remainder."""
        rem = dict(vec)
        combo = {}
        rows = self.rows
        for p in [k for k in rem if k in rows]:
            c = rem.get(p)
            if not c:
                continue
            axpy(rem, -c, rows[p])
            combo[p] = c
        return rem, combo

    def combo_to_labels(self, combo):
        out = {}
        for p, c in combo.items():
            axpy(out, c, self.tracks[p])
        return out

    def insert(self, vec, label=None):
        """Insert ``vec``.  Returns None if independent, else the dependency.

        With tracking on, a dependency is returned as a label combination
        ``{label: coeff}`` summing to zero (it contains ``label`` with
        coefficient 1).  Without tracking, ``{}`` is returned.
        """
        rem, combo = self.reduce(vec)
        if self.track:
            t = {label: Fraction(1)}
            for p, c in combo.items():
                axpy(t, -c, self.tracks[p])
        if not rem:
            return t if self.track else {}
        p = min(rem)
        inv = 1 / Fraction(rem[p])
        if inv != 1:
            rem = {k: v * inv for k, v in rem.items()}
            if self.track:
                t = {k: v * inv for k, v in t.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                axpy(row, -c, rem)
                if self.track:
                    axpy(self.tracks[q], -c, t)
        self.rows[p] = rem
        if self.track:
            self.tracks[p] = t
        return None

    def contains(self, vec):
        rem, _ = self.reduce(vec)
        return not rem

    def express(self, vec):
        """Labels combination giving vec, or None if vec is not in the span."""
        rem, combo = self.reduce(vec)
        if rem:
            return None
        return self.combo_to_labels(combo)


def rank(vectors):
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return len(e)


def kernel(columns):
    """Kernel basis of the matrix whose i-th column is ``columns[i]``."""
    e = Echelon(track=True)
    out = []
    for i, v in enumerate(columns):
        dep = e.insert(v, i)
        if dep is not None:
            out.append(dep)
    return out


def solve(columns, target):
    """Some x with sum x[i]*columns[i] == target, or None."""
    e = Echelon(track=True)
    for i, v in enumerate(columns):
        e.insert(v, i)
    return e.express(target)


def mat_vec(rows_or_cols, vec):
    """Apply a matrix stored as a list of sparse columns to a sparse vector."""
    out = {}
    for j, c in vec.items():
        axpy(out, c, rows_or_cols[j])
    return out


def mat_mul(a, b):
    """Column-stored product a*b."""
    return [mat_vec(a, col) for col in b]


def identity(n):
    return [{i: Fraction(1)} for i in range(n)]


def inverse(cols, n):
    """Inverse of a square column-stored n x n matrix."""
    if len(cols) != n:
        raise SingularMatrix("matrix is not square")
    e = Echelon(track=True)
    for i, c in enumerate(cols):
        if e.insert(c, i) is not None:
            raise SingularMatrix(f"matrix is singular (column {i} dependent)")
    # e.tracks[p] expresses the unit vector at pivot p in terms of columns
    out = [None] * n
    for p in range(n):
        out[p] = dict(e.tracks[p])
    return out


def to_dense(cols, nrows):
    return [[cols[j].get(i, Fraction(0)) for j in range(len(cols))] for i in range(nrows)]
