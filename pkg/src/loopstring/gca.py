"""Free graded-commutative algebras over Q with Koszul signs.

A monomial is stored as a tuple of exponents aligned with the generator
order of its algebra.  Generators are ordered by (degree, declaration
order), so a monomial's factor list is always read in that order.
"""

from fractions import Fraction

__all__ = [
    "Generator",
    "FreeGCA",
    "Polynomial",
    "AlgebraError",
    "normalize_word",
    "poly_mul",
    "basis_of_degree",
    "tensor_rename",
    "hilbert_coefficients",
    "AlgebraMap",
]


class AlgebraError(ValueError):
    """Invalid input to an algebra operation (unknown generator, bad degree...)."""


class Generator:
    __slots__ = ("name", "degree")

    def __init__(self, name, degree):
        if not isinstance(degree, int) or degree < 1:
            raise AlgebraError(f"generator {name!r} must have integer degree >= 1, got {degree!r}")
        self.name = name
        self.degree = degree

    @property
    def parity(self):
        return self.degree % 2

    def __repr__(self):
        return f"Generator({self.name!r}, {self.degree})"

    def __eq__(self, other):
        return isinstance(other, Generator) and (self.name, self.degree) == (other.name, other.degree)

    def __hash__(self):
        return hash((self.name, self.degree))


class FreeGCA:
    """The free graded-commutative algebra on a finite list of generators."""

    def __init__(self, generators):
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(*g)
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise AlgebraError(f"duplicate generator names: {dup}")
        decl = {g.name: i for i, g in enumerate(gens)}
        self.generators = tuple(sorted(gens, key=lambda g: (g.degree, decl[g.name])))
        self.names = tuple(g.name for g in self.generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.odd = tuple(i for i, d in enumerate(self.degrees) if d % 2)
        self._oddset = frozenset(self.odd)
        self.ngens = len(self.generators)
        self.one = (0,) * self.ngens
        self._basis_cache = {}
        self._index_cache = {}

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"FreeGCA({inner})"

    def __eq__(self, other):
        return isinstance(other, FreeGCA) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    # -- monomials ---------------------------------------------------------

    def mon_degree(self, mon):
        return sum(e * d for e, d in zip(mon, self.degrees) if e)

    def mon_mul(self, m1, m2):
        """Return (sign, m1*m2) or None when an odd generator would square."""
        sign = 1
        seen = 0
        for i in self.odd:
            a, b = m1[i], m2[i]
            if a and b:
                return None
            if a and seen & 1:
                sign = -sign
            if b:
                seen += 1
        return sign, tuple(x + y for x, y in zip(m1, m2))

    def gen_mon(self, name):
        mon = [0] * self.ngens
        mon[self.gen_index(name)] = 1
        return tuple(mon)

    def gen_index(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def mon_str(self, mon):
        parts = []
        for name, e in zip(self.names, mon):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return " ".join(parts) if parts else "1"

    def mon_factors(self, mon):
        """Factor list of a monomial in generator order."""
        return [(self.names[i], e) for i, e in enumerate(mon) if e]

    def split_sign(self, mon, left):
        """Sign s such that mon = s * (mon restricted to `left`) * (rest).

        `left` is a set of generator indices.
        """
        sign = 1
        passed = 0  # odd factors of the right part seen so far
        for i in self.odd:
            if not mon[i]:
                continue
            if i in left:
                if passed & 1:
                    sign = -sign
            else:
                passed += 1
        return sign

    # -- polynomials -------------------------------------------------------

    def zero(self):
        return Polynomial(self, {})

    def unit(self):
        return Polynomial(self, {self.one: Fraction(1)})

    def gen(self, name):
        return Polynomial(self, {self.gen_mon(name): Fraction(1)})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def monomial(self, mon, coeff=1):
        return Polynomial(self, {tuple(mon): Fraction(coeff)} if coeff else {})

    def const(self, c):
        return Polynomial(self, {self.one: Fraction(c)} if c else {})

    def poly(self, terms):
        out = {}
        for mon, c in terms.items():
            c = Fraction(c)
            if c:
                out[tuple(mon)] = out.get(tuple(mon), 0) + c
        return Polynomial(self, {m: c for m, c in out.items() if c})

    # -- bases -------------------------------------------------------------

    def basis(self, n):
        """All monomials of degree n in a fixed deterministic order."""
        if n in self._basis_cache:
            return self._basis_cache[n]
        out = []
        if n >= 0:
            degs = self.degrees
            odd = self._oddset
            k = self.ngens
            cur = [0] * k

            def rec(i, rem):
                if rem == 0:
                    out.append(tuple(cur))
                    return
                if i == k:
                    return
                d = degs[i]
                top = min(rem // d, 1 if i in odd else rem // d)
                for e in range(top, -1, -1):
                    cur[i] = e
                    rec(i + 1, rem - e * d)
                cur[i] = 0

            rec(0, n)
        out = tuple(out)
        self._basis_cache[n] = out
        return out

    def basis_index(self, n):
        if n not in self._index_cache:
            self._index_cache[n] = {m: i for i, m in enumerate(self.basis(n))}
        return self._index_cache[n]

    def dim(self, n):
        return len(self.basis(n))


class Polynomial:
    """A finite Q-linear combination of monomials of one FreeGCA."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    # coefficients are assumed nonzero Fractions; use FreeGCA.poly to build
    # from arbitrary input

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.const(other)
        return isinstance(other, Polynomial) and self.alg == other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.alg is not self.alg and other.alg != self.alg:
                raise AlgebraError("polynomials belong to different algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return self.alg.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Polynomial(self.alg, {})
        return Polynomial(self.alg, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        out = self.alg.unit()
        for _ in range(k):
            out = out * self
        return out

    def degrees(self):
        return sorted({self.alg.mon_degree(m) for m in self.terms})

    def degree(self):
        """Degree of a homogeneous polynomial (None for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"polynomial {self} is not homogeneous (degrees {degs})")
        return degs[0]

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def part(self, n):
        return Polynomial(self.alg, {m: c for m, c in self.terms.items() if self.alg.mon_degree(m) == n})

    def coeff(self, mon):
        return self.terms.get(tuple(mon), Fraction(0))

    def sorted_terms(self):
        alg = self.alg
        return sorted(self.terms.items(), key=lambda mc: (alg.mon_degree(mc[0]), tuple(-e for e in mc[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mon, c in self.sorted_terms():
            ms = self.alg.mon_str(mon)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if ms == "1":
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a} {ms}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self})"


def normalize_word(alg, word):
    """Sort a word of (generator, exponent) factors into normal form.

    Returns ``(sign, monomial)``, or ``None`` when the word is zero because an
    odd generator occurs twice.
    """
    sign = 1
    exps = [0] * alg.ngens
    placed = []  # generator indices of odd factors in written order
    for gname, e in word:
        if isinstance(gname, Generator):
            gname = gname.name
        i = alg.gen_index(gname)
        if e < 0:
            raise AlgebraError(f"negative exponent for {gname!r}")
        if e == 0:
            continue
        if i in alg._oddset:
            if e > 1 or exps[i]:
                return None
            # odd factors written to the left with larger index must be passed
            inv = sum(1 for j in placed if j > i)
            if inv & 1:
                sign = -sign
            placed.append(i)
        exps[i] += e
    return sign, tuple(exps)


def poly_mul(p, q):
    alg = p.alg
    out = {}
    mul = alg.mon_mul
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            r = mul(m1, m2)
            if r is None:
                continue
            s, m = r
            v = out.get(m, 0) + (c1 * c2 if s > 0 else -c1 * c2)
            if v:
                out[m] = v
            else:
                del out[m]
    return Polynomial(alg, out)


def basis_of_degree(alg, n):
    return list(alg.basis(n))


def hilbert_coefficients(degrees, nmax):
    """Coefficients of prod_even 1/(1-t^d) * prod_odd (1+t^d) up to t^nmax."""
    coeffs = [0] * (nmax + 1)
    coeffs[0] = 1
    for d in degrees:
        if d % 2:
            for k in range(nmax, d - 1, -1):
                coeffs[k] += coeffs[k - d]
        else:
            for k in range(d, nmax + 1):
                coeffs[k] += coeffs[k - d]
    return coeffs


def tensor_rename(alg, suffix, keep=()):
    """Return (B, inj) where B holds alg's generators plus a renamed copy.

    ``inj`` maps polynomials of ``alg`` to their renamed copies in ``B``;
    ``keep`` lists generator names that are not duplicated.
    """
    new = []
    rename = {}
    for g in alg.generators:
        if g.name in keep:
            rename[g.name] = g.name
            continue
        nm = g.name + suffix
        if nm in alg.index:
            raise AlgebraError(f"renamed generator {nm!r} collides with an existing name")
        new.append(Generator(nm, g.degree))
        rename[g.name] = nm
    big = FreeGCA(list(alg.generators) + new)
    hom = AlgebraMap(alg, big, {n: big.gen(rename[n]) for n in alg.names})
    inc = AlgebraMap(alg, big, {n: big.gen(n) for n in alg.names})
    return big, hom, inc


class AlgebraMap:
    """Degree-preserving algebra homomorphism given on generators."""

    def __init__(self, source, target, values):
        self.source = source
        self.target = target
        self.values = {}
        for name in source.names:
            v = values.get(name)
            if v is None:
                v = target.zero()
            elif isinstance(v, (int, Fraction)):
                v = target.const(v)
            self.values[name] = v
        self._cache = {}

    def on_monomial(self, mon):
        r = self._cache.get(mon)
        if r is None:
            r = self.target.unit()
            for name, e in self.source.mon_factors(mon):
                v = self.values[name]
                for _ in range(e):
                    r = r * v
                    if not r:
                        break
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
        return Polynomial(self.target, out)
