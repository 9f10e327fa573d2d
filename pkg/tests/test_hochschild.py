from fractions import Fraction

import pytest

from conftest import cpn, lie_m11, lie_s3, lie_with_d, sphere
from loopstring.cohomology import SullivanModel
from loopstring.hochschild import (
    AlgebraError,
    BarComplex,
    FiniteAlgebra,
    algebra_complex,
    ce_to_bar,
    hochschild_cohomology,
)
from loopstring.lie import EnvelopingAlgebra, LieError, chain_algebra, cochain_algebra, coproduct_terms
from loopstring.lie_models import LieHochschild
from loopstring.string_topology import loop_product

SMALL = [("S3", sphere(3), 3), ("CP2", cpn(2), 4)]


def test_ground_field():
    A = FiniteAlgebra(["1"], {"1": 0}, {})
    HH = hochschild_cohomology(A, -4, 4)
    assert HH.dims() == {k: int(k == 0) for k in range(-4, 5)}


def test_degree_one_elements_are_rejected():
    with pytest.raises(AlgebraError):
        FiniteAlgebra(["1", "u"], {"1": 0, "u": -1}, {})


def test_extra_degree_zero_elements_are_rejected():
    with pytest.raises(AlgebraError):
        FiniteAlgebra(["1", "e"], {"1": 0, "e": 0}, {})


@pytest.mark.parametrize("name,model,m", SMALL)
def test_cohomology_algebra_from_model(name, model, m):
    A = FiniteAlgebra.from_model(model, m)
    assert A.check() == []
    assert A.is_graded_commutative()
    assert A.labels[0] == "1"


def test_bar_differential_on_a_two_letter_word():
    # in B(Q;A;Q) for A = H^*(CP^2), d[x|x] = ±[x²]
    A = FiniteAlgebra.from_model(cpn(2), 4)
    x, x2 = "h2_0", "h4_0"
    B = BarComplex(A)
    d = B.d_label((None, (x, x), None))
    assert list(d) == [(None, (x2,), None)]
    assert abs(d[(None, (x2,), None)]) == 1


@pytest.mark.parametrize("name,model,m", SMALL)
@pytest.mark.parametrize("sides", [("Q", "Q"), ("A", "A"), ("A", "Q")])
def test_bar_differential_squares_to_zero(name, model, m, sides):
    BarComplex(FiniteAlgebra.from_model(model, m), *sides).check_d_squared(-14, 0)


@pytest.mark.parametrize("name,model,m", SMALL)
def test_two_sided_bar_resolves_the_algebra(name, model, m):
    A = FiniteAlgebra.from_model(model, m)
    B = BarComplex(A, "A", "A")
    aug = B.augmentation_map(algebra_complex(A))
    for n in range(-10, 1):
        assert aug.commutator_defect(n) is None
        assert B.homology(n).dim == len(A.basis(n))


def test_bar_coproduct_is_coassociative():
    A = FiniteAlgebra.from_model(cpn(2), 4)
    B = BarComplex(A)
    for n in range(-9, 1):
        for lab in B.basis(n):
            left, right = {}, {}
            for (a, b), c in B.coproduct(lab).items():
                for (a1, a2), c2 in B.coproduct(a).items():
                    left[(a1, a2, b)] = left.get((a1, a2, b), 0) + c * c2
                for (b1, b2), c2 in B.coproduct(b).items():
                    right[(a, b1, b2)] = right.get((a, b1, b2), 0) + c * c2
            assert left == right


def test_hochschild_cohomology_of_s3():
    HH = hochschild_cohomology(FiniteAlgebra.from_model(sphere(3), 3), -6, 8)
    HH.complex.check_d_squared(-6, 8)
    assert HH.dims() == {-6: 0, -5: 0, -4: 0, -3: 1, -2: 0, -1: 1, **{k: 1 for k in range(9)}}


def test_hochschild_cohomology_with_trivial_coefficients():
    HQ = hochschild_cohomology(FiniteAlgebra.from_model(cpn(2), 4), -2, 8, "Q")
    assert [HQ.dims()[k] for k in range(-2, 9)] == [0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1]


@pytest.mark.parametrize("name,model,m", SMALL)
def test_hochschild_dimensions_match_loop_homology(name, model, m):
    hi = 8
    HH = hochschild_cohomology(FiniteAlgebra.from_model(model, m), -m, hi)
    LP = loop_product(model, m, hi + m)
    assert HH.dims() == {k: len(LP.basis.labels.get(k + m, [])) for k in range(-m, hi + 1)}


@pytest.mark.parametrize("name,model,m", SMALL)
def test_cup_product_is_graded_commutative(name, model, m):
    HH = hochschild_cohomology(FiniteAlgebra.from_model(model, m), -8, 8)
    table = HH.structure_constants()
    assert table
    for (k1, i, k2, j), v in table.items():
        swapped = HH.cup_class(k2, {j: 1}, k1, {i: 1})
        s = -1 if (k1 * k2) % 2 else 1
        assert {a: s * b for a, b in swapped.items()} == v


@pytest.mark.parametrize("name,model,m", SMALL)
def test_cup_product_is_a_chain_level_derivation(name, model, m):
    C = hochschild_cohomology(FiniteAlgebra.from_model(model, m), -8, 8).complex
    for k1 in range(-4, 3):
        for k2 in range(-4, 3):
            for f in C.basis(k1)[:6]:
                for g in C.basis(k2)[:6]:
                    lhs = C.d(C.cup_labels(f, g))
                    rhs = C.cup(C.d_label(f), {g: 1})
                    for key, val in C.cup({f: 1}, C.d_label(g)).items():
                        rhs[key] = rhs.get(key, 0) + (-1 if k1 % 2 else 1) * val
                    assert lhs == {a: b for a, b in rhs.items() if b}


@pytest.mark.parametrize("make,chain_max", [(lie_s3, None), (lie_m11, None), (lie_with_d, 12)])
def test_ce_to_bar_is_a_coalgebra_quasi_isomorphism(make, chain_max):
    L = make()
    U = EnvelopingAlgebra(L, 14)
    src, tgt, phi = ce_to_bar(L, U, chain_max=chain_max)
    tgt.check_d_squared(0, 10)
    C = chain_algebra(L)
    for n in range(10):
        assert phi.commutator_defect(n) is None
        assert len(phi.homology_matrix(n)) == src.homology(n).dim == tgt.homology(n).dim
    for n in range(9):
        for lab in src.basis(n):
            lhs = {}
            for c, left, right in coproduct_terms(C, lab[0]):
                for k1, v1 in phi.label((left, "1")).items():
                    for k2, v2 in phi.label((right, "1")).items():
                        lhs[(k1, k2)] = lhs.get((k1, k2), 0) + c * v1 * v2
            rhs = {}
            for k, v in phi.label(lab).items():
                for kk, vv in tgt.coproduct(k).items():
                    rhs[kk] = rhs.get(kk, 0) + v * vv
            assert {a: b for a, b in lhs.items() if b} == {a: b for a, b in rhs.items() if b}


@pytest.mark.parametrize("make,m", [(lie_s3, 3), (lie_m11, 11)])
def test_lie_route_matches_loop_homology(make, m):
    L = make()
    hi = 6
    H = LieHochschild(L, m, -m, hi)
    assert H.stable and H.unstable_degrees() == []
    LP = loop_product(cochain_algebra(L), m, hi + m)
    assert H.dims == {k: len(LP.basis.labels.get(k + m, [])) for k in range(-m, hi + 1)}


def test_lie_route_with_too_small_truncation():
    with pytest.raises(LieError, match="too small"):
        LieHochschild(lie_m11(), 11, -11, 4, J=4)
