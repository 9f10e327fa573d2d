from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import lie_m11, lie_s2, lie_s3, lie_with_d
from loopstring.ce import (
    CEChains,
    CECochains,
    CapProduct,
    CoadjointModule,
    LeftRegularModule,
    TrivialModule,
    ce_chains,
    fundamental_cycle,
)
from loopstring.complexes import ComplexError
from loopstring.lie import EnvelopingAlgebra, LieError, chain_algebra, coproduct_terms


def test_differential_squares_to_zero_for_the_11_manifold():
    L = lie_m11()
    U = EnvelopingAlgebra(L, 22)
    for N in (TrivialModule(L), LeftRegularModule(U, 20), CoadjointModule(U, 20)):
        CEChains(L, N).check_d_squared(-20, 20)
        CECochains(L, N).check_d_squared(-20, 20)


@pytest.mark.parametrize("make", [lie_s2, lie_with_d])
def test_differential_squares_to_zero_with_odd_elements(make):
    ce_chains(make(), chain_max=12).check_d_squared(0, 12)


def test_infinite_chains_need_a_bound():
    with pytest.raises(LieError):
        ce_chains(lie_s2())


@pytest.mark.parametrize("make", [lie_s3, lie_m11])
def test_regular_module_is_acyclic(make):
    # C_*(L; UL) -> Q is a quasi-isomorphism below the truncation
    L = make()
    J = 14
    ch = CEChains(L, LeftRegularModule(EnvelopingAlgebra(L, J + 2), J))
    dims = [ch.homology(n).dim for n in range(0, J - 1)]
    assert dims == [1] + [0] * (J - 2)


def test_homology_of_trivial_chains_is_that_of_the_manifold():
    # the 11-manifold has Betti numbers 1, 2, 2, 1 in degrees 0, 3, 8, 11
    ch = ce_chains(lie_m11())
    assert [ch.homology(n).dim for n in range(12)] == [1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1]


def test_fundamental_cycle_requires_one_dimensional_top_homology():
    with pytest.raises(ComplexError):
        fundamental_cycle(lie_m11(), 8)


def _monomials(C, top):
    out = []
    for n in range(top + 1):
        out.extend(C.basis(n))
    return out


def _coassoc_sides(C, mon):
    left, right = {}, {}
    for c, a, b in coproduct_terms(C, mon):
        for c2, a1, a2 in coproduct_terms(C, a):
            k = (a1, a2, b)
            left[k] = left.get(k, 0) + c * c2
        for c2, b1, b2 in coproduct_terms(C, b):
            k = (a, b1, b2)
            right[k] = right.get(k, 0) + c * c2
    clean = lambda d: {k: v for k, v in d.items() if v}
    return clean(left), clean(right)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_shuffle_coproduct_is_coassociative_and_counital(data):
    L = data.draw(st.sampled_from([lie_m11(), lie_with_d(), lie_s2()]))
    C = chain_algebra(L)
    mon = data.draw(st.sampled_from(_monomials(C, 9)))
    left, right = _coassoc_sides(C, mon)
    assert left == right
    zero = tuple([0] * C.ngens)
    terms = coproduct_terms(C, mon)
    assert [(c, a) for c, a, b in terms if b == zero] == [(Fraction(1), mon)]
    assert [(c, b) for c, a, b in terms if a == zero] == [(Fraction(1), mon)]


@pytest.mark.parametrize("make,m", [(lie_s3, 3), (lie_m11, 11)])
def test_cap_product_is_a_quasi_isomorphism(make, m):
    L = make()
    c = fundamental_cycle(L, m)
    U = EnvelopingAlgebra(L, 15 + m + 2)
    for N in (TrivialModule(L), CoadjointModule(U)):
        cap = CapProduct(L, N, c, m)
        for n in range(16):
            assert cap.chain_map_defect(n) is None
            assert cap.is_iso(n), (N.name, n)


def test_trivial_cap_product_is_poincare_duality():
    L = lie_m11()
    cap = CapProduct(L, TrivialModule(L), fundamental_cycle(L, 11), 11)
    assert [cap.homology_matrix(n)[1] for n in range(12)] == [1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1]
