from fractions import Fraction

import pytest

from conftest import lie_m11, lie_s3, lie_with_d
from loopstring.cohomology import transfer
from loopstring.lie import EnvelopingAlgebra, LieError, cochain_algebra
from loopstring.lie_models import (
    check_symmetrization,
    coformal_path_composition,
    loop_cochain_map,
)
from loopstring.models import PathCompositionModel


@pytest.mark.parametrize("make", [lie_s3, lie_m11])
def test_symmetrization_is_a_coalgebra_isomorphism(make):
    L = make()
    assert check_symmetrization(L, EnvelopingAlgebra(L, 12), 0, 12) == []


@pytest.mark.parametrize("make", [lie_s3, lie_m11])
@pytest.mark.parametrize("copies", [0, 1, 2])
def test_iota_is_a_chain_map(make, copies):
    L = make()
    iota = loop_cochain_map(L, copies, EnvelopingAlgebra(L, 12), 12)
    sul, tgt = iota.sullivan, iota.target
    for n in range(10):
        for mon in sul.alg.basis(n):
            x = sul.alg.monomial(mon)
            assert iota(sul.d(x)) == tgt.d(iota(x))


@pytest.mark.parametrize("copies", [0, 1, 2])
def test_iota_inverse_round_trip(copies):
    L = lie_m11()
    iota = loop_cochain_map(L, copies, EnvelopingAlgebra(L, 12))
    for n in range(11):
        for mon in iota.sullivan.alg.basis(n):
            x = iota.sullivan.alg.monomial(mon)
            assert iota.inverse(iota(x)) == x


def test_coformal_composition_on_generators():
    cf = coformal_path_composition(lie_m11(), 16)
    W = cf.iterated.alg
    g = W.gen
    expected = g("zb") + g("zb'") + (g("xb") * g("yb'") - g("yb") * g("xb'")) * Fraction(1, 2)
    assert cf.coproduct("zb") == expected
    assert cf.coproduct("xb") == g("xb") + g("xb'")
    assert cf.c.values["z"] == g("z")


def test_coformal_composition_agrees_with_the_sullivan_model_in_cohomology():
    L = lie_m11()
    cf = coformal_path_composition(L, 16)
    pc = PathCompositionModel(cochain_algebra(L))
    LM, E = pc.loop.total, pc.iterated.total
    for gname in cf.loop.alg.names:
        assert transfer(cf.loop.d.values[gname], LM.alg) == LM.d.values[gname]
    for n in range(16):
        HL, HE = LM.H(n), E.H(n)
        for z in HL.reps:
            ours = transfer(cf.c(transfer(z, cf.loop.alg)), E.alg)
            assert HE.coords(ours) == HE.coords(pc.c(z))


def test_coformal_composition_needs_zero_differential():
    with pytest.raises(LieError):
        coformal_path_composition(lie_with_d(), 8)
