import pytest

from mackeybox.errors import (
    InfiniteGroup,
    NotAModule,
    NotCommutative,
    UnclassifiableShape,
    ZeroFunctor,
)
from mackeybox.exactlin import cyclic_group
from mackeybox.green import (
    FieldShape,
    GreenFunctor,
    GreenModule,
    TwistedModule,
    burnside_green,
    classify_field_shape,
    constant_green,
    f4_frobenius_green,
    field_top_green,
    fixed_point_green,
    green_from_mult,
    is_ideal,
    is_mackey_field,
    relative_box,
    self_module,
    top_level_is_field,
    validate_green,
)
from mackeybox.intlinalg import IntMatrix
from mackeybox.mackey import canonical_levels, constant, enumerate_subfunctors, j_top, zero_mackey
from mackeybox.exactlin import FGAbPresentation
from mackeybox.exactlin import AbHom


def test_burnside_green_validates():
    for p in (2, 3, 5):
        rep = validate_green(burnside_green(p))
        assert rep.passed, rep.to_json()


def test_constant_field_greens_validate():
    for p in (2, 3):
        for q in (2, 3, 4, 5):
            rep = validate_green(constant_green(p, q))
            assert rep.passed, (p, q, rep.to_json())
    rep = validate_green(constant_green(2, 0))
    assert rep.passed


def test_f4_frobenius_green_validates():
    rep = validate_green(f4_frobenius_green())
    assert rep.passed, rep.to_json()


def test_field_top_green_validates():
    for p in (2, 3):
        for q in (2, 3):
            assert validate_green(field_top_green(p, q)).passed


def test_corrupted_mult_fails_with_witness():
    m = constant(2, 3)
    # mult(x, y) = 2xy is not unital
    g = green_from_mult(m, (1,), IntMatrix([[2]]), IntMatrix([[2]]))
    rep = validate_green(g)
    assert not rep.passed
    assert any(c.name == "unitality" and not c.passed for c in rep.checks)


def test_is_ideal_trivial_cases():
    g = constant_green(2, 2)
    subs = enumerate_subfunctors(g.underlying)
    full = [s for s in subs if s.is_full()][0]
    zero = [s for s in subs if s.is_zero()][0]
    assert is_ideal(g, full)[0]
    assert is_ideal(g, zero)[0]


def test_constant_f2_ideal_matches_hand_example():
    g = constant_green(2, 2)
    subs = enumerate_subfunctors(g.underlying)
    proper = [s for s in subs if not s.is_zero() and not s.is_full()]
    assert len(proper) == 1
    w = proper[0]
    # the ideal has nothing at the fixed orbit and everything below
    assert canonical_levels(w.functor) == ((0, ()), (0, (2,)))
    assert is_ideal(g, w)[0]


def test_constant_f2_not_field_with_witness():
    v = is_mackey_field(constant_green(2, 2))
    assert not v.is_field
    assert canonical_levels(v.witness.functor) == ((0, ()), (0, (2,)))


def test_constant_f3_is_field():
    assert is_mackey_field(constant_green(2, 3)).is_field


def test_constant_fq_field_over_coprime_primes():
    assert is_mackey_field(constant_green(3, 2)).is_field
    assert is_mackey_field(constant_green(2, 5)).is_field
    assert not is_mackey_field(constant_green(3, 3)).is_field


def test_concentrated_functors_are_fields():
    for p in (2, 3):
        for q in (2, 3):
            assert is_mackey_field(field_top_green(p, q)).is_field


def test_f4_frobenius_is_field():
    assert is_mackey_field(f4_frobenius_green()).is_field


def test_field_check_guards():
    with pytest.raises(ZeroFunctor):
        is_mackey_field(green_from_mult(zero_mackey(2), (), IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0)))
    with pytest.raises(InfiniteGroup):
        is_mackey_field(burnside_green(2))


def test_classify_concentrated():
    shape = classify_field_shape(field_top_green(2, 2))
    assert shape.kind == "concentrated"
    assert shape.characteristic == 2


def test_classify_constant_f3():
    shape = classify_field_shape(constant_green(2, 3))
    assert shape.kind == "fixed_point"
    assert shape.characteristic == 3
    # trivial action, transfer nonzero
    assert shape.action.equals(
        AbHom(shape.ring_presentation, shape.ring_presentation, IntMatrix([[1]]))
    )
    assert not shape.field.underlying.tr.is_zero()


def test_classify_f4_frobenius():
    g = f4_frobenius_green()
    shape = classify_field_shape(g)
    assert shape.kind == "fixed_point"
    assert shape.ring_presentation.canonical() == (0, (2, 2))
    # the action is the Frobenius, not the identity
    assert not shape.action.equals(
        AbHom(shape.ring_presentation, shape.ring_presentation, IntMatrix.identity(2))
    )


def test_every_corpus_field_has_field_top_level():
    corpus = [
        constant_green(2, 3),
        constant_green(3, 2),
        field_top_green(2, 2),
        field_top_green(3, 3),
        f4_frobenius_green(),
    ]
    for g in corpus:
        assert is_mackey_field(g).is_field
        assert top_level_is_field(g)


def test_fixed_point_fields_have_nonzero_transfer():
    for g in [constant_green(2, 3), constant_green(3, 2), f4_frobenius_green()]:
        shape = classify_field_shape(g)
        if shape.kind == "fixed_point":
            assert not g.underlying.tr.is_zero()


def test_top_level_field_negatives():
    assert not top_level_is_field(constant_green(2, 4))  # 2 is a zero divisor
    z = green_from_mult(zero_mackey(2), (), IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0))
    assert not top_level_is_field(z)


# ---------------------------------------------------------------------------
# modules


def test_self_module_validates():
    for g in [burnside_green(2), constant_green(2, 3), field_top_green(2, 2)]:
        self_module(g).validate()


def test_twisted_module_t0_is_base():
    g = f4_frobenius_green()
    mod = self_module(g)
    t0 = TwistedModule(mod, 0)
    assert t0.action_pairing().f_bot.equals(mod.action.f_bot)
    tp = TwistedModule(mod, g.prime)
    assert tp.action_pairing().f_bot.equals(mod.action.f_bot)


def test_twisted_module_nontrivial_twist_differs():
    g = f4_frobenius_green()
    mod = self_module(g)
    t1 = TwistedModule(mod, 1)
    assert not t1.action_pairing().f_bot.equals(mod.action.f_bot)
    t1.as_module().validate()


def test_relative_box_over_self():
    g = constant_green(2, 3)
    mod = self_module(g)
    bp, _ = relative_box(mod, mod)
    assert canonical_levels(bp.result) == canonical_levels(g.underlying)


def test_relative_box_mismatched_rings():
    g1 = constant_green(2, 3)
    g2 = constant_green(2, 2)
    with pytest.raises(NotAModule):
        relative_box(self_module(g1), self_module(g2))
