import pytest

from mackeybox.errors import InfiniteGroup, NotAnAction, NotPrime
from mackeybox.exactlin import (
    AbHom,
    FGAbPresentation,
    cyclic_group,
    free_group,
    identity_hom,
)
from mackeybox.intlinalg import IntMatrix
from mackeybox.mackey import (
    MackeyChainComplex,
    MackeyFunctor,
    MackeyMap,
    burnside,
    canonical_levels,
    constant,
    enumerate_subfunctors,
    homology_of_complex,
    identity_map,
    j_bottom,
    j_top,
    validate_mackey,
    zero_mackey,
    zero_map,
)

F4 = FGAbPresentation(2, IntMatrix([[2, 0], [0, 2]]))
FROBENIUS = AbHom(F4, F4, IntMatrix([[1, 1], [0, 1]]))  # 1 -> 1, w -> w + 1


def test_burnside_validates():
    for p in (2, 3, 5):
        assert validate_mackey(burnside(p)).passed


def test_burnside_res_matrix():
    assert burnside(2).res.matrix == IntMatrix([[1, 2]])
    b3 = burnside(3)
    # res(y, z) = y + 3 z
    assert b3.res((1, 0)) == (1,)
    assert b3.res((0, 1)) == (3,)


def test_burnside_res_tr_by_hand():
    # res(tr(x)) = res(0, x) = 3x equals the orbit sum of three trivial actions
    b = burnside(3)
    assert b.res.compose(b.tr).matrix == IntMatrix([[3]])


def test_constant_validates():
    for p in (2, 3):
        for n in (0, 2, 3, 4, 5):
            m = constant(p, n)
            assert validate_mackey(m).passed


def test_constant_f2_transfer_vanishes():
    m = constant(2, 2)
    assert m.tr.is_zero()
    assert m.res.equals(identity_hom(m.top))


def test_constant_f3_transfer_is_two():
    m = constant(2, 3)
    assert not m.tr.is_zero()
    assert m.tr.matrix == IntMatrix([[2]])


def test_corrupted_transfer_fails_with_witness():
    p = 2
    g = free_group(1)
    bad = MackeyFunctor(
        p,
        g,
        g,
        AbHom(g, g, IntMatrix([[p + 1]])),
        identity_hom(g),
        identity_hom(g),
    )
    report = validate_mackey(bad)
    assert not report.passed
    names = [c.name for c in report.failures()]
    assert "res_tr_is_orbit_sum" in names
    assert any(c.witness for c in report.failures())


def test_not_prime_rejected():
    with pytest.raises(NotPrime):
        burnside(4)
    with pytest.raises(NotPrime):
        constant(1, 2)


def test_j_bottom_sign_action_on_Z():
    # kernel of (gamma - id) = kernel of multiplication by -2 on Z, which is 0
    sign = AbHom(free_group(1), free_group(1), IntMatrix([[-1]]))
    m = j_bottom(2, free_group(1), sign)
    assert m.top.is_zero_group()
    assert canonical_levels(m)[1] == (1, ())
    assert validate_mackey(m).passed


def frobenius_trace_oracle():
    # enumerate F4 = {0, 1, w, w+1}: x + x^2 lands in the prime field;
    # trace(0) = trace(1) = 0, trace(w) = trace(w+1) = 1
    out = {}
    for a, b in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        fx = ((a + b) % 2, b)  # Frobenius: 1 -> 1, w -> w + 1
        out[(a, b)] = ((a + fx[0]) % 2, (b + fx[1]) % 2)
    return out


def test_j_bottom_f4_frobenius():
    trace = frobenius_trace_oracle()
    assert trace[(0, 1)] == (1, 0) and trace[(1, 1)] == (1, 0)
    m = j_bottom(2, F4, FROBENIUS)
    assert canonical_levels(m) == ((0, (2,)), (0, (2, 2)))
    assert validate_mackey(m).passed
    # transfer is the trace: nonzero exactly on the non-prime-field generator
    assert not m.tr.is_zero()
    assert m.tr.matrix.ncols == 2


def test_j_bottom_trivial_action_matches_constant_shape():
    from mackeybox.exactlin import hom_cokernel, hom_kernel

    g = cyclic_group(3)
    m = j_bottom(2, g, identity_hom(g))
    assert canonical_levels(m) == ((0, (3,)), (0, (3,)))
    # res is an isomorphism onto the whole bottom (trivial action fixes everything)
    k, _ = hom_kernel(m.res)
    c, _ = hom_cokernel(m.res)
    assert k.is_zero_group() and c.is_zero_group()


def test_j_bottom_trivial_action_res_tr_is_p():
    g = cyclic_group(5)
    for p in (2, 3):
        m = j_bottom(p, g, identity_hom(g))
        comp = m.res.compose(m.tr)
        expected = identity_hom(m.bottom).scale(p)
        assert comp.equals(expected)


def test_j_bottom_rejects_non_action():
    g = free_group(1)
    with pytest.raises(NotAnAction):
        j_bottom(2, g, AbHom(g, g, IntMatrix([[2]])))


def test_j_top_concentrated_field():
    m = j_top(2, cyclic_group(2))
    assert canonical_levels(m) == ((0, (2,)), (0, ()))
    assert validate_mackey(m).passed


def test_j_top_zero():
    m = j_top(3, FGAbPresentation(0, IntMatrix.zeros(0, 0)))
    assert m.is_zero()
    assert validate_mackey(m).passed


def test_j_top_always_validates():
    for p in (2, 3, 5):
        assert validate_mackey(j_top(p, cyclic_group(4))).passed


# ---------------------------------------------------------------------------
# subfunctors


def test_subfunctors_constant_f2():
    subs = enumerate_subfunctors(constant(2, 2))
    shapes = sorted(
        (len(s.top_elements), len(s.bottom_elements)) for s in subs
    )
    # hand enumeration: (0,0), (0, Z/2), (Z/2, Z/2); (Z/2, 0) fails res
    assert shapes == [(1, 1), (1, 2), (2, 2)]
    nontrivial = [s for s in subs if not s.is_zero() and not s.is_full()]
    assert len(nontrivial) == 1
    w = nontrivial[0]
    assert canonical_levels(w.functor) == ((0, ()), (0, (2,)))


def test_subfunctors_zero_functor():
    subs = enumerate_subfunctors(zero_mackey(2))
    assert len(subs) == 1


def test_subfunctors_concentrated_field():
    # hand enumeration over subgroup pairs: only 0 and the whole functor
    subs = enumerate_subfunctors(j_top(2, cyclic_group(2)))
    assert len(subs) == 2


def test_subfunctors_closed_under_intersection():
    m = j_bottom(2, F4, FROBENIUS)
    subs = enumerate_subfunctors(m)
    keys = {(s.top_elements, s.bottom_elements) for s in subs}
    for s1 in subs:
        for s2 in subs:
            inter = (
                s1.top_elements & s2.top_elements,
                s1.bottom_elements & s2.bottom_elements,
            )
            assert inter in keys


def test_subfunctors_require_finite():
    with pytest.raises(InfiniteGroup):
        enumerate_subfunctors(burnside(2))


# ---------------------------------------------------------------------------
# chain complexes


def two_term_identity_complex(m):
    return MackeyChainComplex(
        lower=0,
        upper=1,
        objects={0: m, 1: m},
        differentials={1: identity_map(m)},
    )


def test_homology_of_acyclic_complex():
    m = constant(2, 4)
    h = homology_of_complex(two_term_identity_complex(m))
    for n in (0, 1):
        assert canonical_levels(h[n]) == (((0, ()), (0, ())))


def test_homology_of_single_object():
    m = j_bottom(2, F4, FROBENIUS)
    c = MackeyChainComplex(lower=0, upper=0, objects={0: m}, differentials={})
    h = homology_of_complex(c)
    assert canonical_levels(h[0]) == canonical_levels(m)


def alternating_sum_oracle(p, m, length):
    # Moore complex of the constant simplicial object: differentials alternate
    # 0, id, 0, id...; homology is m at degree 0 and zero above.
    diffs = {}
    for n in range(1, length + 1):
        terms = [identity_map(m).scale((-1) ** i) for i in range(n + 1)]
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        diffs[n] = total
    return MackeyChainComplex(
        lower=0, upper=length, objects={n: m for n in range(length + 1)}, differentials=diffs
    )


def test_homology_constant_simplicial():
    m = constant(3, 3)
    c = alternating_sum_oracle(3, m, 3)
    h = homology_of_complex(c)
    assert canonical_levels(h[0]) == canonical_levels(m)
    for n in (1, 2):
        assert canonical_levels(h[n]) == ((0, ()), (0, ()))


def test_homology_shift_invariance():
    m = constant(2, 2)
    c = two_term_identity_complex(m)
    shifted = MackeyChainComplex(
        lower=1, upper=2, objects={1: m, 2: m}, differentials={2: identity_map(m)}
    )
    h1 = homology_of_complex(c)
    h2 = homology_of_complex(shifted)
    assert canonical_levels(h1[0]) == canonical_levels(h2[1])
    assert canonical_levels(h1[1]) == canonical_levels(h2[2])


def test_zero_map_construction():
    z = zero_map(burnside(2), constant(2, 2))
    assert z.is_zero()
