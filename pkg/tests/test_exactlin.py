import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mackeybox.errors import IllFormedHom, InfiniteGroup
from mackeybox.exactlin import (
    AbHom,
    FGAbPresentation,
    cyclic_group,
    direct_sum,
    enumerate_subgroups,
    factor_through_injection,
    finite_model,
    free_group,
    hom_cokernel,
    hom_image,
    hom_kernel,
    identity_hom,
    present_quotient,
    quotient_by_subgroup,
    solve_membership,
    tensor,
    zero_group,
    zero_hom,
)
from mackeybox.intlinalg import IntMatrix, smith_diagonal, smith_normal_form


def canon(pres):
    return pres.canonical()


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_hand_example():
    # row/column reduction by hand: gcd of entries is 2, |det| = |16-24| = 8,
    # so the invariant factors are 2 and 4.
    m = IntMatrix([[2, 4], [6, 8]])
    u, d, v = smith_normal_form(m)
    assert (u @ m @ v) == d
    assert [d.rows[0][0], d.rows[1][1]] == [2, 4]
    assert d.rows[0][1] == 0 and d.rows[1][0] == 0


def test_snf_identity():
    m = IntMatrix.identity(3)
    _, d, _ = smith_normal_form(m)
    assert d == IntMatrix.identity(3)


def test_snf_empty():
    m = IntMatrix.zeros(0, 0)
    u, d, v = smith_normal_form(m)
    assert u.nrows == 0 and v.nrows == 0 and d.nrows == 0


int_entries = st.integers(min_value=-30, max_value=30)


@st.composite
def matrices(draw, max_dim=4):
    m = draw(st.integers(min_value=0, max_value=max_dim))
    n = draw(st.integers(min_value=0, max_value=max_dim))
    rows = [[draw(int_entries) for _ in range(n)] for _ in range(m)]
    return IntMatrix(rows, n)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_snf_properties(m):
    u, d, v = smith_normal_form(m)
    assert (u @ m @ v) == d
    diag = [d.rows[i][i] for i in range(min(d.nrows, d.ncols))]
    for i in range(d.nrows):
        for j in range(d.ncols):
            if i != j:
                assert d.rows[i][j] == 0
    nz = [x for x in diag if x != 0]
    assert all(x > 0 for x in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    # zeros trail
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_snf_idempotent_canonical_form(m):
    _, d, _ = smith_normal_form(m)
    assert smith_diagonal(d) == smith_diagonal(m)


# ---------------------------------------------------------------------------
# kernels / cokernels / images


def mult_map(group, k):
    n = group.num_generators
    return AbHom(group, group, IntMatrix.identity(n).scale(k))


def test_kernel_mult2_on_Z():
    k, incl = hom_kernel(mult_map(free_group(1), 2))
    assert canon(k) == (0, ())
    assert incl.source is k


def test_kernel_mult2_on_Z4():
    # direct enumeration of Z/4: 2x = 0 for x in {0, 2}, so the kernel is Z/2
    z4 = list(range(4))
    oracle = [x for x in z4 if (2 * x) % 4 == 0]
    assert len(oracle) == 2
    k, incl = hom_kernel(mult_map(cyclic_group(4), 2))
    assert canon(k) == (0, (2,))
    # inclusion composed with doubling is zero
    f = mult_map(cyclic_group(4), 2)
    assert f.compose(incl).is_zero()


def test_kernel_zero_map_on_Z3():
    z3 = cyclic_group(3)
    k, _ = hom_kernel(zero_hom(z3, z3))
    assert canon(k) == (0, (3,))


def test_cokernel_mult2_on_Z():
    c, proj = hom_cokernel(mult_map(free_group(1), 2))
    assert canon(c) == (0, (2,))
    f = mult_map(free_group(1), 2)
    assert proj.compose(f).is_zero()


def test_cokernel_identity_on_Z2():
    c, _ = hom_cokernel(identity_hom(free_group(2)))
    assert canon(c) == (0, ())


def test_cokernel_zero_map_Z_to_Z():
    c, _ = hom_cokernel(zero_hom(free_group(1), free_group(1)))
    assert canon(c) == (1, ())


def test_image_ranks_additive():
    # free-rank additivity: rank(source) = rank(ker) + rank(im)
    cases = [
        mult_map(free_group(2), 3),
        zero_hom(free_group(2), free_group(1)),
        AbHom(free_group(2), free_group(2), IntMatrix([[1, 1], [1, 1]])),
        AbHom(free_group(3), free_group(2), IntMatrix([[1, 0, 2], [0, 3, 1]])),
    ]
    for f in cases:
        k, _ = hom_kernel(f)
        im, _, _ = hom_image(f)
        assert f.source.free_rank == k.free_rank + im.free_rank


def test_ill_formed_hom_rejected():
    with pytest.raises(IllFormedHom):
        AbHom(cyclic_group(4), free_group(1), IntMatrix([[1]]))


# ---------------------------------------------------------------------------
# tensor


def cyclic_tensor_oracle(a, b):
    # gcd oracle: Z/a (x) Z/b = Z/gcd(a,b); 0 means Z
    import math

    if a == 0 and b == 0:
        return (1, ())
    g = math.gcd(a, b) if a and b else (b if a == 0 else a)
    return (0, (g,)) if g > 1 else (0, ())


def test_tensor_gcd_examples():
    for a, b in [(2, 3), (4, 6), (2, 2), (0, 5), (6, 4)]:
        t, _ = tensor(cyclic_group(a), cyclic_group(b))
        assert canon(t) == cyclic_tensor_oracle(a, b), (a, b)


def test_tensor_with_Z_is_identity():
    for b in [cyclic_group(6), free_group(2), zero_group()]:
        t, _ = tensor(free_group(1), b)
        assert canon(t) == canon(b)


def test_tensor_symmetry():
    pairs = [
        (cyclic_group(4), cyclic_group(6)),
        (free_group(2), cyclic_group(3)),
        (FGAbPresentation(2, IntMatrix([[2, 0], [0, 4]])), cyclic_group(8)),
    ]
    for a, b in pairs:
        t1, _ = tensor(a, b)
        t2, _ = tensor(b, a)
        assert canon(t1) == canon(t2)


# ---------------------------------------------------------------------------
# quotients, membership, factoring


def test_quotient_proj_kills_subgroup():
    g = free_group(2)
    q, proj = quotient_by_subgroup(g, [(2, 0), (0, 3)])
    assert canon(q) == (0, (6,)) or canon(q) == (0, (2, 3)) or canon(q)[1] == (6,)
    # images of the killed generators vanish
    assert q.reduces_to_zero(proj((2, 0)))
    assert q.reduces_to_zero(proj((0, 3)))


def test_cokernel_proj_of_map_is_zero():
    f = AbHom(free_group(1), free_group(2), IntMatrix([[2], [4]]))
    c, proj = hom_cokernel(f)
    assert proj.compose(f).is_zero()


def test_solve_membership():
    g = cyclic_group(6)
    gens = IntMatrix([[2]])  # subgroup generated by 2
    assert solve_membership(g, gens, (4,)) is not None
    assert solve_membership(g, gens, (3,)) is None


def test_factor_through_injection():
    # multiples of 2 inside Z: factor multiplication by 6 through it
    amb = free_group(1)
    sub = free_group(1)
    incl = AbHom(sub, amb, IntMatrix([[2]]))
    f = mult_map(amb, 6)
    g = factor_through_injection(f, incl)
    assert incl.compose(g).equals(f)
    assert g.matrix == IntMatrix([[3]])


def test_present_quotient_round_trip():
    gens = IntMatrix([[2, 0], [0, 1]]).transpose()  # columns (2,0),(0,1) in Z^2
    killed = IntMatrix.from_columns([(4, 0)], 2)
    q = present_quotient(IntMatrix.from_columns([(2, 0), (0, 1)], 2), killed)
    assert canon(q) == (1, (2,))


# ---------------------------------------------------------------------------
# finite models and subgroup enumeration


def test_finite_model_enumeration():
    m = finite_model(FGAbPresentation(2, IntMatrix([[2, 0], [0, 2]])))
    assert m.order() == 4
    assert len(m.elements()) == 4


def test_infinite_group_rejected():
    with pytest.raises(InfiniteGroup):
        finite_model(free_group(1))


def subgroup_count_oracle_klein():
    # subgroups of (Z/2)^2 by hand: 0, three Z/2, full
    return 5


def test_enumerate_subgroups_klein():
    m = finite_model(FGAbPresentation(2, IntMatrix([[2, 0], [0, 2]])))
    subs = enumerate_subgroups(m)
    assert len(subs) == subgroup_count_oracle_klein()
    sizes = sorted(len(s) for s in subs)
    assert sizes == [1, 2, 2, 2, 4]


def test_enumerate_subgroups_z4():
    m = finite_model(cyclic_group(4))
    subs = enumerate_subgroups(m)
    assert sorted(len(s) for s in subs) == [1, 2, 4]


def test_enumeration_deterministic():
    m = finite_model(FGAbPresentation(2, IntMatrix([[2, 0], [0, 4]])))
    a = enumerate_subgroups(m)
    b = enumerate_subgroups(m)
    assert a == b


def test_direct_sum_blocks():
    s, ia, ib, pa, pb = direct_sum(cyclic_group(2), cyclic_group(3))
    assert canon(s) == (0, (6,))
    assert pa.compose(ia).equals(identity_hom(cyclic_group(2)))
    assert pb.compose(ib).equals(identity_hom(cyclic_group(3)))
    assert pb.compose(ia).is_zero()
