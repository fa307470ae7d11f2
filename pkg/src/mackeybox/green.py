"""Green functors, their modules and ideals, and Mackey-field detection.

A Green functor is a Mackey functor with a unit map from the Burnside
functor and a multiplication pairing.  Field detection is brute force over
the subfunctor lattice, which is the point: the classification of fields
into the two normal forms (concentrated at the fixed orbit, or the fixed
points of a ring with action) is then checked against actual data rather
than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boxtensor import (
    BilinearPairing,
    BoxProduct,
    box,
    box_many,
    box_power,
    burnside_action_pairing,
    contract_pair,
    map_from_pairing,
    pairing_from_matrices,
    permute_twist,
    relative_box_raw,
    swap_map,
    unitor,
)
from .errors import (
    InfiniteGroup,
    NotAModule,
    NotCommutative,
    UnclassifiableShape,
    ZeroFunctor,
)
from .exactlin import (
    AbHom,
    FGAbPresentation,
    cyclic_group,
    factor_through_injection,
    finite_model,
    hom_cokernel,
    hom_kernel,
    identity_hom,
    solve_membership,
)
from .intlinalg import IntMatrix, hermite_row_basis
from .mackey import (
    MackeyFunctor,
    MackeyMap,
    Subfunctor,
    ValidationCheck,
    ValidationReport,
    burnside,
    constant,
    enumerate_subfunctors,
    j_bottom,
    j_top,
    validate_mackey,
)


@dataclass(frozen=True)
class GreenFunctor:
    underlying: MackeyFunctor
    unit: MackeyMap  # from burnside(p)
    mult: BilinearPairing

    @property
    def prime(self):
        return self.underlying.prime

    def one_top(self):
        """Coordinates of the multiplicative unit at the fixed orbit."""
        return self.unit.f_top.matrix.column(0)

    def one_bot(self):
        return self.unit.f_bot.matrix.column(0)

    def is_commutative(self):
        bp = box(self.underlying, self.underlying)
        mm = map_from_pairing(self.mult, bp)
        return mm.compose(swap_map(bp, bp)).equals(mm)

    def to_json(self):
        d = self.underlying.to_json()
        d["unit"] = self.unit.to_json()
        d["mult_top"] = self.mult.f_top.matrix.to_lists()
        d["mult_bot"] = self.mult.f_bot.matrix.to_lists()
        return d


def green_from_mult(m: MackeyFunctor, one_top_vec, top_matrix, bot_matrix) -> GreenFunctor:
    """Assemble a Green functor from the unit element and pairing matrices."""
    a = burnside(m.prime)
    one_top = tuple(one_top_vec)
    one_bot = m.res(one_top)
    unit_top_cols = [one_top, m.tr(one_bot)]
    unit = MackeyMap(
        a,
        m,
        AbHom(a.top, m.top, IntMatrix.from_columns(unit_top_cols, m.top.num_generators)),
        AbHom(a.bottom, m.bottom, IntMatrix.from_columns([one_bot], m.bottom.num_generators)),
    )
    mult = pairing_from_matrices(m, m, m, top_matrix, bot_matrix)
    return GreenFunctor(m, unit, mult)


def validate_green(g: GreenFunctor) -> ValidationReport:
    """Pairing compatibility, associativity, unitality, commutativity."""
    checks = []
    bad = g.mult.check()
    checks.append(
        ValidationCheck("pairing_compatible", not bad, f"violated: {bad}" if bad else "")
    )
    base = validate_mackey(g.underlying)
    checks.append(
        ValidationCheck(
            "underlying_axioms", base.passed, "; ".join(c.name for c in base.failures())
        )
    )
    if bad or not base.passed:
        return ValidationReport(tuple(checks))

    m = g.underlying
    bp2 = box(m, m)
    mult_map = map_from_pairing(g.mult, bp2)

    # associativity: contract slots (0,1) or (1,2) first, then multiply
    bp3 = box_many([m, m, m])
    left = mult_map.compose(contract_pair(bp3, 0, g.mult, bp2))
    right = mult_map.compose(contract_pair(bp3, 1, g.mult, bp2))
    assoc = left.equals(right)
    checks.append(
        ValidationCheck("associativity", assoc, "" if assoc else "triple products differ")
    )

    # unitality: multiplying against the image of the unit is the unitor
    a = burnside(g.prime)
    bp_am = box(a, m)
    from .boxtensor import box_map
    from .mackey import identity_map

    unit_boxed = box_map(bp_am, bp2, [g.unit, identity_map(m)])
    via_mult = mult_map.compose(unit_boxed)
    u = unitor(m, bp_am)
    unital = via_mult.equals(u)
    checks.append(ValidationCheck("unitality", unital, "" if unital else "unit law fails"))

    comm = mult_map.compose(swap_map(bp2, bp2)).equals(mult_map)
    checks.append(ValidationCheck("commutativity", comm, "" if comm else "mult != mult . swap"))
    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# built-in Green functors


def burnside_green(p) -> GreenFunctor:
    """Burnside functor with the Cartesian-product ring structure."""
    a = burnside(p)
    # top basis: y = fixed orbit class (the unit), z = free orbit class
    # y*y = y, y*z = z*y = z, z*z = p z
    cols = {
        (0, 0): (1, 0),
        (0, 1): (0, 1),
        (1, 0): (0, 1),
        (1, 1): (0, p),
    }
    top = IntMatrix.from_columns([cols[(i, j)] for i in range(2) for j in range(2)], 2)
    bot = IntMatrix([[1]])
    return green_from_mult(a, (1, 0), top, bot)


def constant_green(p, n) -> GreenFunctor:
    """Constant functor on Z or Z/n with levelwise multiplication."""
    m = constant(p, n)
    return green_from_mult(m, (1,), IntMatrix([[1]]), IntMatrix([[1]]))


def field_top_green(p, q) -> GreenFunctor:
    """Concentrated functor with F_q at the fixed orbit (q prime)."""
    m = j_top(p, cyclic_group(q))
    return green_from_mult(m, (1,), IntMatrix([[1]]), IntMatrix.zeros(0, 0))


def fixed_point_green(p, v: FGAbPresentation, gamma: AbHom, bot_mult: IntMatrix,
                      one_bot_vec) -> GreenFunctor:
    """Fixed-point functor of a ring with order-p action.

    ``bot_mult`` is the multiplication on v in generator coordinates and
    ``one_bot_vec`` its unit; the fixed-level multiplication is derived by
    corestriction.
    """
    m = j_bottom(p, v, gamma)
    incl = m.res  # inclusion of the fixed subgroup
    n_top = m.top.num_generators
    top_cols = []
    for i in range(n_top):
        xi = incl.matrix.column(i)
        for j in range(n_top):
            yj = incl.matrix.column(j)
            prod = _bilinear_vec(bot_mult, xi, yj)
            coef = solve_membership(v, incl.matrix, prod)
            if coef is None:
                raise NotAModule("fixed level is not closed under multiplication")
            top_cols.append(coef)
    top_mult = (
        IntMatrix.from_columns(top_cols, n_top)
        if top_cols
        else IntMatrix.zeros(n_top, 0)
    )
    one_top = solve_membership(v, incl.matrix, tuple(one_bot_vec))
    if one_top is None:
        raise NotAModule("ring unit is not fixed by the action")
    return green_from_mult(m, one_top, top_mult, bot_mult)


def f4_frobenius_green() -> GreenFunctor:
    """The Galois field with four elements under conjugation, over C_2."""
    v = FGAbPresentation(2, IntMatrix([[2, 0], [0, 2]]))
    frob = AbHom(v, v, IntMatrix([[1, 1], [0, 1]]))
    cols = {(0, 0): (1, 0), (0, 1): (0, 1), (1, 0): (0, 1), (1, 1): (1, 1)}
    mult = IntMatrix.from_columns([cols[(i, j)] for i in range(2) for j in range(2)], 2)
    return fixed_point_green(2, v, frob, mult, (1, 0))


def _bilinear_vec(matrix, x, y):
    from .exactlin import vector_tensor

    return tuple(
        sum(m * v for m, v in zip(row, vector_tensor(x, y))) for row in matrix.rows
    )


# ---------------------------------------------------------------------------
# modules over Green functors


@dataclass(frozen=True)
class GreenModule:
    ring: GreenFunctor
    carrier: MackeyFunctor
    action: BilinearPairing  # (ring, carrier) -> carrier, left action

    def validate(self):
        bad = self.action.check()
        if bad:
            raise NotAModule(f"action pairing violates conditions {bad}")
        r = self.ring.underlying
        m = self.carrier
        bp_rm = box(r, m)
        act = map_from_pairing(self.action, bp_rm)
        # unit acts as the identity, through the unitor
        a = burnside(r.prime)
        bp_am = box(a, m)
        from .boxtensor import box_map
        from .mackey import identity_map

        via_unit = act.compose(box_map(bp_am, bp_rm, [self.ring.unit, identity_map(m)]))
        if not via_unit.equals(unitor(m, bp_am)):
            raise NotAModule("unit does not act as the identity")
        # associativity against the ring multiplication
        bp_rrm = box_many([r, r, m])
        one = act.compose(contract_pair(bp_rrm, 0, self.ring.mult, bp_rm))
        two = act.compose(contract_pair(bp_rrm, 1, self.action, bp_rm))
        if not one.equals(two):
            raise NotAModule("action is not associative over the ring")
        return self


def self_module(g: GreenFunctor) -> GreenModule:
    return GreenModule(g, g.underlying, g.mult)


def right_action_of(module: GreenModule) -> BilinearPairing:
    """Right action (carrier, ring) -> carrier from a left module over a
    commutative ring, by swapping the tensor factors."""
    r = module.ring.underlying
    m = module.carrier
    nt_r, nb_r = r.top.num_generators, r.bottom.num_generators
    nt_m, nb_m = m.top.num_generators, m.bottom.num_generators
    top_cols = [
        module.action.f_top.matrix.column(j * nt_m + i)
        for i in range(nt_m)
        for j in range(nt_r)
    ]
    bot_cols = [
        module.action.f_bot.matrix.column(j * nb_m + i)
        for i in range(nb_m)
        for j in range(nb_r)
    ]
    return pairing_from_matrices(
        m,
        r,
        m,
        IntMatrix.from_columns(top_cols, nt_m) if top_cols else IntMatrix.zeros(nt_m, 0),
        IntMatrix.from_columns(bot_cols, nb_m) if bot_cols else IntMatrix.zeros(nb_m, 0),
    )


@dataclass(frozen=True)
class TwistedModule:
    """A module with its ring action twisted by a power of the group action."""

    base: GreenModule
    twist: int

    def action_pairing(self) -> BilinearPairing:
        t = self.twist % self.base.ring.prime
        r = self.base.ring.underlying
        act = self.base.action
        twisted_bot = act.f_bot.matrix @ r.weyl.matrix.power(t).kron(
            IntMatrix.identity(self.base.carrier.bottom.num_generators)
        )
        return pairing_from_matrices(
            r, self.base.carrier, self.base.carrier, act.f_top.matrix, twisted_bot
        )

    def as_module(self) -> GreenModule:
        return GreenModule(self.base.ring, self.base.carrier, self.action_pairing())


def relative_box(left: GreenModule, right_carrier_module: GreenModule, limit=None):
    """Coequalizer box product of a right and a left module over one ring."""
    if left.ring != right_carrier_module.ring:
        raise NotAModule("modules are over different rings")
    left.validate()
    right_carrier_module.validate()
    right_pairing = right_action_of(left)
    return relative_box_raw(
        left.carrier,
        right_carrier_module.carrier,
        right_pairing,
        right_carrier_module.action,
        limit=limit,
    )


# ---------------------------------------------------------------------------
# ideals and fields


def is_ideal(g: GreenFunctor, sub: Subfunctor):
    """(flag, witness string); two-sided by default, commutative rings make
    the sides coincide."""
    m = g.underlying
    tm = finite_model(m.top)
    bm = finite_model(m.bottom)
    top_elems = [tm.from_canonical(c) for c in sorted(sub.top_elements)]
    bot_elems = [bm.from_canonical(c) for c in sorted(sub.bottom_elements)]
    top_ring = [tm.from_canonical(c) for c in tm.elements()]
    bot_ring = [bm.from_canonical(c) for c in bm.elements()]
    incl_top = sub.include.f_top.matrix
    incl_bot = sub.include.f_bot.matrix

    for r in top_ring:
        for s in top_elems:
            for prod in (
                _bilinear_vec(g.mult.f_top.matrix, r, s),
                _bilinear_vec(g.mult.f_top.matrix, s, r),
            ):
                if solve_membership(m.top, incl_top, prod) is None:
                    return False, f"top product {list(prod)} escapes the subfunctor"
    for r in bot_ring:
        for s in bot_elems:
            for prod in (
                _bilinear_vec(g.mult.f_bot.matrix, r, s),
                _bilinear_vec(g.mult.f_bot.matrix, s, r),
            ):
                if solve_membership(m.bottom, incl_bot, prod) is None:
                    return False, f"bottom product {list(prod)} escapes the subfunctor"
    return True, ""


@dataclass(frozen=True)
class FieldVerdict:
    is_field: bool
    witness: Subfunctor | None

    def to_json(self):
        out = {"verdict": "Field" if self.is_field else "NotField"}
        if self.witness is not None:
            out["witness"] = {
                "top": sorted(list(c) for c in self.witness.top_elements),
                "bottom": sorted(list(c) for c in self.witness.bottom_elements),
                "levels": [
                    list(self.witness.functor.top.canonical()[1]),
                    list(self.witness.functor.bottom.canonical()[1]),
                ],
            }
        return out


def is_mackey_field(g: GreenFunctor) -> FieldVerdict:
    """Brute force over the subfunctor lattice; deterministic witness."""
    m = g.underlying
    if m.is_zero():
        raise ZeroFunctor("the zero functor is not a Mackey field")
    if not m.levels_finite():
        raise InfiniteGroup("field detection requires finite levels")
    if not g.is_commutative():
        raise NotCommutative("field detection requires a commutative Green functor")
    for sub in enumerate_subfunctors(m):
        if sub.is_zero() or sub.is_full():
            continue
        flag, _ = is_ideal(g, sub)
        if flag:
            return FieldVerdict(False, sub)
    return FieldVerdict(True, None)


@dataclass(frozen=True)
class FieldShape:
    kind: str  # "concentrated" or "fixed_point"
    field: GreenFunctor
    # concentrated: the field lives at the fixed orbit
    # fixed_point: ring with action at the free orbit, fixed subring above
    ring_presentation: FGAbPresentation
    ring_mult: IntMatrix
    action: AbHom
    characteristic: int

    def to_json(self):
        return {
            "shape": self.kind,
            "level_group": list(self.ring_presentation.canonical()[1]),
            "characteristic": self.characteristic,
        }


def top_level_is_field(g: GreenFunctor) -> bool:
    """Exhaustive check that the fixed-orbit ring is a field."""
    m = g.underlying
    if not m.top.is_finite():
        raise InfiniteGroup("top level must be finite")
    tm = finite_model(m.top)
    elems = tm.elements()
    one = tm.to_canonical(g.one_top())
    zero = tm.zero()
    if one == zero:
        return False

    def mul(a, b):
        return tm.to_canonical(
            _bilinear_vec(g.mult.f_top.matrix, tm.from_canonical(a), tm.from_canonical(b))
        )

    for a in elems:
        if a == zero:
            continue
        if not any(mul(a, b) == one for b in elems):
            return False
        for b in elems:
            if b != zero and mul(a, b) == zero:
                return False
    return True


def _additive_exponent(pres):
    facs = pres.invariant_factors
    return facs[-1] if facs else 1


def classify_field_shape(g: GreenFunctor) -> FieldShape:
    """Match a verified Mackey field against the two normal forms."""
    m = g.underlying
    if m.bottom.is_zero_group():
        if not top_level_is_field(g):
            raise UnclassifiableShape("bottom level vanishes but the top is not a field")
        return FieldShape(
            "concentrated",
            g,
            m.top,
            g.mult.f_top.matrix,
            identity_hom(m.top),
            _additive_exponent(m.top),
        )
    # fixed-point shape: res injective onto the fixed subgroup, orbit-sum transfer
    k, _ = hom_kernel(m.res)
    if not k.is_zero_group():
        raise UnclassifiableShape("restriction is not injective")
    fixed, fixed_incl = hom_kernel(m.weyl - identity_hom(m.bottom))
    if not _same_subgroup(m.bottom, m.res.matrix, fixed_incl.matrix):
        raise UnclassifiableShape("restriction image differs from the fixed subgroup")
    if m.tr.is_zero():
        raise UnclassifiableShape("fixed-point shape requires a nonzero transfer")
    if not top_level_is_field(g):
        raise UnclassifiableShape("fixed subring is not a field")
    return FieldShape(
        "fixed_point",
        g,
        m.bottom,
        g.mult.f_bot.matrix,
        m.weyl,
        _additive_exponent(m.bottom),
    )


def _same_subgroup(ambient, cols_a, cols_b):
    rows_a = [cols_a.column(j) for j in range(cols_a.ncols)]
    rows_b = [cols_b.column(j) for j in range(cols_b.ncols)]
    rel = ambient.relations.rows
    key_a = hermite_row_basis(list(rows_a) + list(rel), ambient.num_generators)
    key_b = hermite_row_basis(list(rows_b) + list(rel), ambient.num_generators)
    return key_a == key_b


# ---------------------------------------------------------------------------
# generated ideals (witness probe for infinite levels)


def ideal_generated_by(m: MackeyFunctor, mult: BilinearPairing, level, element_vec):
    """Smallest subfunctor pair containing the element and closed under the
    maps and the ring action; works for infinite levels (Noetherian levels).

    Returns (top_generator_rows, bottom_generator_rows).
    """
    top_gens = [tuple(element_vec)] if level == "top" else []
    bot_gens = [tuple(element_vec)] if level == "bottom" else []
    ring_top = [
        tuple(1 if i == j else 0 for j in range(m.top.num_generators))
        for i in range(m.top.num_generators)
    ]
    ring_bot = [
        tuple(1 if i == j else 0 for j in range(m.bottom.num_generators))
        for i in range(m.bottom.num_generators)
    ]

    def key(rows, pres):
        return hermite_row_basis(list(rows) + list(pres.relations.rows), pres.num_generators)

    while True:
        before = (key(top_gens, m.top), key(bot_gens, m.bottom))
        new_top = list(top_gens)
        new_bot = list(bot_gens)
        for s in bot_gens:
            new_top.append(m.tr(s))
            new_bot.append(m.weyl(s))
            for r in ring_bot:
                new_bot.append(_bilinear_vec(mult.f_bot.matrix, r, s))
        for s in top_gens:
            new_bot.append(m.res(s))
            for r in ring_top:
                new_top.append(_bilinear_vec(mult.f_top.matrix, r, s))
        top_gens = [list(r) for r in key(new_top, m.top)]
        bot_gens = [list(r) for r in key(new_bot, m.bottom)]
        after = (key(top_gens, m.top), key(bot_gens, m.bottom))
        if after == before:
            return top_gens, bot_gens


def subgroup_is_full(pres, rows):
    for i in range(pres.num_generators):
        e = tuple(1 if k == i else 0 for k in range(pres.num_generators))
        mat = (
            IntMatrix(rows, pres.num_generators)
            if rows
            else IntMatrix.zeros(0, pres.num_generators)
        )
        if solve_membership(pres, mat.transpose(), e) is None:
            return False
    return True


def subgroup_is_zero(pres, rows):
    return all(pres.reduces_to_zero(r) for r in rows)
