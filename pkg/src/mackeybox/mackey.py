"""C_p Mackey functors in two-level normal form.

A functor is a pair of presented abelian groups, the value at the fixed
orbit ("top") and at the free orbit ("bottom"), with transfer, restriction
and Weyl maps subject to the usual axioms: the Weyl action has order p,
restriction followed by transfer is the Weyl-orbit sum, and transfer and
restriction absorb the action.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InfiniteGroup, NotAComplex, NotAnAction, NotPrime
from .exactlin import (
    AbHom,
    FGAbPresentation,
    cyclic_group,
    direct_sum,
    enumerate_subgroups,
    factor_through_injection,
    finite_model,
    free_group,
    hom_kernel,
    identity_hom,
    present_quotient,
    subgroup_key,
    subgroup_presentation,
    zero_group,
    zero_hom,
)
from .intlinalg import IntMatrix


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def require_prime(p):
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")


@dataclass(frozen=True)
class MackeyFunctor:
    prime: int
    top: FGAbPresentation
    bottom: FGAbPresentation
    tr: AbHom  # bottom -> top
    res: AbHom  # top -> bottom
    weyl: AbHom  # bottom -> bottom, generator action

    def __post_init__(self):
        assert self.tr.source == self.bottom and self.tr.target == self.top
        assert self.res.source == self.top and self.res.target == self.bottom
        assert self.weyl.source == self.bottom and self.weyl.target == self.bottom

    def weyl_orbit_sum(self):
        """Sum of the powers weyl^i for 0 <= i < p."""
        total = identity_hom(self.bottom)
        acc = total
        for _ in range(self.prime - 1):
            acc = self.weyl.compose(acc)
            total = total + acc
        return total

    def is_zero(self):
        return self.top.is_zero_group() and self.bottom.is_zero_group()

    def levels_finite(self):
        return self.top.is_finite() and self.bottom.is_finite()

    def to_json(self):
        return {
            "prime": self.prime,
            "top": self.top.to_json(),
            "bottom": self.bottom.to_json(),
            "tr": self.tr.matrix.to_lists(),
            "res": self.res.matrix.to_lists(),
            "weyl": self.weyl.matrix.to_lists(),
        }


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks
            ],
        }


def _hom_eq_check(name, f, g):
    diff = f.matrix - g.matrix
    for j in range(diff.ncols):
        if not f.target.reduces_to_zero(diff.column(j)):
            return ValidationCheck(name, False, f"generator {j} maps to {list(diff.column(j))}")
    return ValidationCheck(name, True)


def validate_mackey(m: MackeyFunctor) -> ValidationReport:
    """Check the four axioms; failures carry a witness generator."""
    checks = [
        _hom_eq_check("weyl_order_p", m.weyl.power(m.prime), identity_hom(m.bottom)),
        _hom_eq_check("res_tr_is_orbit_sum", m.res.compose(m.tr), m.weyl_orbit_sum()),
        _hom_eq_check("tr_weyl_is_tr", m.tr.compose(m.weyl), m.tr),
        _hom_eq_check("weyl_res_is_res", m.weyl.compose(m.res), m.res),
    ]
    return ValidationReport(tuple(checks))


@dataclass(frozen=True)
class MackeyMap:
    source: MackeyFunctor
    target: MackeyFunctor
    f_top: AbHom
    f_bot: AbHom

    def __post_init__(self):
        assert self.source.prime == self.target.prime
        checks = self.compatibility_failures()
        if checks:
            raise ValueError("not a map of Mackey functors: " + "; ".join(checks))

    def compatibility_failures(self):
        out = []
        if not self.target.tr.compose(self.f_bot).equals(self.f_top.compose(self.source.tr)):
            out.append("transfer not respected")
        if not self.target.res.compose(self.f_top).equals(self.f_bot.compose(self.source.res)):
            out.append("restriction not respected")
        if not self.target.weyl.compose(self.f_bot).equals(self.f_bot.compose(self.source.weyl)):
            out.append("action not respected")
        return out

    def compose(self, other: "MackeyMap") -> "MackeyMap":
        return MackeyMap(
            other.source,
            self.target,
            self.f_top.compose(other.f_top),
            self.f_bot.compose(other.f_bot),
        )

    def __add__(self, other):
        return MackeyMap(self.source, self.target, self.f_top + other.f_top, self.f_bot + other.f_bot)

    def __sub__(self, other):
        return MackeyMap(self.source, self.target, self.f_top - other.f_top, self.f_bot - other.f_bot)

    def scale(self, k):
        return MackeyMap(self.source, self.target, self.f_top.scale(k), self.f_bot.scale(k))

    def equals(self, other):
        return self.f_top.equals(other.f_top) and self.f_bot.equals(other.f_bot)

    def is_zero(self):
        return self.f_top.is_zero() and self.f_bot.is_zero()

    def is_isomorphism(self):
        for f in (self.f_top, self.f_bot):
            k, _ = hom_kernel(f)
            if not k.is_zero_group():
                return False
            from .exactlin import hom_cokernel

            c, _ = hom_cokernel(f)
            if not c.is_zero_group():
                return False
        return True

    def to_json(self):
        return {"f_top": self.f_top.matrix.to_lists(), "f_bot": self.f_bot.matrix.to_lists()}


def identity_map(m: MackeyFunctor) -> MackeyMap:
    return MackeyMap(m, m, identity_hom(m.top), identity_hom(m.bottom))


def zero_map(source: MackeyFunctor, target: MackeyFunctor) -> MackeyMap:
    return MackeyMap(
        source, target, zero_hom(source.top, target.top), zero_hom(source.bottom, target.bottom)
    )


# ---------------------------------------------------------------------------
# constructors


def zero_mackey(p) -> MackeyFunctor:
    z = zero_group()
    zz = zero_hom(z, z)
    return MackeyFunctor(p, z, z, zz, zz, zz)


def burnside(p) -> MackeyFunctor:
    """Top Z^2 on (fixed orbit class, free orbit class), bottom Z.

    tr(x) = (0, x), res(y, z) = y + p z, trivial action.
    """
    require_prime(p)
    top = free_group(2)
    bot = free_group(1)
    tr = AbHom(bot, top, IntMatrix([[0], [1]]))
    res = AbHom(top, bot, IntMatrix([[1, p]]))
    weyl = identity_hom(bot)
    return MackeyFunctor(p, top, bot, tr, res, weyl)


def constant(p, n) -> MackeyFunctor:
    """Constant functor on Z (n = 0) or Z/n: res = id, tr = p, trivial action."""
    require_prime(p)
    g = cyclic_group(n)
    return MackeyFunctor(
        p,
        g,
        g,
        AbHom(g, g, IntMatrix([[p]])),
        identity_hom(g),
        identity_hom(g),
    )


def j_top(p, v: FGAbPresentation) -> MackeyFunctor:
    """Concentrated functor: given group at the top, zero below."""
    require_prime(p)
    z = zero_group()
    return MackeyFunctor(p, v, z, zero_hom(z, v), zero_hom(v, z), zero_hom(z, z))


def j_bottom(p, v: FGAbPresentation, gamma: AbHom) -> MackeyFunctor:
    """Fixed-point functor of an order-p action on v.

    Top level is the fixed subgroup, res the inclusion, tr the orbit sum
    corestricted to the fixed subgroup.
    """
    require_prime(p)
    if gamma.source != v or gamma.target != v:
        raise NotAnAction("action endomorphism must live on v")
    if not gamma.power(p).equals(identity_hom(v)):
        raise NotAnAction(f"gamma^{p} is not the identity")
    fixed, incl = hom_kernel(gamma - identity_hom(v))
    orbit_sum = identity_hom(v)
    acc = identity_hom(v)
    for _ in range(p - 1):
        acc = gamma.compose(acc)
        orbit_sum = orbit_sum + acc
    tr = factor_through_injection(orbit_sum, incl)
    weyl_fixed_check = gamma.compose(incl)
    assert weyl_fixed_check.equals(incl)
    return MackeyFunctor(p, fixed, v, tr, incl, gamma)


def mackey_direct_sum(a: MackeyFunctor, b: MackeyFunctor):
    """(sum, incl_a, incl_b)."""
    assert a.prime == b.prime
    top, ia_t, ib_t, _, _ = direct_sum(a.top, b.top)
    bot, ia_b, ib_b, pa_b, pb_b = direct_sum(a.bottom, b.bottom)

    def block(f_a, f_b, src, tgt, tgt_incls):
        cols = []
        for hom, incl_t in ((f_a, tgt_incls[0]), (f_b, tgt_incls[1])):
            for j in range(hom.matrix.ncols):
                cols.append(incl_t(hom.matrix.column(j)))
        mat = IntMatrix.from_columns(cols, tgt.num_generators) if cols else IntMatrix.zeros(
            tgt.num_generators, 0
        )
        return AbHom(src, tgt, mat)

    tr = block(a.tr, b.tr, bot, top, (ia_t, ib_t))
    res = block(a.res, b.res, top, bot, (ia_b, ib_b))
    weyl = block(a.weyl, b.weyl, bot, bot, (ia_b, ib_b))
    s = MackeyFunctor(a.prime, top, bot, tr, res, weyl)
    incl_a = MackeyMap(a, s, ia_t, ia_b)
    incl_b = MackeyMap(b, s, ib_t, ib_b)
    return s, incl_a, incl_b


# ---------------------------------------------------------------------------
# subfunctors


@dataclass(frozen=True)
class Subfunctor:
    parent: MackeyFunctor
    functor: MackeyFunctor
    include: MackeyMap
    top_elements: frozenset  # canonical coordinates in the parent's finite model
    bottom_elements: frozenset

    def is_full(self):
        parent = self.parent
        tm = finite_model(parent.top)
        bm = finite_model(parent.bottom)
        return len(self.top_elements) == tm.order() and len(self.bottom_elements) == bm.order()

    def is_zero(self):
        return len(self.top_elements) == 1 and len(self.bottom_elements) == 1


def _stable_under(model, elements, hom_matrix, target_model, target_elements):
    for c in elements:
        vec = model.from_canonical(c)
        img = tuple(sum(m * v for m, v in zip(row, vec)) for row in hom_matrix.rows)
        if target_model.to_canonical(img) not in target_elements:
            return False
    return True


def enumerate_subfunctors(m: MackeyFunctor):
    """All subfunctors of a finite Mackey functor, in Hermite-key order.

    Pairs of subgroups closed under transfer, restriction and the action.
    """
    if not m.levels_finite():
        raise InfiniteGroup("subfunctor enumeration requires finite levels")
    tm = finite_model(m.top)
    bm = finite_model(m.bottom)
    top_subs = enumerate_subgroups(tm)
    bot_subs = enumerate_subgroups(bm)
    out = []
    for ts in top_subs:
        for bs in bot_subs:
            if not _stable_under(tm, ts, m.res.matrix, bm, bs):
                continue
            if not _stable_under(bm, bs, m.tr.matrix, tm, ts):
                continue
            if not _stable_under(bm, bs, m.weyl.matrix, bm, bs):
                continue
            out.append(_subfunctor_from_subgroups(m, tm, bm, ts, bs))
    out.sort(
        key=lambda s: (
            subgroup_key(tm, s.top_elements),
            subgroup_key(bm, s.bottom_elements),
        )
    )
    return out


def _subfunctor_from_subgroups(m, tm, bm, top_set, bot_set):
    s_top, incl_top = subgroup_presentation(tm, top_set)
    s_bot, incl_bot = subgroup_presentation(bm, bot_set)
    tr = factor_through_injection(m.tr.compose(incl_bot), incl_top)
    res = factor_through_injection(m.res.compose(incl_top), incl_bot)
    weyl = factor_through_injection(m.weyl.compose(incl_bot), incl_bot)
    sub = MackeyFunctor(m.prime, s_top, s_bot, tr, res, weyl)
    incl = MackeyMap(sub, m, incl_top, incl_bot)
    return Subfunctor(m, sub, incl, frozenset(top_set), frozenset(bot_set))


# ---------------------------------------------------------------------------
# chain complexes of Mackey functors


@dataclass
class MackeyChainComplex:
    """Objects indexed by degree; d maps degree n to degree n-1."""

    lower: int
    upper: int
    objects: dict
    differentials: dict  # degree n -> MackeyMap objects[n] -> objects[n-1]

    def validate(self):
        for n in range(self.lower + 2, self.upper + 1):
            comp = self.differentials[n - 1].compose(self.differentials[n])
            if not comp.is_zero():
                raise NotAComplex(f"d.d != 0 between degrees {n} and {n-2}")

    def object(self, n):
        p = next(iter(self.objects.values())).prime
        return self.objects.get(n, zero_mackey(p))


def _level_homology_data(d_out: AbHom, d_in: AbHom):
    """Presentation of ker(d_out)/im(d_in) plus the kernel inclusion.

    The homology presentation reuses the kernel's generators, so induced
    maps can be written on the same index set.
    """
    k_pres, incl = hom_kernel(d_out)
    lifted = factor_through_injection(d_in, incl)
    rels = k_pres.relations.vstack(lifted.matrix.transpose())
    h = FGAbPresentation(k_pres.num_generators, rels)
    return h, k_pres, incl


def homology_of_complex(c: MackeyChainComplex):
    """Degreewise homology with the induced transfer/restriction/action."""
    c.validate()
    out = {}
    for n in range(c.lower, c.upper + 1):
        obj = c.objects[n]
        p = obj.prime
        d_out = c.differentials.get(n)
        if d_out is None:
            d_out = zero_map(obj, zero_mackey(p))
        d_in = c.differentials.get(n + 1)
        if d_in is None:
            d_in = zero_map(zero_mackey(p), obj)

        h_top, _, incl_top = _level_homology_data(d_out.f_top, d_in.f_top)
        h_bot, _, incl_bot = _level_homology_data(d_out.f_bot, d_in.f_bot)

        def induced(level_map, incl_src, incl_tgt, h_src, h_tgt):
            lifted = factor_through_injection(level_map.compose(incl_src), incl_tgt)
            return AbHom(h_src, h_tgt, lifted.matrix)

        tr = induced(obj.tr, incl_bot, incl_top, h_bot, h_top)
        res = induced(obj.res, incl_top, incl_bot, h_top, h_bot)
        weyl = induced(obj.weyl, incl_bot, incl_bot, h_bot, h_bot)
        out[n] = MackeyFunctor(p, h_top, h_bot, tr, res, weyl)
    return out


def canonical_levels(m: MackeyFunctor):
    """((top free rank, top factors), (bottom free rank, bottom factors))."""
    return (m.top.canonical(), m.bottom.canonical())
