"""Representation-sphere degrees, graded functors, and window-bounded checks.

A degree over C_p records the multiplicity of the trivial representation
and the multiplicities of the nontrivial irreducibles (one sign summand
for p = 2, (p-1)/2 planar rotations otherwise).  Only the total dimension
and the fixed-point dimension feed the homotopy-group case formulas, but
full multiplicity vectors are kept so degrees add exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import InfiniteGroup, UnclassifiedField, WindowOverflow
from .exactlin import finite_model
from .green import (
    FieldShape,
    GreenFunctor,
    _bilinear_vec,
    ideal_generated_by,
    subgroup_is_full,
    subgroup_is_zero,
)
from .mackey import (
    MackeyFunctor,
    Subfunctor,
    enumerate_subfunctors,
    j_bottom,
    mackey_direct_sum,
    zero_mackey,
)


@dataclass(frozen=True)
class RODegree:
    prime: int
    a: int
    m: tuple

    def __post_init__(self):
        want = 1 if self.prime == 2 else (self.prime - 1) // 2
        if len(self.m) != want:
            raise ValueError(f"need {want} nontrivial multiplicities for p={self.prime}")

    def dim(self):
        if self.prime == 2:
            return self.a + self.m[0]
        return self.a + 2 * sum(self.m)

    def fixed_dim(self):
        return self.a

    def __add__(self, other):
        assert self.prime == other.prime
        return RODegree(self.prime, self.a + other.a, tuple(x + y for x, y in zip(self.m, other.m)))

    def __neg__(self):
        return RODegree(self.prime, -self.a, tuple(-x for x in self.m))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return RODegree(self.prime, k * self.a, tuple(k * x for x in self.m))

    def key(self):
        return f"{self.a}|" + ",".join(str(x) for x in self.m)

    @classmethod
    def from_key(cls, p, key):
        a_str, m_str = key.split("|")
        m = tuple(int(x) for x in m_str.split(",")) if m_str else ()
        return cls(p, int(a_str), m)

    @classmethod
    def zero(cls, p):
        return cls(p, 0, (0,) * (1 if p == 2 else (p - 1) // 2))

    @classmethod
    def regular(cls, p):
        """The regular representation: trivial summand plus all the rest."""
        return cls(p, 1, (1,) * (1 if p == 2 else (p - 1) // 2))

    @classmethod
    def sigma(cls):
        return cls(2, 0, (1,))

    def to_json(self):
        return {"a": self.a, "m": list(self.m)}


def rotating_sign(alpha: RODegree, beta: RODegree):
    """(sign at the fixed orbit, sign at the free orbit) for the factor swap.

    Koszul signs on the fixed-point and total dimensions respectively.
    """
    assert alpha.prime == beta.prime
    sign_top = -1 if (alpha.fixed_dim() * beta.fixed_dim()) % 2 else 1
    sign_bot = -1 if (alpha.dim() * beta.dim()) % 2 else 1
    return sign_top, sign_bot


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class BoxWindow:
    prime: int
    a_bound: int
    m_bound: int

    def degrees(self):
        k = 1 if self.prime == 2 else (self.prime - 1) // 2
        out = []
        for a in range(-self.a_bound, self.a_bound + 1):
            for m in iproduct(*(range(-self.m_bound, self.m_bound + 1) for _ in range(k))):
                out.append(RODegree(self.prime, a, m))
        return out

    def contains(self, deg):
        return abs(deg.a) <= self.a_bound and all(abs(x) <= self.m_bound for x in deg.m)

    def to_json(self):
        return {"kind": "box", "a": self.a_bound, "m": self.m_bound}


@dataclass(frozen=True)
class RhoLineWindow:
    """Multiples of the regular representation, 0 <= w <= w_max."""

    prime: int
    w_max: int

    def degrees(self):
        rho = RODegree.regular(self.prime)
        return [rho.scale(w) for w in range(self.w_max + 1)]

    def contains(self, deg):
        rho = RODegree.regular(self.prime)
        for w in range(self.w_max + 1):
            if rho.scale(w) == deg:
                return True
        return False

    def to_json(self):
        return {"kind": "rho_line", "w_max": self.w_max}


# ---------------------------------------------------------------------------
# homotopy of Eilenberg-Mac Lane spectra of Mackey fields


def em_homotopy(shape: FieldShape, alpha: RODegree) -> MackeyFunctor:
    """The case formulas for the graded homotopy of the associated
    Eilenberg-Mac Lane spectrum of a classified Mackey field."""
    if not isinstance(shape, FieldShape):
        raise UnclassifiedField("classify the field before looking up homotopy")
    p = shape.field.prime
    assert alpha.prime == p
    f = shape.field.underlying
    if shape.kind == "concentrated":
        return f if alpha.fixed_dim() == 0 else zero_mackey(p)
    if alpha.dim() != 0:
        return zero_mackey(p)
    if p != 2:
        return f
    k = alpha.a
    if k % 2 == 0:
        return f
    # odd antidiagonal degree: fixed points of the ring tensored with the
    # sign representation of the integers
    minus_gamma = shape.action.scale(-1)
    return j_bottom(2, shape.ring_presentation, minus_gamma)


@dataclass(frozen=True)
class GradedGreenTower:
    """A window of Mackey functors with a multiplication pairing per pair of
    degrees; the carrier for graded Green structure at desk scale."""

    prime: int
    pieces: dict  # RODegree -> MackeyFunctor (missing = zero)
    pairings: dict  # (RODegree, RODegree) -> BilinearPairing

    def piece(self, deg):
        return self.pieces.get(deg, zero_mackey(self.prime))

    def nonzero_degrees(self):
        return [d for d, m in self.pieces.items() if not m.is_zero()]


def em_tower(shape: FieldShape, window) -> GradedGreenTower:
    """Graded tower of homotopy functors with the induced multiplications.

    Only concentrated fields are supported; their multiplication is the
    same field pairing in every nonzero degree.
    """
    if shape.kind != "concentrated":
        raise UnclassifiedField("graded tower is implemented for concentrated fields")
    g = shape.field
    pieces = {}
    for deg in window.degrees():
        piece = em_homotopy(shape, deg)
        if not piece.is_zero():
            pieces[deg] = piece
    pairings = {}
    for d1 in pieces:
        for d2 in pieces:
            pairings[(d1, d2)] = g.mult
    return GradedGreenTower(g.prime, pieces, pairings)


def single_degree_tower(g: GreenFunctor) -> GradedGreenTower:
    """A Green functor viewed as a graded tower concentrated in degree zero."""
    zero = RODegree.zero(g.prime)
    return GradedGreenTower(g.prime, {zero: g.underlying}, {(zero, zero): g.mult})


@dataclass(frozen=True)
class PartialCertificate:
    window_partial: bool
    verdict: str  # "no_graded_ideal_in_window" or "witness"
    witness: dict | None
    note: str = ""

    def to_json(self):
        out = {
            "window_partial": self.window_partial,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


MAX_GRADED_COMBINATIONS = 1_000_000


def graded_field_window_check(tower: GradedGreenTower, window) -> PartialCertificate:
    """Search for a proper nonzero graded ideal supported in the window.

    Exhaustive over graded subfunctors when all pieces are finite.  A piece
    with infinite level falls back to a deterministic generated-ideal probe
    (transfers of generators first); the probe can only produce witnesses,
    never a certificate.
    """
    degrees = [d for d in window.degrees() if d in tower.pieces]
    if not degrees:
        raise ValueError("tower has no nonzero pieces in the window")
    infinite = [d for d in degrees if not tower.pieces[d].levels_finite()]
    if infinite:
        return _witness_probe(tower, degrees)

    lattices = {d: enumerate_subfunctors(tower.pieces[d]) for d in degrees}
    total = 1
    for d in degrees:
        total *= len(lattices[d])
        if total > MAX_GRADED_COMBINATIONS:
            raise WindowOverflow("graded subfunctor lattice too large for the window")

    in_window = {}
    for d1 in degrees:
        for d2 in degrees:
            s = d1 + d2
            if s in tower.pieces and window.contains(s):
                in_window[(d1, d2)] = s

    for combo in iproduct(*(range(len(lattices[d])) for d in degrees)):
        choice = {d: lattices[d][i] for d, i in zip(degrees, combo)}
        if all(s.is_zero() for s in choice.values()):
            continue
        if all(s.is_full() for s in choice.values()):
            continue
        if _graded_choice_is_ideal(tower, choice, in_window):
            witness = {
                d.key(): {
                    "top": sorted(list(c) for c in choice[d].top_elements),
                    "bottom": sorted(list(c) for c in choice[d].bottom_elements),
                }
                for d in degrees
            }
            return PartialCertificate(True, "witness", witness)
    return PartialCertificate(True, "no_graded_ideal_in_window", None)


def _graded_choice_is_ideal(tower, choice, in_window):
    for (d1, d2), s in in_window.items():
        pairing = tower.pairings[(d1, d2)]
        ring_piece = tower.pieces[d1]
        sub = choice[d2]
        target_sub = choice[s]
        if not _action_lands_in(ring_piece, pairing, sub, target_sub):
            return False
    return True


def _action_lands_in(ring_piece, pairing, sub: Subfunctor, target: Subfunctor):
    from .exactlin import solve_membership

    tm = finite_model(ring_piece.top)
    bm = finite_model(ring_piece.bottom)
    sub_tm = finite_model(sub.parent.top)
    sub_bm = finite_model(sub.parent.bottom)
    for r in tm.elements():
        rv = tm.from_canonical(r)
        for s in sorted(sub.top_elements):
            sv = sub_tm.from_canonical(s)
            prod = _bilinear_vec(pairing.f_top.matrix, rv, sv)
            if solve_membership(target.parent.top, target.include.f_top.matrix, prod) is None:
                return False
    for r in bm.elements():
        rv = bm.from_canonical(r)
        for s in sorted(sub.bottom_elements):
            sv = sub_bm.from_canonical(s)
            prod = _bilinear_vec(pairing.f_bot.matrix, rv, sv)
            if solve_membership(target.parent.bottom, target.include.f_bot.matrix, prod) is None:
                return False
    return True


def _witness_probe(tower: GradedGreenTower, degrees):
    """Generated-ideal search for towers with infinite levels.

    Only meaningful for a single-degree window, where a graded ideal is an
    ordinary one; candidates are transfers of bottom generators and then
    single generators of each level.
    """
    if len(degrees) != 1:
        raise InfiniteGroup("infinite pieces admit only the degree-zero witness probe")
    deg = degrees[0]
    piece = tower.pieces[deg]
    pairing = tower.pairings[(deg, deg)]
    candidates = []
    for j in range(piece.bottom.num_generators):
        e = tuple(1 if k == j else 0 for k in range(piece.bottom.num_generators))
        candidates.append(("top", piece.tr(e)))
    for i in range(piece.top.num_generators):
        candidates.append(("top", tuple(1 if k == i else 0 for k in range(piece.top.num_generators))))
    for level, vec in candidates:
        top_rows, bot_rows = ideal_generated_by(piece, pairing, level, vec)
        top_zero = subgroup_is_zero(piece.top, top_rows)
        bot_zero = subgroup_is_zero(piece.bottom, bot_rows)
        if top_zero and bot_zero:
            continue
        if subgroup_is_full(piece.top, top_rows) and subgroup_is_full(piece.bottom, bot_rows):
            continue
        return PartialCertificate(
            True,
            "witness",
            {deg.key(): {"top_generators": [list(r) for r in top_rows],
                         "bottom_generators": [list(r) for r in bot_rows]}},
            note="witness_search_only; infinite levels prevent exhaustive enumeration",
        )
    raise InfiniteGroup("no witness found; cannot certify with infinite levels")


# ---------------------------------------------------------------------------
# graded Mackey functors and the graded box product


@dataclass(frozen=True)
class GradedMackey:
    """Finitely supported graded Mackey functor; keys are RODegree or int."""

    prime: int
    pieces: dict

    def piece(self, deg):
        return self.pieces.get(deg, zero_mackey(self.prime))

    def support(self):
        return [d for d, m in self.pieces.items() if not m.is_zero()]


MAX_GRADED_PIECES = 4096


def graded_box(a: GradedMackey, b: GradedMackey, out_window=None, limit=None) -> GradedMackey:
    """Degreewise box product: piece at n is the sum over k + l = n."""
    from .boxtensor import box

    assert a.prime == b.prime
    sums = {}
    for d1 in a.support():
        for d2 in b.support():
            s = d1 + d2
            if out_window is not None and not out_window.contains(s):
                continue
            sums.setdefault(s, []).append((d1, d2))
    if len(sums) > MAX_GRADED_PIECES:
        raise WindowOverflow(f"graded product support has {len(sums)} degrees")
    pieces = {}
    for s, pairs in sums.items():
        parts = [box(a.pieces[d1], b.pieces[d2], limit=limit).result for d1, d2 in pairs]
        total = parts[0]
        for nxt in parts[1:]:
            total, _, _ = mackey_direct_sum(total, nxt)
        pieces[s] = total
    return GradedMackey(a.prime, pieces)
