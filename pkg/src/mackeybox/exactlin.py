"""Finitely generated abelian groups as presentations, and exact maps.

A group is Z^n modulo the row span of an integer relations matrix.  All
operations (kernels, cokernels, images, tensor products, quotients,
membership) are exact; canonical forms are (free rank, invariant factors)
computed by Smith normal form.  Presentations are never silently minimized:
generator labels survive every construction so that permutation and
rotation maps defined on labels stay meaningful downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

from .errors import IllFormedHom, InfiniteGroup
from .intlinalg import (
    IntMatrix,
    hermite_row_basis,
    kernel_basis,
    smith_normal_form,
    solve,
    unimodular_inverse,
)


@dataclass(frozen=True)
class FGAbPresentation:
    """Z^num_generators modulo the row span of ``relations``."""

    num_generators: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.ncols != self.num_generators:
            raise ValueError(
                f"relations have {self.relations.ncols} columns, expected {self.num_generators}"
            )

    # -- canonical form -------------------------------------------------
    def canonical(self):
        """(free_rank, invariant_factors) with factors > 1 in divisibility order."""
        return _canonical(self)

    @property
    def free_rank(self):
        return self.canonical()[0]

    @property
    def invariant_factors(self):
        return self.canonical()[1]

    def is_zero_group(self):
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self):
        return self.free_rank == 0

    def order(self):
        if not self.is_finite():
            raise InfiniteGroup("group has positive free rank")
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    # -- membership in the relation span ---------------------------------
    def reduces_to_zero(self, vec):
        """True when ``vec`` lies in the integer span of the relations."""
        if len(vec) != self.num_generators:
            raise ValueError("vector length mismatch")
        return solve(self.relations.transpose(), tuple(vec)) is not None

    def solver(self):
        return self.reduces_to_zero

    def element_is_zero(self, vec):
        return self.reduces_to_zero(vec)

    def to_json(self):
        return {"generators": self.num_generators, "relations": self.relations.to_lists()}


@lru_cache(maxsize=None)
def _canonical(pres: FGAbPresentation):
    _, d, _ = smith_normal_form(pres.relations)
    diag = [d.rows[i][i] for i in range(min(d.nrows, d.ncols))]
    nonzero = [x for x in diag if x != 0]
    inv = tuple(x for x in nonzero if x != 1)
    return (pres.num_generators - len(nonzero), inv)


def free_group(n):
    return FGAbPresentation(n, IntMatrix.zeros(0, n))


def cyclic_group(n):
    """Z if n == 0, else Z/n, on one generator."""
    if n == 0:
        return free_group(1)
    return FGAbPresentation(1, IntMatrix([[n]]))


def zero_group():
    return FGAbPresentation(0, IntMatrix.zeros(0, 0))


@dataclass(frozen=True)
class AbHom:
    """Map of presented groups; matrix rows index target generators."""

    source: FGAbPresentation
    target: FGAbPresentation
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.ncols != self.source.num_generators:
            raise ValueError("matrix columns != source generators")
        if self.matrix.nrows != self.target.num_generators:
            raise ValueError("matrix rows != target generators")
        for rel in self.source.relations.rows:
            img = _apply(self.matrix, rel)
            if not self.target.reduces_to_zero(img):
                raise IllFormedHom(
                    f"source relation {list(rel)} maps to {list(img)} outside target relations"
                )

    def __call__(self, vec):
        return _apply(self.matrix, vec)

    def compose(self, other: "AbHom") -> "AbHom":
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        _same_ends(self, other)
        return AbHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        _same_ends(self, other)
        return AbHom(self.source, self.target, self.matrix - other.matrix)

    def scale(self, k):
        return AbHom(self.source, self.target, self.matrix.scale(k))

    def power(self, e):
        if self.source != self.target:
            raise ValueError("power of non-endomorphism")
        return AbHom(self.source, self.target, self.matrix.power(e))

    def equals(self, other: "AbHom") -> bool:
        """Equality up to target relations, columnwise."""
        _same_ends(self, other)
        diff = self.matrix - other.matrix
        return all(self.target.reduces_to_zero(diff.column(j)) for j in range(diff.ncols))

    def is_zero(self):
        return all(
            self.target.reduces_to_zero(self.matrix.column(j)) for j in range(self.matrix.ncols)
        )

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": self.matrix.to_lists(),
        }


def _apply(matrix, vec):
    return tuple(sum(m * v for m, v in zip(row, vec)) for row in matrix.rows)


def _same_ends(f, g):
    if f.source != g.source or f.target != g.target:
        raise ValueError("homs have different endpoints")


def identity_hom(pres):
    return AbHom(pres, pres, IntMatrix.identity(pres.num_generators))


def zero_hom(source, target):
    return AbHom(source, target, IntMatrix.zeros(target.num_generators, source.num_generators))


# ---------------------------------------------------------------------------
# kernels, cokernels, images, quotients


def present_quotient(generators: IntMatrix, killed: IntMatrix):
    """Present (span of generator columns)/(span of killed columns).

    Both arguments are matrices whose columns live in the same Z^n; the span
    of ``killed`` must be contained in the span of ``generators``.  Returns
    the presentation on one generator per column of ``generators``; its
    relations are every way a combination of those columns lands in the
    killed span.
    """
    if generators.nrows != killed.nrows:
        raise ValueError("ambient rank mismatch")
    t = generators.ncols
    stacked = generators.hstack(killed.scale(-1)) if killed.ncols else generators
    rel_rows = []
    for vec in kernel_basis(stacked):
        rel_rows.append(vec[:t])
    rels = IntMatrix(rel_rows, t) if rel_rows else IntMatrix.zeros(0, t)
    return FGAbPresentation(t, rels)


def hom_kernel(f: AbHom):
    """(K, incl) with incl: K -> source injective onto ker f."""
    src, tgt = f.source, f.target
    tr = tgt.relations.transpose()  # columns span the target relation subgroup
    stacked = f.matrix.hstack(tr) if tr.ncols else f.matrix
    gen_cols = []
    n = src.num_generators
    for vec in kernel_basis(stacked):
        gen_cols.append(vec[:n])
    gens = IntMatrix.from_columns(gen_cols, n) if gen_cols else IntMatrix.zeros(n, 0)
    k_pres = present_quotient(gens, src.relations.transpose())
    incl = AbHom(k_pres, src, gens)
    return k_pres, incl


def hom_cokernel(f: AbHom):
    """(C, proj) with proj: target -> C the quotient by im f."""
    tgt = f.target
    extra = f.matrix.transpose()
    rels = tgt.relations.vstack(extra) if extra.nrows else tgt.relations
    c_pres = FGAbPresentation(tgt.num_generators, rels)
    proj = AbHom(tgt, c_pres, IntMatrix.identity(tgt.num_generators))
    return c_pres, proj


def hom_image(f: AbHom):
    """(I, incl, proj) with incl: I -> target, proj: source ->> I."""
    tgt = f.target
    i_pres = present_quotient(f.matrix, tgt.relations.transpose())
    incl = AbHom(i_pres, tgt, f.matrix)
    proj = AbHom(f.source, i_pres, IntMatrix.identity(f.source.num_generators))
    return i_pres, incl, proj


def quotient_by_subgroup(pres: FGAbPresentation, element_rows):
    """Quotient by the subgroup generated by the given element vectors."""
    extra = IntMatrix(element_rows, pres.num_generators) if element_rows else IntMatrix.zeros(
        0, pres.num_generators
    )
    q = FGAbPresentation(pres.num_generators, pres.relations.vstack(extra))
    proj = AbHom(pres, q, IntMatrix.identity(pres.num_generators))
    return q, proj


def solve_membership(pres: FGAbPresentation, generator_cols: IntMatrix, vec):
    """Coefficients expressing ``vec`` in the given generators modulo relations.

    Returns a tuple of length generator_cols.ncols or None.
    """
    tr = pres.relations.transpose()
    stacked = generator_cols.hstack(tr) if tr.ncols else generator_cols
    sol = solve(stacked, tuple(vec))
    if sol is None:
        return None
    return sol[: generator_cols.ncols]


def factor_through_injection(f: AbHom, incl: AbHom) -> AbHom:
    """g with incl . g == f, for incl injective; errors if f misses the image."""
    if incl.target != f.target:
        raise ValueError("codomain mismatch")
    cols = []
    for j in range(f.matrix.ncols):
        c = solve_membership(f.target, incl.matrix, f.matrix.column(j))
        if c is None:
            raise IllFormedHom("map does not factor through the inclusion")
        cols.append(c)
    mat = IntMatrix.from_columns(cols, incl.source.num_generators)
    return AbHom(f.source, incl.source, mat)


def direct_sum(a: FGAbPresentation, b: FGAbPresentation):
    """(S, incl_a, incl_b, proj_a, proj_b) block presentation."""
    na, nb = a.num_generators, b.num_generators
    top = a.relations.hstack(IntMatrix.zeros(a.relations.nrows, nb))
    bot = IntMatrix.zeros(b.relations.nrows, na).hstack(b.relations)
    s = FGAbPresentation(na + nb, top.vstack(bot))
    ia = AbHom(a, s, IntMatrix.identity(na).vstack(IntMatrix.zeros(nb, na)))
    ib = AbHom(b, s, IntMatrix.zeros(na, nb).vstack(IntMatrix.identity(nb)))
    pa = AbHom(s, a, IntMatrix.identity(na).hstack(IntMatrix.zeros(na, nb)))
    pb = AbHom(s, b, IntMatrix.zeros(nb, na).hstack(IntMatrix.identity(nb)))
    return s, ia, ib, pa, pb


class TensorIndex:
    """Bijection between generator pairs (i, j) and generators of A (x) B."""

    def __init__(self, n_left, n_right):
        self.n_left = n_left
        self.n_right = n_right

    def __call__(self, i, j):
        return i * self.n_right + j

    def unpack(self, k):
        return divmod(k, self.n_right)

    def size(self):
        return self.n_left * self.n_right


def tensor(a: FGAbPresentation, b: FGAbPresentation):
    """(T, index) presenting A (x) B on generator pairs."""
    na, nb = a.num_generators, b.num_generators
    idx = TensorIndex(na, nb)
    rows = []
    for rel in a.relations.rows:
        for j in range(nb):
            row = [0] * (na * nb)
            for i in range(na):
                row[idx(i, j)] = rel[i]
            rows.append(row)
    for rel in b.relations.rows:
        for i in range(na):
            row = [0] * (na * nb)
            for j in range(nb):
                row[idx(i, j)] = rel[j]
            rows.append(row)
    t = FGAbPresentation(na * nb, IntMatrix(rows, na * nb) if rows else IntMatrix.zeros(0, na * nb))
    return t, idx


def vector_tensor(x, y):
    """Coordinates of x (x) y under the TensorIndex convention."""
    return tuple(a * b for a in x for b in y)


# ---------------------------------------------------------------------------
# finite models: element enumeration and subgroup lattices


@dataclass
class FiniteModel:
    """Coordinates for a finite presented group.

    ``to_canonical`` maps a generator-coordinate vector to its tuple of
    residues in the cyclic decomposition; ``from_canonical`` lifts back.
    """

    pres: FGAbPresentation
    moduli: tuple  # invariant factors including 1s, aligned with coordinates
    u: IntMatrix  # generator coords -> decomposition coords
    u_inv: IntMatrix

    def to_canonical(self, vec):
        raw = _apply(self.u, vec)
        return tuple(x % d for x, d in zip(raw, self.moduli))

    def from_canonical(self, coords):
        return _apply(self.u_inv, coords)

    def elements(self):
        return [tuple(t) for t in product(*(range(d) for d in self.moduli))]

    def add(self, c1, c2):
        return tuple((a + b) % d for a, b, d in zip(c1, c2, self.moduli))

    def neg(self, c):
        return tuple((-a) % d for a, d in zip(c, self.moduli))

    def zero(self):
        return (0,) * len(self.moduli)

    def order(self):
        n = 1
        for d in self.moduli:
            n *= d
        return n


def finite_model(pres: FGAbPresentation) -> FiniteModel:
    if not pres.is_finite():
        raise InfiniteGroup("cannot enumerate an infinite group")
    n = pres.num_generators
    a = pres.relations.transpose()  # n x r, columns span relations
    u, d, _ = smith_normal_form(a)
    k = min(d.nrows, d.ncols)
    moduli = []
    for i in range(n):
        di = d.rows[i][i] if i < k else 0
        moduli.append(abs(di))
    # finiteness means no zero survives on the diagonal
    assert all(m != 0 for m in moduli)
    return FiniteModel(pres, tuple(moduli), u, unimodular_inverse(u))


def _closure(model: FiniteModel, gens):
    seen = {model.zero()}
    frontier = [model.zero()]
    gens = [g for g in gens]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = model.add(cur, g)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def subgroup_key(model: FiniteModel, elements):
    """Deterministic Hermite-form key for a subgroup given by canonical coords."""
    rows = [model.from_canonical(c) for c in sorted(elements)]
    rows.extend(model.pres.relations.rows)
    return hermite_row_basis(rows, model.pres.num_generators)


def enumerate_subgroups(model: FiniteModel):
    """All subgroups as frozensets of canonical coordinates, Hermite-sorted."""
    elems = model.elements()
    max_gens = max(1, sum(1 for d in model.moduli if d > 1))
    found = {}
    seen_gensets = set()
    for k in range(0, max_gens + 1):
        for combo in combinations(elems, k):
            key = frozenset(combo)
            if key in seen_gensets:
                continue
            seen_gensets.add(key)
            sub = _closure(model, combo)
            hkey = subgroup_key(model, sub)
            found.setdefault(hkey, sub)
    return [found[k] for k in sorted(found)]


def subgroup_presentation(model: FiniteModel, elements):
    """(P, incl) presenting the subgroup spanned by the given elements."""
    gens = sorted(elements)
    cols = [model.from_canonical(c) for c in gens]
    mat = (
        IntMatrix.from_columns(cols, model.pres.num_generators)
        if cols
        else IntMatrix.zeros(model.pres.num_generators, 0)
    )
    pres = present_quotient(mat, model.pres.relations.transpose())
    incl = AbHom(pres, model.pres, mat)
    return pres, incl
