"""Spectral-page engine for filtered complexes.

Everything here rests on one canonical-form computation: a change of basis
that turns the differential into a disjoint union of elementary "dipoles"
(one source generator mapping to one target generator) plus untouched free
generators.  The algorithm is a column reduction over the processing order
"descending degree, then ascending id": each column is reduced against
previously claimed pivot columns at its *low* entry (the latest entry in the
processing order, i.e. the one of minimal degree, largest id on ties), and a
nonzero reduced column claims its low as a pivot.  Because the differential
squares to zero, an index claimed as a pivot target always has a zero reduced
column of its own, so sources, targets and free generators partition the
basis (checked defensively at run time).

From the canonical form all spectral pages are read off by counting: a free
generator survives every page, a dipole of jump index ``k`` keeps both
endpoints alive on pages ``1..k`` (the page-``k`` differential sends source
slot to target slot) and dies entering page ``k+1``.

Two independent cross-check routes are provided and kept deliberately
separate from the reduction: a literal subquotient evaluation of any page,
and the limit computed from the image filtration on ordinary cohomology.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Mapping

from .gf2 import (
    Gf2Matrix,
    Gf2Subspace,
    apply_columns,
    bits,
    image_basis,
    invert_columns,
    kernel_basis,
    subspace_intersection,
    subspace_sum,
)
from .model import (
    EngineConsistencyError,
    FloerComplexData,
    _local_matrix,
    _expand,
    periodic_cohomology,
    require_valid,
)

__all__ = [
    "CanonicalForm",
    "PageCell",
    "PageTable",
    "LimitReport",
    "canonical_form",
    "pages",
    "collapse_page",
    "subquotient_pages_oracle",
    "limit_and_filtration",
]


@dataclass(frozen=True)
class CanonicalForm:
    """Result of the column reduction.

    ``dipoles`` are (source_index, target_index) pairs; ``free`` the indices
    of generators whose canonical basis vector is closed and never hit.
    ``change_of_basis`` holds one ambient bitset column per generator index
    (the canonical basis vector for that slot); ``inverse`` its inverse.
    Conjugating the differential by the change of basis gives exactly the
    dipole arrows and nothing else.
    """

    complex: FloerComplexData
    dipoles: tuple[tuple[int, int], ...]
    free: tuple[int, ...]
    change_of_basis: tuple[int, ...]
    inverse: tuple[int, ...]

    def jump_of(self, pair: tuple[int, int]) -> int:
        src, dst = pair
        gens = self.complex.generators
        return (gens[dst].degree - gens[src].degree - 1) // self.complex.params.maslov_period

    def dipole_uids(self) -> tuple[tuple[str, str, int], ...]:
        """Dipoles as (source_id, target_id, jump_index), in canonical order."""
        gens = self.complex.generators
        return tuple(
            (gens[s].uid, gens[t].uid, self.jump_of((s, t))) for s, t in self.dipoles
        )

    def free_uids(self) -> tuple[str, ...]:
        return tuple(self.complex.generators[i].uid for i in self.free)

    def to_canonical(self, v: int) -> int:
        """Coordinates of an ambient vector in the canonical slot basis."""
        return apply_columns(list(self.inverse), v)

    def from_canonical(self, v: int) -> int:
        """Ambient vector of a canonical-coordinate bitset."""
        return apply_columns(list(self.change_of_basis), v)


@dataclass(frozen=True)
class PageCell:
    """One nonzero spot of a spectral page.

    ``dim`` is its dimension, ``slots`` the canonical slot indices alive
    there, ``representatives`` one ambient cocycle-level vector per slot (the
    canonical basis vectors, which represent a basis of the cell).
    """

    dim: int
    slots: tuple[int, ...]
    representatives: tuple[int, ...]


@dataclass(frozen=True)
class PageTable:
    """All materialized spectral pages of a complex.

    ``cells`` maps (page, level, residue) to a nonzero cell; ``differentials``
    maps a *source* cell key (k, n, j) to the page-k differential matrix into
    the cell at (k, n + k*period + 1, (j + 1) % period) -- rows indexed by the
    target cell's slots, columns by the source cell's slots; only nonzero
    matrices are stored.  Pages k = 1 .. ``max_page`` are materialized;
    ``collapse_page`` is the first page equal to the limit.
    """

    complex: FloerComplexData
    form: CanonicalForm
    collapse_page: int
    max_page: int
    cells: Mapping[tuple[int, int, int], PageCell]
    differentials: Mapping[tuple[int, int, int], Gf2Matrix]

    def dim(self, k: int, n: int) -> int:
        j = self.complex.params.residue(n)
        cell = self.cells.get((k, n, j))
        return cell.dim if cell else 0

    def page(self, k: int) -> dict[tuple[int, int], int]:
        """Nonzero dimensions of page k as {(level, residue): dim}."""
        if not 1 <= k <= self.max_page:
            raise ValueError(
                f"page {k} is not materialized (pages 1..{self.max_page} are)"
            )
        return {(n, j): c.dim for (kk, n, j), c in self.cells.items() if kk == k}

    def differential(self, k: int, n: int) -> Gf2Matrix | None:
        j = self.complex.params.residue(n)
        return self.differentials.get((k, n, j))


@dataclass(frozen=True)
class LimitReport:
    """Limit data computed from ordinary cohomology and its image filtration.

    ``hf_dims`` maps residue -> dim of the periodic cohomology;
    ``filtration_dims`` maps (level, residue) -> dim of the image of the
    level-n subcomplex's cohomology classes (nonzero entries only, levels
    within the generator degree range extended one period below);
    ``einf_dims`` maps (level, residue) -> the filtration quotient dimension,
    which equals the stable page of the spectral sequence.
    """

    hf_dims: tuple[tuple[int, int], ...]
    filtration_dims: tuple[tuple[tuple[int, int], int], ...]
    einf_dims: tuple[tuple[tuple[int, int], int], ...]

    def hf(self) -> dict[int, int]:
        return dict(self.hf_dims)

    def filtration(self) -> dict[tuple[int, int], int]:
        return dict(self.filtration_dims)

    def einf(self) -> dict[tuple[int, int], int]:
        return dict(self.einf_dims)


@functools.lru_cache(maxsize=None)
def canonical_form(c: FloerComplexData) -> CanonicalForm:
    """Reduce the differential to disjoint dipoles by a filtered change of basis.

    The change of basis is filtration- and residue-compatible: each canonical
    basis vector equals its slot's generator plus generators of the same
    residue that come strictly earlier in the processing order (same degree
    with smaller id, or strictly higher degree).
    """
    require_valid(c)
    n = c.count
    gens = c.generators
    cols = c.delta_columns()

    # Processing order: descending degree, ascending id inside a degree.
    # Generators are canonically sorted ascending, so reversing degree blocks
    # while keeping in-block order is exactly sorting by (-degree, uid).
    order = sorted(range(n), key=lambda i: (-gens[i].degree, gens[i].uid))
    rank = [0] * n
    for pos, i in enumerate(order):
        rank[i] = pos

    def low(col: int) -> int:
        """The entry latest in the processing order: minimal degree, then largest id."""
        return max(bits(col), key=lambda b: rank[b])

    reduced: dict[int, int] = {}  # paired source -> reduced delta column
    chain: dict[int, int] = {}  # generator -> accumulated basis vector
    owner: dict[int, int] = {}  # pivot target -> owning source
    pairs: list[tuple[int, int]] = []
    raw_zero: list[int] = []

    for g in order:
        col = cols[g]
        v = 1 << g
        while col:
            lo = low(col)
            own = owner.get(lo)
            if own is None:
                break
            col ^= reduced[own]
            v ^= chain[own]
        chain[g] = v
        if col:
            reduced[g] = col
            owner[low(col)] = g
            pairs.append((g, low(col)))
        else:
            raw_zero.append(g)

    # Role exclusivity: the differential squares to zero, so a claimed pivot
    # target must itself have reduced to the zero column earlier.
    sources = set(reduced)
    targets = set(owner)
    if sources & targets or not targets <= set(raw_zero):
        raise EngineConsistencyError(
            "canonical reduction assigned a generator two roles; "
            "this indicates a bug in the reduction"
        )
    free = tuple(sorted(i for i in raw_zero if i not in targets))
    dipoles = tuple(sorted(pairs))

    basis = [0] * n
    for s, t in dipoles:
        basis[s] = chain[s]
        basis[t] = reduced[s]
    for f in free:
        basis[f] = chain[f]
    try:
        inverse = invert_columns(basis)
    except ValueError as exc:
        raise EngineConsistencyError(
            "canonical change of basis is singular; this indicates a bug"
        ) from exc

    # Self-check: the conjugated differential is exactly the dipole arrows.
    for s, t in dipoles:
        if apply_columns(cols, basis[s]) != basis[t]:
            raise EngineConsistencyError(
                "canonical form self-check failed on a dipole column"
            )
        if apply_columns(cols, basis[t]) != 0:
            raise EngineConsistencyError(
                "canonical form self-check failed: target slot is not closed"
            )
    for f in free:
        if apply_columns(cols, basis[f]) != 0:
            raise EngineConsistencyError(
                "canonical form self-check failed: free slot is not closed"
            )

    return CanonicalForm(c, dipoles, free, tuple(basis), tuple(inverse))


def collapse_page(c: FloerComplexData) -> int:
    """First page equal to the limit: 1 + the maximal dipole jump index (1 if none)."""
    form = canonical_form(c)
    return 1 + max((form.jump_of(p) for p in form.dipoles), default=0)


def pages(c: FloerComplexData, upto: int | None = None) -> PageTable:
    """Materialize spectral pages 1..upto (default: collapse page + 1).

    Cell (k, n, j) collects the canonical slots alive on page k at lifted
    degree n: every free slot there, plus both endpoints of every dipole of
    jump index >= k.  The page-k differential is the 0/1 matrix of dipoles of
    jump exactly k between the corresponding cells.
    """
    form = canonical_form(c)
    params = c.params
    gens = c.generators
    collapse = 1 + max((form.jump_of(p) for p in form.dipoles), default=0)
    max_page = collapse + 1 if upto is None else max(1, upto)

    jump: dict[tuple[int, int], int] = {p: form.jump_of(p) for p in form.dipoles}
    cells: dict[tuple[int, int, int], PageCell] = {}
    diffs: dict[tuple[int, int, int], Gf2Matrix] = {}

    for k in range(1, max_page + 1):
        slots_at: dict[int, list[int]] = {}
        for f in form.free:
            slots_at.setdefault(gens[f].degree, []).append(f)
        for (s, t), kk in jump.items():
            if kk >= k:
                slots_at.setdefault(gens[s].degree, []).append(s)
                slots_at.setdefault(gens[t].degree, []).append(t)
        for n, slots in slots_at.items():
            slots.sort()
            cells[(k, n, params.residue(n))] = PageCell(
                len(slots),
                tuple(slots),
                tuple(form.change_of_basis[i] for i in slots),
            )
        # Page-k differential: dipoles of jump exactly k.
        arrows: dict[int, list[tuple[int, int]]] = {}
        for (s, t), kk in jump.items():
            if kk == k:
                arrows.setdefault(gens[s].degree, []).append((s, t))
        for n, pairs in arrows.items():
            src_key = (k, n, params.residue(n))
            dst_key = (k, n + k * params.maslov_period + 1,
                       params.residue(n + 1))
            src_pos = {i: p for p, i in enumerate(cells[src_key].slots)}
            dst_pos = {i: p for p, i in enumerate(cells[dst_key].slots)}
            entries = [(dst_pos[t], src_pos[s]) for s, t in pairs]
            diffs[src_key] = Gf2Matrix.from_entries(
                cells[dst_key].dim, cells[src_key].dim, entries
            )

    return PageTable(c, form, collapse, max_page, cells, diffs)


def _filtration_indices(c: FloerComplexData, n: int, j: int | None = None) -> list[int]:
    """Ascending indices of generators of degree >= n (and residue j if given)."""
    return [
        i
        for i, g in enumerate(c.generators)
        if g.degree >= n and (j is None or c.params.residue(g.degree) == j)
    ]


def _z_space(c: FloerComplexData, cols: list[int], n: int, j: int, k: int) -> Gf2Subspace:
    """The subspace of residue-j vectors at filtration level >= n whose
    differential lands at level >= n + k*period + 1 (ambient coordinates)."""
    src = _filtration_indices(c, n, j)
    if not src:
        return Gf2Subspace.zero(c.count)
    cutoff = n + k * c.params.maslov_period + 1
    dst = [i for i, g in enumerate(c.generators) if g.degree < cutoff]
    ker = kernel_basis(_local_matrix(cols, src, dst))
    return Gf2Subspace.from_vectors(c.count, [_expand(v, src) for v in ker.basis])


def _delta_span(c: FloerComplexData, cols: list[int], space: Gf2Subspace) -> Gf2Subspace:
    return Gf2Subspace.from_vectors(
        c.count, [apply_columns(cols, v) for v in space.basis]
    )


def subquotient_pages_oracle(c: FloerComplexData, k: int) -> dict[tuple[int, int], int]:
    """Literal subquotient evaluation of page k; independent of the reduction.

    The cell at (n, j) is Z / (B + dZ') where Z collects level->=n vectors
    whose differential jumps at least k periods past the next level, B the
    deeper-level vectors of the previous page's kind still inside Z, and dZ'
    the differentials of the previous page's kind arriving at level n.
    Returns nonzero dimensions only.
    """
    require_valid(c)
    if k < 1:
        raise ValueError("pages are indexed from 1")
    period = c.params.maslov_period
    cols = c.delta_columns()
    degrees = [g.degree for g in c.generators]
    if not degrees:
        return {}
    out: dict[tuple[int, int], int] = {}
    for n in range(min(degrees), max(degrees) + 1):
        j = c.params.residue(n)
        z_top = _z_space(c, cols, n, j, k)
        if z_top.dim == 0:
            continue
        # The intersection with the numerator is computed literally even
        # though containment always holds on validated complexes.
        deeper = subspace_intersection(_z_space(c, cols, n + period, j, k - 1), z_top)
        arriving = _z_space(c, cols, n - (k - 1) * period - 1, (j - 1) % period, k - 1)
        denom = subspace_sum(deeper, _delta_span(c, cols, arriving))
        dim = z_top.dim - denom.dim
        if not z_top.contains_space(denom):
            raise EngineConsistencyError(
                "subquotient denominator escaped its numerator; "
                "this indicates a bug in the oracle"
            )
        if dim:
            out[(n, j)] = dim
    return out


def limit_and_filtration(c: FloerComplexData) -> LimitReport:
    """Limit page from the image filtration on ordinary periodic cohomology.

    The level-n filtration of the residue-j cohomology is the image of the
    classes representable at filtration level >= n; the limit-page dimension
    at (n, j) is the drop between level n and level n + period.  This route
    never touches the canonical reduction.
    """
    require_valid(c)
    period = c.params.maslov_period
    cols = c.delta_columns()
    hf = periodic_cohomology(c)

    degrees = [g.degree for g in c.generators]
    if not degrees:
        return LimitReport(tuple(hf.dims), (), ())
    lo, hi = min(degrees), max(degrees)

    # dim F_n HF^j = dim((ker delta cap F_n cap C_j) + im_j) - dim(im_j)
    filt: dict[tuple[int, int], int] = {}
    for j in range(period):
        here = [i for i, g in enumerate(c.generators) if c.params.residue(g.degree) == j]
        prev = [i for i, g in enumerate(c.generators) if c.params.residue(g.degree) == (j - 1) % period]
        nxt = [i for i, g in enumerate(c.generators) if c.params.residue(g.degree) == (j + 1) % period]
        img = Gf2Subspace.from_vectors(
            c.count,
            [_expand(v, here) for v in image_basis(_local_matrix(cols, prev, here)).basis],
        )
        for n in range(lo, hi + period + 1):
            if c.params.residue(n) != j:
                continue
            sub = [i for i in here if c.generators[i].degree >= n]
            ker = kernel_basis(_local_matrix(cols, sub, nxt))
            ker_amb = Gf2Subspace.from_vectors(
                c.count, [_expand(v, sub) for v in ker.basis]
            )
            d = subspace_sum(ker_amb, img).dim - img.dim
            if d:
                filt[(n, j)] = d

    einf: dict[tuple[int, int], int] = {}
    for (n, j), d in filt.items():
        drop = d - filt.get((n + period, j), 0)
        if drop:
            einf[(n, j)] = drop

    return LimitReport(
        tuple(hf.dims),
        tuple(sorted(filt.items())),
        tuple(sorted(einf.items())),
    )
