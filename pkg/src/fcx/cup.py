"""Cup-class actions: validation, induced maps, module/ring checks, cuplength.

A cup class is a degree-p GF(2) matrix on the generators (entries only
between generators whose lifted degrees differ by exactly p) that commutes
with the full differential.  Commutation with the full differential is
deliberately required at chain level: it is a single check that makes the
induced maps well defined on the degree-graded cohomology and on every
spectral page simultaneously.

Ring verification happens on the degree-graded cohomology, where the module
structure lives; the composite convention for a product a*b acting on x is
"apply b first, then a".
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import PageTable, canonical_form, pages
from .gf2 import Gf2Matrix, apply_columns, bits
from .model import (
    EngineConsistencyError,
    FcxError,
    FloerComplexData,
    ValidationReport,
    require_valid,
    z_graded_cohomology,
)

__all__ = [
    "CupClass",
    "RingTable",
    "CohomologyAction",
    "InducedPageMaps",
    "ModuleReport",
    "InjectivityReport",
    "CuplengthReport",
    "validate_cup",
    "require_valid_cup",
    "induced_on_cohomology",
    "induced_on_pages",
    "resolve_unit",
    "module_check",
    "injectivity_check",
    "cuplength_report",
]


@dataclass(frozen=True)
class CupClass:
    """A named degree-p endomorphism datum: entries (src, dst) with coefficient 1."""

    name: str
    degree: int
    entries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    def columns(self, c: FloerComplexData) -> list[int]:
        """Column bitsets over the canonical generator order (like the differential)."""
        cols = [0] * c.count
        idx = {g.uid: i for i, g in enumerate(c.generators)}
        for src, dst in self.entries:
            s, t = idx.get(src), idx.get(dst)
            if s is not None and t is not None:
                cols[s] ^= 1 << t
        return cols


@dataclass(frozen=True)
class RingTable:
    """Commutative product table over class names.

    ``products`` maps unordered pairs (stored sorted) to the product class
    name, or None for a zero product.  Pairs absent from the table multiply
    to zero.  ``unit`` optionally names the identity class; when absent it is
    resolved as the class named "1", else the unique degree-0 class whose
    matrix is the identity.
    """

    products: tuple[tuple[tuple[str, str], str | None], ...] = ()
    unit: str | None = None

    def __post_init__(self) -> None:
        normalized = tuple(
            sorted(
                ((min(pair), max(pair)), result) for pair, result in self.products
            )
        )
        object.__setattr__(self, "products", normalized)

    def product(self, a: str, b: str) -> str | None:
        """Product of two class names; None means zero (absent pairs included)."""
        key = (min(a, b), max(a, b))
        for pair, result in self.products:
            if pair == key:
                return result
        return None


@dataclass(frozen=True)
class CohomologyAction:
    """Induced action of a class on the degree-graded cohomology.

    ``blocks`` maps every degree n with nonzero cohomology to the matrix
    sending its class basis to the class basis at degree n + p (rows indexed
    by the target basis; a target with zero cohomology gives a 0-row matrix).
    """

    class_name: str
    degree: int
    blocks: tuple[tuple[int, Gf2Matrix], ...]

    def block(self, n: int) -> Gf2Matrix | None:
        return dict(self.blocks).get(n)

    @property
    def is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.blocks)


@dataclass(frozen=True)
class InducedPageMaps:
    """Induced maps on one spectral page, cell by cell.

    ``maps`` sends a populated source cell key (n, j) to the matrix into the
    cell at (n + p, (j + p) mod period) on the same page (rows indexed by the
    target cell's slots; zero rows if the target cell is empty).
    """

    class_name: str
    degree: int
    page: int
    maps: tuple[tuple[tuple[int, int], Gf2Matrix], ...]

    def as_dict(self) -> dict[tuple[int, int], Gf2Matrix]:
        return dict(self.maps)


@dataclass(frozen=True)
class ModuleReport:
    unit: str
    checked_pairs: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class InjectivityReport:
    """Kernel of (span of classes) -> (endomorphisms of the cohomology)."""

    injective: bool
    kernel_combinations: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class CuplengthReport:
    cuplength: int
    witness: tuple[str, ...]
    generator_count: int
    generator_bound_holds: bool


def validate_cup(c: FloerComplexData, a: CupClass) -> ValidationReport:
    """Check the degree pattern and chain-level commutation with the differential.

    Every failure carries a witness pair; warnings are currently unused.
    """
    require_valid(c)
    errors: list[str] = []
    if a.degree < 0:
        errors.append(f"class '{a.name}' has negative degree {a.degree}")
    idx = {g.uid: i for i, g in enumerate(c.generators)}
    seen: set[tuple[str, str]] = set()
    for src, dst in a.entries:
        if src not in idx:
            errors.append(f"class '{a.name}' references unknown generator '{src}'")
            continue
        if dst not in idx:
            errors.append(f"class '{a.name}' references unknown generator '{dst}'")
            continue
        if (src, dst) in seen:
            errors.append(f"class '{a.name}' repeats the entry ({src} -> {dst})")
            continue
        seen.add((src, dst))
        diff = c.degree_of(dst) - c.degree_of(src)
        if diff != a.degree:
            errors.append(
                f"class '{a.name}' entry ({src} -> {dst}) changes degree by "
                f"{diff}, expected {a.degree}"
            )
    if not errors:
        acols = a.columns(c)
        dcols = c.delta_columns()
        for i, g in enumerate(c.generators):
            lhs = apply_columns(dcols, acols[i])  # delta . A
            rhs = apply_columns(acols, dcols[i])  # A . delta
            if lhs != rhs:
                witness = next(bits(lhs ^ rhs))
                errors.append(
                    f"class '{a.name}' does not commute with the differential: "
                    f"witness pair ({g.uid} -> {c.generators[witness].uid})"
                )
                break
    return ValidationReport(tuple(errors), ())


def require_valid_cup(c: FloerComplexData, a: CupClass) -> None:
    report = validate_cup(c, a)
    if not report.ok:
        raise FcxError(
            f"cup class '{a.name}' failed validation: " + "; ".join(report.errors)
        )


def _tagged_reduce(vectors: list[int], width: int) -> tuple[dict[int, int], list[int]]:
    """Echelonize tagged rows (vector | tag above ``width``), pivoting on the
    top set bit of the value part.

    Returns (pivot -> tagged row, tag parts of rows whose value vanished).
    """
    by_top: dict[int, int] = {}
    mask = (1 << width) - 1
    dependents: list[int] = []
    for i, v in enumerate(vectors):
        row = (v & mask) | (1 << (width + i))
        while row & mask:
            top = (row & mask).bit_length() - 1
            other = by_top.get(top)
            if other is None:
                by_top[top] = row
                break
            row ^= other
        else:
            dependents.append(row >> width)
    return by_top, dependents


def _solve_in_basis(vectors: list[int], width: int, w: int) -> int | None:
    """Express w as a XOR of ``vectors``; returns the chooser bitmask or None."""
    by_top, _ = _tagged_reduce(vectors, width)
    mask = (1 << width) - 1
    acc = w & mask
    chooser = 0
    while acc:
        top = acc.bit_length() - 1
        row = by_top.get(top)
        if row is None:
            return None
        acc ^= row & mask
        chooser ^= row >> width
    return chooser


def induced_on_cohomology(c: FloerComplexData, a: CupClass) -> CohomologyAction:
    """Matrices of the induced action on the degree-graded cohomology.

    The class of a representative x maps to the class of A x; chain-level
    commutation makes this independent of the representative.
    """
    require_valid_cup(c, a)
    table = z_graded_cohomology(c)
    reps = {n: list(vs) for n, vs in table.representatives}
    acols = a.columns(c)

    # Boundary parts: image of the degree-preserving differential per degree.
    cols0 = [0] * c.count
    for e in c.delta:
        if c.jump_index(e) == 0:
            cols0[c.index_of(e.src)] ^= 1 << c.index_of(e.dst)
    groups = c.degree_groups()
    blocks: list[tuple[int, Gf2Matrix]] = []
    for n, basis in sorted(reps.items()):
        target = reps.get(n + a.degree, [])
        boundary = [cols0[i] for i in groups.get(n + a.degree - 1, []) if cols0[i]]
        solve_basis = list(target) + boundary
        entries: list[tuple[int, int]] = []
        for col_idx, r in enumerate(basis):
            w = apply_columns(acols, r)
            chooser = _solve_in_basis(solve_basis, c.count, w)
            if chooser is None:
                raise EngineConsistencyError(
                    f"induced image of class '{a.name}' left the cohomology at "
                    f"degree {n + a.degree}; this indicates a bug"
                )
            for row_idx in range(len(target)):
                if (chooser >> row_idx) & 1:
                    entries.append((row_idx, col_idx))
        blocks.append((n, Gf2Matrix.from_entries(len(target), len(basis), entries)))
    return CohomologyAction(a.name, a.degree, tuple(blocks))


def induced_on_pages(c: FloerComplexData, a: CupClass, k: int) -> InducedPageMaps:
    """Induced maps on page k, computed on canonical representatives.

    For each populated source cell the representatives are pushed through
    the class matrix and re-expressed in canonical coordinates; the
    coefficients on the target cell's alive slots give the matrix.  Pages
    beyond the collapse page are served by the stable page.  Exact
    commutation with the page differential is checked defensively.
    """
    require_valid_cup(c, a)
    if k < 1:
        raise FcxError(f"pages are indexed from 1, got {k}")
    form = canonical_form(c)
    table = pages(c)
    k_eff = min(k, table.collapse_page)
    period = c.params.maslov_period
    p = a.degree
    acols = a.columns(c)
    level = [g.degree for g in c.generators]

    alive: dict[tuple[int, int], list[int]] = {}
    alive_slots: set[int] = set()
    for (kk, n, j), cell in table.cells.items():
        if kk == k_eff:
            alive[(n, j)] = list(cell.slots)
            alive_slots.update(cell.slots)
    boundary_slots = {t for _s, t in form.dipoles if t not in alive_slots}

    maps: list[tuple[tuple[int, int], Gf2Matrix]] = []
    for (n, j), slots in sorted(alive.items()):
        tn, tj = n + p, (j + p) % period
        tslots = alive.get((tn, tj), [])
        tpos = {s: r for r, s in enumerate(tslots)}
        entries: list[tuple[int, int]] = []
        for col_idx, s in enumerate(slots):
            w = apply_columns(acols, form.change_of_basis[s])
            coords = form.to_canonical(w)
            for b in bits(coords):
                if level[b] < tn:
                    raise EngineConsistencyError(
                        "induced class image violated the filtration; "
                        "this indicates a bug"
                    )
                if level[b] != tn:
                    continue  # strictly deeper level: zero in this cell
                if b in tpos:
                    entries.append((tpos[b], col_idx))
                elif b not in boundary_slots:
                    raise EngineConsistencyError(
                        "induced class image hit a live slot outside the "
                        "target cell; this indicates a bug"
                    )
        maps.append(((n, j), Gf2Matrix.from_entries(len(tslots), len(slots), entries)))

    out = InducedPageMaps(a.name, p, k_eff, tuple(maps))
    _check_page_commutation(table, out, k_eff)
    return out


def _check_page_commutation(table: PageTable, induced: InducedPageMaps, k: int) -> None:
    """Defensive exactness check: induced maps commute with the page differential."""
    period = table.complex.params.maslov_period
    p = induced.degree
    m = induced.as_dict()
    for (kk, n, j), d in table.differentials.items():
        if kk != k:
            continue
        dn, dj = n + k * period + 1, (j + 1) % period
        m_src = m[(n, j)]
        m_dst = m[(dn, dj)]
        d_shift = table.differentials.get((k, n + p, (j + p) % period))
        lhs = m_dst.mat_mul(d)
        rhs = (
            d_shift.mat_mul(m_src)
            if d_shift is not None
            else Gf2Matrix.zero(m_dst.n_rows, m_src.n_cols)
        )
        if lhs.rows != rhs.rows:
            raise EngineConsistencyError(
                f"induced maps of class '{induced.class_name}' do not commute "
                f"with the page-{k} differential at (n={n}, j={j})"
            )


def resolve_unit(c: FloerComplexData, ring: RingTable) -> str:
    """Resolve the unit class: explicit, else named '1', else the unique
    degree-0 identity-matrix class."""
    classes = {cls.name: cls for cls in c.cup_classes}
    if ring.unit is not None:
        if ring.unit not in classes:
            raise FcxError(f"declared unit '{ring.unit}' is not a known class")
        return ring.unit
    if "1" in classes:
        return "1"
    identity_entries = tuple(sorted((g.uid, g.uid) for g in c.generators))
    candidates = [
        cls.name
        for cls in c.cup_classes
        if cls.degree == 0 and cls.entries == identity_entries
    ]
    if len(candidates) == 1:
        return candidates[0]
    raise FcxError(
        "cannot resolve a unit class: declare one explicitly, name it '1', "
        "or provide exactly one degree-0 identity class"
    )


def _ring_classes(c: FloerComplexData, ring: RingTable) -> dict[str, CupClass]:
    classes = {cls.name: cls for cls in c.cup_classes}
    if len(classes) != len(c.cup_classes):
        raise FcxError("duplicate cup class names")
    for (x, y), result in ring.products:
        for name in (x, y) + ((result,) if result else ()):
            if name not in classes:
                raise FcxError(f"product table references unknown class '{name}'")
        if result is not None:
            expected = classes[x].degree + classes[y].degree
            if classes[result].degree != expected:
                raise FcxError(
                    f"product {x}*{y} = {result} violates degree additivity: "
                    f"degree {classes[result].degree} != {expected}"
                )
    return classes


def _total_endomorphism(
    action: CohomologyAction, layout: dict[int, tuple[int, int]], total: int
) -> int:
    """Flatten a graded action into one bitset over a total x total matrix.

    ``layout`` maps degree -> (offset, dim) inside the total cohomology; bit
    (row_total * total + col_total) encodes a unit entry.
    """
    out = 0
    for n, block in action.blocks:
        off_src, _ = layout[n]
        tgt = layout.get(n + action.degree)
        if tgt is None:
            if not block.is_zero():
                raise EngineConsistencyError(
                    "nonzero induced block into a zero cohomology degree"
                )
            continue
        off_dst, _ = tgt
        for r in range(block.n_rows):
            for b in bits(block.rows[r]):
                out |= 1 << ((off_dst + r) * total + (off_src + b))
    return out


def module_check(c: FloerComplexData, ring: RingTable) -> ModuleReport:
    """Verify the product table against composition of induced maps.

    For every stored pair (a, b) with product r, the composite "b first,
    then a" on the degree-graded cohomology must equal the induced map of r
    (the zero map when the product is zero); the unit must induce the
    identity.
    """
    classes = _ring_classes(c, ring)
    unit = resolve_unit(c, ring)
    actions = {name: induced_on_cohomology(c, cls) for name, cls in classes.items()}

    failures: list[str] = []
    dims = z_graded_cohomology(c).as_dict()

    unit_action = actions[unit]
    if classes[unit].degree != 0:
        failures.append(f"unit '{unit}' has nonzero degree {classes[unit].degree}")
    else:
        for n, block in unit_action.blocks:
            if block != Gf2Matrix.identity(dims.get(n, 0)):
                failures.append(
                    f"unit '{unit}' does not act as the identity at degree {n}"
                )

    checked = 0
    for (x, y), result in ring.products:
        checked += 1
        ax, ay = actions[x], actions[y]
        for n in sorted(dims):
            mid = ay.block(n)
            if mid is None:
                continue
            top = ax.block(n + ay.degree)
            out_dim = dims.get(n + ay.degree + ax.degree, 0)
            composite = (
                top.mat_mul(mid) if top is not None else Gf2Matrix.zero(out_dim, mid.n_cols)
            )
            if result is None:
                want = Gf2Matrix.zero(composite.n_rows, composite.n_cols)
            else:
                want_block = actions[result].block(n)
                want = (
                    want_block
                    if want_block is not None
                    else Gf2Matrix.zero(composite.n_rows, composite.n_cols)
                )
            if composite.rows != want.rows:
                failures.append(
                    f"product {x}*{y} -> {result or '0'} fails at degree {n}: "
                    f"composite of induced maps differs from the induced product"
                )
                break
    return ModuleReport(unit, checked, tuple(failures))


def injectivity_check(c: FloerComplexData, ring: RingTable) -> InjectivityReport:
    """Kernel of the linear map from class combinations to cohomology endomorphisms.

    A reported combination is a set of class names whose XOR of induced
    total-cohomology matrices is zero; injectivity means there are none.
    """
    classes = _ring_classes(c, ring)
    names = sorted(classes)
    dims = z_graded_cohomology(c).as_dict()
    layout: dict[int, tuple[int, int]] = {}
    off = 0
    for n, d in sorted(dims.items()):
        layout[n] = (off, d)
        off += d
    total = off

    vectors = [
        _total_endomorphism(induced_on_cohomology(c, classes[name]), layout, total)
        for name in names
    ]
    _, dependents = _tagged_reduce(vectors, total * total)
    kernel = sorted(
        tuple(names[i] for i in bits(tags)) for tags in dependents if tags
    )
    return InjectivityReport(not kernel, tuple(kernel))


def cuplength_report(c: FloerComplexData, ring: RingTable) -> CuplengthReport:
    """Length of the longest nonzero product of positive-degree classes, plus 1.

    The search walks the product table (pairs absent from the table multiply
    to zero); degree additivity makes the walk finite.  The generator-count
    lower bound is reported as a fact.
    """
    classes = _ring_classes(c, ring)
    positive = sorted(name for name, cls in classes.items() if cls.degree > 0)

    memo: dict[str, tuple[int, tuple[str, ...]]] = {}

    def longest_from(name: str) -> tuple[int, tuple[str, ...]]:
        """Longest continuation (count, factors) multiplying onto ``name``."""
        if name in memo:
            return memo[name]
        best: tuple[int, tuple[str, ...]] = (0, ())
        for g in positive:
            nxt = ring.product(name, g)
            if nxt is None:
                continue
            length, tail = longest_from(nxt)
            if 1 + length > best[0]:
                best = (1 + length, (g,) + tail)
        memo[name] = best
        return best

    best_len = 0
    best_chain: tuple[str, ...] = ()
    for start in positive:
        length, tail = longest_from(start)
        if 1 + length > best_len:
            best_len = 1 + length
            best_chain = (start,) + tail

    cuplength = 1 + best_len
    return CuplengthReport(
        cuplength=cuplength,
        witness=best_chain,
        generator_count=c.count,
        generator_bound_holds=c.count >= cuplength,
    )
