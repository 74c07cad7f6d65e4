"""Data model of a monotone Floer-type filtered cochain complex over GF(2).

A complex is a finite set of generators carrying an integer lifted degree
``n`` (whose residue mod the Maslov period gives the coarse periodic
grading), optionally a real action confined to the window
``(window_base, window_base + action_period)``, and a GF(2) differential
whose entries raise the lifted degree by ``k * period + 1`` for some
``k >= 0`` (the entry's *jump index*).  The decreasing filtration by lifted
degree is what every downstream computation (spectral pages, polynomial
invariants, products, cup actions) is built on.

Validation is exhaustive and returns a report rather than failing fast, so a
single pass lists every violated invariant with the offending ids.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping

from .gf2 import Gf2Matrix, Gf2Subspace, bits, image_basis, kernel_basis

if TYPE_CHECKING:  # imported only for type checkers; avoids a runtime cycle
    from .cup import CupClass, RingTable

__all__ = [
    "FcxError",
    "InvalidComplexError",
    "EngineConsistencyError",
    "SizeGuardError",
    "MonotoneParams",
    "LiftedGenerator",
    "DifferentialEntry",
    "FloerComplexData",
    "ValidationReport",
    "CohomologyTable",
    "validate",
    "require_valid",
    "z_graded_cohomology",
    "periodic_cohomology",
    "degree_decompose",
]


class FcxError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidComplexError(FcxError):
    """Raised when an operation requires a valid complex but validation failed."""

    def __init__(self, report: "ValidationReport") -> None:
        super().__init__("invalid complex: " + "; ".join(report.errors))
        self.report = report


class EngineConsistencyError(FcxError):
    """An internal cross-check failed; indicates a bug in the engine, not in the input."""


class SizeGuardError(FcxError):
    """A size guard on a combinatorially explosive operation was exceeded."""


@dataclass(frozen=True)
class MonotoneParams:
    """Numeric frame of a monotone complex.

    ``maslov_period``  -- the positive integer period of the coarse grading
                          and the step of the filtration (minimal Maslov
                          number).  Values 1-2 are admitted only behind
                          ``allow_small_period`` and draw a warning.
    ``monotonicity``   -- the nonnegative proportionality constant tying
                          action drops to degree jumps; 0 means purely
                          algebraic mode (no actions allowed).
    ``window_base``    -- base of the preferred action window.
    ``half_dim``       -- optional ambient half-dimension, used only for
                          Betti comparison and report-text index shifts.
    """

    maslov_period: int
    monotonicity: float
    window_base: float = 0.0
    half_dim: int | None = None
    allow_small_period: bool = False

    @property
    def action_period(self) -> float:
        """Width of the action window; by monotonicity it is exactly monotonicity * period."""
        return self.monotonicity * self.maslov_period

    @property
    def action_tolerance(self) -> float:
        """Absolute tolerance for every action comparison."""
        return 1e-9 * max(1.0, self.action_period)

    def residue(self, n: int) -> int:
        return n % self.maslov_period


@dataclass(frozen=True)
class LiftedGenerator:
    """A generator with its integer lifted degree and optional window action."""

    uid: str
    degree: int
    action: float | None = None


@dataclass(frozen=True)
class DifferentialEntry:
    """One GF(2) entry of the differential: coefficient 1 from src to dst."""

    src: str
    dst: str


@dataclass(frozen=True)
class CohomologyTable:
    """Dimensions (and optional representative bases) of a graded cohomology.

    ``kind`` is ``"z_graded"`` (indexed by lifted degree) or ``"periodic"``
    (indexed by residue).  ``dims`` stores only the nonzero entries.
    Representatives are bitset vectors over the canonical generator order.
    """

    kind: str
    dims: tuple[tuple[int, int], ...]
    representatives: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def dim(self, key: int) -> int:
        return dict(self.dims).get(key, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(d for _, d in self.dims)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def _sorted_generators(gens: Iterable[LiftedGenerator]) -> tuple[LiftedGenerator, ...]:
    return tuple(sorted(gens, key=lambda g: (g.degree, g.uid)))


def _sorted_delta(delta: Iterable[DifferentialEntry]) -> tuple[DifferentialEntry, ...]:
    return tuple(sorted(delta, key=lambda e: (e.src, e.dst)))


@dataclass(frozen=True)
class FloerComplexData:
    """A complete monotone complex; immutable, with canonical internal ordering.

    Generators are stored sorted by (degree, uid) and differential entries by
    (src, dst), so structural equality is canonical-form equality.  Optional
    cup-class data parsed from the same document rides along untouched; the
    cup operations interpret it.
    """

    params: MonotoneParams
    generators: tuple[LiftedGenerator, ...]
    delta: tuple[DifferentialEntry, ...]
    cup_classes: tuple["CupClass", ...] = ()
    ring: "RingTable | None" = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", _sorted_generators(self.generators))
        object.__setattr__(self, "delta", _sorted_delta(self.delta))
        object.__setattr__(self, "cup_classes", tuple(self.cup_classes))

    @property
    def count(self) -> int:
        return len(self.generators)

    def index_of(self, uid: str) -> int:
        return _index_map(self)[uid]

    def degree_of(self, uid: str) -> int:
        return self.generators[self.index_of(uid)].degree

    def jump_index(self, entry: DifferentialEntry) -> int:
        """Jump index k of an entry; only meaningful on validated complexes."""
        diff = self.degree_of(entry.dst) - self.degree_of(entry.src)
        return (diff - 1) // self.params.maslov_period

    def delta_columns(self) -> list[int]:
        """delta as columns: column i is the bitset of targets of generator i."""
        idx = _index_map(self)
        cols = [0] * self.count
        for e in self.delta:
            s = idx.get(e.src)
            t = idx.get(e.dst)
            if s is not None and t is not None:
                cols[s] ^= 1 << t
        return cols

    def degree_groups(self) -> dict[int, list[int]]:
        """Map degree -> ascending generator indices at that degree."""
        groups: dict[int, list[int]] = {}
        for i, g in enumerate(self.generators):
            groups.setdefault(g.degree, []).append(i)
        return groups

    def residue_groups(self) -> dict[int, list[int]]:
        """Map residue -> ascending generator indices with that residue."""
        groups: dict[int, list[int]] = {}
        for i, g in enumerate(self.generators):
            groups.setdefault(self.params.residue(g.degree), []).append(i)
        return groups


@functools.lru_cache(maxsize=None)
def _index_map(c: FloerComplexData) -> Mapping[str, int]:
    return {g.uid: i for i, g in enumerate(c.generators)}


@functools.lru_cache(maxsize=None)
def validate(c: FloerComplexData) -> ValidationReport:
    """Check every structural invariant; returns a complete report.

    Errors make the complex unusable downstream; warnings do not.
    """
    errors: list[str] = []
    warnings: list[str] = []
    p = c.params
    period = p.maslov_period
    tol = p.action_tolerance

    if period < 1:
        errors.append(f"maslov period must be a positive integer, got {period}")
    elif period < 3:
        if p.allow_small_period:
            warnings.append(
                f"maslov period {period} is below 3; degree-graded theory is "
                "admitted only under the explicit override and carries no "
                "correctness claim"
            )
        else:
            errors.append(
                f"maslov period {period} is below 3 and the small-period "
                "override flag is not set"
            )
    if p.monotonicity < 0:
        errors.append(f"monotonicity constant must be nonnegative, got {p.monotonicity}")

    seen: dict[str, int] = {}
    for i, g in enumerate(c.generators):
        if g.uid in seen:
            errors.append(f"duplicate generator id '{g.uid}'")
        else:
            seen[g.uid] = i

    any_action = any(g.action is not None for g in c.generators)
    if any_action and p.monotonicity <= 0:
        errors.append("actions are present but monotonicity is 0 (algebraic mode only)")
    elif p.monotonicity > 0:
        lo = p.window_base
        hi = p.window_base + p.action_period
        for g in c.generators:
            if g.action is None:
                continue
            if not (g.action - lo > tol and hi - g.action > tol):
                errors.append(
                    f"generator '{g.uid}' action {g.action} outside the open "
                    f"window ({lo}, {hi})"
                )

    idx = _index_map(c)
    seen_pairs: set[tuple[str, str]] = set()
    for e in c.delta:
        if e.src not in idx:
            errors.append(f"differential entry references unknown source '{e.src}'")
            continue
        if e.dst not in idx:
            errors.append(f"differential entry references unknown target '{e.dst}'")
            continue
        if (e.src, e.dst) in seen_pairs:
            errors.append(f"duplicate differential entry ({e.src} -> {e.dst})")
            continue
        seen_pairs.add((e.src, e.dst))
        if period < 1:
            continue
        diff = c.degree_of(e.dst) - c.degree_of(e.src)
        if diff < 1 or (diff - 1) % period != 0:
            errors.append(
                f"entry ({e.src} -> {e.dst}) has degree jump {diff}, not of the "
                f"form k*{period}+1 with k >= 0"
            )
            continue
        k = (diff - 1) // period
        a_src = c.generators[idx[e.src]].action
        a_dst = c.generators[idx[e.dst]].action
        if a_src is not None and a_dst is not None and p.monotonicity > 0:
            # Window-confined lifts determine the action difference only up
            # to deck translates: it must be -monotonicity for even k and
            # action_period - monotonicity for odd k (the unique in-window
            # representatives of k*sigma - lambda modulo 2*sigma).
            expected = (
                -p.monotonicity if k % 2 == 0 else p.action_period - p.monotonicity
            )
            got = a_dst - a_src
            if abs(got - expected) > tol:
                errors.append(
                    f"entry ({e.src} -> {e.dst}) action difference {got} "
                    f"inconsistent with jump index {k} (expected {expected})"
                )

    # Differential squares to zero over GF(2) on the full complex.
    if not errors:
        cols = c.delta_columns()
        for i in range(c.count):
            acc = 0
            for t in bits(cols[i]):
                acc ^= cols[t]
            if acc:
                witness = next(bits(acc))
                errors.append(
                    f"differential does not square to zero: starting at "
                    f"'{c.generators[i].uid}' it reaches "
                    f"'{c.generators[witness].uid}' twice"
                )
    return ValidationReport(tuple(errors), tuple(warnings))


def require_valid(c: FloerComplexData) -> None:
    report = validate(c)
    if not report.ok:
        raise InvalidComplexError(report)


def _quotient_representatives(
    numerator: list[int], denominator: Gf2Subspace
) -> list[int]:
    """Deterministic coset representatives of span(numerator)/denominator.

    Each returned vector is the reduction of a numerator basis vector that
    added a new coset; the result is reproducible bit for bit.
    """
    reps: list[int] = []
    collected = list(denominator.basis)
    for v in numerator:
        w = v
        for b in collected:
            piv = (b & -b).bit_length() - 1
            if (w >> piv) & 1:
                w ^= b
        if w:
            reps.append(w)
            # keep 'collected' echelonized by inserting w at its pivot
            collected.append(w)
            collected.sort(key=lambda x: (x & -x).bit_length())
    return reps


def _local_matrix(
    cols: list[int], src_indices: list[int], dst_indices: list[int]
) -> Gf2Matrix:
    """Submatrix of the column map restricted to given source/target indices."""
    dst_pos = {g: r for r, g in enumerate(dst_indices)}
    entries = []
    for j, s in enumerate(src_indices):
        for t in bits(cols[s]):
            r = dst_pos.get(t)
            if r is not None:
                entries.append((r, j))
    return Gf2Matrix.from_entries(len(dst_indices), len(src_indices), entries)


def _expand(vec: int, indices: list[int]) -> int:
    """Lift a local bitset vector to ambient generator coordinates."""
    out = 0
    for b in bits(vec):
        out |= 1 << indices[b]
    return out


def z_graded_cohomology(c: FloerComplexData) -> CohomologyTable:
    """Cohomology of the degree-graded complex under the jump-0 part alone.

    The jump-0 component is the only part of the differential that preserves
    the integer grading shift by exactly 1; higher-jump entries are invisible
    here and only act on later spectral pages.
    """
    require_valid(c)
    groups = c.degree_groups()
    # Restrict columns to jump-0 entries.
    cols0 = [0] * c.count
    for e in c.delta:
        if c.jump_index(e) == 0:
            cols0[c.index_of(e.src)] ^= 1 << c.index_of(e.dst)
    dims: list[tuple[int, int]] = []
    reps_out: list[tuple[int, tuple[int, ...]]] = []
    for n in sorted(groups):
        here = groups[n]
        above = groups.get(n + 1, [])
        below = groups.get(n - 1, [])
        ker = kernel_local(cols0, here, above)
        img = image_local(cols0, below, here)
        reps = _quotient_representatives(
            [_expand(v, here) for v in ker],
            Gf2Subspace.from_vectors(c.count, [_expand(v, here) for v in img]),
        )
        if reps:
            dims.append((n, len(reps)))
            reps_out.append((n, tuple(reps)))
    return CohomologyTable("z_graded", tuple(dims), tuple(reps_out))


def kernel_local(cols: list[int], src: list[int], dst: list[int]) -> list[int]:
    """Kernel basis (local coordinates over ``src``) of the restricted column map."""
    return list(kernel_basis(_local_matrix(cols, src, dst)).basis)


def image_local(cols: list[int], src: list[int], dst: list[int]) -> list[int]:
    """Image basis (local coordinates over ``dst``) of the restricted column map."""
    return list(image_basis(_local_matrix(cols, src, dst)).basis)


def periodic_cohomology(c: FloerComplexData) -> CohomologyTable:
    """Cohomology of the residue-graded complex under the full differential."""
    require_valid(c)
    period = c.params.maslov_period
    groups = c.residue_groups()
    cols = c.delta_columns()
    dims: list[tuple[int, int]] = []
    reps_out: list[tuple[int, tuple[int, ...]]] = []
    for j in sorted(groups):
        here = groups[j]
        nxt = groups.get((j + 1) % period, [])
        prv = groups.get((j - 1) % period, [])
        ker = kernel_local(cols, here, nxt)
        img = image_local(cols, prv, here)
        reps = _quotient_representatives(
            [_expand(v, here) for v in ker],
            Gf2Subspace.from_vectors(c.count, [_expand(v, here) for v in img]),
        )
        if reps:
            dims.append((j, len(reps)))
            reps_out.append((j, tuple(reps)))
    return CohomologyTable("periodic", tuple(dims), tuple(reps_out))


def degree_decompose(c: FloerComplexData) -> dict[int, Gf2Matrix]:
    """Split the differential by jump index: k -> the square matrix of jump-k entries.

    Matrices are count x count over the canonical generator order (rows are
    targets, columns are sources); their XOR-sum is the full differential.
    """
    require_valid(c)
    parts: dict[int, list[tuple[int, int]]] = {}
    for e in c.delta:
        parts.setdefault(c.jump_index(e), []).append(
            (c.index_of(e.dst), c.index_of(e.src))
        )
    return {
        k: Gf2Matrix.from_entries(c.count, c.count, entries)
        for k, entries in sorted(parts.items())
    }
