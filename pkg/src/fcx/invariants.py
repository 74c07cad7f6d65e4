"""Polynomial and numerical invariants of the spectral pages.

Covers the Poincare-Laurent polynomial of any page, the Euler number, the
decomposition of page polynomials into per-page rank contributions, window
rebasing (how the preferred integer lifts depend on the action window base),
collapse-page bounds from the jump spectrum or from an energy budget, and
comparison against a closed-manifold Betti vector.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .engine import PageTable, canonical_form, limit_and_filtration, pages
from .model import (
    EngineConsistencyError,
    FcxError,
    FloerComplexData,
    LiftedGenerator,
    require_valid,
    validate,
    z_graded_cohomology,
)

__all__ = [
    "LaurentPoly",
    "EulerReport",
    "DecompositionReport",
    "EnergyBoundReport",
    "BettiReport",
    "poincare_laurent",
    "euler_number",
    "q_decomposition",
    "rebase",
    "collapse_bound_from_jumps",
    "collapse_bound_from_energy",
    "betti_compare",
]


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial with nonnegative integer coefficients.

    Stored as sorted (exponent, coefficient) pairs with zero coefficients
    absent, so equality is coefficient-map equality.
    """

    coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        cleaned = tuple(sorted((e, c) for e, c in self.coeffs if c != 0))
        for _, c in cleaned:
            if c < 0:
                raise ValueError("coefficients must be nonnegative integers")
        object.__setattr__(self, "coeffs", cleaned)

    @staticmethod
    def from_dict(d: dict[int, int]) -> "LaurentPoly":
        return LaurentPoly(tuple(d.items()))

    @staticmethod
    def monomial(exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return LaurentPoly(((exponent, coefficient),))

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(())

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def add(self, other: "LaurentPoly") -> "LaurentPoly":
        d = self.as_dict()
        for e, c in other.coeffs:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)

    def mul(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    def shift(self, exponent: int) -> "LaurentPoly":
        """Multiply by t**exponent."""
        return LaurentPoly(tuple((e + exponent, c) for e, c in self.coeffs))

    def evaluate(self, t: int) -> int:
        """Exact integer evaluation (t = -1 gives the Euler number)."""
        return sum(c * t**e for e, c in self.coeffs)

    def serialize(self) -> str:
        """Space-separated ``exponent:coefficient`` pairs, ascending; '' if zero."""
        return " ".join(f"{e}:{c}" for e, c in self.coeffs)

    def display(self) -> str:
        """Human form: '0' when zero, else e.g. 't^-2 + 2*t^0 + t^5'."""
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.coeffs:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}t^{e}")
        return " + ".join(parts)

    @staticmethod
    def parse(text: str) -> "LaurentPoly":
        """Inverse of serialize; blank input is the zero polynomial."""
        d: dict[int, int] = {}
        for tok in text.split():
            e_str, _, c_str = tok.partition(":")
            try:
                e, c = int(e_str), int(c_str)
            except ValueError as exc:
                raise FcxError(f"bad polynomial token {tok!r}") from exc
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)


@dataclass(frozen=True)
class EulerReport:
    """Euler number of one page, with any applicability warnings."""

    chi: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class DecompositionReport:
    """Rank decomposition of the page polynomials.

    ``k_max`` is the collapse page minus one; ``qbars[i-1]`` counts, by target
    degree, the rank of the page-i differential; ``hf_poly`` grades the
    surviving limit classes by their filtration level.  The defining identity
    P(page l) = sum_{i >= l} (1 + t^(-i*period-1)) * qbar_i + hf_poly
    holds exactly for every materialized l between 1 and k_max and is
    verified at construction time.
    """

    k_max: int
    qbars: tuple[LaurentPoly, ...]
    hf_poly: LaurentPoly


@dataclass(frozen=True)
class EnergyBoundReport:
    """Collapse bound from an energy budget, with feasibility diagnostics."""

    bound: int
    infeasible_entries: tuple[str, ...] = ()


@dataclass(frozen=True)
class BettiReport:
    """Comparison of the degree-graded cohomology against a Betti vector.

    Both outcomes are reported facts, not validation errors: ``matches`` is
    the sharp prediction dim I_n = betti[n + m] for every n, and
    ``floer_bound_holds`` the weaker generator-count lower bound.
    """

    matches: bool
    mismatches: tuple[str, ...]
    floer_bound_holds: bool
    generator_count: int
    betti_sum: int


def poincare_laurent(table: PageTable, k: int) -> LaurentPoly:
    """Poincare-Laurent polynomial of page k: sum over cells of dim * t^level."""
    if not 1 <= k <= table.max_page:
        raise FcxError(
            f"page {k} is outside the materialized range 1..{table.max_page}"
        )
    d: dict[int, int] = {}
    for (kk, n, _j), cell in table.cells.items():
        if kk == k:
            d[n] = d.get(n, 0) + cell.dim
    return LaurentPoly.from_dict(d)


def euler_number(table: PageTable, k: int) -> EulerReport:
    """Euler number chi(page k) = P(page k, -1), exact integer arithmetic.

    For odd periods the page-independence of chi is not guaranteed (the
    endpoint degrees of a dipole can share parity), so a warning is attached.
    """
    chi = poincare_laurent(table, k).evaluate(-1)
    warnings: tuple[str, ...] = ()
    if table.complex.params.maslov_period % 2 == 1:
        warnings = (
            "period is odd: the Euler number may depend on the page and is "
            "not guaranteed to equal the alternating sum of limit dimensions",
        )
    return EulerReport(chi, warnings)


def q_decomposition(c: FloerComplexData) -> DecompositionReport:
    """Split the page polynomials into per-page rank contributions.

    qbar_i collects one t^(target level) per dipole of jump index i; the
    source contributes the matching t^(target level - i*period - 1) term,
    which is exactly the (1 + t^(-i*period-1)) factor of the identity.  The
    identity is re-verified here against independently computed page
    polynomials; failure raises an internal-consistency error.
    """
    require_valid(c)
    form = canonical_form(c)
    table = pages(c)
    period = c.params.maslov_period
    k_max = table.collapse_page - 1

    qdicts: list[dict[int, int]] = [dict() for _ in range(k_max)]
    for pair in form.dipoles:
        i = form.jump_of(pair)
        if i >= 1:
            n_dst = c.generators[pair[1]].degree
            qdicts[i - 1][n_dst] = qdicts[i - 1].get(n_dst, 0) + 1
    qbars = tuple(LaurentPoly.from_dict(d) for d in qdicts)

    hf_d: dict[int, int] = {}
    for f in form.free:
        n = c.generators[f].degree
        hf_d[n] = hf_d.get(n, 0) + 1
    hf_poly = LaurentPoly.from_dict(hf_d)

    for l in range(1, max(1, k_max) + 1):
        expect = hf_poly
        for i in range(l, k_max + 1):
            factor = LaurentPoly.monomial(0).add(
                LaurentPoly.monomial(-(i * period) - 1)
            )
            expect = expect.add(factor.mul(qbars[i - 1]))
        got = poincare_laurent(table, l)
        if got != expect:
            raise EngineConsistencyError(
                f"rank decomposition identity failed at page {l}: "
                f"page polynomial {got.serialize() or '0'} != "
                f"decomposition {expect.serialize() or '0'}"
            )
    return DecompositionReport(k_max, qbars, hf_poly)


def rebase(c: FloerComplexData, r_new: float) -> FloerComplexData:
    """Recompute every generator's preferred lift for a new window base.

    Each action is translated into (r_new, r_new + action_period) by a whole
    number of periods; the lifted degree moves oppositely by the degree
    period per step, so rebasing by exactly +action_period lowers every
    degree by one degree period.  Jump indices are re-derived downstream from
    the moved degrees; the result is re-validated (a jump-0 entry whose
    endpoints straddle a new window seam leaves the admissible jump range,
    which surfaces as a validation error on the rebased complex).
    """
    require_valid(c)
    p = c.params
    if p.monotonicity <= 0:
        raise FcxError("rebase requires a positive monotonicity constant")
    missing = [g.uid for g in c.generators if g.action is None]
    if missing:
        raise FcxError(
            "rebase requires an action for every generator; missing: "
            + ", ".join(sorted(missing))
        )
    sigma = p.action_period
    tol = p.action_tolerance
    for g in c.generators:
        d = (g.action - r_new) % sigma
        if min(d, sigma - d) <= tol:
            raise FcxError(
                f"window base {r_new} is not regular: the action of "
                f"'{g.uid}' lies on a window seam"
            )

    new_gens = []
    for g in c.generators:
        q = math.floor((g.action - r_new) / sigma)
        new_gens.append(
            LiftedGenerator(
                g.uid,
                g.degree + q * p.maslov_period,
                g.action - q * sigma,
            )
        )
    out = FloerComplexData(
        dataclasses.replace(p, window_base=r_new),
        tuple(new_gens),
        c.delta,
        c.cup_classes,
        c.ring,
    )
    require_valid(out)
    return out


def collapse_bound_from_jumps(c: FloerComplexData) -> int:
    """Upper-bound estimate for the collapse page from raw entry jumps.

    Returns 1 + the maximal jump index over the differential entries as
    given (1 for an empty differential).  This reads the entries in the
    input basis; the canonical form can pair generators farther apart than
    any single entry, so the estimate can undershoot the true collapse page
    on some complexes (see collapse_page for the exact value).
    """
    require_valid(c)
    best = 0
    for e in c.delta:
        best = max(best, c.jump_index(e))
    return best + 1


def collapse_bound_from_energy(c: FloerComplexData, energy: float) -> EnergyBoundReport:
    """Collapse bound from an energy budget: least bound with energy < bound * period width.

    When every generator carries an action, each entry of jump index k
    implies a trajectory action drop of k*action_period - monotonicity;
    entries whose implied drop reaches the budget are reported as evidence
    the supplied budget is infeasible for this complex.  No inference in the
    reverse direction (from the collapse page back to an energy) is made.
    """
    require_valid(c)
    p = c.params
    if p.monotonicity <= 0:
        raise FcxError("the energy bound requires a positive monotonicity constant")
    if not energy > 0:
        raise FcxError("energy must be positive")
    sigma = p.action_period
    bound = math.floor(energy / sigma) + 1

    infeasible: list[str] = []
    if all(g.action is not None for g in c.generators):
        for e in c.delta:
            k = c.jump_index(e)
            drop = k * sigma - p.monotonicity
            if drop >= energy - p.action_tolerance:
                infeasible.append(
                    f"entry ({e.src} -> {e.dst}) of jump index {k} implies an "
                    f"action drop {drop}, at or above the budget {energy}"
                )
    return EnergyBoundReport(bound, tuple(infeasible))


def betti_compare(
    c: FloerComplexData, betti: tuple[int, ...], m: int
) -> BettiReport:
    """Compare degree-graded cohomology with a Betti vector b_0..b_m.

    The sharp regime predicts dim I_n = b_(n+m) for every n (zero outside
    -m..0); independently, the generator count is tested against the sum of
    the Betti numbers.
    """
    require_valid(c)
    if len(betti) != m + 1:
        raise FcxError(
            f"expected {m + 1} Betti numbers b_0..b_{m}, got {len(betti)}"
        )
    if c.params.half_dim is not None and c.params.half_dim != m:
        raise FcxError(
            f"half-dimension mismatch: complex declares {c.params.half_dim}, "
            f"comparison uses {m}"
        )
    table = z_graded_cohomology(c)
    dims = table.as_dict()
    mismatches: list[str] = []
    lows = [n for n in dims]
    candidates = sorted(set(range(-m, 1)) | set(lows))
    for n in candidates:
        got = dims.get(n, 0)
        want = betti[n + m] if -m <= n <= 0 else 0
        if got != want:
            mismatches.append(
                f"degree {n}: cohomology dim {got}, Betti prediction {want}"
            )
    betti_sum = sum(betti)
    return BettiReport(
        matches=not mismatches,
        mismatches=tuple(mismatches),
        floer_bound_holds=c.count >= betti_sum,
        generator_count=c.count,
        betti_sum=betti_sum,
    )
