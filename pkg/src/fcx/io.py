"""The FCX text format: line-oriented parser and canonical serializer.

Grammar (one directive per line; ``#`` starts a comment; blank lines are
ignored; tokens are whitespace-separated):

    fcx 1                         version line, must be the first directive
    sigma <posint>                Maslov period (required, exactly once)
    lambda <decimal>              monotonicity constant (required, exactly once)
    r <decimal>                   action window base (optional, default 0)
    m <nonnegint>                 ambient half-dimension (optional)
    gen <id> <int> [<decimal>]    generator: id, lifted degree, optional action
    d <src-id> <dst-id>           differential entry with coefficient 1
    cup <name> <nonnegint>        declare a cup class and its degree
    c <name> <src-id> <dst-id>    one GF(2) entry of a declared cup class
    ring <a> <b> <c|0>            product table row (0 means zero product)

Ids and class names match ``[A-Za-z0-9_*]+`` (the ``*`` admits tensor-product
generator names like ``x*y``, so serialized products re-parse).  Decimals are
plain base-10 with optional sign and fraction, no exponent.  Line order of
``gen``/``d`` bodies is non-semantic: the loaded complex always carries the
canonical internal ordering.

The serializer is canonical: fixed header order, generators sorted by
(degree, id), differential entries by (src, dst), cup data sorted by class
name, actions printed with 12 significant digits.  ``parse(serialize(c))``
reproduces ``c`` exactly whenever its decimals survive 12-digit printing
(all generated corpora do).  A ring table's unit is not a document directive;
by convention the unit class of a document is the class named ``1`` (or the
unique degree-0 identity class).
"""

from __future__ import annotations

import re

from .cup import CupClass, RingTable
from .model import (
    DifferentialEntry,
    FcxError,
    FloerComplexData,
    LiftedGenerator,
    MonotoneParams,
)

__all__ = ["FcxParseError", "parse", "serialize", "format_decimal"]

_ID_RE = re.compile(r"^[A-Za-z0-9_*]+$")
_DECIMAL_RE = re.compile(r"^[+-]?[0-9]+(\.[0-9]+)?$")


class FcxParseError(FcxError):
    """A grammar-level failure, carrying the 1-based line number."""

    def __init__(self, line_no: int | None, message: str) -> None:
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)
        self.line_no = line_no


def _parse_int(line_no: int, token: str, what: str, minimum: int | None = None) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise FcxParseError(line_no, f"{what} must be an integer, got '{token}'")
    if minimum is not None and value < minimum:
        raise FcxParseError(line_no, f"{what} must be >= {minimum}, got {value}")
    return value


def _parse_decimal(line_no: int, token: str, what: str) -> float:
    if not _DECIMAL_RE.match(token):
        raise FcxParseError(
            line_no, f"{what} must be a plain decimal number, got '{token}'"
        )
    return float(token)


def _parse_id(line_no: int, token: str, what: str) -> str:
    if not _ID_RE.match(token):
        raise FcxParseError(
            line_no, f"{what} must match [A-Za-z0-9_*]+, got '{token}'"
        )
    return token


def _require_arity(line_no: int, tokens: list[str], allowed: tuple[int, ...]) -> None:
    if len(tokens) - 1 not in allowed:
        options = " or ".join(str(a) for a in allowed)
        raise FcxParseError(
            line_no,
            f"directive '{tokens[0]}' takes {options} argument(s), "
            f"got {len(tokens) - 1}",
        )


def parse(text: str, allow_small_sigma: bool = False) -> FloerComplexData:
    """Parse an FCX document into a complex (grammar check only, no validation).

    Raises FcxParseError with a 1-based line number on any grammar problem:
    unknown directives, bad token shapes, duplicate declarations (citing both
    lines), missing required header fields, or dangling references.
    """
    header: dict[str, tuple[int, object]] = {}  # directive -> (line, value)
    gens: dict[str, tuple[int, LiftedGenerator]] = {}
    deltas: dict[tuple[str, str], int] = {}
    delta_order: list[DifferentialEntry] = []
    cups: dict[str, tuple[int, int]] = {}  # name -> (line, degree)
    cup_entries: dict[str, dict[tuple[str, str], int]] = {}
    ring_rows: dict[tuple[str, str], tuple[int, str | None]] = {}
    pending_refs: list[tuple[int, str, str]] = []  # (line, kind, id) to resolve
    saw_any_directive = False
    version_line: int | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive = tokens[0]

        if not saw_any_directive and directive != "fcx":
            raise FcxParseError(line_no, "first directive must be 'fcx 1'")
        saw_any_directive = True

        if directive == "fcx":
            _require_arity(line_no, tokens, (1,))
            if version_line is not None:
                raise FcxParseError(
                    line_no, f"duplicate 'fcx' line (first on line {version_line})"
                )
            if tokens[1] != "1":
                raise FcxParseError(
                    line_no, f"unsupported format version '{tokens[1]}' (expected 1)"
                )
            version_line = line_no
        elif directive in ("sigma", "lambda", "r", "m"):
            _require_arity(line_no, tokens, (1,))
            if directive in header:
                raise FcxParseError(
                    line_no,
                    f"duplicate '{directive}' line (first on line {header[directive][0]})",
                )
            if directive == "sigma":
                value: object = _parse_int(line_no, tokens[1], "sigma", minimum=1)
            elif directive == "m":
                value = _parse_int(line_no, tokens[1], "m", minimum=0)
            else:
                value = _parse_decimal(line_no, tokens[1], directive)
            header[directive] = (line_no, value)
        elif directive == "gen":
            _require_arity(line_no, tokens, (2, 3))
            uid = _parse_id(line_no, tokens[1], "generator id")
            if uid in gens:
                raise FcxParseError(
                    line_no,
                    f"duplicate generator '{uid}' (first declared on line {gens[uid][0]})",
                )
            degree = _parse_int(line_no, tokens[2], "lifted degree")
            action = (
                _parse_decimal(line_no, tokens[3], "action") if len(tokens) == 4 else None
            )
            gens[uid] = (line_no, LiftedGenerator(uid, degree, action))
        elif directive == "d":
            _require_arity(line_no, tokens, (2,))
            src = _parse_id(line_no, tokens[1], "source id")
            dst = _parse_id(line_no, tokens[2], "target id")
            if (src, dst) in deltas:
                raise FcxParseError(
                    line_no,
                    f"duplicate differential entry ({src} -> {dst}) "
                    f"(first on line {deltas[(src, dst)]})",
                )
            deltas[(src, dst)] = line_no
            delta_order.append(DifferentialEntry(src, dst))
            pending_refs.append((line_no, "generator", src))
            pending_refs.append((line_no, "generator", dst))
        elif directive == "cup":
            _require_arity(line_no, tokens, (2,))
            name = _parse_id(line_no, tokens[1], "class name")
            if name in cups:
                raise FcxParseError(
                    line_no,
                    f"duplicate cup class '{name}' (first declared on line {cups[name][0]})",
                )
            degree = _parse_int(line_no, tokens[2], "class degree", minimum=0)
            cups[name] = (line_no, degree)
            cup_entries[name] = {}
        elif directive == "c":
            _require_arity(line_no, tokens, (3,))
            name = _parse_id(line_no, tokens[1], "class name")
            src = _parse_id(line_no, tokens[2], "source id")
            dst = _parse_id(line_no, tokens[3], "target id")
            entries = cup_entries.setdefault(name, {})
            if (src, dst) in entries:
                raise FcxParseError(
                    line_no,
                    f"duplicate entry ({src} -> {dst}) for class '{name}' "
                    f"(first on line {entries[(src, dst)]})",
                )
            entries[(src, dst)] = line_no
            pending_refs.append((line_no, "cup class", name))
            pending_refs.append((line_no, "generator", src))
            pending_refs.append((line_no, "generator", dst))
        elif directive == "ring":
            _require_arity(line_no, tokens, (3,))
            a = _parse_id(line_no, tokens[1], "class name")
            b = _parse_id(line_no, tokens[2], "class name")
            result = tokens[3]
            if result != "0":
                result = _parse_id(line_no, tokens[3], "product class name")
                pending_refs.append((line_no, "cup class", result))
            key = (min(a, b), max(a, b))
            if key in ring_rows:
                raise FcxParseError(
                    line_no,
                    f"duplicate ring row for ({key[0]}, {key[1]}) "
                    f"(first on line {ring_rows[key][0]})",
                )
            ring_rows[key] = (line_no, None if result == "0" else result)
            pending_refs.append((line_no, "cup class", a))
            pending_refs.append((line_no, "cup class", b))
        else:
            raise FcxParseError(line_no, f"unknown directive '{directive}'")

    if version_line is None:
        raise FcxParseError(None, "missing required directive 'fcx 1'")
    for required in ("sigma", "lambda"):
        if required not in header:
            raise FcxParseError(None, f"missing required directive '{required}'")

    for line_no, kind, name in pending_refs:
        known = gens if kind == "generator" else cups
        if name not in known:
            raise FcxParseError(line_no, f"unknown {kind} '{name}'")

    params = MonotoneParams(
        maslov_period=header["sigma"][1],  # type: ignore[arg-type]
        monotonicity=header["lambda"][1],  # type: ignore[arg-type]
        window_base=header["r"][1] if "r" in header else 0.0,  # type: ignore[arg-type]
        half_dim=header["m"][1] if "m" in header else None,  # type: ignore[arg-type]
        allow_small_period=allow_small_sigma,
    )
    cup_classes = tuple(
        CupClass(name, degree, tuple(cup_entries.get(name, {})))
        for name, (_line, degree) in sorted(cups.items())
    )
    ring = (
        RingTable(
            products=tuple(
                (pair, result) for pair, (_line, result) in sorted(ring_rows.items())
            )
        )
        if ring_rows
        else None
    )
    return FloerComplexData(
        params=params,
        generators=tuple(g for _line, g in gens.values()),
        delta=tuple(delta_order),
        cup_classes=cup_classes,
        ring=ring,
    )


def format_decimal(x: float) -> str:
    """12-significant-digit plain decimal (no exponent), canonical for FCX."""
    s = f"{x:.12g}"
    if "e" in s or "E" in s:
        s = f"{x:.20f}".rstrip("0").rstrip(".")
    if s in ("-0", ""):
        s = "0"
    return s


def serialize(c: FloerComplexData) -> str:
    """Canonical FCX text for a complex; see the module docstring for the contract."""
    lines = ["fcx 1"]
    lines.append(f"sigma {c.params.maslov_period}")
    lines.append(f"lambda {format_decimal(c.params.monotonicity)}")
    lines.append(f"r {format_decimal(c.params.window_base)}")
    if c.params.half_dim is not None:
        lines.append(f"m {c.params.half_dim}")
    for g in c.generators:  # canonical (degree, uid) order
        if g.action is None:
            lines.append(f"gen {g.uid} {g.degree}")
        else:
            lines.append(f"gen {g.uid} {g.degree} {format_decimal(g.action)}")
    for e in c.delta:  # canonical (src, dst) order
        lines.append(f"d {e.src} {e.dst}")
    for cls in sorted(c.cup_classes, key=lambda cls: cls.name):
        lines.append(f"cup {cls.name} {cls.degree}")
        for src, dst in cls.entries:
            lines.append(f"c {cls.name} {src} {dst}")
    if c.ring is not None:
        for (a, b), result in c.ring.products:
            lines.append(f"ring {a} {b} {result if result is not None else '0'}")
    return "\n".join(lines) + "\n"
