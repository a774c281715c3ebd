"""Comparison-frame data model: notation parser/serializer, validation, typing.

A superlative frame records one full semantic interpretation of a
superlative occurrence: what is compared (target), against which set
(comparison set, CS), along which property, in which orientation, and
whether the restriction comes from outside the sentence (implicit).

Targets and comparison sets are written in a small textual notation:

* eventive expressions center on a predicate with role-labeled
  arguments, ``PAY(e, AGENT=people, ASSET=Visa cards, LOCATION=in Romania)``;
* nominal expressions are a head plus optional role restrictions,
  ``writers OF=the ancient world`` or plain ``birds``.

The grammar is documented in docs/frame_grammar.ebnf. All values here
are immutable and safe to share across threads.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources as _importlib_resources
from typing import Iterable, Optional, Union

EVENT_VAR = "e"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
# Uppercase token directly followed by "=", e.g. "OF=" or "LOCATION =".
_ROLE_MARKER_RE = re.compile(r"(?<![A-Za-z0-9_])([A-Z][A-Z0-9_]*)[ \t]*=")


@lru_cache(maxsize=8)
def _reserved_role_re(inventory: frozenset[str]) -> "re.Pattern[str]":
    # Inventory labels are reserved words in nominal text: any occurrence
    # not serving as a "ROLE=" marker is an error, even as a token prefix
    # (deleting the "=" from "OF=Wikipedia" must not re-parse as a head).
    alternation = "|".join(sorted(inventory, key=len, reverse=True))
    return re.compile(rf"(?<![A-Za-z0-9_])({alternation})(?![ \t]*=)")


class Orientation(str, Enum):
    """Whether the max (positive) or min (negative) of the property is taken."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class SemanticType(str, Enum):
    """The four comparison types used throughout the corpus analyses."""

    PROPERTY = "property"
    RELATIVE_EVENTIVE = "relative-eventive"
    RELATIVE_NOMINAL = "relative-nominal"
    SUBJECT_BASED = "subject-based"


class FrameSyntaxError(ValueError):
    """Raised for malformed frame notation; carries a character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


def _load_wordlist(name: str) -> frozenset[str]:
    text = (_importlib_resources.files("supframes.resources") / name).read_text("utf-8")
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return frozenset(words)


@lru_cache(maxsize=None)
def default_role_inventory() -> frozenset[str]:
    """The shipped closed role inventory (uppercase labels, OF included)."""
    return _load_wordlist("role_inventory.txt")


@lru_cache(maxsize=None)
def default_light_verbs() -> frozenset[str]:
    """The shipped light-verb lexicon (lowercase lemmas)."""
    return _load_wordlist("light_verbs.txt")


def load_role_inventory(path) -> frozenset[str]:
    """Load an editable role inventory file; OF is always included."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.upper())
    words.add("OF")
    return frozenset(words)


def load_light_verbs(path) -> frozenset[str]:
    """Load an editable light-verb lexicon file (lowercased)."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


@dataclass(frozen=True, eq=False)
class EventExpression:
    """A predicate with an event variable and ordered (role, text) arguments.

    Equality is order-insensitive over the argument list (annotators list
    arguments in arbitrary order); serialization preserves the stored order.
    """

    predicate: str
    args: tuple[tuple[str, str], ...] = ()
    event_var: str = EVENT_VAR

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventExpression):
            return NotImplemented
        return self.predicate == other.predicate and Counter(self.args) == Counter(other.args)

    def __hash__(self) -> int:
        return hash((self.predicate, frozenset(Counter(self.args).items())))

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(role for role, _ in self.args)

    def values_for(self, role: str) -> list[str]:
        return [value for r, value in self.args if r == role]


@dataclass(frozen=True, eq=False)
class NominalExpression:
    """A noun-phrase head plus optional (role, text) restrictions."""

    head: str
    restrictions: tuple[tuple[str, str], ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NominalExpression):
            return NotImplemented
        return self.head == other.head and Counter(self.restrictions) == Counter(other.restrictions)

    def __hash__(self) -> int:
        return hash((self.head, frozenset(Counter(self.restrictions).items())))


SetExpr = Union[EventExpression, NominalExpression]


@dataclass(frozen=True)
class Anchor:
    """Position of the compared element inside the CS.

    ``index`` is 1-based into the argument/restriction list; index 0 points
    at the head of a nominal CS (role is None there by convention).
    """

    index: int
    role: Optional[str] = None

    def label(self) -> str:
        return f"#{self.index}={self.role}" if self.role else f"#{self.index}"


@dataclass(frozen=True)
class SuperlativeFrame:
    """One full semantic interpretation of a superlative occurrence."""

    target: SetExpr
    cs: SetExpr
    anchor: Anchor
    property: str
    orientation: Orientation
    rank: int = 1
    implicit: bool = False
    amount: Optional[str] = None
    trigger: str = ""


@dataclass(frozen=True)
class Violation:
    """A single validation finding; severity is "error" or "warning"."""

    severity: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}[{self.field}]: {self.message}"


def parse_frame_notation(text: str, roles: Optional[Iterable[str]] = None) -> SetExpr:
    """Parse frame notation into an :class:`EventExpression` or
    :class:`NominalExpression`.

    Whitespace around "=", "," and parentheses is insignificant; argument
    values are stored verbatim apart from trimmed ends. Role labels from
    ``roles`` (default: the shipped inventory) are reserved words in nominal
    expressions: they may only appear as ``ROLE=`` restriction markers.

    Raises :class:`FrameSyntaxError` with a character offset on malformed
    input.
    """
    inventory = default_role_inventory() if roles is None else frozenset(roles)
    if text is None or not text.strip():
        raise FrameSyntaxError("empty frame notation", 0)
    stripped = text.lstrip()
    lead = len(text) - len(stripped)
    if stripped.startswith("("):
        raise FrameSyntaxError("empty predicate", lead)
    head_match = _IDENT_RE.match(stripped)
    if head_match is not None:
        after = stripped[head_match.end():].lstrip()
        if after.startswith("("):
            return _parse_eventive(text, inventory)
    return _parse_nominal(text, inventory)


def _parse_eventive(text: str, inventory: frozenset[str]) -> EventExpression:
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    skip_ws()
    m = _IDENT_RE.match(text, pos)
    predicate = m.group(0).upper()
    pos = m.end()
    skip_ws()
    pos += 1  # the "(" that selected the eventive branch
    skip_ws()
    var = _IDENT_RE.match(text, pos)
    if var is None or var.group(0) != EVENT_VAR:
        raise FrameSyntaxError(f"expected event variable '{EVENT_VAR}'", pos)
    pos = var.end()
    args: list[tuple[str, str]] = []
    while True:
        skip_ws()
        if pos >= n:
            raise FrameSyntaxError("unbalanced parentheses: missing ')'", n)
        ch = text[pos]
        if ch == ")":
            pos += 1
            skip_ws()
            if pos != n:
                raise FrameSyntaxError("unexpected text after ')'", pos)
            return EventExpression(predicate, tuple(args))
        if ch != ",":
            raise FrameSyntaxError("expected ',' or ')'", pos)
        pos += 1
        skip_ws()
        role_match = _IDENT_RE.match(text, pos)
        if role_match is None:
            raise FrameSyntaxError("empty role", pos)
        role = role_match.group(0).upper()
        pos = role_match.end()
        skip_ws()
        if pos >= n or text[pos] != "=":
            raise FrameSyntaxError(f"missing '=' after role {role}", pos)
        pos += 1
        value_start = pos
        depth = 0
        while pos < n:
            ch = text[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch == "," and depth == 0:
                break
            pos += 1
        if pos >= n:
            raise FrameSyntaxError("unbalanced parentheses: missing ')'", n)
        raw_value = text[value_start:pos]
        marker = _ROLE_MARKER_RE.search(raw_value)
        if marker is not None and marker.group(1) in inventory:
            raise FrameSyntaxError(
                f"role marker {marker.group(1)}= inside argument value",
                value_start + marker.start(),
            )
        args.append((role, raw_value.strip()))


def _parse_nominal(text: str, inventory: frozenset[str]) -> NominalExpression:
    for ch in "(),":
        idx = text.find(ch)
        if idx != -1:
            raise FrameSyntaxError(f"'{ch}' not allowed in nominal expression", idx)
    bare = _reserved_role_re(inventory).search(text)
    if bare is not None:
        raise FrameSyntaxError(
            f"role token {bare.group(1)} without '='", bare.start(1)
        )
    markers = list(_ROLE_MARKER_RE.finditer(text))
    marker_eq_offsets = {m.end() - 1 for m in markers}
    for idx, ch in enumerate(text):
        if ch == "=" and idx not in marker_eq_offsets:
            raise FrameSyntaxError("expected role label before '='", idx)
    if not markers:
        return NominalExpression(text.strip())
    head = text[: markers[0].start()].strip()
    if not head:
        raise FrameSyntaxError("empty nominal head", 0)
    restrictions = []
    for i, m in enumerate(markers):
        end = markers[i + 1].start() if i + 1 < len(markers) else len(text)
        restrictions.append((m.group(1), text[m.end():end].strip()))
    return NominalExpression(head, tuple(restrictions))


def serialize_frame(expr: SetExpr) -> str:
    """Render a set expression in canonical notation.

    Canonical form: single space after commas, no space around "=", event
    variable always ``e``. ``parse_frame_notation(serialize_frame(x))``
    structurally equals ``x``.
    """
    if isinstance(expr, EventExpression):
        parts = "".join(f", {role}={value}" for role, value in expr.args)
        return f"{expr.predicate}({EVENT_VAR}{parts})"
    if isinstance(expr, NominalExpression):
        parts = "".join(f" {role}={value}" for role, value in expr.restrictions)
        return f"{expr.head}{parts}"
    raise TypeError(f"not a set expression: {expr!r}")


def _check_expression(
    expr: SetExpr,
    field: str,
    inventory: frozenset[str],
    membership_severity: str,
    out: list[Violation],
) -> None:
    if isinstance(expr, EventExpression):
        if not expr.predicate:
            out.append(Violation("error", field, "predicate must be non-empty"))
        seen: set[str] = set()
        for role, _value in expr.args:
            if role not in inventory:
                out.append(Violation(membership_severity, field, f"unknown role: {role}"))
            if role in seen:
                out.append(Violation(membership_severity, field, f"duplicate role: {role}"))
            seen.add(role)
    else:
        if not expr.head:
            out.append(Violation("error", field, "nominal head must be non-empty"))
        for role, _value in expr.restrictions:
            if role not in inventory:
                out.append(Violation(membership_severity, field, f"unknown role: {role}"))


def _check_anchor(
    frame: SuperlativeFrame,
    severity: str,
    out: list[Violation],
) -> None:
    anchor = frame.anchor
    cs = frame.cs
    if anchor.index < 0:
        out.append(Violation("error", "anchor", "anchor index must be >= 0"))
        return
    if isinstance(cs, EventExpression):
        if not 1 <= anchor.index <= len(cs.args):
            out.append(Violation(severity, "anchor", "anchor index out of range"))
            return
        expected = cs.args[anchor.index - 1][0]
        if anchor.role is None:
            out.append(Violation(severity, "anchor", f"anchor role missing (expected {expected})"))
        elif anchor.role != expected:
            out.append(
                Violation(
                    severity,
                    "anchor",
                    f"anchor role mismatch: #{anchor.index} is {expected}, not {anchor.role}",
                )
            )
    else:
        if anchor.index == 0:
            if anchor.role is not None:
                out.append(Violation(severity, "anchor", "head anchor (#0) takes no role"))
            return
        if not 1 <= anchor.index <= len(cs.restrictions):
            out.append(Violation(severity, "anchor", "anchor index out of range"))
            return
        expected = cs.restrictions[anchor.index - 1][0]
        if anchor.role != expected:
            out.append(
                Violation(
                    severity,
                    "anchor",
                    f"anchor role mismatch: #{anchor.index} is {expected}, not {anchor.role}",
                )
            )


def validate_frame(
    frame: SuperlativeFrame,
    strict: bool = False,
    roles: Optional[Iterable[str]] = None,
) -> list[Violation]:
    """Check every frame invariant; violations are data, not exceptions.

    Structural invariants (rank, property, orientation, non-empty heads and
    predicates) are always errors. Role-inventory membership, duplicate
    roles and anchor consistency are errors in strict mode and warnings
    otherwise. Differing predicates between an eventive target and CS are
    always a warning.
    """
    inventory = default_role_inventory() if roles is None else frozenset(roles)
    severity = "error" if strict else "warning"
    out: list[Violation] = []
    if frame.rank < 1:
        out.append(Violation("error", "rank", "rank must be ≥ 1"))
    if not frame.property or not frame.property.strip():
        out.append(Violation("error", "property", "property must be non-empty"))
    if not isinstance(frame.orientation, Orientation):
        out.append(Violation("error", "orientation", f"invalid orientation: {frame.orientation!r}"))
    _check_expression(frame.target, "target", inventory, severity, out)
    _check_expression(frame.cs, "cs", inventory, severity, out)
    if frame.anchor.role is not None and frame.anchor.role not in inventory:
        out.append(Violation(severity, "anchor", f"unknown role: {frame.anchor.role}"))
    _check_anchor(frame, severity, out)
    if (
        isinstance(frame.target, EventExpression)
        and isinstance(frame.cs, EventExpression)
        and frame.target.predicate != frame.cs.predicate
    ):
        out.append(
            Violation(
                "warning",
                "target",
                f"target predicate {frame.target.predicate} differs from CS predicate {frame.cs.predicate}",
            )
        )
    return out


def is_light_predicate(predicate: str, light_verbs: Optional[Iterable[str]] = None) -> bool:
    """A predicate is light when its lemma, or the first component of a
    compound lemma (BE_HUNGRY -> be), is in the light-verb lexicon."""
    lex = default_light_verbs() if light_verbs is None else frozenset(light_verbs)
    lemma = predicate.lower()
    return lemma in lex or lemma.split("_", 1)[0] in lex


def classify_set_expr(
    expr: SetExpr, light_verbs: Optional[Iterable[str]] = None
) -> SemanticType:
    """Assign one of the four comparison types from the CS expression alone."""
    if isinstance(expr, EventExpression):
        if is_light_predicate(expr.predicate, light_verbs):
            return SemanticType.SUBJECT_BASED
        return SemanticType.RELATIVE_EVENTIVE
    if expr.restrictions:
        return SemanticType.RELATIVE_NOMINAL
    return SemanticType.PROPERTY


def classify_semantic_type(
    frame: SuperlativeFrame, light_verbs: Optional[Iterable[str]] = None
) -> SemanticType:
    """Classify a frame by its comparison set; deterministic and total."""
    return classify_set_expr(frame.cs, light_verbs)


def frame_to_json(frame: SuperlativeFrame) -> dict:
    """Frame as a JSON-ready dict; target/cs as notation strings."""
    return {
        "target": serialize_frame(frame.target),
        "cs": serialize_frame(frame.cs),
        "anchor": {"index": frame.anchor.index, "role": frame.anchor.role},
        "property": frame.property,
        "orientation": frame.orientation.value,
        "rank": frame.rank,
        "implicit": frame.implicit,
        "amount": frame.amount,
    }


def frame_from_json(data: dict, roles: Optional[Iterable[str]] = None, trigger: str = "") -> SuperlativeFrame:
    """Build a frame from its JSON dict; raises on malformed notation,
    unknown orientation or missing keys."""
    anchor_data = data["anchor"]
    orientation = Orientation(data["orientation"])
    return SuperlativeFrame(
        target=parse_frame_notation(data["target"], roles),
        cs=parse_frame_notation(data["cs"], roles),
        anchor=Anchor(index=int(anchor_data["index"]), role=anchor_data.get("role")),
        property=data["property"],
        orientation=orientation,
        rank=int(data.get("rank", 1)),
        implicit=bool(data.get("implicit", False)),
        amount=data.get("amount"),
        trigger=trigger,
    )
