"""Allen interval algebra and the point algebra on interval endpoints.

Relation sets are 13-bit masks in the canonical order
``b, bi, m, mi, o, oi, s, si, d, di, f, fi, e``.  Hot loops (closure,
generation) work on the raw ``int`` masks; :class:`RelationSet` is the
public, hashable wrapper.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

BASE_NAMES = ("b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "e")
_INDEX = {name: i for i, name in enumerate(BASE_NAMES)}
_INVERSE_NAME = {
    "b": "bi", "bi": "b", "m": "mi", "mi": "m", "o": "oi", "oi": "o",
    "s": "si", "si": "s", "d": "di", "di": "d", "f": "fi", "fi": "f", "e": "e",
}

ALL_MASK = (1 << 13) - 1


class BaseRelation(str, enum.Enum):
    b = "b"
    bi = "bi"
    m = "m"
    mi = "mi"
    o = "o"
    oi = "oi"
    s = "s"
    si = "si"
    d = "d"
    di = "di"
    f = "f"
    fi = "fi"
    e = "e"

    @property
    def index(self) -> int:
        return _INDEX[self.value]

    @property
    def bit(self) -> int:
        return 1 << _INDEX[self.value]

    def inverse(self) -> BaseRelation:
        return BaseRelation(_INVERSE_NAME[self.value])

    def __str__(self) -> str:
        return self.value


BASE_RELATIONS = tuple(BaseRelation(n) for n in BASE_NAMES)


# Composition of base relations, row ∘ column, columns in canonical order.
# Checked against an endpoint-placement enumeration in the test suite.
_COMPOSITION_DATA = {
    "b": ("b", "b,bi,m,mi,o,oi,s,si,d,di,f,fi,e", "b", "b,m,o,s,d", "b", "b,m,o,s,d", "b", "b", "b,m,o,s,d", "b", "b,m,o,s,d", "b", "b"),
    "bi": ("b,bi,m,mi,o,oi,s,si,d,di,f,fi,e", "bi", "bi,mi,oi,d,f", "bi", "bi,mi,oi,d,f", "bi", "bi,mi,oi,d,f", "bi", "bi,mi,oi,d,f", "bi", "bi", "bi", "bi"),
    "m": ("b", "bi,mi,oi,si,di", "b", "f,fi,e", "b", "o,s,d", "m", "m", "o,s,d", "b", "o,s,d", "b", "m"),
    "mi": ("b,m,o,di,fi", "bi", "s,si,e", "bi", "oi,d,f", "bi", "oi,d,f", "bi", "oi,d,f", "bi", "mi", "mi", "mi"),
    "o": ("b", "bi,mi,oi,si,di", "b", "oi,si,di", "b,m,o", "o,oi,s,si,d,di,f,fi,e", "o", "o,di,fi", "o,s,d", "b,m,o,di,fi", "o,s,d", "b,m,o", "o"),
    "oi": ("b,m,o,di,fi", "bi", "o,di,fi", "bi", "o,oi,s,si,d,di,f,fi,e", "bi,mi,oi", "oi,d,f", "bi,mi,oi", "oi,d,f", "bi,mi,oi,si,di", "oi", "oi,si,di", "oi"),
    "s": ("b", "bi", "b", "mi", "b,m,o", "oi,d,f", "s", "s,si,e", "d", "b,m,o,di,fi", "d", "b,m,o", "s"),
    "si": ("b,m,o,di,fi", "bi", "o,di,fi", "mi", "o,di,fi", "oi", "s,si,e", "si", "oi,d,f", "di", "oi", "di", "si"),
    "d": ("b", "bi", "b", "bi", "b,m,o,s,d", "bi,mi,oi,d,f", "d", "bi,mi,oi,d,f", "d", "b,bi,m,mi,o,oi,s,si,d,di,f,fi,e", "d", "b,m,o,s,d", "d"),
    "di": ("b,m,o,di,fi", "bi,mi,oi,si,di", "o,di,fi", "oi,si,di", "o,di,fi", "oi,si,di", "o,di,fi", "di", "o,oi,s,si,d,di,f,fi,e", "di", "oi,si,di", "di", "di"),
    "f": ("b", "bi", "m", "bi", "o,s,d", "bi,mi,oi", "d", "bi,mi,oi", "d", "bi,mi,oi,si,di", "f", "f,fi,e", "f"),
    "fi": ("b", "bi,mi,oi,si,di", "m", "oi,si,di", "o", "oi,si,di", "o", "di", "o,s,d", "di", "f,fi,e", "fi", "fi"),
    "e": ("b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "e"),
}


def _names_to_mask(text: str) -> int:
    mask = 0
    for name in text.split(","):
        mask |= 1 << _INDEX[name]
    return mask


# BASE_COMPOSITION[i][j] is the mask of base_i ∘ base_j.
BASE_COMPOSITION: tuple[tuple[int, ...], ...] = tuple(
    tuple(_names_to_mask(cell) for cell in _COMPOSITION_DATA[name]) for name in BASE_NAMES
)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _build_inverse_table() -> tuple[int, ...]:
    base_inv = [_INDEX[_INVERSE_NAME[n]] for n in BASE_NAMES]
    table = []
    for mask in range(ALL_MASK + 1):
        out = 0
        for i in _bits(mask):
            out |= 1 << base_inv[i]
        table.append(out)
    return tuple(table)


INVERSE_MASK = _build_inverse_table()


def invert_mask(mask: int) -> int:
    return INVERSE_MASK[mask]


@lru_cache(maxsize=None)
def compose_mask(t: int, s: int) -> int:
    """Compose two relation masks (union of pairwise base compositions)."""
    out = 0
    for i in _bits(t):
        row = BASE_COMPOSITION[i]
        for j in _bits(s):
            out |= row[j]
            if out == ALL_MASK:
                return out
    return out


class RelationSet:
    """A disjunction of Allen base relations, stored as a canonical mask."""

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if not 0 <= mask <= ALL_MASK:
            raise ValueError(f"relation mask out of range: {mask}")
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("RelationSet is immutable")

    @classmethod
    def of(cls, *relations: BaseRelation | str) -> RelationSet:
        mask = 0
        for r in relations:
            mask |= BaseRelation(r).bit
        return cls(mask)

    @classmethod
    def parse(cls, text: str) -> RelationSet:
        """Parse ``"b,m,o"`` style text. Unknown names raise ``ValueError``."""
        text = text.strip()
        if not text:
            raise ValueError("empty relation")
        mask = 0
        for name in text.split(","):
            name = name.strip()
            if name not in _INDEX:
                raise ValueError(f"unknown relation name {name!r}; expected one of {', '.join(BASE_NAMES)}")
            mask |= 1 << _INDEX[name]
        return cls(mask)

    @classmethod
    def universal(cls) -> RelationSet:
        return cls(ALL_MASK)

    @classmethod
    def empty(cls) -> RelationSet:
        return cls(0)

    def __iter__(self) -> Iterator[BaseRelation]:
        for i in _bits(self.mask):
            yield BASE_RELATIONS[i]

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, r) -> bool:
        return bool(self.mask & BaseRelation(r).bit)

    def __and__(self, other: RelationSet) -> RelationSet:
        return RelationSet(self.mask & other.mask)

    def __or__(self, other: RelationSet) -> RelationSet:
        return RelationSet(self.mask | other.mask)

    def __le__(self, other: RelationSet) -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: RelationSet) -> bool:
        return self <= other and self.mask != other.mask

    def __eq__(self, other) -> bool:
        return isinstance(other, RelationSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(("RelationSet", self.mask))

    def __bool__(self) -> bool:
        return self.mask != 0

    @property
    def is_universal(self) -> bool:
        return self.mask == ALL_MASK

    def names(self) -> list[str]:
        return [BASE_NAMES[i] for i in _bits(self.mask)]

    def __str__(self) -> str:
        return ",".join(self.names())

    def __repr__(self) -> str:
        return f"RelationSet({{{str(self)}}})"


UNIVERSAL = RelationSet(ALL_MASK)


def invert(s: RelationSet) -> RelationSet:
    return RelationSet(INVERSE_MASK[s.mask])


def compose_base(r: BaseRelation | str, s: BaseRelation | str) -> RelationSet:
    return RelationSet(BASE_COMPOSITION[BaseRelation(r).index][BaseRelation(s).index])


def compose_set(t: RelationSet, s: RelationSet) -> RelationSet:
    return RelationSet(compose_mask(t.mask, s.mask))


# --- point algebra ---------------------------------------------------------


class PointRelation(enum.IntFlag):
    """Disjunction over ``<``, ``=``, ``>`` between two time points."""

    LT = 1
    EQ = 2
    GT = 4

    def inverse(self) -> PointRelation:
        out = PointRelation(0)
        if self & PointRelation.LT:
            out |= PointRelation.GT
        if self & PointRelation.GT:
            out |= PointRelation.LT
        if self & PointRelation.EQ:
            out |= PointRelation.EQ
        return out

    @property
    def is_convex(self) -> bool:
        return self != PointRelation.LT | PointRelation.GT

    @property
    def symbol(self) -> str:
        return _POINT_SYMBOLS[int(self)]

    @classmethod
    def parse(cls, text: str) -> PointRelation:
        try:
            return cls(_POINT_FROM_SYMBOL[text])
        except KeyError:
            raise ValueError(f"unknown point relation {text!r}") from None


_POINT_SYMBOLS = {0: "∅", 1: "<", 2: "=", 3: "<=", 4: ">", 5: "<>", 6: ">=", 7: "?"}
_POINT_FROM_SYMBOL = {v: k for k, v in _POINT_SYMBOLS.items()}
_POINT_FROM_SYMBOL["≤"] = 3
_POINT_FROM_SYMBOL["≥"] = 6

LT = PointRelation.LT
EQ = PointRelation.EQ
GT = PointRelation.GT
LE = LT | EQ
GE = GT | EQ
POINT_ALL = LT | EQ | GT
POINT_EMPTY = PointRelation(0)

_POINT_BASE_COMPOSE = {
    (LT, LT): LT, (LT, EQ): LT, (LT, GT): POINT_ALL,
    (EQ, LT): LT, (EQ, EQ): EQ, (EQ, GT): GT,
    (GT, LT): POINT_ALL, (GT, EQ): GT, (GT, GT): GT,
}


def compose_point(p: PointRelation, q: PointRelation) -> PointRelation:
    out = POINT_EMPTY
    for a in (LT, EQ, GT):
        if not p & a:
            continue
        for b in (LT, EQ, GT):
            if q & b:
                out |= _POINT_BASE_COMPOSE[(a, b)]
    return out


class EndpointQuadruple(NamedTuple):
    """Point relations (I_b ? J_b, I_e ? J_e, I_b ? J_e, I_e ? J_b)."""

    r1: PointRelation
    r2: PointRelation
    r3: PointRelation
    r4: PointRelation

    def __le__(self, other: EndpointQuadruple) -> bool:  # type: ignore[override]
        return all(a & ~b == 0 for a, b in zip(self, other))

    def __str__(self) -> str:
        return "(" + ", ".join(PointRelation(r).symbol for r in self) + ")"


_BASE_ENDPOINTS = {
    "b": (LT, LT, LT, LT),
    "bi": (GT, GT, GT, GT),
    "m": (LT, LT, LT, EQ),
    "mi": (GT, GT, EQ, GT),
    "o": (LT, LT, LT, GT),
    "oi": (GT, GT, LT, GT),
    "s": (EQ, LT, LT, GT),
    "si": (EQ, GT, LT, GT),
    "d": (GT, LT, LT, GT),
    "di": (LT, GT, LT, GT),
    "f": (GT, EQ, LT, GT),
    "fi": (LT, EQ, LT, GT),
    "e": (EQ, EQ, LT, GT),
}

BASE_QUADRUPLES: tuple[EndpointQuadruple, ...] = tuple(
    EndpointQuadruple(*_BASE_ENDPOINTS[n]) for n in BASE_NAMES
)


def base_to_endpoints(r: BaseRelation | str) -> EndpointQuadruple:
    return BASE_QUADRUPLES[BaseRelation(r).index]


@lru_cache(maxsize=None)
def mask_to_endpoints(mask: int) -> EndpointQuadruple:
    acc = [0, 0, 0, 0]
    for i in _bits(mask):
        for k, rel in enumerate(BASE_QUADRUPLES[i]):
            acc[k] |= rel
    return EndpointQuadruple(*(PointRelation(a) for a in acc))


def set_to_endpoints(s: RelationSet) -> EndpointQuadruple:
    if not s:
        raise ValueError("cannot project the empty relation onto endpoints")
    return mask_to_endpoints(s.mask)


def endpoints_to_mask(q: Iterable[PointRelation]) -> int:
    q = tuple(q)
    mask = 0
    for i, quad in enumerate(BASE_QUADRUPLES):
        if all(a & ~b == 0 for a, b in zip(quad, q)):
            mask |= 1 << i
    return mask


def endpoints_to_set(q: Iterable[PointRelation]) -> RelationSet:
    """All base relations compatible with ``q``; empty if none is."""
    return RelationSet(endpoints_to_mask(q))


@lru_cache(maxsize=None)
def is_convex_mask(mask: int) -> bool:
    if mask == 0:
        return False
    quad = mask_to_endpoints(mask)
    if any(not PointRelation(r).is_convex for r in quad):
        return False
    return endpoints_to_mask(quad) == mask


def is_convex(s: RelationSet) -> bool:
    if not s:
        raise ValueError("convexity is undefined for the empty relation")
    return is_convex_mask(s.mask)


@lru_cache(maxsize=1)
def _convex_masks() -> tuple[int, ...]:
    return tuple(m for m in range(1, ALL_MASK + 1) if is_convex_mask(m))


def enumerate_convex() -> list[RelationSet]:
    return [RelationSet(m) for m in _convex_masks()]


def relation_between(ib, ie, jb, je) -> BaseRelation:
    """Base relation of [ib, ie] to [jb, je] given concrete endpoint values."""
    if not (ib < ie and jb < je):
        raise ValueError("intervals need begin < end")
    quad = tuple(_cmp(x, y) for x, y in ((ib, jb), (ie, je), (ib, je), (ie, jb)))
    return BASE_RELATIONS[BASE_QUADRUPLES.index(quad)]


def _cmp(x, y) -> PointRelation:
    if x < y:
        return LT
    if x > y:
        return GT
    return EQ

