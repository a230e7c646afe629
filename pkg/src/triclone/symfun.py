"""Symmetric and table representations of zero-annihilating {0,1,2} -> {0,1} functions.

The function universe is R: every function takes values in {0,1} and returns 0
on any tuple containing a 0 component.  A function in R is therefore determined
by its restriction to {1,2}^n, stored here either as a layer vector (symmetric
case: the value depends only on the number of 2s) or as a 2^n-bit truth table.

Periodic layer functions are those whose set of 1-layers is a full residue
class d ≡ d0 (mod t) with d0 <= d <= n.  Their canonical (n, d, t) profile uses
the minimal period t realizing the layer set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm

__all__ = [
    "SymmetricFn",
    "PeriodicProfile",
    "TableFn",
    "DomainError",
    "ParseError",
    "make_periodic",
    "detect_period",
    "eval_symmetric",
    "nset_intersection",
    "to_table",
    "from_table",
    "is_i",
    "i_table",
    "i_symmetric",
    "as_table",
    "intersection_period",
    "parse_function_literal",
    "format_function_literal",
]


class DomainError(ValueError):
    """Invalid argument for a core operation (bad arity, tuple, or parameters)."""


class ParseError(ValueError):
    """Malformed text literal."""


@dataclass(frozen=True)
class SymmetricFn:
    """Symmetric member of R: arity n and a 0/1 layer vector of length n+1.

    ``layers[d]`` is the value on every tuple of {1,2}^n containing exactly
    d twos.  The value on any tuple containing a 0 is 0 and is not stored.
    """

    arity: int
    layers: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"arity must be positive, got {self.arity}")
        if len(self.layers) != self.arity + 1:
            raise DomainError(
                f"layer vector must have length {self.arity + 1}, got {len(self.layers)}"
            )
        if any(v not in (0, 1) for v in self.layers):
            raise DomainError("layer values must be 0 or 1")

    @property
    def layer_set(self) -> frozenset[int]:
        return frozenset(d for d, v in enumerate(self.layers) if v)

    def is_zero(self) -> bool:
        return not any(self.layers)


@dataclass(frozen=True)
class PeriodicProfile:
    """Canonical (n, d, t) description of a periodic symmetric function.

    The 1-layers are exactly {d, d+t, d+2t, ...} ∩ [0, n].  Canonical means t
    is the minimal period realizing that layer set: with two or more layers the
    step is forced, and a single layer {d} has minimal period max(d, n-d)+1.
    """

    n: int
    d: int
    t: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"arity must be positive, got {self.n}")
        if self.t < 1:
            raise DomainError(f"period must be positive, got {self.t}")
        if not 0 <= self.d < self.t:
            raise DomainError(f"offset must satisfy 0 <= d < t, got d={self.d}, t={self.t}")
        if self.d > self.n:
            raise DomainError(f"offset must not exceed arity, got d={self.d}, n={self.n}")
        if not self.is_canonical(self.n, self.d, self.t):
            raise DomainError(
                f"(n={self.n}, d={self.d}, t={self.t}) is not canonical: "
                f"minimal period for this layer set is "
                f"{detect_period(make_periodic(self.n, self.d, self.t)).t}"
            )

    @staticmethod
    def is_canonical(n: int, d: int, t: int) -> bool:
        if d + t <= n:
            return True
        return t == max(d, n - d) + 1

    @property
    def e(self) -> int:
        return self.n - self.d

    @property
    def layer_set(self) -> frozenset[int]:
        return frozenset(range(self.d, self.n + 1, self.t))

    def single_layer(self) -> bool:
        return self.d + self.t > self.n

    def is_i(self) -> bool:
        return self.t == 1

    def has_middle_layer(self) -> bool:
        """Whether some 1-layer d satisfies 0 < d < n."""
        return any(0 < d < self.n for d in self.layer_set)

    def endpoints_in_nset(self) -> bool:
        """Whether both the all-1s and all-2s tuples are 1-points."""
        return self.d == 0 and self.n % self.t == 0

    def to_symmetric(self) -> SymmetricFn:
        return make_periodic(self.n, self.d, self.t)


@dataclass(frozen=True)
class TableFn:
    """General member of R: arity n and a 2^n-bit table over {1,2}^n.

    Bit i holds the value on the tuple whose binary encoding is i, with 1 -> 0,
    2 -> 1 and x_1 the most significant bit.  Values off {1,2}^n are 0.
    """

    arity: int
    bits: int

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"arity must be positive, got {self.arity}")
        if not 0 <= self.bits < (1 << (1 << self.arity)):
            raise DomainError(f"table does not fit 2^{self.arity} bits")

    def value(self, tpl: tuple[int, ...]) -> int:
        if len(tpl) != self.arity:
            raise DomainError(f"expected {self.arity} components, got {len(tpl)}")
        idx = 0
        for a in tpl:
            if a == 0:
                return 0
            if a not in (1, 2):
                raise DomainError(f"tuple components must be in {{0,1,2}}, got {a}")
            idx = (idx << 1) | (a - 1)
        return (self.bits >> idx) & 1

    def is_zero(self) -> bool:
        return self.bits == 0


def make_periodic(n: int, d: int, t: int) -> SymmetricFn:
    """Layer function with 1-layers {d, d+t, d+2t, ...} up to n.

    Requires 0 <= d < t and d <= n; t need not be the minimal period of the
    resulting layer set.
    """
    if n < 1:
        raise DomainError(f"arity must be positive, got {n}")
    if t < 1:
        raise DomainError(f"period must be positive, got {t}")
    if d >= t:
        raise DomainError(f"offset must be smaller than period, got d={d}, t={t}")
    if d < 0 or d > n:
        raise DomainError(f"offset must satisfy 0 <= d <= n, got d={d}, n={n}")
    layers = [0] * (n + 1)
    for pos in range(d, n + 1, t):
        layers[pos] = 1
    return SymmetricFn(n, tuple(layers))


def detect_period(f: SymmetricFn) -> PeriodicProfile | None:
    """Minimal-period profile of f, or None if f is zero or not periodic.

    Not periodic means the 1-layer set is not a full residue class
    d ≡ d0 (mod t) over d0 <= d <= n for any valid (d0, t).
    """
    present = sorted(f.layer_set)
    if not present:
        return None
    d0 = present[0]
    n = f.arity
    for t in range(d0 + 1, max(d0, n - d0) + 2):
        if list(range(d0, n + 1, t)) == present:
            return PeriodicProfile(n, d0, t)
    return None


def eval_symmetric(f: SymmetricFn, tpl: tuple[int, ...]) -> int:
    """Value of f on a tuple over {0,1,2}: 0 if any component is 0, else the
    layer value at the tuple's count of 2s."""
    if len(tpl) != f.arity:
        raise DomainError(f"expected {f.arity} components, got {len(tpl)}")
    twos = 0
    for a in tpl:
        if a == 0:
            return 0
        if a == 2:
            twos += 1
        elif a != 1:
            raise DomainError(f"tuple components must be in {{0,1,2}}, got {a}")
    return f.layers[twos]


def nset_intersection(fs: list[SymmetricFn]) -> tuple[SymmetricFn, PeriodicProfile] | None:
    """Layerwise intersection of offset-0 periodic functions of equal arity.

    Every input must detect as periodic with d = 0.  Returns the intersection
    together with its canonical profile; the profile's period equals the lcm of
    the input periods whenever the lcm is still realizable within the arity
    (otherwise the layer set collapses to {0} and the minimal period is n+1).
    Returns None only for a zero intersection, which cannot occur on valid
    input since layer 0 is shared.
    """
    if not fs:
        raise DomainError("need at least one function")
    n = fs[0].arity
    periods = []
    for f in fs:
        if f.arity != n:
            raise DomainError(f"arity mismatch: {f.arity} != {n}")
        prof = detect_period(f)
        if prof is None:
            raise DomainError("input is not periodic")
        if prof.d != 0:
            raise DomainError(f"input must have offset 0, got d={prof.d}")
        periods.append(prof.t)
    layers = tuple(
        1 if all(f.layers[d] for f in fs) else 0 for d in range(n + 1)
    )
    h = SymmetricFn(n, layers)
    if h.is_zero():
        return None
    prof = detect_period(h)
    assert prof is not None, "intersection of residue classes is a residue class"
    return h, prof


def intersection_period(periods: list[int]) -> int:
    """lcm of the input periods: the period law for offset-0 intersections."""
    return lcm(*periods)


def to_table(f: SymmetricFn) -> TableFn:
    bits = 0
    for idx in range(1 << f.arity):
        if f.layers[idx.bit_count()]:
            bits |= 1 << idx
    return TableFn(f.arity, bits)


def from_table(g: TableFn) -> SymmetricFn | None:
    """Symmetric form of g, or None if some layer is non-constant."""
    layers = [None] * (g.arity + 1)
    for idx in range(1 << g.arity):
        d = idx.bit_count()
        v = (g.bits >> idx) & 1
        if layers[d] is None:
            layers[d] = v
        elif layers[d] != v:
            return None
    return SymmetricFn(g.arity, tuple(layers))


def is_i(f: SymmetricFn | TableFn) -> bool:
    """Whether N_f is all of {1,2}^n."""
    if isinstance(f, SymmetricFn):
        return all(f.layers)
    return f.bits == (1 << (1 << f.arity)) - 1


def i_table(n: int) -> TableFn:
    return TableFn(n, (1 << (1 << n)) - 1)


def i_symmetric(n: int) -> SymmetricFn:
    return SymmetricFn(n, (1,) * (n + 1))


# --- text literals -----------------------------------------------------------
#
#   sym n=<N> layers=<d1,d2,...>      (layers= empty for the zero function)
#   periodic n=<N> d=<D> t=<T>
#   table n=<N> bits=<hex>

_LITERAL_RE = re.compile(r"^\s*(sym|periodic|table)\s+(.*?)\s*$")


def _parse_fields(body: str, keys: tuple[str, ...]) -> dict[str, str]:
    fields = {}
    for part in body.split():
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        if k not in keys:
            raise ParseError(f"unknown field {k!r}")
        if k in fields:
            raise ParseError(f"duplicate field {k!r}")
        fields[k] = v
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")
    return fields


def _parse_int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {s!r}") from None


def parse_function_literal(text: str) -> SymmetricFn | TableFn:
    m = _LITERAL_RE.match(text)
    if not m:
        raise ParseError(f"unrecognized function literal: {text!r}")
    kind, body = m.groups()
    try:
        if kind == "periodic":
            f = _parse_fields(body, ("n", "d", "t"))
            return make_periodic(
                _parse_int(f["n"], "n"), _parse_int(f["d"], "d"), _parse_int(f["t"], "t")
            )
        if kind == "sym":
            f = _parse_fields(body, ("n", "layers"))
            n = _parse_int(f["n"], "n")
            spec = f["layers"]
            positions = [] if spec == "" else [_parse_int(p, "layer") for p in spec.split(",")]
            layers = [0] * (n + 1)
            for p in positions:
                if not 0 <= p <= n:
                    raise ParseError(f"layer {p} out of range 0..{n}")
                layers[p] = 1
            return SymmetricFn(n, tuple(layers))
        f = _parse_fields(body, ("n", "bits"))
        n = _parse_int(f["n"], "n")
        try:
            bits = int(f["bits"], 16)
        except ValueError:
            raise ParseError(f"bits must be hex, got {f['bits']!r}") from None
        return TableFn(n, bits)
    except DomainError as e:
        raise ParseError(str(e)) from None


def format_function_literal(f: SymmetricFn | TableFn) -> str:
    if isinstance(f, SymmetricFn):
        prof = detect_period(f)
        if prof is not None:
            return f"periodic n={prof.n} d={prof.d} t={prof.t}"
        positions = ",".join(str(d) for d in sorted(f.layer_set))
        return f"sym n={f.arity} layers={positions}"
    width = max(1, (1 << f.arity) // 4 + (1 if (1 << f.arity) % 4 else 0))
    return f"table n={f.arity} bits={f.bits:0{width}x}"


def as_table(f: SymmetricFn | TableFn) -> TableFn:
    return to_table(f) if isinstance(f, SymmetricFn) else f
