"""Exact closure of a generator set under formula composition, with witnesses.

``close(G, nvars)`` computes every function on x_1..x_nvars realizable by a
formula over G, by fixpoint iteration: each round composes every generator
with argument vectors drawn from variables and previously derived functions.

A derived function is identified by its {1,2}^nvars table *and* the set of
variables the realizing formula uses: a formula omitting x_j realizes a
function that is not forced to 0 when x_j = 0, so two formulas with equal
cube tables but different supports realize different functions.  Membership
of an R-function f therefore requires a full-support entry with f's table
(or, for the zero function, any zero entry).

For a symmetric generator the composed table depends only on the pointwise
conjunction of the inner-formula arguments and on how many times each
variable appears, so the enumeration runs over (conjunction state, count
vector) pairs instead of raw argument vectors; this is exact and keeps the
exhaustive verification grids fast.  Non-symmetric generators fall back to
raw argument vectors under an explicit budget; exceeding any budget yields
an "incomplete" status, never a silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .config import Caps, CapExceeded, DEFAULT_CAPS
from .formulas import App, Formula, Signature, Var
from .symfun import DomainError, SymmetricFn, TableFn, as_table, from_table, is_i

__all__ = ["DerivedFn", "ClosureState", "close", "member_oracle", "OracleVerdict"]


@dataclass(frozen=True)
class DerivedFn:
    """One derived function: cube table, used-variable mask, first witness."""

    table: TableFn
    mask: int
    witness: Formula


@dataclass
class ClosureState:
    generators: tuple[TableFn, ...]
    names: tuple[str, ...]
    nvars: int
    caps: Caps
    entries: dict[tuple[int, int], DerivedFn]  # (mask, bits) -> entry, insertion order
    round_sizes: list[int]
    complete: bool

    @property
    def signature(self) -> Signature:
        sig = Signature()
        for name, g in zip(self.names, self.generators):
            if not is_i(g):
                sig.define(name, g)
        return sig

    def lookup(self, f: TableFn) -> DerivedFn | None:
        """Entry realizing f as an R-function of all nvars variables."""
        if f.arity != self.nvars:
            raise DomainError(f"arity mismatch: {f.arity} != nvars {self.nvars}")
        if f.bits == 0:
            return self.entries.get((0, 0))
        return self.entries.get(((1 << self.nvars) - 1, f.bits))

    def full_support_functions(self) -> list[DerivedFn]:
        full = (1 << self.nvars) - 1
        return [e for e in self.entries.values() if e.mask == full or e.table.bits == 0]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Count vectors summing to total, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _generator_names(gens: Sequence[TableFn]) -> tuple[str, ...]:
    return tuple(
        f"i{g.arity}" if is_i(g) else f"g{pos + 1}" for pos, g in enumerate(gens)
    )


class _AndStates:
    """Conjunctions of up to kmax derived functions, with minimal counts.

    State key is (mask, bits); the stored component tuple realizes the
    conjunction with the minimal number of functions (repeats never help).
    """

    def __init__(self, kmax: int):
        self.kmax = kmax
        self.states: dict[tuple[int, int], tuple[int, tuple[DerivedFn, ...]]] = {}
        self._all: list[DerivedFn] = []

    def add_entries(self, new: Sequence[DerivedFn]) -> None:
        queue: list[tuple[tuple[int, int], int, tuple[DerivedFn, ...]]] = []

        def try_add(key, count, comps):
            cur = self.states.get(key)
            if cur is None or count < cur[0]:
                self.states[key] = (count, comps)
                queue.append((key, count, comps))

        for e in new:
            try_add((e.mask, e.table.bits), 1, (e,))
        for e in new:
            for key, (count, comps) in list(self.states.items()):
                if count + 1 <= self.kmax:
                    nk = (key[0] | e.mask, key[1] & e.table.bits)
                    try_add(nk, count + 1, comps + (e,))
        self._all.extend(new)
        while queue:
            key, count, comps = queue.pop()
            if count + 1 > self.kmax:
                continue
            for e in self._all:
                nk = (key[0] | e.mask, key[1] & e.table.bits)
                try_add(nk, count + 1, comps + (e,))

    def items(self) -> list[tuple[tuple[int, int], tuple[int, tuple[DerivedFn, ...]]]]:
        return list(self.states.items())


def close(
    generators: Sequence[SymmetricFn | TableFn],
    nvars: int,
    caps: Caps = DEFAULT_CAPS,
) -> ClosureState:
    """Fixpoint closure of the generators over x_1..x_nvars.

    Raises CapExceeded if nvars or a generator arity exceeds its cap; size and
    enumeration budgets instead mark the returned state incomplete.
    """
    if nvars < 1:
        raise DomainError(f"nvars must be positive, got {nvars}")
    if nvars > caps.max_nvars:
        raise CapExceeded(f"nvars {nvars} exceeds cap {caps.max_nvars}")
    gens = tuple(as_table(g) for g in generators)
    for g in gens:
        if g.arity > caps.max_generator_arity:
            raise CapExceeded(
                f"generator arity {g.arity} exceeds cap {caps.max_generator_arity}"
            )
    names = _generator_names(gens)
    state = ClosureState(
        generators=gens,
        names=names,
        nvars=nvars,
        caps=caps,
        entries={},
        round_sizes=[],
        complete=True,
    )
    if not gens:
        return state

    size = 1 << nvars
    full_bits = (1 << size) - 1
    # zmask[j]: table-index positions where x_{j+1} = 2
    zmask = [0] * nvars
    for idx in range(size):
        for j in range(nvars):
            if (idx >> (nvars - 1 - j)) & 1:
                zmask[j] |= 1 << idx

    sym_layers: list[tuple[int, ...] | None] = []
    for g in gens:
        sym = from_table(g)
        sym_layers.append(sym.layers if sym is not None else None)

    kmax = max(g.arity for g in gens)
    and_states = _AndStates(kmax)

    # laybits cache per generator: count vector -> (bits, varmask)
    laybits: list[dict[tuple[int, ...], tuple[int, int]]] = [dict() for _ in gens]

    def layer_bits(gi: int, cvec: tuple[int, ...]) -> tuple[int, int]:
        cached = laybits[gi].get(cvec)
        if cached is not None:
            return cached
        layers = sym_layers[gi]
        bits = 0
        for idx in range(size):
            d = 0
            for j in range(nvars):
                if cvec[j] and (idx >> (nvars - 1 - j)) & 1:
                    d += cvec[j]
            if layers[d]:
                bits |= 1 << idx
        varmask = 0
        for j in range(nvars):
            if cvec[j]:
                varmask |= 1 << j
        laybits[gi][cvec] = (bits, varmask)
        return bits, varmask

    def var_args(cvec: tuple[int, ...]) -> list[Formula]:
        args: list[Formula] = []
        for j, c in enumerate(cvec):
            args.extend([Var(j + 1)] * c)
        return args

    def general_value_bits(g: TableFn, args: tuple) -> tuple[int, int]:
        """args entries: ('v', j) for x_{j+1} or ('f', DerivedFn)."""
        bits = 0
        mask = 0
        for kind, payload in args:
            if kind == "v":
                mask |= 1 << payload
            else:
                mask |= payload.mask
        m = g.arity
        for idx in range(size):
            gidx = 0
            dead = False
            for kind, payload in args:
                if kind == "v":
                    bit = (idx >> (nvars - 1 - payload)) & 1
                else:
                    if not (payload.table.bits >> idx) & 1:
                        dead = True
                        break
                    bit = 0  # inner value 1 encodes as a 1-component
                gidx = (gidx << 1) | bit
            if dead:
                continue
            rest = m - len(args)
            assert rest == 0
            if (g.bits >> gidx) & 1:
                bits |= 1 << idx
        return bits, mask

    pending: list[DerivedFn] = []

    def submit(bits: int, mask: int, witness_fn) -> bool:
        if bits == 0:
            mask = 0
        key = (mask, bits)
        if key in state.entries:
            return False
        if len(state.entries) >= caps.max_derived:
            state.complete = False
            return False
        entry = DerivedFn(TableFn(nvars, bits), mask, witness_fn())
        state.entries[key] = entry
        pending.append(entry)
        return True

    while True:
        snapshot = list(state.entries.values())
        and_states.add_entries(pending)
        pending = []
        added = False
        for gi, g in enumerate(gens):
            name = names[gi]
            m = g.arity
            if sym_layers[gi] is not None:
                # pure-variable argument vectors
                for cvec in _compositions(m, nvars):
                    bits, varmask = layer_bits(gi, cvec)
                    if submit(bits, varmask, lambda n=name, c=cvec: App(n, tuple(var_args(c)))):
                        added = True
                # mixed: conjunction state in k slots, variables in the rest
                for key, (count, comps) in and_states.items():
                    hmask, hbits = key
                    for v in range(0, m - count + 1):
                        k = m - v
                        for cvec in _compositions(v, nvars):
                            lbits, varmask = layer_bits(gi, cvec)
                            bits = hbits & lbits
                            mask = hmask | varmask

                            def make_witness(n=name, c=cvec, cs=comps, slots=k):
                                inner = [e.witness for e in cs]
                                inner.extend([cs[-1].witness] * (slots - len(cs)))
                                return App(n, tuple(var_args(c)) + tuple(inner))

                            if submit(bits, mask, make_witness):
                                added = True
            else:
                pool: list[tuple] = [("v", j) for j in range(nvars)]
                pool.extend(("f", e) for e in snapshot)
                budget = caps.max_general_args
                n_vectors = len(pool) ** m
                if n_vectors > budget:
                    state.complete = False
                    continue
                for args in product(pool, repeat=m):
                    bits, mask = general_value_bits(g, args)

                    def make_witness(n=name, a=args):
                        parts = tuple(
                            Var(p + 1) if kind == "v" else p.witness for kind, p in a
                        )
                        return App(n, parts)

                    if submit(bits, mask, make_witness):
                        added = True
        state.round_sizes.append(len(state.entries))
        if not added:
            break
        if not state.complete:
            break
    return state


_CLOSURE_CACHE: dict[tuple, ClosureState] = {}
_CLOSURE_CACHE_LIMIT = 256


def close_cached(
    generators: Sequence[SymmetricFn | TableFn],
    nvars: int,
    caps: Caps = DEFAULT_CAPS,
) -> ClosureState:
    gens = tuple(as_table(g) for g in generators)
    key = (tuple((g.arity, g.bits) for g in gens), nvars, caps)
    hit = _CLOSURE_CACHE.get(key)
    if hit is not None:
        return hit
    state = close(gens, nvars, caps)
    if len(_CLOSURE_CACHE) >= _CLOSURE_CACHE_LIMIT:
        _CLOSURE_CACHE.pop(next(iter(_CLOSURE_CACHE)))
    _CLOSURE_CACHE[key] = state
    return state


@dataclass(frozen=True)
class OracleVerdict:
    status: str  # "yes" | "no" | "incomplete"
    witness: Formula | None
    state: ClosureState

    def __bool__(self) -> bool:
        return self.status == "yes"


def member_oracle(
    f: SymmetricFn | TableFn,
    generators: Sequence[SymmetricFn | TableFn],
    caps: Caps = DEFAULT_CAPS,
) -> OracleVerdict:
    """Decide f ∈ [generators] by closing over f's variables.

    "no" is definitive only at a complete fixpoint; under a budget overrun the
    status is "incomplete" unless the function was found before the cap hit.
    """
    target = as_table(f)
    state = close_cached(generators, target.arity, caps)
    entry = state.lookup(target)
    if entry is not None:
        return OracleVerdict("yes", entry.witness, state)
    if not state.complete:
        return OracleVerdict("incomplete", None, state)
    return OracleVerdict("no", None, state)
