"""Formulas over a named signature of R-functions.

A formula is a tree of variable leaves ``x1, x2, ...`` and applications of
named functions; the root must be an application (a bare variable realizes a
projection, which is not an R-function).  Names matching ``i<k>`` are reserved
for the all-ones indicator of arity k and need not appear in the signature.

Text format is an s-expression: ``(g x1 (g x1 x1 x2 x2))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .symfun import (
    DomainError,
    ParseError,
    SymmetricFn,
    TableFn,
    as_table,
    format_function_literal,
    i_table,
    parse_function_literal,
)

__all__ = [
    "Var",
    "App",
    "Formula",
    "Signature",
    "parse_formula",
    "format_formula",
    "parse_signature",
    "format_signature",
    "realize",
    "eval_formula",
    "used_variables",
    "occurrences",
    "subformula_at",
    "replace_at",
    "zero_propagation_check",
    "n_subset_check",
    "theta",
    "theta_occurrences",
    "is_essential",
    "variable_counts",
    "rewrite_i",
    "formula_size",
    "formula_depth",
]

_I_NAME_RE = re.compile(r"^i([1-9][0-9]*)$")


@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class App:
    head: str
    args: tuple["Formula", ...]

    def __post_init__(self):
        if not self.args:
            raise DomainError(f"application of {self.head!r} needs arguments")


Formula = Union[Var, App]


class Signature:
    """Mapping from function names to tables; names i1, i2, ... are implicit."""

    def __init__(self, functions: Mapping[str, SymmetricFn | TableFn] | None = None):
        self._fns: dict[str, TableFn] = {}
        for name, fn in (functions or {}).items():
            self.define(name, fn)

    def define(self, name: str, fn: SymmetricFn | TableFn) -> None:
        if _I_NAME_RE.match(name):
            raise DomainError(f"{name!r} is reserved for the arity-{name[1:]} indicator")
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", name):
            raise DomainError(f"invalid function name {name!r}")
        if name in self._fns:
            raise DomainError(f"duplicate function name {name!r}")
        self._fns[name] = as_table(fn)

    def resolve(self, name: str) -> TableFn:
        m = _I_NAME_RE.match(name)
        if m:
            return i_table(int(m.group(1)))
        try:
            return self._fns[name]
        except KeyError:
            raise DomainError(f"unknown function name {name!r}") from None

    def names(self) -> list[str]:
        return list(self._fns)

    def items(self) -> list[tuple[str, TableFn]]:
        return list(self._fns.items())


def is_i_name(name: str) -> bool:
    return _I_NAME_RE.match(name) is not None


# --- s-expressions -----------------------------------------------------------

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_VAR_RE = re.compile(r"^x([1-9][0-9]*)$")


def parse_formula(text: str) -> Formula:
    tokens = _TOKEN_RE.findall(text)
    if not tokens:
        raise ParseError("empty formula")
    pos = 0

    def node() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of formula")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] in ("(", ")"):
                raise ParseError("expected function name after '('")
            head = tokens[pos]
            pos += 1
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(node())
            if pos >= len(tokens):
                raise ParseError("missing ')'")
            pos += 1
            if not args:
                raise ParseError(f"application of {head!r} needs arguments")
            return App(head, tuple(args))
        if tok == ")":
            raise ParseError("unexpected ')'")
        m = _VAR_RE.match(tok)
        if not m:
            raise ParseError(f"expected variable x<k> or '(', got {tok!r}")
        return Var(int(m.group(1)))

    root = node()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after formula: {' '.join(tokens[pos:])!r}")
    if isinstance(root, Var):
        raise ParseError("a bare variable is not a formula over R")
    return root


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Var):
        return f"x{phi.index}"
    return "(" + " ".join([phi.head] + [format_formula(a) for a in phi.args]) + ")"


def parse_signature(text: str) -> Signature:
    """Signature file: one ``name := <function literal>`` per line; blank lines
    and ``#`` comments allowed."""
    sig = Signature()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":=" not in line:
            raise ParseError(f"line {lineno}: expected 'name := literal'")
        name, literal = (part.strip() for part in line.split(":=", 1))
        try:
            sig.define(name, parse_function_literal(literal))
        except (ParseError, DomainError) as e:
            raise ParseError(f"line {lineno}: {e}") from None
    return sig


def format_signature(sig: Signature) -> str:
    return "\n".join(
        f"{name} := {format_function_literal(fn)}" for name, fn in sig.items()
    )


# --- structure ---------------------------------------------------------------


def formula_size(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 1
    return 1 + sum(formula_size(a) for a in phi.args)


def formula_depth(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 1
    return 1 + max(formula_depth(a) for a in phi.args)


def used_variables(phi: Formula) -> frozenset[int]:
    if isinstance(phi, Var):
        return frozenset((phi.index,))
    out: set[int] = set()
    for a in phi.args:
        out |= used_variables(a)
    return frozenset(out)


def check_well_formed(phi: Formula, sig: Signature, nvars: int) -> None:
    """Raise DomainError on unknown names, arity mismatches, or variables > nvars."""
    if isinstance(phi, Var):
        if phi.index > nvars:
            raise DomainError(f"variable x{phi.index} exceeds nvars={nvars}")
        return
    fn = sig.resolve(phi.head)
    if fn.arity != len(phi.args):
        raise DomainError(
            f"{phi.head!r} has arity {fn.arity}, applied to {len(phi.args)} arguments"
        )
    for a in phi.args:
        check_well_formed(a, sig, nvars)


def occurrences(phi: Formula) -> list[tuple[int, ...]]:
    """Paths (child-index sequences from the root) of all application nodes,
    in preorder; the root occurrence is the empty path."""
    out: list[tuple[int, ...]] = []

    def walk(node: Formula, path: tuple[int, ...]) -> None:
        if isinstance(node, Var):
            return
        out.append(path)
        for i, a in enumerate(node.args):
            walk(a, path + (i,))

    walk(phi, ())
    return out


def subformula_at(phi: Formula, path: tuple[int, ...]) -> Formula:
    node = phi
    for i in path:
        if isinstance(node, Var) or i >= len(node.args):
            raise DomainError(f"invalid occurrence path {path}")
        node = node.args[i]
    return node


def replace_at(phi: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    if not path:
        return new
    if isinstance(phi, Var) or path[0] >= len(phi.args):
        raise DomainError(f"invalid occurrence path {path}")
    i = path[0]
    args = list(phi.args)
    args[i] = replace_at(args[i], path[1:], new)
    return App(phi.head, tuple(args))


# --- evaluation --------------------------------------------------------------


def eval_formula(phi: Formula, sig: Signature, alpha: tuple[int, ...]) -> int:
    """Bottom-up value on a tuple over {0,1,2}; any 0 argument zeroes its head."""
    if isinstance(phi, Var):
        return alpha[phi.index - 1]
    vals = tuple(eval_formula(a, sig, alpha) for a in phi.args)
    if 0 in vals:
        return 0
    fn = sig.resolve(phi.head)
    if fn.arity != len(vals):
        raise DomainError(
            f"{phi.head!r} has arity {fn.arity}, applied to {len(vals)} arguments"
        )
    return fn.value(vals)


def realize(phi: Formula, sig: Signature, nvars: int) -> TableFn:
    """Table over {1,2}^nvars of the function realized by the formula.

    Off-cube values of the realized function are forced to zero only by the
    variables actually occurring in the formula; where that distinction
    matters, pair the table with ``used_variables``.
    """
    if nvars < 1:
        raise DomainError(f"nvars must be positive, got {nvars}")
    check_well_formed(phi, sig, nvars)
    if isinstance(phi, Var):
        raise DomainError("a bare variable is not a formula over R")
    bits = 0
    for idx in range(1 << nvars):
        alpha = tuple(1 + ((idx >> (nvars - 1 - j)) & 1) for j in range(nvars))
        if eval_formula(phi, sig, alpha):
            bits |= 1 << idx
    return TableFn(nvars, bits)


def all_tuples(nvars: int) -> Iterator[tuple[int, ...]]:
    """All of {0,1,2}^nvars, lexicographically."""
    tpl = [0] * nvars
    while True:
        yield tuple(tpl)
        j = nvars - 1
        while j >= 0 and tpl[j] == 2:
            tpl[j] = 0
            j -= 1
        if j < 0:
            return
        tpl[j] += 1


# --- subformula properties ---------------------------------------------------


def zero_propagation_check(
    phi: Formula, path: tuple[int, ...], sig: Signature, alpha: tuple[int, ...]
) -> bool:
    """True iff (subformula value 0 at alpha) implies (whole formula 0 at alpha).

    Guaranteed to hold for every formula over R; exposed as a checkable
    property rather than assumed.
    """
    sub = subformula_at(phi, path)
    if eval_formula(sub, sig, alpha) != 0:
        return True
    return eval_formula(phi, sig, alpha) == 0


def n_subset_check(phi: Formula, path: tuple[int, ...], sig: Signature, nvars: int) -> bool:
    """True iff N of the whole formula is contained in N of the occurrence,
    over all tuples in {0,1,2}^nvars."""
    sub = subformula_at(phi, path)
    for alpha in all_tuples(nvars):
        if eval_formula(phi, sig, alpha) == 1 and eval_formula(sub, sig, alpha) != 1:
            return False
    return True


def is_essential(phi: Formula, path: tuple[int, ...], sig: Signature, nvars: int) -> bool:
    """Whether the occurrence realizes something other than the all-ones
    indicator of its own variables."""
    sub = subformula_at(phi, path)
    table = realize(sub, sig, nvars)
    return table.bits != (1 << (1 << nvars)) - 1


def variable_counts(phi: Formula, path: tuple[int, ...], nvars: int) -> tuple[int, ...]:
    """Occurrence counts q_1..q_nvars of each variable inside the arguments of
    the application at ``path`` (nested occurrences included)."""
    sub = subformula_at(phi, path)
    if isinstance(sub, Var):
        raise DomainError("occurrence is not an application")
    counts = [0] * nvars

    def walk(node: Formula) -> None:
        if isinstance(node, Var):
            counts[node.index - 1] += 1
            return
        for a in node.args:
            walk(a)

    for a in sub.args:
        walk(a)
    return tuple(counts)


def theta_occurrences(
    phi: Formula, sig: Signature, nvars: int
) -> list[tuple[tuple[int, ...], str]]:
    """Occurrences whose replacement by the matching indicator changes the
    realized function, as (path, head name) pairs in preorder."""
    base = realize(phi, sig, nvars)
    out = []
    for path in occurrences(phi):
        sub = subformula_at(phi, path)
        m = len(sub.args)
        replaced = replace_at(phi, path, App(f"i{m}", sub.args))
        if realize(replaced, sig, nvars).bits != base.bits:
            out.append((path, sub.head))
    return out


def theta(phi: Formula, sig: Signature, nvars: int) -> set[TableFn]:
    """Head functions of replacement-sensitive occurrences, deduplicated by
    function table."""
    return {sig.resolve(head) for _, head in theta_occurrences(phi, sig, nvars)}


# --- indicator identities ----------------------------------------------------


def rewrite_i(phi: Formula) -> Formula:
    """Normalize indicator applications: flatten an i-node directly under an
    i-node (in any argument position) and collapse duplicate arguments of an
    i-node.  The realized function is unchanged; non-i applications are left
    intact apart from rewriting inside their arguments."""
    if isinstance(phi, Var):
        return phi
    args = tuple(rewrite_i(a) for a in phi.args)
    if not is_i_name(phi.head):
        return App(phi.head, args)
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, App) and is_i_name(a.head):
            flat.extend(a.args)
        else:
            flat.append(a)
    seen: list[Formula] = []
    for a in flat:
        if a not in seen:
            seen.append(a)
    return App(f"i{len(seen)}", tuple(seen))
