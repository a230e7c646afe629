"""Generator-family descriptors over a single prime and basis classification.

A family is a finite list of canonical profiles plus parametric sequences,
all with p-power periods:

    t(k) = p^(a + b*k)
    d(k) = 0  or  c * p^(g + e*k)   with c coprime to p
    n(k) = u + v*k + w * p^(a + b*k) + y * p^(g + e*k)

(the optional y-term reuses the d-growth power so arities can track d exactly,
e.g. n = d + t puts every profile on the two-layer canonical boundary).

The classification statistic of a member is ratio = t / gcd(d, t); for a
valid sequence its p-exponent is the affine form (a - g) + (b - e)*k when
d != 0 (never clamped, since d < t forces g + e*k < a + b*k) and 0 when
d = 0.  The generated class has

- a finite basis iff the family describes finitely many non-indicator
  functions (no contributing sequences),
- no basis iff some ratio exponent is attained infinitely often (a
  contributing sequence with constant exponent, the d = 0 case included),
- a countably infinite basis otherwise.

Sequence invariants (d < t, d <= n, n strictly increasing, canonicality of
the described profiles, congruence-freedom) are verified exactly on a prefix
and certified for the tail by an eventual-sign analysis of the closed forms;
when the tail cannot be certified the validation report says so explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import Caps, DEFAULT_CAPS
from .closure import member_oracle
from .criteria import (
    CriterionInapplicable,
    maximal_set,
    member_single,
    member_single_with_I,
    ratio_exponent,
)
from .formulas import Formula
from .symfun import DomainError, PeriodicProfile

__all__ = [
    "SequenceSpec",
    "FamilyDescriptor",
    "ValidationError",
    "ValidationReport",
    "BasisClassification",
    "classify",
    "classify_d0_infinite",
    "extract_finite_basis",
    "BasisExtraction",
    "is_in_PSbracket",
    "is_prime",
    "validate",
    "descriptor_from_dict",
    "descriptor_to_dict",
    "load_descriptor",
]

PREFIX_BOUND = 64
RHO_PREFIX = 20


class ValidationError(ValueError):
    """The descriptor violates a family invariant."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


# --- eventual-sign analysis ----------------------------------------------------


@dataclass
class _ExpExpr:
    """Integer expression  sum_r C_r * (p^r)^k  +  v*k + u  (rates r >= 1)."""

    p: int
    terms: dict[int, int]
    v: int = 0
    u: int = 0

    @classmethod
    def const(cls, p: int, u: int) -> "_ExpExpr":
        return cls(p, {}, 0, u)

    @classmethod
    def power(cls, p: int, coef: int, base: int, rate: int) -> "_ExpExpr":
        """coef * p^(base + rate*k)."""
        if rate == 0 or coef == 0:
            return cls(p, {}, 0, coef * p**base)
        return cls(p, {rate: coef * p**base}, 0, 0)

    @classmethod
    def linear(cls, p: int, v: int, u: int) -> "_ExpExpr":
        return cls(p, {}, v, u)

    def plus(self, other: "_ExpExpr") -> "_ExpExpr":
        terms = dict(self.terms)
        for r, c in other.terms.items():
            terms[r] = terms.get(r, 0) + c
        return _ExpExpr(self.p, {r: c for r, c in terms.items() if c}, self.v + other.v, self.u + other.u)

    def minus(self, other: "_ExpExpr") -> "_ExpExpr":
        return self.plus(_ExpExpr(other.p, {r: -c for r, c in other.terms.items()}, -other.v, -other.u))

    def value(self, k: int) -> int:
        return (
            sum(c * (self.p**r) ** k for r, c in self.terms.items())
            + self.v * k
            + self.u
        )

    def is_zero(self) -> bool:
        return not self.terms and self.v == 0 and self.u == 0

    def eventual_sign(self, scan_limit: int = 512) -> tuple[int, int] | None:
        """(sign, K) with sign(E(k)) = sign for all k >= K, or None if the
        dominance bound is not found within the scan limit.

        The certificate is the geometric-domination invariant: once the
        dominant term T(k) satisfies T(k) >= 2*S(k) + 2|v| and T(k) >= 8|v|
        (S = sum of magnitudes of all other contributions), it keeps
        dominating because every other growth factor is at most half of the
        dominant one.
        """
        if not self.terms:
            if self.v != 0:
                sign = 1 if self.v > 0 else -1
                # |v*k| > |u| from K on
                k0 = max(0, (abs(self.u) // abs(self.v)) + 1)
                return sign, k0
            if self.u == 0:
                return 0, 0
            return (1 if self.u > 0 else -1), 0
        rmax = max(self.terms)
        cstar = self.terms[rmax]
        sign = 1 if cstar > 0 else -1
        bstar = self.p**rmax
        absv = abs(self.v)
        for k in range(scan_limit):
            t_dom = abs(cstar) * bstar**k
            rest = sum(
                abs(c) * (self.p**r) ** k for r, c in self.terms.items() if r != rmax
            )
            s_k = rest + absv * k + abs(self.u)
            if t_dom >= 2 * s_k + 2 * absv and t_dom >= 8 * absv:
                return sign, k
        return None


# --- descriptors ---------------------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    """One parametric sequence of profiles, indexed by k = 0, 1, 2, ..."""

    a: int
    b: int
    d: tuple[int, int, int] | None  # (c, g, e) for c*p^(g+e*k); None for d = 0
    u: int
    v: int
    w: int
    y: int = 0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValidationError("t_exp coefficients must be non-negative")
        if self.d is not None:
            c, g, e = self.d
            if c < 1 or g < 0 or e < 0:
                raise ValidationError("d-form needs c >= 1, g >= 0, e >= 0")
        if self.u < 0 or self.v < 0 or self.w < 0 or self.y < 0:
            raise ValidationError("n-form coefficients must be non-negative")
        if self.y > 0 and self.d is None:
            raise ValidationError("the y-term of n(k) needs a d-form to take its power from")

    def t_exp(self, k: int) -> int:
        return self.a + self.b * k

    def t_value(self, p: int, k: int) -> int:
        return p ** self.t_exp(k)

    def d_value(self, p: int, k: int) -> int:
        if self.d is None:
            return 0
        c, g, e = self.d
        return c * p ** (g + e * k)

    def n_value(self, p: int, k: int) -> int:
        n = self.u + self.v * k + self.w * p ** self.t_exp(k)
        if self.y:
            _, g, e = self.d
            n += self.y * p ** (g + e * k)
        return n

    def profile(self, p: int, k: int) -> PeriodicProfile:
        return PeriodicProfile(self.n_value(p, k), self.d_value(p, k), self.t_value(p, k))

    def is_i_sequence(self) -> bool:
        """Whether every described function is an indicator (period 1)."""
        return self.a == 0 and self.b == 0

    def rho_exponent(self, k: int) -> int:
        """Symbolic p-exponent of ratio(profile(k)) for a validated sequence."""
        if self.d is None:
            return 0
        _, g, e = self.d
        return (self.a - g) + (self.b - e) * k

    def rho_constant(self) -> int | None:
        """The constant exponent value if the exponent does not grow, else None."""
        if self.d is None:
            return 0
        _, g, e = self.d
        if e == self.b:
            return self.a - g
        return None


@dataclass(frozen=True)
class FamilyDescriptor:
    p: int
    finite: tuple[PeriodicProfile, ...]
    sequences: tuple[SequenceSpec, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"p must be prime, got {self.p}")


@dataclass
class ValidationReport:
    ok: bool
    issues: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    prefix_bound: int = PREFIX_BOUND


def _seq_exprs(seq: SequenceSpec, p: int) -> tuple[_ExpExpr, _ExpExpr, _ExpExpr]:
    t = _ExpExpr.power(p, 1, seq.a, seq.b)
    if seq.d is None:
        d = _ExpExpr.const(p, 0)
    else:
        c, g, e = seq.d
        d = _ExpExpr.power(p, c, g, e)
    n = _ExpExpr.linear(p, seq.v, seq.u).plus(_ExpExpr.power(p, seq.w, seq.a, seq.b))
    if seq.y:
        _, g, e = seq.d
        n = n.plus(_ExpExpr.power(p, seq.y, g, e))
    return t, d, n


def _check_eventually_nonneg(
    expr: _ExpExpr, what: str, report: ValidationReport, prefix: int
) -> None:
    for k in range(prefix + 1):
        if expr.value(k) < 0:
            report.issues.append(f"{what} fails at k={k}")
            return
    ev = expr.eventual_sign()
    if ev is None:
        report.notes.append(f"{what}: tail not certified, prefix-verified to k={prefix}")
        return
    sign, k0 = ev
    if sign < 0:
        report.issues.append(f"{what} fails for all k >= {k0}")
        return
    for k in range(prefix + 1, k0):
        if expr.value(k) < 0:
            report.issues.append(f"{what} fails at k={k}")
            return


def _check_canonical_tail(
    seq: SequenceSpec, p: int, report: ValidationReport, prefix: int
) -> None:
    """Described profiles must be canonical: multi-layer, or single-layer with
    t = max(d, n-d) + 1."""
    t, d, n = _seq_exprs(seq, p)
    for k in range(prefix + 1):
        nk, dk, tk = n.value(k), d.value(k), t.value(k)
        if not (0 <= dk < tk and dk <= nk):
            return  # already reported by the order checks
        if not PeriodicProfile.is_canonical(nk, dk, tk):
            report.issues.append(
                f"profile at k={k} is (n={nk}, d={dk}, t={tk}), not canonical: "
                "described period is not the minimal one"
            )
            return
    multi = n.minus(d).minus(t)  # >= 0 iff at least two 1-layers
    ev = multi.eventual_sign()
    if ev is None:
        report.notes.append(
            f"canonicality: tail not certified, prefix-verified to k={prefix}"
        )
        return
    sign, k0 = ev
    gap_end = k0
    if sign < 0:
        # single-layer tail: need t == max(d, n-d) + 1 identically for large k
        side = n.minus(d).minus(d).eventual_sign()  # sign of (n-d) - d
        if side is None:
            report.notes.append("canonicality: single-layer tail side not certified")
            return
        gap_end = max(k0, side[1])
        if side[0] >= 0:
            want = t.minus(n.minus(d)).minus(_ExpExpr.const(p, 1))
        else:
            want = t.minus(d).minus(_ExpExpr.const(p, 1))
        if not want.is_zero():
            report.issues.append(
                "sequence describes single-layer profiles whose period is not "
                "the canonical one for all large k"
            )
            return
    for k in range(prefix + 1, gap_end):
        nk, dk, tk = n.value(k), d.value(k), t.value(k)
        if not PeriodicProfile.is_canonical(nk, dk, tk):
            report.issues.append(f"profile at k={k} is not canonical")
            return


def validate(desc: FamilyDescriptor, prefix: int = PREFIX_BOUND) -> ValidationReport:
    """Check all family invariants; issues are fatal, notes are caveats."""
    report = ValidationReport(ok=True, prefix_bound=prefix)
    p = desc.p
    for idx, prof in enumerate(desc.finite):
        if not is_in_PSbracket(prof, [p]):
            report.issues.append(
                f"finite[{idx}]: period {prof.t} is not a power of {p}"
            )
    for sidx, seq in enumerate(desc.sequences):
        t, d, n = _seq_exprs(seq, p)
        label = f"sequence[{sidx}]"
        if seq.d is not None:
            c, g, e = seq.d
            if c % p == 0:
                report.issues.append(f"{label}: c={c} must be coprime to p={p}")
                continue
        before = len(report.issues)
        _check_eventually_nonneg(
            t.minus(d).minus(_ExpExpr.const(p, 1)), f"{label}: d(k) < t(k)", report, prefix
        )
        _check_eventually_nonneg(n.minus(d), f"{label}: d(k) <= n(k)", report, prefix)
        _check_eventually_nonneg(
            n.minus(_ExpExpr.const(p, 1)), f"{label}: n(k) >= 1", report, prefix
        )
        growth = _ExpExpr.linear(p, 0, seq.v).plus(
            _ExpExpr.power(p, seq.w * (p**seq.b - 1), seq.a, seq.b)
            if seq.b >= 1
            else _ExpExpr.const(p, 0)
        )
        if seq.y:
            _, gd, ed = seq.d
            if ed >= 1:
                growth = growth.plus(_ExpExpr.power(p, seq.y * (p**ed - 1), gd, ed))
        _check_eventually_nonneg(
            growth.minus(_ExpExpr.const(p, 1)),
            f"{label}: n(k) strictly increasing",
            report,
            prefix,
        )
        if len(report.issues) == before:
            ncanon = len(report.issues)
            _check_canonical_tail(seq, p, report, prefix)
            for i in range(ncanon, len(report.issues)):
                report.issues[i] = f"{label}: {report.issues[i]}"
    # congruence freedom: exact on the finite part and sequence prefixes
    if not report.issues:
        seen: dict[PeriodicProfile, str] = {}
        for idx, prof in enumerate(desc.finite):
            where = f"finite[{idx}]"
            if prof in seen:
                report.issues.append(f"{where} congruent to {seen[prof]}")
            seen[prof] = where
        for sidx, seq in enumerate(desc.sequences):
            for k in range(prefix + 1):
                try:
                    prof = seq.profile(p, k)
                except DomainError:
                    break
                where = f"sequence[{sidx}] at k={k}"
                if prof in seen:
                    report.issues.append(f"{where} congruent to {seen[prof]}")
                    break
                seen[prof] = where
                if k <= RHO_PREFIX:
                    if ratio_exponent(prof, p) != seq.rho_exponent(k):
                        report.issues.append(
                            f"{where}: symbolic ratio exponent {seq.rho_exponent(k)} "
                            f"disagrees with the numeric value"
                        )
                        break
        for sidx, seq in enumerate(desc.sequences):
            for tidx, other in enumerate(desc.sequences[sidx + 1 :], start=sidx + 1):
                if seq == other:
                    report.issues.append(
                        f"sequence[{sidx}] and sequence[{tidx}] are identical"
                    )
    report.ok = not report.issues
    return report


# --- classification ------------------------------------------------------------


@dataclass
class BasisClassification:
    verdict: str  # "FiniteBasis" | "CountableBasis" | "NoBasis"
    witness: dict
    rho_analysis: list[dict]
    validation: ValidationReport


def _sequence_rho_summary(seq: SequenceSpec, idx: int) -> dict:
    if seq.is_i_sequence():
        return {"sequence": idx, "kind": "indicators", "rho_exponent": None}
    const = seq.rho_constant()
    if const is not None:
        return {"sequence": idx, "kind": "constant", "rho_exponent": const}
    _, g, e = seq.d if seq.d is not None else (0, 0, 0)
    return {
        "sequence": idx,
        "kind": "increasing",
        "rho_exponent": f"{seq.a - g} + {seq.b - e}*k",
    }


def classify(desc: FamilyDescriptor, prefix: int = PREFIX_BOUND) -> BasisClassification:
    """Trichotomy verdict for the class generated by the described family."""
    report = validate(desc, prefix)
    if not report.ok:
        raise ValidationError("; ".join(report.issues))
    analysis = [_sequence_rho_summary(s, i) for i, s in enumerate(desc.sequences)]
    contributing = [
        (i, s) for i, s in enumerate(desc.sequences) if not s.is_i_sequence()
    ]
    for i, s in contributing:
        const = s.rho_constant()
        if const is not None:
            return BasisClassification(
                "NoBasis",
                {
                    "exponent": const,
                    "sequence": i,
                    "reason": f"ratio p^{const} attained by every member of sequence {i}",
                },
                analysis,
                report,
            )
    if not contributing:
        non_i = [f for f in desc.finite if not f.is_i()]
        return BasisClassification(
            "FiniteBasis",
            {"non_indicator_generators": len(non_i)},
            analysis,
            report,
        )
    witness = {
        "reason": "every ratio class is finite; the maximal members of the "
        "generation preorder (together with a binary indicator when needed) "
        "form a countable basis",
        "sequences": [i for i, _ in contributing],
    }
    if desc.finite:
        try:
            witness["finite_part_maximal"] = [
                {"n": prof.n, "d": prof.d, "t": prof.t}
                for prof in maximal_set(list(desc.finite))
            ]
        except CriterionInapplicable as exc:
            witness["finite_part_maximal"] = f"not computed: {exc}"
    return BasisClassification("CountableBasis", witness, analysis, report)


def classify_d0_infinite(desc: FamilyDescriptor) -> str:
    """No-basis route for infinite all-offset-0 families containing a member
    whose all-2s point is a 1-point; cross-checks the general classifier."""
    contributing = [s for s in desc.sequences if not s.is_i_sequence()]
    if not contributing:
        raise ValidationError("family is finite; the no-basis route does not apply")
    if any(f.d != 0 for f in desc.finite) or any(s.d is not None for s in desc.sequences):
        raise ValidationError("route requires every member to have offset 0")
    has_endpoint = any(f.endpoints_in_nset() for f in desc.finite)
    if not has_endpoint:
        for s in desc.sequences:
            for k in range(PREFIX_BOUND + 1):
                if s.n_value(desc.p, k) % s.t_value(desc.p, k) == 0:
                    has_endpoint = True
                    break
            if has_endpoint:
                break
    if not has_endpoint:
        raise ValidationError(
            "route requires a member whose all-2s tuple is a 1-point"
        )
    verdict = classify(desc).verdict
    assert verdict == "NoBasis", "offset-0 infinite families have constant ratio 1"
    return verdict


# --- finite basis extraction -----------------------------------------------------


@dataclass
class BasisExtraction:
    basis: list[PeriodicProfile]
    removed: list[tuple[PeriodicProfile, str, Formula | None]]
    undecided: list[tuple[PeriodicProfile, str]]


def _indicators_available(rest: list[PeriodicProfile]) -> PeriodicProfile | None:
    """A member h of rest with I ⊆ [{h}], if any: an indicator of arity >= 2,
    or any h whose 1-points include both constant tuples."""
    for h in rest:
        if h.is_i() and h.n >= 2:
            return h
        if not h.is_i() and h.endpoints_in_nset():
            return h
    return None


def extract_finite_basis(
    profiles: list[PeriodicProfile], caps: Caps = DEFAULT_CAPS, p: int | None = None
) -> BasisExtraction:
    """Greedy removal of generators derivable from the rest.

    A removal is justified by the single-generator criteria (optionally with
    indicators when some retained member generates all of I) or by the closure
    oracle within caps; members that neither route can settle are kept and
    reported as undecided, never guessed.  Passing a prime p additionally
    requires every period to be a power of p.
    """
    if len(set(profiles)) != len(profiles):
        raise ValidationError("family contains congruent functions")
    if p is not None:
        for prof in profiles:
            if not is_in_PSbracket(prof, [p]):
                raise ValidationError(f"period {prof.t} of {prof} is not a power of {p}")
    current = sorted(profiles, key=lambda f: (f.n, f.t, f.d))
    removed: list[tuple[PeriodicProfile, str, Formula | None]] = []
    undecided: dict[PeriodicProfile, str] = {}

    def fmt(prof: PeriodicProfile) -> str:
        return f"(n={prof.n}, d={prof.d}, t={prof.t})"

    def try_remove(g: PeriodicProfile, rest: list[PeriodicProfile]):
        if not rest:
            return None
        i_provider = _indicators_available(rest)
        if g.is_i():
            if any(h.is_i() and h.n >= 2 for h in rest):
                return "indicator identities", None
            if i_provider is not None:
                return f"indicators generated by {fmt(i_provider)}", None
        else:
            for h in rest:
                try:
                    if member_single(g, h):
                        return f"criteria: derivable from {fmt(h)}", None
                except CriterionInapplicable:
                    pass
            if i_provider is not None:
                for h in rest:
                    try:
                        if member_single_with_I(g, h):
                            return (
                                f"criteria: derivable from {fmt(h)} with indicators, "
                                f"which {fmt(i_provider)} generates",
                                None,
                            )
                    except CriterionInapplicable:
                        pass
        if g.n > caps.max_nvars or any(h.n > caps.max_generator_arity for h in rest):
            undecided[g] = "outside oracle caps and criteria inapplicable or negative"
            return None
        verdict = member_oracle(g.to_symmetric(), [h.to_symmetric() for h in rest], caps)
        if verdict.status == "yes":
            return "oracle", verdict.witness
        if verdict.status == "incomplete":
            undecided[g] = "oracle hit its budget"
        return None

    changed = True
    while changed:
        changed = False
        for g in list(current):
            rest = [h for h in current if h != g]
            just = try_remove(g, rest)
            if just is not None:
                current.remove(g)
                undecided.pop(g, None)
                removed.append((g, just[0], just[1]))
                changed = True
    return BasisExtraction(basis=current, removed=removed, undecided=list(undecided.items()))


def is_in_PSbracket(f: PeriodicProfile, primes: list[int]) -> bool:
    """Whether every prime factor of the period lies in the given list."""
    if len(set(primes)) != len(primes):
        raise DomainError("primes must be distinct")
    for p in primes:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
    t = f.t
    for p in primes:
        while t % p == 0:
            t //= p
    return t == 1


# --- JSON round trip -------------------------------------------------------------


def descriptor_from_dict(payload: dict) -> FamilyDescriptor:
    try:
        p = payload["p"]
        finite = tuple(
            PeriodicProfile(item["n"], item["d"], item["t"])
            for item in payload.get("finite", [])
        )
        sequences = []
        for item in payload.get("sequences", []):
            t_exp = item["t_exp"]
            dpart = item.get("d", 0)
            if dpart == 0 or dpart is None:
                d = None
            else:
                d = (dpart["c"], dpart["g"], dpart["e"])
            npart = item["n"]
            sequences.append(
                SequenceSpec(
                    a=t_exp["a"], b=t_exp["b"], d=d,
                    u=npart["u"], v=npart["v"], w=npart["w"],
                    y=npart.get("y", 0),
                )
            )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed descriptor: {exc}") from None
    except DomainError as exc:
        raise ValidationError(str(exc)) from None
    return FamilyDescriptor(p=p, finite=finite, sequences=tuple(sequences))


def descriptor_to_dict(desc: FamilyDescriptor) -> dict:
    return {
        "p": desc.p,
        "finite": [{"n": f.n, "d": f.d, "t": f.t} for f in desc.finite],
        "sequences": [
            {
                "t_exp": {"a": s.a, "b": s.b},
                "d": 0 if s.d is None else {"c": s.d[0], "g": s.d[1], "e": s.d[2]},
                "n": {"u": s.u, "v": s.v, "w": s.w, **({"y": s.y} if s.y else {})},
            }
            for s in desc.sequences
        ],
    }


def load_descriptor(path: str) -> FamilyDescriptor:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"descriptor is not valid JSON: {exc}") from None
    return descriptor_from_dict(payload)
