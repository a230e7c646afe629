"""Arithmetic decision procedures for membership in single-generator classes.

For periodic symmetric f (period > 1, at least two 1-layers) and periodic
symmetric g, membership of f in [{g}] and in [{g} ∪ I] reduces to divisibility
conditions on the profiles.  Which condition set applies depends on whether
both the all-1s and all-2s tuples are 1-points of g:

- branch "L2" (both endpoints): f ∈ [{g}] iff f ∈ [{g} ∪ I] iff d_f = 0,
  t_g/t_f integral and m >= (t_g/t_f)·n;
- branches "L1-item1"/"L1-item2" (otherwise): t = t_g/t_f must be integral,
  t·gcd(d_f, t_f) must divide d_g, and some multiplier q with 0 < q < t_g,
  q·d_f ≡ d_g (mod t_g), q·d_f >= d_g and t | q must satisfy the size
  equation m = q·n + s·t_g (plain) or m >= q·n (with indicators).

Those conditions presuppose that N_f contains a middle layer (some 1-layer d
with 0 < d < n).  The remaining targets are the all-equal functions
(d_f = 0, t_f = n, 1-layers exactly {0, n}), for which the divisibility
conditions are wrong in both directions; they get a branch of their own:

- branch "EQ": the all-equal target lies in [{g}] iff d_g = 0, t_g >= 2 and
  t_g divides m (the innermost application of any realizing formula has pure
  variable arguments, so its value at the all-2s point forces t_g | m, and at
  the all-1s point forces d_g = 0; conversely g(x1, x2, ..., x2) realizes
  the binary all-equal function and conjunction chains of it, available from
  g itself since d_g = 0, give every arity).  With indicators the slot count
  relaxes: membership in [{g} ∪ I] iff d_g = 0 and 2 <= t_g <= m.

Every "yes" on a divisibility branch carries a certificate replaying the matched
equations ("EQ" verdicts restate their structural conditions instead); "no"
carries the first failing condition.  When the hypotheses do not hold
(period 1, or a single 1-layer) the criteria report inapplicability instead
of guessing; callers fall back to the closure oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .config import Caps, DEFAULT_CAPS
from .closure import member_oracle
from .symfun import DomainError, PeriodicProfile, i_table

__all__ = [
    "MembershipCertificate",
    "MemberVerdict",
    "CriterionInapplicable",
    "member_single",
    "member_single_with_I",
    "verify_certificate",
    "member_psr_with_I",
    "ratio",
    "ratio_exponent",
    "maximal_set",
    "congruent",
    "enumerate_ps_members",
    "canonical_profiles",
]


class CriterionInapplicable(DomainError):
    """The hypotheses of the profile criteria fail for this pair; no claim is made."""


@dataclass(frozen=True)
class MembershipCertificate:
    """Witness values for a "yes": t = t_g/t_f, the multiplier q, the slack
    s with m = q·n + s·t_g (absent for the ∪I variant and on branch L2), and
    k with d_g + k·t_g = q·d_f."""

    t: int
    q: int
    k: int
    s: int | None = None


@dataclass(frozen=True)
class MemberVerdict:
    verdict: str  # "yes" | "no"
    branch: str  # "L1-item1" | "L1-item2" | "L2" | "EQ"
    certificate: MembershipCertificate | None
    reason: str

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def _check_preconditions(f: PeriodicProfile, g: PeriodicProfile) -> None:
    if f.t <= 1:
        raise CriterionInapplicable(f"criterion needs period > 1, f has t={f.t}")
    if f.d + f.t > f.n:
        raise CriterionInapplicable(
            f"criterion needs at least two 1-layers, f=(n={f.n}, d={f.d}, t={f.t}) has one"
        )


def _decide(f: PeriodicProfile, g: PeriodicProfile, with_i: bool) -> MemberVerdict:
    _check_preconditions(f, g)
    n, m = f.n, g.n
    if not f.has_middle_layer():
        # all-equal target: 1-layers exactly {0, n}
        branch = "EQ"
        if g.d != 0:
            return MemberVerdict("no", branch, None, f"d_g={g.d} must be 0")
        if g.t < 2:
            return MemberVerdict("no", branch, None, "g is an indicator")
        if g.t > m:
            return MemberVerdict("no", branch, None, f"g has a single 1-layer (t_g={g.t} > m={m})")
        if not with_i and m % g.t != 0:
            return MemberVerdict(
                "no", branch, None,
                f"m={m} not divisible by t_g={g.t} (needed without indicators)",
            )
        cond = f"d_g=0, 2 <= t_g={g.t} <= m={m}" + ("" if with_i else ", t_g | m")
        return MemberVerdict("yes", branch, None, f"all-equal target: {cond}")
    if g.endpoints_in_nset():
        branch = "L2"
        if f.d != 0:
            return MemberVerdict("no", branch, None, f"d_f={f.d} must be 0")
        if g.t % f.t != 0:
            return MemberVerdict("no", branch, None, f"t_g={g.t} not divisible by t_f={f.t}")
        t = g.t // f.t
        if m < t * n:
            return MemberVerdict("no", branch, None, f"m={m} < (t_g/t_f)*n = {t * n}")
        return MemberVerdict(
            "yes", branch, MembershipCertificate(t=t, q=t, k=0),
            f"d_f=0, t={t}, m={m} >= {t * n}",
        )
    branch = "L1-item2" if with_i else "L1-item1"
    if g.t % f.t != 0:
        return MemberVerdict("no", branch, None, f"t_g={g.t} not divisible by t_f={f.t}")
    t = g.t // f.t
    div = t * gcd(f.d, f.t)
    if g.d % div != 0:
        return MemberVerdict(
            "no", branch, None, f"d_g={g.d} not divisible by t*gcd(d_f,t_f) = {div}"
        )
    admissible = []
    for q in range(1, g.t):
        lhs = q * f.d - g.d
        if lhs < 0 or lhs % g.t != 0:
            continue
        admissible.append(q)
        if q % t != 0:
            continue
        k = lhs // g.t
        if with_i:
            if m >= q * n:
                return MemberVerdict(
                    "yes", branch, MembershipCertificate(t=t, q=q, k=k),
                    f"q={q}, m={m} >= q*n = {q * n}",
                )
        else:
            if m >= q * n and (m - q * n) % g.t == 0:
                s = (m - q * n) // g.t
                return MemberVerdict(
                    "yes", branch, MembershipCertificate(t=t, q=q, k=k, s=s),
                    f"q={q}, m={m} = {q}*{n} + {s}*{g.t}",
                )
    if not admissible:
        reason = f"no q in (0,{g.t}) with q*d_f ≡ d_g (mod t_g) and q*d_f >= d_g"
    else:
        reason = (
            f"no admissible q satisfies divisibility by t={t} and the size "
            f"{'inequality' if with_i else 'equation'} (candidates {admissible})"
        )
    return MemberVerdict("no", branch, None, reason)


def member_single(f: PeriodicProfile, g: PeriodicProfile) -> MemberVerdict:
    """Decide f ∈ [{g}] from the profiles alone."""
    return _decide(f, g, with_i=False)


def member_single_with_I(f: PeriodicProfile, g: PeriodicProfile) -> MemberVerdict:
    """Decide f ∈ [{g} ∪ I] from the profiles alone."""
    return _decide(f, g, with_i=True)


def verify_certificate(
    f: PeriodicProfile, g: PeriodicProfile, verdict: MemberVerdict
) -> bool:
    """Re-derive a "yes" by plugging the certificate back into the matched
    branch's equations."""
    if verdict.verdict != "yes":
        return False
    n, m = f.n, g.n
    if verdict.branch == "EQ":
        if f.has_middle_layer() or verdict.certificate is not None:
            return False
        ok = g.d == 0 and 2 <= g.t <= m
        if "t_g | m" in verdict.reason:
            ok = ok and m % g.t == 0
        return ok
    if verdict.certificate is None:
        return False
    c = verdict.certificate
    if f.t * c.t != g.t:
        return False
    if verdict.branch == "L2":
        return (
            g.endpoints_in_nset()
            and f.d == 0
            and c.q == c.t
            and c.k == 0
            and m >= c.t * n
        )
    if g.endpoints_in_nset():
        return False
    if not 0 < c.q < g.t or c.q % c.t != 0:
        return False
    if g.d % (c.t * gcd(f.d, f.t)) != 0:
        return False
    if g.d + c.k * g.t != c.q * f.d:
        return False
    if verdict.branch == "L1-item1":
        return c.s is not None and c.s >= 0 and m == c.q * n + c.s * g.t
    if verdict.branch == "L1-item2":
        return m >= c.q * n
    return False


def member_psr_with_I(f: PeriodicProfile, r: int) -> bool:
    """Whether f ∈ [PS^r ∪ I]: holds iff r is divisible by the period of f."""
    if r < 1:
        raise DomainError(f"r must be positive, got {r}")
    return r % f.t == 0


def ratio(f: PeriodicProfile) -> int:
    """The classification statistic t_f / gcd(d_f, t_f); gcd(0, t) = t."""
    return f.t // gcd(f.d, f.t)


def ratio_exponent(f: PeriodicProfile, p: int) -> int:
    """Exponent e with ratio(f) = p^e; raises if the ratio is not a p-power."""
    r = ratio(f)
    e = 0
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise DomainError(f"ratio {ratio(f)} is not a power of {p}")
    return e


def congruent(f: PeriodicProfile, g: PeriodicProfile) -> bool:
    """Congruence (equality up to variable renaming) of symmetric functions
    coincides with equality of canonical profiles."""
    return f == g


def generates_with_I(f: PeriodicProfile, g: PeriodicProfile) -> bool:
    """f ∈ [{g} ∪ I], with indicator members settled by indicator theory:
    an indicator is always generated, and generates only indicators."""
    if f.is_i():
        return True
    if g.is_i():
        return False
    return bool(member_single_with_I(f, g))


def maximal_set(profiles: list[PeriodicProfile]) -> list[PeriodicProfile]:
    """Members g such that every g' generating g (with indicators) is generated
    back: the maximal class of the generation preorder."""
    out = []
    for g in profiles:
        if all(
            generates_with_I(gp, g)
            for gp in profiles
            if generates_with_I(g, gp)
        ):
            out.append(g)
    return out


def canonical_profiles(m: int) -> list[PeriodicProfile]:
    """All canonical periodic profiles of arity m."""
    out = []
    for t in range(1, m + 2):
        for d in range(0, min(t, m + 1)):
            if PeriodicProfile.is_canonical(m, d, t):
                out.append(PeriodicProfile(m, d, t))
    return out


def enumerate_ps_members(
    g: PeriodicProfile, max_arity: int, caps: Caps = DEFAULT_CAPS, with_i: bool = False
) -> list[PeriodicProfile]:
    """Periodic symmetric members of [{g}] (or [{g} ∪ I]) with arity up to
    max_arity, decided by the criteria where applicable and by the closure
    oracle otherwise.  Terminates: the candidate space is finite."""
    gens = [g.to_symmetric()]
    if with_i:
        gens.append(i_table(2))
    found = []
    for n in range(1, max_arity + 1):
        for f in canonical_profiles(n):
            if with_i and f.is_i():
                verdict = True
            else:
                try:
                    verdict = _decide(f, g, with_i).verdict == "yes"
                except CriterionInapplicable:
                    verdict = bool(member_oracle(f.to_symmetric(), gens, caps))
            if verdict:
                found.append(f)
    return found
