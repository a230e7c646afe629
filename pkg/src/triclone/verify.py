"""Seeded verification suites for every module-level invariant.

Each suite is deterministic given its seed, counts the checks it performed,
and collects counterexamples instead of stopping at the first failure.  The
CLI ``verify`` command, the HTTP ``/verify`` endpoint and the acceptance
tests all run these functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import lcm

from .config import Caps, DEFAULT_CAPS
from .closure import close_cached, member_oracle
from .criteria import (
    canonical_profiles,
    member_single,
    member_single_with_I,
    verify_certificate,
)
from .families import (
    FamilyDescriptor,
    SequenceSpec,
    ValidationError,
    classify,
    extract_finite_basis,
    validate,
)
from .formulas import (
    App,
    Formula,
    Signature,
    Var,
    all_tuples,
    n_subset_check,
    occurrences,
    realize,
    rewrite_i,
    subformula_at,
    used_variables,
    variable_counts,
    zero_propagation_check,
)
from .symfun import (
    PeriodicProfile,
    SymmetricFn,
    TableFn,
    detect_period,
    from_table,
    i_table,
    make_periodic,
    to_table,
)

__all__ = ["SuiteReport", "run_suite", "SUITES", "suite_names"]


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: int = 0
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok:
            self.violations.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite} ({self.checks} checks, {len(self.violations)} violations, seed {self.seed})"


# --- random generators -----------------------------------------------------------


def _random_profile(rng: random.Random, max_n: int) -> PeriodicProfile:
    n = rng.randint(1, max_n)
    return rng.choice(canonical_profiles(n))


def _random_signature(rng: random.Random, max_arity: int = 3) -> Signature:
    sig = Signature()
    for idx in range(rng.randint(1, 3)):
        arity = rng.randint(1, max_arity)
        if rng.random() < 0.6:
            fn: SymmetricFn | TableFn = rng.choice(canonical_profiles(arity)).to_symmetric()
        else:
            fn = TableFn(arity, rng.randrange(1 << (1 << arity)))
        sig.define(f"f{idx + 1}", fn)
    return sig


def _random_formula(
    rng: random.Random, sig: Signature, nvars: int, depth: int
) -> Formula:
    heads = sig.names() + [f"i{k}" for k in range(1, 4)]
    name = rng.choice(heads)
    arity = sig.resolve(name).arity
    args = []
    for _ in range(arity):
        if depth <= 1 or rng.random() < 0.5:
            args.append(Var(rng.randint(1, nvars)))
        else:
            args.append(_random_formula(rng, sig, nvars, depth - 1))
    return App(name, tuple(args))


def _grid_targets() -> list[PeriodicProfile]:
    return [
        p
        for n in (2, 3)
        for p in canonical_profiles(n)
        if p.t > 1 and p.d + p.t <= p.n
    ]


def _grid_generators(max_m: int) -> list[PeriodicProfile]:
    return [p for m in range(1, max_m + 1) for p in canonical_profiles(m)]


# --- suites ----------------------------------------------------------------------


def suite_zero_propagation(seed: int, samples: int = 500, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """Formulas over R: a zero-valued subformula zeroes the whole formula,
    exhaustively over {0,1,2}^nvars for seeded random formulas."""
    rng = random.Random(seed)
    report = SuiteReport("zero-propagation", seed)
    for _ in range(samples):
        sig = _random_signature(rng)
        nvars = rng.randint(1, min(4, caps.max_nvars))
        phi = _random_formula(rng, sig, nvars, rng.randint(2, 4))
        paths = occurrences(phi)
        for alpha in all_tuples(nvars):
            for path in paths:
                ok = zero_propagation_check(phi, path, sig, alpha)
                report.record(ok, f"zero-propagation fails at {alpha} path {path}")
    return report


def suite_n_subset(seed: int, samples: int = 500, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """N of a formula is contained in N of each of its subformulas."""
    rng = random.Random(seed)
    report = SuiteReport("n-subset", seed)
    for _ in range(samples):
        sig = _random_signature(rng)
        nvars = rng.randint(1, min(4, caps.max_nvars))
        phi = _random_formula(rng, sig, nvars, rng.randint(2, 4))
        for path in occurrences(phi):
            report.record(
                n_subset_check(phi, path, sig, nvars),
                f"N-subset fails for path {path} of {phi}",
            )
    return report


def suite_prop2(seed: int, max_index: int = 6, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """Indicator identities: flattening, duplicate collapse, and generation of
    every indicator from any indicator of arity >= 2."""
    report = SuiteReport("prop2", seed)
    sig = Signature()
    for l in range(1, max_index + 1):
        for m in range(1, max_index + 1):
            nvars = l + m - 1
            inner = App(f"i{m}", tuple(Var(j) for j in range(1, m + 1)))
            outer_args = (inner,) + tuple(Var(j) for j in range(m + 1, l + m))
            phi = App(f"i{l}", outer_args)
            flat = rewrite_i(phi)
            expected = App(f"i{nvars}", tuple(Var(j) for j in range(1, nvars + 1)))
            report.record(
                flat == expected and realize(phi, sig, nvars).bits == realize(flat, sig, nvars).bits,
                f"flattening identity fails for l={l}, m={m}",
            )
    for n in range(2, max_index + 1):
        dup = App(f"i{n}", tuple(Var(j) for j in range(1, n)) + (Var(n - 1),))
        collapsed = rewrite_i(dup)
        expected = App(f"i{n - 1}", tuple(Var(j) for j in range(1, n)))
        report.record(
            collapsed == expected
            and realize(dup, sig, n - 1).bits == realize(collapsed, sig, n - 1).bits,
            f"duplicate collapse fails for n={n}",
        )
    oracle_caps = caps.override(max_nvars=max(caps.max_nvars, max_index))
    for n in range(2, max_index + 1):
        for m in range(1, max_index + 1):
            verdict = member_oracle(i_table(m), [i_table(n)], oracle_caps)
            report.record(
                verdict.status == "yes",
                f"oracle cannot derive the arity-{m} indicator from the arity-{n} one",
            )
    return report


def suite_nf_intersection(seed: int, samples: int = 200, max_n: int = 30) -> SuiteReport:
    """Intersections of offset-0 periodic functions: period is the lcm of the
    input periods whenever the lcm class is realizable within the arity."""
    from .symfun import nset_intersection

    rng = random.Random(seed)
    report = SuiteReport("nf-intersection", seed)
    for _ in range(samples):
        n = rng.randint(2, max_n)
        count = rng.randint(2, 4)
        periods = [rng.randint(1, n) for _ in range(count)]
        fs = [make_periodic(n, 0, t) for t in periods]
        result = nset_intersection(fs)
        report.record(result is not None, f"zero intersection at n={n}, periods {periods}")
        if result is None:
            continue
        h, prof = result
        want = lcm(*periods)
        if want <= n:
            report.record(
                prof.d == 0 and prof.t == want,
                f"period {prof.t} != lcm {want} at n={n}, periods {periods}",
            )
        else:
            report.record(
                prof.d == 0 and prof.t == n + 1 and h.layer_set == {0},
                f"single-layer collapse wrong at n={n}, periods {periods}",
            )
    return report


def suite_lemma_order(
    seed: int,
    max_n: int = 3,
    max_m: int = 6,
    extended_samples: int = 8,
    caps: Caps = DEFAULT_CAPS,
) -> SuiteReport:
    """Criteria/oracle agreement: exhaustive over the membership grid, plus a
    seeded sample of larger targets beyond it; also certificate verification
    and generator-set monotonicity."""
    report = SuiteReport("lemma-order", seed)
    targets = [
        p
        for n in range(2, max_n + 1)
        for p in canonical_profiles(n)
        if p.t > 1 and p.d + p.t <= p.n
    ]
    pairs = [(f, g) for g in _grid_generators(max_m) for f in targets]
    report.details["pairs"] = len(pairs)
    rng = random.Random(seed)
    beyond = [
        p
        for n in range(max_n + 1, caps.max_nvars + 1)
        for p in canonical_profiles(n)
        if p.t > 1 and p.d + p.t <= p.n
    ]
    if beyond and extended_samples:
        gens = _grid_generators(max_m)
        pairs.extend(
            (rng.choice(beyond), rng.choice(gens)) for _ in range(extended_samples)
        )
    report.details["sampled_beyond_grid"] = len(pairs) - report.details["pairs"]
    for f, g in pairs:
        g_sym = g.to_symmetric()
        f_sym = f.to_symmetric()
        plain = member_single(f, g)
        with_i = member_single_with_I(f, g)
        oracle_plain = member_oracle(f_sym, [g_sym], caps)
        oracle_with = member_oracle(f_sym, [g_sym, i_table(2)], caps)
        report.record(
            oracle_plain.status in ("yes", "no") and oracle_with.status in ("yes", "no"),
            f"oracle incomplete for f={f}, g={g}",
        )
        report.record(
            (plain.verdict == "yes") == (oracle_plain.status == "yes"),
            f"plain disagreement f={f}, g={g}: criteria {plain.verdict} ({plain.reason}), oracle {oracle_plain.status}",
        )
        report.record(
            (with_i.verdict == "yes") == (oracle_with.status == "yes"),
            f"with-I disagreement f={f}, g={g}: criteria {with_i.verdict} ({with_i.reason}), oracle {oracle_with.status}",
        )
        if plain.verdict == "yes":
            report.record(
                with_i.verdict == "yes",
                f"monotonicity fails: plain yes but with-I no for f={f}, g={g}",
            )
            report.record(
                verify_certificate(f, g, plain) or plain.branch == "EQ",
                f"plain certificate does not verify for f={f}, g={g}",
            )
        if with_i.verdict == "yes":
            report.record(
                verify_certificate(f, g, with_i) or with_i.branch == "EQ",
                f"with-I certificate does not verify for f={f}, g={g}",
            )
        if f.has_middle_layer() and g.endpoints_in_nset():
            # plain and indicator-augmented membership coincide on this branch
            report.record(
                (plain.verdict == "yes") == (with_i.verdict == "yes"),
                f"endpoint-branch equivalence fails for f={f}, g={g}",
            )
    return report


def suite_witness_properties(
    seed: int, max_n: int = 3, max_m: int = 6, caps: Caps = DEFAULT_CAPS
) -> SuiteReport:
    """Structural properties of oracle witnesses on the membership grid:
    variable-count congruence for period-r heads (middle-layer targets) and
    essential subformulas realizing periodic functions of dividing period."""
    report = SuiteReport("witness-properties", seed)
    targets = [
        p
        for n in range(2, max_n + 1)
        for p in canonical_profiles(n)
        if p.t > 1 and p.d + p.t <= p.n
    ]
    witnesses = 0
    for g in _grid_generators(max_m):
        g_sym = g.to_symmetric()
        for f in targets:
            f_sym = f.to_symmetric()
            for gens in ([g_sym], [g_sym, i_table(2)]):
                verdict = member_oracle(f_sym, gens, caps)
                if verdict.status != "yes":
                    continue
                witnesses += 1
                state = verdict.state
                phi = verdict.witness
                sig = state.signature
                nvars = f.n
                table = realize(phi, sig, nvars)
                report.record(
                    table.bits == to_table(f_sym).bits
                    and used_variables(phi) == frozenset(range(1, nvars + 1)),
                    f"witness invalid for f={f}, gens={len(gens)}",
                )
                if not f.has_middle_layer():
                    # the variable-count statement and the corollaries derived
                    # from it presuppose a 1-layer strictly between 0 and n
                    continue
                for path in occurrences(phi):
                    sub = subformula_at(phi, path)
                    head_prof = detect_period(from_table(sig.resolve(sub.head)))
                    r = head_prof.t
                    q = variable_counts(phi, path, nvars)
                    report.record(
                        all((qi - qj) % r == 0 for qi in q for qj in q),
                        f"variable counts {q} not congruent mod {r} for f={f}, g={g}",
                    )
                    sub_table = realize(sub, sig, nvars)
                    if any(qi % r == 0 for qi in q):
                        replaced = App(f"i{len(sub.args)}", sub.args)
                        report.record(
                            realize(replaced, sig, nvars).bits == sub_table.bits,
                            f"replacement property fails at {path} for f={f}, g={g}: "
                            f"counts {q}, head period {r}",
                        )
                    if sub_table.bits == (1 << (1 << nvars)) - 1:
                        continue  # not essential
                    report.record(
                        used_variables(sub) == frozenset(range(1, nvars + 1)),
                        f"essential subformula at {path} of witness for f={f}, g={g} "
                        f"misses a variable of f",
                    )
                    proj = _project(sub_table, sorted(used_variables(sub)), nvars)
                    sym = from_table(proj)
                    prof = detect_period(sym) if sym is not None else None
                    report.record(
                        prof is not None and f.t % prof.t == 0,
                        f"essential subformula at {path} of witness for f={f}, g={g} "
                        f"is not periodic with dividing period (got {prof})",
                    )
    report.details["confirming_witnesses"] = witnesses
    return report


def _project(table: TableFn, variables: list[int], nvars: int) -> TableFn:
    """Restrict a cube table to the given variables (others pinned to 1)."""
    k = len(variables)
    bits = 0
    for idx in range(1 << k):
        full = 0
        for pos, var in enumerate(variables):
            if (idx >> (k - 1 - pos)) & 1:
                full |= 1 << (nvars - var)
        if (table.bits >> full) & 1:
            bits |= 1 << idx
    return TableFn(k, bits)


def suite_closure_invariants(seed: int, samples: int = 40, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """Witness validity, monotonicity, idempotence and the arity bound of the
    closure oracle on seeded generator sets."""
    report = SuiteReport("closure-invariants", seed)
    rng = random.Random(seed)
    for _ in range(samples):
        nvars = rng.randint(1, 3)
        gens = [
            _random_profile(rng, 4).to_symmetric() for _ in range(rng.randint(1, 2))
        ]
        state = close_cached(gens, nvars, caps)
        report.record(state.complete, f"closure incomplete for {gens}, nvars={nvars}")
        sig = state.signature
        for entry in list(state.entries.values())[:50]:
            table = realize(entry.witness, sig, nvars)
            mask = 0
            for j in used_variables(entry.witness):
                mask |= 1 << (j - 1)
            ok = table.bits == entry.table.bits and (
                mask == entry.mask or entry.table.bits == 0
            )
            report.record(ok, f"witness mismatch for entry {entry.mask:#x}/{entry.table.bits:#x}")
        bigger = close_cached(gens + [i_table(2)], nvars, caps)
        report.record(
            set(state.entries) <= set(bigger.entries),
            f"monotonicity fails for {gens}, nvars={nvars}",
        )
        full = [e.table for e in state.full_support_functions()]
        if full:
            again = close_cached(full, nvars, caps.override(max_generator_arity=max(caps.max_generator_arity, nvars)))
            report.record(
                set(again.entries) <= set(state.entries),
                f"idempotence fails for {gens}, nvars={nvars}",
            )
        # arity bound: single periodic generator, derived periodic functions of
        # the same period need arity <= generator's, with equality forcing congruence
        sym0 = from_table(state.generators[0])
        g = detect_period(sym0) if sym0 is not None else None
        if g is not None and g.t > 1 and len(state.generators) == 1:
            for entry in state.full_support_functions():
                sym = from_table(entry.table)
                if sym is None or sym.is_zero():
                    continue
                prof = detect_period(sym)
                if prof is None or prof.t != g.t or prof.t == 1:
                    continue
                report.record(
                    g.n >= prof.n and (g.n != prof.n or prof == g),
                    f"arity bound fails: {prof} derived from {g}",
                )
    return report


def suite_classifier(seed: int, samples: int = 200) -> SuiteReport:
    """Classifier trichotomy: the three fixtures, exactly one verdict per
    descriptor, and agreement with a direct evaluation of the finiteness
    conditions on ratio classes."""
    report = SuiteReport("classifier", seed)
    fixtures = [
        (
            FamilyDescriptor(
                p=2,
                finite=(PeriodicProfile(2, 0, 1), PeriodicProfile(4, 0, 2)),
                sequences=(),
            ),
            "FiniteBasis",
        ),
        (
            FamilyDescriptor(
                p=2, finite=(), sequences=(SequenceSpec(a=1, b=1, d=(1, 0, 0), u=1, v=0, w=1),)
            ),
            "CountableBasis",
        ),
        (
            FamilyDescriptor(
                p=2, finite=(), sequences=(SequenceSpec(a=1, b=1, d=(1, 0, 1), u=0, v=0, w=1, y=1),)
            ),
            "NoBasis",
        ),
    ]
    for desc, expected in fixtures:
        got = classify(desc).verdict
        report.record(got == expected, f"fixture expected {expected}, got {got}")
    rng = random.Random(seed)
    produced = 0
    while produced < samples:
        desc = _random_descriptor(rng)
        if desc is None:
            continue
        produced += 1
        result = classify(desc)
        report.record(
            result.verdict in ("FiniteBasis", "CountableBasis", "NoBasis"),
            f"bad verdict {result.verdict}",
        )
        direct = _direct_trichotomy(desc)
        report.record(
            result.verdict == direct,
            f"classifier {result.verdict} != direct evaluation {direct} for {desc}",
        )
    return report


def _random_descriptor(rng: random.Random) -> FamilyDescriptor | None:
    p = rng.choice((2, 3, 5))
    finite = []
    for _ in range(rng.randint(0, 3)):
        n = rng.randint(1, 6)
        candidates = [
            prof
            for prof in canonical_profiles(n)
            if _is_p_power(prof.t, p) and prof not in finite
        ]
        if candidates:
            finite.append(rng.choice(candidates))
    sequences = []
    for _ in range(rng.randint(0, 2)):
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        if rng.random() < 0.4:
            d = None
        else:
            e = rng.randint(0, b) if b else 0
            g = rng.randint(0, 2)
            cmax = max(1, p ** max(a - g, 0) - 1)
            c = rng.randint(1, cmax)
            while c % p == 0:
                c += 1
            d = (c, g, e)
        w = rng.randint(0, 2)
        y = rng.randint(0, 1) if d is not None else 0
        u, v = rng.randint(0, 3), rng.randint(0, 2)
        try:
            seq = SequenceSpec(a=a, b=b, d=d, u=u, v=v, w=w, y=y)
        except ValidationError:
            continue
        sequences.append(seq)
    try:
        desc = FamilyDescriptor(p=p, finite=tuple(finite), sequences=tuple(sequences))
        if not validate(desc).ok:
            return None
    except ValidationError:
        return None
    return desc


def _is_p_power(t: int, p: int) -> bool:
    while t % p == 0:
        t //= p
    return t == 1


def _direct_trichotomy(desc: FamilyDescriptor, window: int = 48) -> str:
    """Independent evaluation of the three finiteness conditions: compute
    ratio exponents numerically over a window and inspect tail behavior
    (exponents of valid sequences are affine in k, so a constant tail step
    means a constant class)."""
    from .criteria import ratio_exponent

    contributing = []
    for seq in desc.sequences:
        t_tail = [seq.t_value(desc.p, k) for k in (window - 2, window - 1, window)]
        if any(t > 1 for t in t_tail):
            contributing.append(seq)
    if not contributing:
        return "FiniteBasis"
    for seq in contributing:
        exps = [
            ratio_exponent(seq.profile(desc.p, k), desc.p)
            for k in (window - 2, window - 1, window)
        ]
        if exps[2] == exps[1] == exps[0]:
            return "NoBasis"
    return "CountableBasis"


def suite_basis_extraction(seed: int, samples: int = 50, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """Soundness of greedy extraction: every removed generator is re-derived
    by the oracle from the retained set, and no retained member is removable."""
    report = SuiteReport("basis-extraction", seed)
    rng = random.Random(seed)
    produced = 0
    while produced < samples:
        pool = [
            prof
            for n in range(1, caps.max_nvars + 1)
            for prof in canonical_profiles(n)
        ]
        family = rng.sample(pool, rng.randint(1, 4))
        produced += 1
        extraction = extract_finite_basis(family, caps)
        retained = [f.to_symmetric() for f in extraction.basis]
        for removed, justification, _ in extraction.removed:
            verdict = member_oracle(removed.to_symmetric(), retained, caps)
            report.record(
                verdict.status == "yes",
                f"removed {removed} ({justification}) not re-derived from {extraction.basis}",
            )
        for b in extraction.basis:
            if any(u[0] == b for u in extraction.undecided):
                continue
            rest = [h.to_symmetric() for h in extraction.basis if h != b]
            if not rest:
                report.checks += 1
                continue
            verdict = member_oracle(b.to_symmetric(), rest, caps)
            report.record(
                verdict.status != "yes",
                f"retained {b} is still derivable from {extraction.basis}",
            )
    return report


def suite_rewrite(seed: int, samples: int = 200, caps: Caps = DEFAULT_CAPS) -> SuiteReport:
    """rewrite_i preserves the realized function on seeded random formulas."""
    rng = random.Random(seed)
    report = SuiteReport("rewrite", seed)
    for _ in range(samples):
        sig = _random_signature(rng)
        nvars = rng.randint(1, min(4, caps.max_nvars))
        phi = _random_formula(rng, sig, nvars, rng.randint(2, 4))
        rewritten = rewrite_i(phi)
        report.record(
            realize(phi, sig, nvars).bits == realize(rewritten, sig, nvars).bits,
            f"rewrite changes the function of {phi}",
        )
    return report


def suite_detect_period(seed: int, samples: int = 300, max_n: int = 12) -> SuiteReport:
    """Canonical period detection: minimal, reproducing, and permutation
    invariance of evaluation."""
    from .symfun import eval_symmetric

    rng = random.Random(seed)
    report = SuiteReport("detect-period", seed)
    for _ in range(samples):
        n = rng.randint(1, max_n)
        t = rng.randint(1, n + 1)
        d = rng.randint(0, min(t - 1, n))
        f = make_periodic(n, d, t)
        prof = detect_period(f)
        report.record(
            prof is not None
            and prof.t <= t
            and make_periodic(prof.n, prof.d, prof.t) == f,
            f"detect_period not canonical for (n={n}, d={d}, t={t})",
        )
        if n <= 6:
            tpl = [rng.choice((0, 1, 2)) for _ in range(n)]
            value = eval_symmetric(f, tuple(tpl))
            rng.shuffle(tpl)
            report.record(
                eval_symmetric(f, tuple(tpl)) == value,
                f"evaluation not symmetric for (n={n}, d={d}, t={t})",
            )
    return report


SUITES = {
    "zero-propagation": suite_zero_propagation,
    "n-subset": suite_n_subset,
    "prop2": suite_prop2,
    "nf-intersection": suite_nf_intersection,
    "lemma-order": suite_lemma_order,
    "witness-properties": suite_witness_properties,
    "closure-invariants": suite_closure_invariants,
    "classifier": suite_classifier,
    "basis-extraction": suite_basis_extraction,
    "rewrite": suite_rewrite,
    "detect-period": suite_detect_period,
}


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str, seed: int = 0, **kwargs) -> list[SuiteReport]:
    """Run one suite (or all of them) and return the reports."""
    if name == "all":
        return [fn(seed=seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    return [SUITES[name](seed=seed, **kwargs)]
