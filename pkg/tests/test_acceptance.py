"""Acceptance suite: every criterion at its full sample size and tolerance.

Each test prints one ``ACCEPTANCE <n>: PASS/FAIL`` line (run pytest with -s
to see the lines as they appear; they are also embedded in the assertion
message on failure).  All tolerances are zero violations; items 1 and 3
additionally carry runtime budgets.
"""

import time

from triclone.verify import (
    suite_basis_extraction,
    suite_classifier,
    suite_lemma_order,
    suite_n_subset,
    suite_nf_intersection,
    suite_prop2,
    suite_witness_properties,
    suite_zero_propagation,
)

SEED = 20140101


def _conclude(number: int, description: str, reports, elapsed=None, budget=None):
    passed = all(r.passed for r in reports)
    if budget is not None and elapsed is not None:
        passed = passed and elapsed <= budget
    checks = sum(r.checks for r in reports)
    timing = f", {elapsed:.1f}s" if elapsed is not None else ""
    line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} - {description} ({checks} checks{timing})"
    print(line)
    failures = [v for r in reports for v in r.violations]
    assert passed, line + "\n" + "\n".join(failures[:10])


def test_criterion_1_criteria_oracle_agreement():
    """Exhaustive agreement of the arithmetic criteria with the closure oracle
    for all periodic targets with n in {2,3}, t>1, two or more 1-layers,
    against every periodic generator with m <= 6, plain and with indicators."""
    start = time.time()
    report = suite_lemma_order(seed=SEED, max_n=3, max_m=6)
    elapsed = time.time() - start
    assert report.details["pairs"] == 244
    _conclude(1, "criteria/oracle agreement, exhaustive grid", [report], elapsed, budget=600)


def test_criterion_2_zero_propagation_and_n_subset():
    """Zero propagation and N-containment for >= 500 seeded random formulas,
    exhaustively over all tuples with nvars <= 4, depth <= 4."""
    reports = [
        suite_zero_propagation(seed=SEED, samples=500),
        suite_n_subset(seed=SEED, samples=500),
    ]
    _conclude(2, "zero-propagation and N-subset invariants", reports)


def test_criterion_3_indicator_identities():
    """Indicator identities for all indices <= 6, by table equality and via
    the closure oracle, in under a minute."""
    start = time.time()
    report = suite_prop2(seed=SEED, max_index=6)
    elapsed = time.time() - start
    _conclude(3, "indicator identities", [report], elapsed, budget=60)


def test_criterion_4_intersection_period_law():
    """>= 200 seeded tuples of offset-0 periodic functions with n <= 30:
    non-zero intersections have period lcm whenever realizable."""
    report = suite_nf_intersection(seed=SEED, samples=200, max_n=30)
    _conclude(4, "intersection period law", [report])


def test_criterion_5_witness_structure():
    """Variable-count congruence and essential-subformula period divisibility
    on every confirming oracle witness from the criterion-1 grid."""
    report = suite_witness_properties(seed=SEED, max_n=3, max_m=6)
    assert report.details["confirming_witnesses"] > 0
    _conclude(5, "witness structural properties", [report])


def test_criterion_6_classifier_trichotomy():
    """The three classification fixtures plus >= 200 seeded descriptors:
    exactly one verdict, agreeing with direct evaluation of the conditions."""
    report = suite_classifier(seed=SEED, samples=200)
    _conclude(6, "classifier trichotomy and fixtures", [report])


def test_criterion_7_basis_extraction_soundness():
    """>= 50 seeded finite families within caps: every removed generator is
    re-derived by the oracle from the retained set."""
    report = suite_basis_extraction(seed=SEED, samples=50)
    _conclude(7, "basis extraction soundness", [report])
