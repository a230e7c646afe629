import random
from itertools import permutations, product
from math import lcm

import pytest

from triclone.symfun import (
    DomainError,
    ParseError,
    PeriodicProfile,
    SymmetricFn,
    TableFn,
    detect_period,
    eval_symmetric,
    format_function_literal,
    from_table,
    i_symmetric,
    i_table,
    is_i,
    make_periodic,
    nset_intersection,
    parse_function_literal,
    to_table,
)


def layers_of(f):
    return sorted(f.layer_set)


class TestMakePeriodic:
    def test_layers_step_by_period(self):
        assert layers_of(make_periodic(5, 1, 2)) == [1, 3, 5]

    def test_full_period_one_is_indicator(self):
        f = make_periodic(3, 0, 1)
        assert layers_of(f) == [0, 1, 2, 3]
        assert f == i_symmetric(3)

    def test_offset_plus_period_beyond_arity_single_layer(self):
        assert layers_of(make_periodic(4, 3, 4)) == [3]

    @pytest.mark.parametrize("n,d,t", [(3, 2, 2), (3, 4, 5), (3, 0, 0), (0, 0, 1)])
    def test_rejects_bad_parameters(self, n, d, t):
        with pytest.raises(DomainError):
            make_periodic(n, d, t)


class TestDetectPeriod:
    def test_indicator_has_period_one(self):
        assert detect_period(i_symmetric(4)) == PeriodicProfile(4, 0, 1)

    def test_even_layers(self):
        f = SymmetricFn(4, (1, 0, 1, 0, 1))
        assert detect_period(f) == PeriodicProfile(4, 0, 2)

    def test_missing_layer_zero_not_periodic(self):
        assert detect_period(SymmetricFn(4, (0, 1, 1, 1, 1))) is None

    def test_zero_function_not_periodic(self):
        assert detect_period(SymmetricFn(3, (0, 0, 0, 0))) is None

    def test_single_layer_minimal_period(self):
        assert detect_period(SymmetricFn(2, (1, 0, 0))) == PeriodicProfile(2, 0, 3)
        assert detect_period(SymmetricFn(5, (0, 0, 1, 0, 0, 0))) == PeriodicProfile(5, 2, 4)

    def test_round_trip_is_canonical_and_reproducing(self):
        rng = random.Random(11)
        for _ in range(400):
            n = rng.randint(1, 14)
            t = rng.randint(1, n + 1)
            d = rng.randint(0, min(t - 1, n))
            f = make_periodic(n, d, t)
            prof = detect_period(f)
            assert prof is not None and prof.t <= t
            assert make_periodic(prof.n, prof.d, prof.t) == f

    def test_non_residue_class_rejected(self):
        rng = random.Random(12)
        for _ in range(200):
            n = rng.randint(2, 10)
            layers = tuple(rng.randint(0, 1) for _ in range(n + 1))
            f = SymmetricFn(n, layers)
            prof = detect_period(f)
            if prof is None:
                present = f.layer_set
                assert not present or all(
                    set(range(min(present), n + 1, t)) != present
                    for t in range(min(present) + 1, n + 2)
                )
            else:
                assert prof.layer_set == f.layer_set


class TestCanonicalProfile:
    def test_rejects_non_minimal_period(self):
        with pytest.raises(DomainError):
            PeriodicProfile(9, 4, 8)  # single layer {4}, minimal period is 6

    def test_two_layer_boundary_is_canonical(self):
        prof = PeriodicProfile(3, 0, 3)
        assert layers_of(prof.to_symmetric()) == [0, 3]

    def test_derived_quantities(self):
        prof = PeriodicProfile(5, 1, 2)
        assert prof.e == 4
        assert prof.has_middle_layer()
        assert not prof.endpoints_in_nset()
        assert PeriodicProfile(4, 0, 2).endpoints_in_nset()


class TestEvalSymmetric:
    def test_layer_membership(self):
        f = make_periodic(3, 1, 2)
        assert eval_symmetric(f, (2, 1, 1)) == 1
        assert eval_symmetric(f, (0, 2, 2)) == 0
        assert eval_symmetric(f, (2, 2, 1)) == 0

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            eval_symmetric(make_periodic(3, 1, 2), (1, 2))

    def test_permutation_invariance_exhaustive(self):
        f = make_periodic(4, 1, 3)
        for tpl in product((0, 1, 2), repeat=4):
            value = eval_symmetric(f, tpl)
            for perm in permutations(tpl):
                assert eval_symmetric(f, perm) == value


class TestNsetIntersection:
    def test_lcm_of_two_periods(self):
        h, prof = nset_intersection([make_periodic(6, 0, 2), make_periodic(6, 0, 3)])
        assert layers_of(h) == [0, 6]
        assert prof == PeriodicProfile(6, 0, 6)

    def test_idempotent(self):
        f = make_periodic(8, 0, 4)
        h, prof = nset_intersection([f, f])
        assert h == f
        assert prof == detect_period(f)

    def test_collapse_to_single_layer(self):
        h, prof = nset_intersection([make_periodic(2, 0, 2), make_periodic(2, 0, 3)])
        assert layers_of(h) == [0]
        assert prof == PeriodicProfile(2, 0, 3)

    def test_rejects_nonzero_offset(self):
        with pytest.raises(DomainError):
            nset_intersection([make_periodic(4, 1, 2), make_periodic(4, 0, 2)])

    def test_rejects_arity_mismatch(self):
        with pytest.raises(DomainError):
            nset_intersection([make_periodic(4, 0, 2), make_periodic(5, 0, 2)])

    def test_lcm_law_on_seeded_samples(self):
        rng = random.Random(5)
        for _ in range(300):
            n = rng.randint(2, 30)
            periods = [rng.randint(1, n) for _ in range(rng.randint(2, 4))]
            h, prof = nset_intersection([make_periodic(n, 0, t) for t in periods])
            want = lcm(*periods)
            if want <= n:
                assert prof.t == want and prof.d == 0
            else:
                assert layers_of(h) == [0]


class TestTables:
    def test_indicator_table_all_ones(self):
        assert to_table(i_symmetric(2)).bits == 0b1111
        assert is_i(i_table(3)) and is_i(i_symmetric(3))
        assert not is_i(make_periodic(3, 0, 2))
        assert not is_i(SymmetricFn(2, (0, 0, 0)))

    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(200):
            n = rng.randint(1, 8)
            f = SymmetricFn(n, tuple(rng.randint(0, 1) for _ in range(n + 1)))
            assert from_table(to_table(f)) == f

    def test_non_symmetric_table_has_no_layer_form(self):
        # g(1,2)=1, g(2,1)=0: layer d=1 is non-constant
        g = TableFn(2, 0b0010)
        assert from_table(g) is None

    def test_table_value_indexing(self):
        f = make_periodic(3, 1, 2)
        table = to_table(f)
        for tpl in product((1, 2), repeat=3):
            assert table.value(tpl) == eval_symmetric(f, tpl)
        assert table.value((0, 1, 2)) == 0


class TestLiterals:
    @pytest.mark.parametrize(
        "text",
        [
            "periodic n=5 d=1 t=2",
            "sym n=3 layers=0,2",
            "sym n=2 layers=",
            "table n=2 bits=9",
        ],
    )
    def test_round_trip(self, text):
        fn = parse_function_literal(text)
        again = parse_function_literal(format_function_literal(fn))
        if isinstance(fn, SymmetricFn):
            assert again == fn
        else:
            assert to_table(from_table(fn)) if from_table(fn) else again == fn

    def test_symmetric_formats_as_periodic_when_possible(self):
        assert format_function_literal(make_periodic(4, 0, 2)) == "periodic n=4 d=0 t=2"
        assert format_function_literal(SymmetricFn(3, (0, 1, 1, 0))) == "sym n=3 layers=1,2"

    @pytest.mark.parametrize(
        "text",
        [
            "periodic n=3 d=3 t=3",
            "sym n=2 layers=5",
            "table n=2 bits=zz",
            "nonsense n=2",
            "periodic n=3 d=1",
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(ParseError):
            parse_function_literal(text)
