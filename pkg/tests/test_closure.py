from itertools import product

import pytest

from triclone.closure import close, close_cached, member_oracle
from triclone.config import Caps, CapExceeded
from triclone.formulas import App, Signature, Var, format_formula, realize, used_variables
from triclone.symfun import (
    SymmetricFn,
    TableFn,
    as_table,
    i_symmetric,
    i_table,
    make_periodic,
    to_table,
)


class TestClose:
    def test_indicator_generators_give_every_support(self):
        state = close([i_table(2)], 3)
        assert state.complete
        assert sorted(mask for mask, _ in state.entries) == list(range(1, 8))
        assert all(entry.table.bits == 0xFF for entry in state.entries.values())

    def test_empty_generator_set(self):
        state = close([], 3)
        assert state.complete and not state.entries

    def test_doubling_generator_derives_half_period(self):
        g = make_periodic(4, 0, 2)
        state = close([g], 2)
        target = to_table(make_periodic(2, 0, 2))
        entry = state.lookup(target)
        assert entry is not None
        assert realize(entry.witness, state.signature, 2) == target

    def test_witnesses_realize_their_tables(self):
        g = make_periodic(3, 1, 2)
        state = close([g, i_table(2)], 3)
        sig = state.signature
        for entry in state.entries.values():
            assert realize(entry.witness, sig, 3).bits == entry.table.bits
            if entry.table.bits:
                mask = 0
                for j in used_variables(entry.witness):
                    mask |= 1 << (j - 1)
                assert mask == entry.mask

    def test_closed_under_one_more_step(self):
        g = make_periodic(4, 1, 3)
        state = close([g], 3)
        assert state.complete
        # a full extra sweep adds nothing: sizes stabilize in the recorded rounds
        assert state.round_sizes[-1] == state.round_sizes[-2]

    def test_monotone_in_generators(self):
        g = make_periodic(3, 0, 2)
        small = close([g], 2)
        big = close([g, i_table(2)], 2)
        assert set(small.entries) <= set(big.entries)

    def test_idempotent_on_full_support_functions(self):
        g = make_periodic(4, 0, 2)
        state = close([g], 2)
        derived = [e.table for e in state.full_support_functions()]
        again = close(derived, 2)
        assert set(again.entries) <= set(state.entries)

    def test_nvars_cap_is_hard(self):
        with pytest.raises(CapExceeded):
            close([i_table(2)], 5, Caps(max_nvars=4))

    def test_generator_arity_cap_is_hard(self):
        with pytest.raises(CapExceeded):
            close([make_periodic(7, 0, 2)], 2, Caps(max_generator_arity=6))

    def test_derived_cap_marks_incomplete(self):
        state = close([make_periodic(4, 0, 2), i_table(2)], 3, Caps(max_derived=5))
        assert not state.complete

    def test_general_head_budget_marks_incomplete(self):
        asym = TableFn(2, 0b0010)  # not constant on layer 1
        state = close([asym], 2, Caps(max_general_args=3))
        assert not state.complete

    def test_non_symmetric_generator_exact_on_small_pool(self):
        asym = TableFn(2, 0b0010)  # 1 only on (1,2)
        state = close([asym], 2)
        assert state.complete
        full = (1 << 2) - 1
        assert (full, 0b0010) in state.entries


class TestBruteForceCrossCheck:
    """Independent completeness evidence: naive enumeration of all formulas
    up to a depth, over ordered argument tuples with no symmetry reductions,
    must land inside the closure's derived set."""

    @staticmethod
    def _enumerate(named_gens, nvars, max_depth):
        sig = Signature()
        for name, fn in named_gens:
            sig.define(name, fn)
        level = []
        for name, fn in named_gens:
            arity = as_table(fn).arity
            for args in product([Var(j + 1) for j in range(nvars)], repeat=arity):
                level.append(App(name, args))
        formulas = list(level)
        for _ in range(max_depth - 1):
            pool = [Var(j + 1) for j in range(nvars)] + formulas
            level = []
            for name, fn in named_gens:
                arity = as_table(fn).arity
                for args in product(pool, repeat=arity):
                    node = App(name, args)
                    level.append(node)
            formulas = formulas + level
        return sig, formulas

    @staticmethod
    def _key(phi, sig, nvars):
        bits = realize(phi, sig, nvars).bits
        if bits == 0:
            return (0, 0)
        mask = 0
        for j in used_variables(phi):
            mask |= 1 << (j - 1)
        return (mask, bits)

    @pytest.mark.parametrize(
        "gens,depth",
        [
            ([("g1", make_periodic(4, 0, 2))], 2),
            ([("g1", make_periodic(2, 1, 2))], 3),
            ([("g1", make_periodic(3, 0, 2)), ("g2", i_table(2))], 2),
            ([("g1", TableFn(2, 0b0010))], 3),
            ([("g1", SymmetricFn(2, (0, 1, 0)))], 3),
        ],
    )
    def test_enumerated_formulas_inside_derived_set(self, gens, depth):
        nvars = 2
        sig, formulas = self._enumerate(gens, nvars, depth)
        state = close([fn for _, fn in gens], nvars)
        assert state.complete
        seen = set()
        for phi in formulas:
            key = self._key(phi, sig, nvars)
            assert key in state.entries, (format_formula(phi), key)
            seen.add(key)
        # the shallow enumeration already finds a good share of the closure
        assert len(seen) >= len(state.entries) // 2


class TestMemberOracle:
    def test_half_period_member(self):
        assert member_oracle(make_periodic(2, 0, 2), [make_periodic(4, 0, 2)]).status == "yes"

    def test_odd_arity_needs_indicators(self):
        f = make_periodic(2, 0, 2)
        g = make_periodic(3, 0, 2)
        assert member_oracle(f, [g]).status == "no"
        verdict = member_oracle(f, [g, i_table(2)])
        assert verdict.status == "yes"
        assert realize(verdict.witness, verdict.state.signature, 2) == to_table(f)

    def test_indicator_from_indicator(self):
        assert member_oracle(i_symmetric(2), [i_table(3)]).status == "yes"
        assert member_oracle(i_symmetric(4), [i_table(3)]).status == "yes"

    def test_unary_indicator_generates_nothing_binary(self):
        assert member_oracle(i_symmetric(2), [i_table(1)]).status == "no"

    def test_zero_function_membership(self):
        zero2 = TableFn(2, 0)
        assert member_oracle(zero2, [make_periodic(2, 1, 2)]).status == "yes"
        assert member_oracle(zero2, [i_table(2)]).status == "no"

    def test_all_equal_chain(self):
        # the all-equal function of three variables from the binary one
        eq2 = make_periodic(2, 0, 2)
        verdict = member_oracle(make_periodic(3, 0, 3), [eq2])
        assert verdict.status == "yes"
        assert format_formula(verdict.witness)  # witness exists and formats

    def test_caching_returns_identical_state(self):
        g = make_periodic(4, 0, 2)
        a = close_cached([g], 2)
        b = close_cached([g], 2)
        assert a is b

    def test_witnesses_deterministic_across_runs(self):
        g = make_periodic(4, 1, 3)
        a = close([g, i_table(2)], 3)
        b = close([g, i_table(2)], 3)
        assert list(a.entries) == list(b.entries)
        for key in a.entries:
            assert format_formula(a.entries[key].witness) == format_formula(
                b.entries[key].witness
            )

    def test_incomplete_status_under_budget(self):
        asym = TableFn(2, 0b0010)
        caps = Caps(max_general_args=3)
        target = TableFn(2, 0b1000)
        assert member_oracle(target, [asym], caps).status == "incomplete"
