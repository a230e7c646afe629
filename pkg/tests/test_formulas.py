import random
from itertools import product

import pytest

from triclone.formulas import (
    App,
    Signature,
    Var,
    all_tuples,
    eval_formula,
    format_formula,
    format_signature,
    is_essential,
    n_subset_check,
    occurrences,
    parse_formula,
    parse_signature,
    realize,
    replace_at,
    rewrite_i,
    subformula_at,
    theta,
    theta_occurrences,
    used_variables,
    variable_counts,
    zero_propagation_check,
)
from triclone.symfun import (
    DomainError,
    ParseError,
    i_table,
    make_periodic,
    to_table,
)


@pytest.fixture
def sig():
    s = Signature()
    s.define("g", make_periodic(4, 0, 2))
    s.define("h", make_periodic(2, 0, 2))
    return s


class TestParsing:
    def test_round_trip(self, sig):
        text = "(g x1 x2 (h x1 x2) (h x2 x1))"
        phi = parse_formula(text)
        assert format_formula(phi) == text

    def test_rejects_bare_variable(self):
        with pytest.raises(ParseError):
            parse_formula("x1")

    @pytest.mark.parametrize("text", ["", "(g x1", "(g x1))", "()", "(g y1)", "(g x0)"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)

    def test_signature_file(self, sig):
        text = format_signature(sig)
        again = parse_signature(text + "\n# comment\n\n")
        assert dict(again.items()) == dict(sig.items())

    def test_signature_rejects_reserved_indicator_names(self):
        s = Signature()
        with pytest.raises(DomainError):
            s.define("i2", make_periodic(2, 0, 2))

    def test_indicator_names_resolve_implicitly(self):
        assert Signature().resolve("i3") == i_table(3)


class TestRealize:
    def test_indicator_application(self, sig):
        phi = parse_formula("(i2 x1 x2)")
        assert realize(phi, sig, 2) == i_table(2)

    def test_doubled_arguments_realize_indicator(self, sig):
        # g counts twos twice per variable, landing on even layers
        phi = parse_formula("(g x1 x1 x2 x2)")
        assert realize(phi, sig, 2) == i_table(2)

    def test_zero_propagates_from_any_component(self, sig):
        phi = parse_formula("(g x1 x2 (h x1 x2) (h x2 x1))")
        for tpl in product((0, 1, 2), repeat=2):
            if 0 in tpl:
                assert eval_formula(phi, sig, tpl) == 0

    def test_unknown_name_and_arity_mismatch(self, sig):
        with pytest.raises(DomainError):
            realize(parse_formula("(nope x1)"), sig, 1)
        with pytest.raises(DomainError):
            realize(parse_formula("(g x1 x2)"), sig, 2)

    def test_variable_beyond_nvars(self, sig):
        with pytest.raises(DomainError):
            realize(parse_formula("(h x1 x3)"), sig, 2)


class TestOccurrences:
    def test_paths_and_subformulas(self, sig):
        phi = parse_formula("(g x1 x2 (h x1 x2) (h x1 x1))")
        paths = occurrences(phi)
        assert paths == [(), (2,), (3,)]
        assert format_formula(subformula_at(phi, (2,))) == "(h x1 x2)"
        replaced = replace_at(phi, (3,), Var(2))
        assert format_formula(replaced) == "(g x1 x2 (h x1 x2) x2)"

    def test_invalid_path(self, sig):
        phi = parse_formula("(h x1 x2)")
        with pytest.raises(DomainError):
            subformula_at(phi, (5,))


class TestZeroPropagationAndNSubset:
    def test_inner_zero_forces_outer_zero(self, sig):
        phi = parse_formula("(g x1 x1 x2 (i2 x1 x2))")
        assert zero_propagation_check(phi, (3,), sig, (1, 0))

    def test_holds_exhaustively_for_seeded_formulas(self, sig):
        rng = random.Random(23)
        heads = ["g", "h", "i1", "i2", "i3"]

        def build(depth):
            name = rng.choice(heads)
            arity = sig.resolve(name).arity
            args = tuple(
                build(depth - 1) if depth > 1 and rng.random() < 0.5 else Var(rng.randint(1, 3))
                for _ in range(arity)
            )
            return App(name, args)

        for _ in range(60):
            phi = build(3)
            for path in occurrences(phi):
                assert n_subset_check(phi, path, sig, 3)
                for alpha in all_tuples(3):
                    assert zero_propagation_check(phi, path, sig, alpha)


class TestTheta:
    def test_indicator_formula_has_empty_theta(self, sig):
        assert theta(parse_formula("(i3 x1 x2 x3)"), sig, 3) == set()

    def test_non_indicator_head_is_sensitive(self, sig):
        phi = parse_formula("(h x1 x2)")
        assert theta(phi, sig, 2) == {to_table(make_periodic(2, 0, 2))}

    def test_occurrence_realizing_indicator_is_insensitive(self, sig):
        phi = parse_formula("(g x1 x1 x2 x2)")
        assert theta(phi, sig, 2) == set()
        assert theta_occurrences(phi, sig, 2) == []

    def test_occurrence_list_tracks_paths(self, sig):
        phi = parse_formula("(g x1 x2 (i2 x1 x2) (i2 x1 x2))")
        occs = theta_occurrences(phi, sig, 2)
        assert occs == [((), "g")]
        assert theta(phi, sig, 2) == {to_table(make_periodic(4, 0, 2))}

    def test_redundant_head_not_sensitive(self, sig):
        # the h-arguments already force equality, so replacing g by the
        # indicator leaves the realized function unchanged
        phi = parse_formula("(g x1 x2 (h x1 x2) (h x1 x2))")
        assert ((), "g") not in theta_occurrences(phi, sig, 2)


class TestEssential:
    def test_indicator_realization_not_essential(self, sig):
        phi = parse_formula("(g x1 (g x1 x1 x2 x2) x2 x1)")
        assert not is_essential(phi, (1,), sig, 2)

    def test_non_indicator_occurrence_essential(self, sig):
        phi = parse_formula("(g x1 x2 (h x1 x2) (h x1 x2))")
        assert is_essential(phi, (2,), sig, 2)
        assert is_essential(phi, (), sig, 2)


class TestVariableCounts:
    def test_counts_nested_occurrences(self, sig):
        phi = parse_formula("(g x1 x2 (h x1 x2) (h x1 x2))")
        assert variable_counts(phi, (), 2) == (3, 3)

    def test_direct_counts(self, sig):
        assert variable_counts(parse_formula("(g x1 x1 x2 x2)"), (), 2) == (2, 2)
        assert variable_counts(parse_formula("(h x1 x2)"), (), 2) == (1, 1)

    def test_variable_occurrence_not_an_application(self, sig):
        phi = parse_formula("(h x1 x2)")
        with pytest.raises(DomainError):
            variable_counts(phi, (0,), 2)


class TestRewrite:
    def test_flatten_nested_indicator(self):
        assert format_formula(rewrite_i(parse_formula("(i2 (i2 x1 x2) x3)"))) == "(i3 x1 x2 x3)"

    def test_collapse_duplicate_arguments(self):
        assert format_formula(rewrite_i(parse_formula("(i3 x1 x2 x2)"))) == "(i2 x1 x2)"

    def test_fixed_point_when_no_rule_applies(self):
        phi = parse_formula("(i2 x1 x2)")
        assert rewrite_i(phi) == phi

    def test_flatten_in_any_argument_position(self):
        assert (
            format_formula(rewrite_i(parse_formula("(i3 x1 (i2 x2 x3) x4)")))
            == "(i4 x1 x2 x3 x4)"
        )

    def test_non_indicator_heads_untouched(self, sig):
        phi = parse_formula("(g x1 x1 (i2 (i1 x2) x2) x2)")
        out = rewrite_i(phi)
        assert format_formula(out) == "(g x1 x1 (i1 x2) x2)"
        assert realize(out, sig, 2) == realize(phi, sig, 2)

    def test_preserves_realized_function_on_seeded_formulas(self, sig):
        rng = random.Random(29)
        heads = ["g", "h", "i1", "i2", "i3"]

        def build(depth):
            name = rng.choice(heads)
            arity = sig.resolve(name).arity
            args = tuple(
                build(depth - 1) if depth > 1 and rng.random() < 0.6 else Var(rng.randint(1, 3))
                for _ in range(arity)
            )
            return App(name, args)

        for _ in range(150):
            phi = build(4)
            assert realize(rewrite_i(phi), sig, 3) == realize(phi, sig, 3)

    def test_used_variables(self):
        phi = parse_formula("(i2 x1 (i2 x3 x3))")
        assert used_variables(phi) == frozenset((1, 3))
