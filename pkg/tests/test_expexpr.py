"""The eventual-sign certificate behind symbolic sequence validation."""

import random

from triclone.families import _ExpExpr


def random_expr(rng, p):
    terms = {}
    for rate in range(1, rng.randint(1, 4)):
        if rng.random() < 0.7:
            terms[rate] = rng.randint(-20, 20)
    expr = _ExpExpr(p, {r: c for r, c in terms.items() if c}, rng.randint(-50, 50), rng.randint(-50, 50))
    return expr


class TestEventualSign:
    def test_certified_sign_holds_beyond_bound(self):
        rng = random.Random(17)
        for _ in range(300):
            p = rng.choice((2, 3, 5))
            expr = random_expr(rng, p)
            result = expr.eventual_sign()
            assert result is not None
            sign, bound = result
            for k in (bound, bound + 1, bound + 3, bound + 11, bound + 40):
                value = expr.value(k)
                if sign > 0:
                    assert value > 0, (expr, k, value)
                elif sign < 0:
                    assert value < 0, (expr, k, value)
                else:
                    assert value == 0

    def test_constant_and_linear_cases(self):
        e = _ExpExpr.const(2, -7)
        assert e.eventual_sign() == (-1, 0)
        assert _ExpExpr.const(2, 0).eventual_sign() == (0, 0)
        lin = _ExpExpr.linear(2, 3, -100)
        sign, bound = lin.eventual_sign()
        assert sign == 1 and lin.value(bound) > 0

    def test_dominant_rate_wins_over_large_lower_terms(self):
        # small positive leading coefficient against a large negative slower term
        expr = _ExpExpr(2, {3: 1, 1: -10_000}, 0, -999)
        sign, bound = expr.eventual_sign()
        assert sign == 1
        assert expr.value(bound) > 0
        assert expr.value(bound + 25) > 0

    def test_cancelling_terms_fold_away(self):
        a = _ExpExpr.power(2, 3, 2, 2)
        b = _ExpExpr.power(2, 3, 2, 2)
        assert a.minus(b).is_zero()
        assert a.minus(b).eventual_sign() == (0, 0)

    def test_arithmetic_matches_values(self):
        rng = random.Random(23)
        for _ in range(100):
            p = rng.choice((2, 3))
            x, y = random_expr(rng, p), random_expr(rng, p)
            for k in range(6):
                assert x.plus(y).value(k) == x.value(k) + y.value(k)
                assert x.minus(y).value(k) == x.value(k) - y.value(k)
