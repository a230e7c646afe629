"""Criteria/oracle agreement beyond the acceptance grid: exhaustive over all
valid targets of arity 4 (including the 4-ary all-equal function) against
every periodic generator with arity up to 6, both variants."""

from triclone.closure import member_oracle
from triclone.criteria import canonical_profiles, member_single, member_single_with_I
from triclone.symfun import i_table


def test_arity_four_targets_exhaustive():
    targets = [p for p in canonical_profiles(4) if p.t > 1 and p.d + p.t <= p.n]
    assert len(targets) == 5
    checked = 0
    for m in range(1, 7):
        for g in canonical_profiles(m):
            g_sym = g.to_symmetric()
            for f in targets:
                f_sym = f.to_symmetric()
                plain = member_single(f, g)
                with_i = member_single_with_I(f, g)
                oracle_plain = member_oracle(f_sym, [g_sym])
                oracle_with = member_oracle(f_sym, [g_sym, i_table(2)])
                assert oracle_plain.status in ("yes", "no")
                assert oracle_with.status in ("yes", "no")
                assert (plain.verdict == "yes") == (oracle_plain.status == "yes"), (
                    f, g, plain, oracle_plain.status,
                )
                assert (with_i.verdict == "yes") == (oracle_with.status == "yes"), (
                    f, g, with_i, oracle_with.status,
                )
                checked += 1
    assert checked == 5 * sum(len(canonical_profiles(m)) for m in range(1, 7))
