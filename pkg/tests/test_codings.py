import itertools

import pytest

from wred.codings import (
    BoundedPredicate,
    LimitPredicate,
    StableApprox,
    audit_limit,
    audit_predicate,
    audit_stabilization,
    jump_coloring,
    jump_decode,
    kummer_claim_check,
    kummer_coloring,
    limit_lift_transfer,
    membership_witness_bound,
    seq_rrt1_greedy,
    seq_ts1_omega_solver,
    true_homogeneous_set,
    unbounded_truth,
)
from wred.kernel import InputError
from wred.oracle import SearchBudget, enumerate_thin
from wred.problems import Coloring, ThinSolution, verify_rainbow_at, verify_thin_at


# --- depth-1 jump coding ---------------------------------------------------------


def equals_index():
    # phi(i, x) <=> x = i: every i is a member, witnessed at i
    return BoundedPredicate(lambda i, x: int(x == i), 1, lambda i: 1, label="x=i")


def never_true():
    return BoundedPredicate(lambda i, x: 0, 1, lambda i: 0, label="never")


def evens_member():
    return BoundedPredicate(lambda i, x: int(i % 2 == 0 and x >= i), 1,
                            lambda i: int(i % 2 == 0), label="evens")


def test_audit_accepts_honest_predicates():
    for pred in (equals_index(), never_true(), evens_member()):
        assert audit_predicate(pred, range(8)) == []


def test_audit_catches_lies():
    liar = BoundedPredicate(lambda i, x: 0, 1, lambda i: 1, label="liar")
    assert audit_predicate(liar, range(4)) == list(range(4))


def test_jump_coloring_equals_index_unfolds():
    cols = jump_coloring(equals_index())
    for i in range(5):
        f = cols(i)
        assert all(f.value((y,)) == (1 if y > i else 0) for y in range(12))


def test_never_true_colors_zero_and_decodes_false():
    pred = never_true()
    cols = jump_coloring(pred)
    h = lambda i: true_homogeneous_set(pred, i, 16, 4)
    got = jump_decode(pred, cols, h, range(5), 16)
    assert all(v == 0 for v in got.values())


def test_depth1_decode_matches_truth():
    for pred in (equals_index(), evens_member()):
        cols = jump_coloring(pred)
        h = lambda i, p=pred: true_homogeneous_set(p, i, 20, 4)
        got = jump_decode(pred, cols, h, range(6), 24)
        assert got == {i: pred.truth(i) for i in range(6)}


def test_decode_rejects_inhomogeneous_sample():
    pred = equals_index()
    cols = jump_coloring(pred)
    with pytest.raises(InputError):
        jump_decode(pred, cols, lambda i: list(range(12)), [3], 12)


# --- depth-2 jump coding ----------------------------------------------------------


def sigma2_member_even():
    # (exists x0)(forall x1) [i even and x0 >= i]: members are the evens
    return BoundedPredicate(lambda i, x0, x1: int(i % 2 == 0 and x0 >= i), 2,
                            lambda i: int(i % 2 == 0), label="s2-evens")


def sigma2_never():
    # x1 < x0 fails at x1 = x0: no member
    return BoundedPredicate(lambda i, x0, x1: int(x1 < x0), 2, lambda i: 0,
                            label="s2-never")


def sigma2_threshold():
    # member iff i < 3, with refutations growing in x0
    return BoundedPredicate(lambda i, x0, x1: int(i < 3 or x1 < x0), 2,
                            lambda i: int(i < 3), label="s2-threshold")


def test_depth2_audit_and_truth():
    for pred in (sigma2_member_even(), sigma2_never(), sigma2_threshold()):
        assert audit_predicate(pred, range(6)) == []
        for i in range(6):
            assert unbounded_truth(pred, i) == bool(pred.truth(i))


def test_depth2_decode_matches_truth():
    for pred in (sigma2_member_even(), sigma2_never(), sigma2_threshold()):
        cols = jump_coloring(pred)
        h = lambda i, p=pred: true_homogeneous_set(p, i, 20, 4)
        got = jump_decode(pred, cols, h, range(6), 64)
        assert got == {i: pred.truth(i) for i in range(6)}, pred.label


def test_depth2_staircase_outruns_refutations():
    pred = sigma2_never()
    h = true_homogeneous_set(pred, 0, 20, 4)
    f = jump_coloring(pred)(0)
    for t in itertools.combinations(h, 2):
        assert f.value(t) == 0


def test_membership_witness_bound():
    assert membership_witness_bound(equals_index(), 4) == 4
    assert membership_witness_bound(never_true(), 0) is None


# --- kummer coding -----------------------------------------------------------------


def limit_evens(bound=4):
    return LimitPredicate(lambda i, y: int(i % 2 == 0 and y >= bound) or int(i % 2 == 1 and y < 2),
                          1, lambda i: int(i % 2 == 0), lambda i: bound, label="lim-evens")


def limit_constant():
    return LimitPredicate(lambda i, y: 1, 1, lambda i: 1, lambda i: 0, label="lim-one")


def test_limit_audit():
    assert audit_limit(limit_evens(), range(6)) == []
    liar = LimitPredicate(lambda i, y: y % 2, 1, lambda i: 1, lambda i: 0, label="osc")
    assert audit_limit(liar, range(3)) == [0, 1, 2]


def test_kummer_constant_rule():
    pred = limit_constant()
    fam = kummer_coloring(pred, 3)
    f = fam((0, 1))
    assert all(f.value((y,)) == 2 for y in range(10))
    ok, msg = kummer_claim_check(pred, 3, (0, 1), range(1, 10), omitted=0, horizon=10)
    assert ok, msg


def test_kummer_claim_on_brute_thin_sets():
    pred = limit_evens()
    k = 3
    fam = kummer_coloring(pred, k)
    for xs in itertools.combinations(range(5), k - 1):
        f = fam(xs)
        for res in enumerate_thin(f, SearchBudget(horizon=20, size=6), limit=25):
            got, msg = kummer_claim_check(pred, k, xs, res.members, res.omitted, 20)
            if got is None:
                continue  # too sparse for the staircase
            assert got, f"{xs}: {msg}"


def test_kummer_rejects_non_thin():
    pred = limit_constant()
    with pytest.raises(InputError):
        kummer_claim_check(pred, 3, (0, 1), range(10), omitted=2, horizon=10)


def test_kummer_proper_subset_by_thinness():
    pred = limit_evens()
    fam = kummer_coloring(pred, 3)
    f = fam((0, 2))
    for res in enumerate_thin(f, SearchBudget(horizon=20, size=6), limit=10):
        used = {f.value((y,)) for y in res.members}
        assert used != {0, 1, 2}


# --- sequential solvers --------------------------------------------------------------


def test_greedy_rainbow_injective_columns():
    cols = lambda i: Coloring(1, None, lambda t: t[0] + 100 * i, f"inj{i}")
    out = seq_rrt1_greedy(cols, count=3, size=5, horizon=64)
    assert all(sol == [0, 1, 2, 3, 4] for sol in out)


def test_greedy_rainbow_two_bounded():
    cols = lambda i: Coloring(1, None, lambda t: t[0] // 2, "half")
    out = seq_rrt1_greedy(cols, count=1, size=4, horizon=64)
    assert out[0] == [0, 2, 4, 6]


def test_greedy_rainbow_verifies_and_is_minimal():
    cols = lambda i: Coloring(1, None, lambda t, i=i: (t[0] + i) // 3, "third")
    out = seq_rrt1_greedy(cols, count=4, size=6, horizon=64)
    for i, sol in enumerate(out):
        assert verify_rainbow_at(cols(i), sol, 64, 6).ok
        again = seq_rrt1_greedy(cols, count=4, size=5, horizon=64)[i]
        assert again == sol[:5]  # removing the last element reproduces the prefix


def test_greedy_rainbow_unbounded_fiber_inconclusive():
    cols = lambda i: Coloring(1, None, lambda t: 0, "const")
    out = seq_rrt1_greedy(cols, count=1, size=3, horizon=32)
    assert out[0] is None


def test_seq_ts1_omega_zero_coloring_trivially_thin():
    cols = lambda i: Coloring(1, None, lambda t: 0, "zero")
    (picks, omitted, note), = seq_ts1_omega_solver(cols, 1, 5, 32)
    assert picks == [0, 1, 2, 3, 4] and omitted == 1 and "trivially thin" in note


def test_seq_ts1_omega_identity_support():
    cols = lambda i: Coloring(1, None, lambda t: t[0], "id")
    (picks, omitted, _), = seq_ts1_omega_solver(cols, 1, 5, 32)
    assert picks == [1, 2, 3, 4, 5] and omitted == 0


def test_seq_ts1_omega_mixed_support():
    def rule(t):
        return 7 if t[0] in (3, 6) else 0

    cols = lambda i: Coloring(1, None, rule, "mixed")
    (picks, omitted, _), = seq_ts1_omega_solver(cols, 1, 4, 32)
    assert picks == [3, 6, 7, 8] and omitted == 1
    f = cols(0)
    assert verify_thin_at(f, ThinSolution.of(picks, omitted), 32, 4).status != "fail"


# --- limit lift ------------------------------------------------------------------------


def stable_example():
    def rule(i, xs, s):
        if s < 8:
            return (xs[0] + s) % 3
        return xs[0] % 3

    return StableApprox(rule, arity=1, colors=3, stab=8, label="mod3")


def test_stabilization_audit():
    assert audit_stabilization(stable_example(), 0, 10) == []
    wobbly = StableApprox(lambda i, xs, s: s % 2, 1, 2, stab=4, label="wobble")
    assert audit_stabilization(wobbly, 0, 6)


def test_lift_is_arity_bump_of_limit():
    approx = stable_example()
    lifted = approx.lifted_coloring(0)
    limit = approx.limit_coloring(0)
    assert lifted.arity == 2
    for x in range(6):
        for s in range(9, 14):
            assert lifted.value((x, s)) == limit.value((x,))


def test_lift_thinness_transfer():
    approx = stable_example()
    lifted = approx.lifted_coloring(0)
    # find a thin set for the lifted coloring by brute force
    from wred.oracle import find_thin

    res = find_thin(lifted, SearchBudget(horizon=20, size=6))
    assert res.found
    restricted, verdict = limit_lift_transfer(approx, 0, res.members, res.omitted, 20)
    assert verdict.status != "fail"


def test_lift_rejects_violated_declaration():
    wobbly = StableApprox(lambda i, xs, s: s % 2, 1, 2, stab=4, label="wobble")
    with pytest.raises(InputError):
        limit_lift_transfer(wobbly, 0, [4, 5, 6, 7], 1, 12)
