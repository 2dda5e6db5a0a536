import itertools
from fractions import Fraction

import pytest

from wred.adversaries import (
    Delta2Approx,
    StageLog,
    StageRecord,
    check_defeats,
    cm_coloring,
    delta2_diagonalizer,
    least_cut_width,
    qwwkl_cutter,
    rainbow_measure_coloring,
    rrt_column_splitter,
    ts1_backward_sample,
    ts1_diagonalizer,
)
from wred.kernel import InputError, Point, Prefix, cantor_pair, evaluate, pointwise
from wred.oracle import SearchBudget, find_rainbow
from wred.problems import Coloring, verify_rainbow_at


def identity_tree_map():
    return pointwise(1, lambda ctx, x: ctx.query(0, x), "id", reads=lambda x: [(0, x)])


def const_zero_backward():
    return pointwise(1, lambda ctx, x: 0, "zero")


def never_converging():
    def step(ctx, x):
        while True:
            ctx.tick()

    return pointwise(1, step, "spin")


# --- q-WWKL cutter -------------------------------------------------------------


def test_least_cut_width_example():
    assert least_cut_width(Fraction(1, 2), Fraction(3, 4)) == 3
    assert least_cut_width(Fraction(1, 4), Fraction(1, 2)) == 3  # 1/8 < 1/4, 1/4 not <


def test_cutter_constant_backward_cuts_exactly():
    tree, log = qwwkl_cutter(identity_tree_map(), const_zero_backward(),
                             Fraction(1, 2), Fraction(3, 4), stages=24)
    acted = [r for r in log.records if r.case == "2"]
    assert len(acted) == 3  # (7/8)^3 = 343/512 is the first value below 3/4
    for r in acted:
        assert r.measure_after == r.measure_before * Fraction(7, 8)
    assert tree.measure() == Fraction(343, 512)
    assert tree.measure() >= Fraction(1, 2)


def test_cutter_case2_requires_dense_image():
    _, log = qwwkl_cutter(identity_tree_map(), const_zero_backward(),
                          Fraction(1, 2), Fraction(3, 4), stages=24)
    for r in log.records:
        if r.case == "2":
            assert r.image_measure >= Fraction(3, 4)


def test_cutter_case1_only_when_backward_never_converges():
    tree, log = qwwkl_cutter(identity_tree_map(), never_converging(),
                             Fraction(1, 2), Fraction(3, 4), stages=10, fuel=200)
    assert all(r.case == "1" for r in log.records)
    assert tree.measure() == 1


def test_cutter_log_deterministic_and_digestable():
    a = qwwkl_cutter(identity_tree_map(), const_zero_backward(),
                     Fraction(1, 2), Fraction(3, 4), stages=16)[1]
    b = qwwkl_cutter(identity_tree_map(), const_zero_backward(),
                     Fraction(1, 2), Fraction(3, 4), stages=16)[1]
    assert a.to_csv() == b.to_csv()
    assert a.digest() == b.digest()
    assert len(a.digest()) == 64


def test_cut_tree_membership_matches_counts():
    tree, _ = qwwkl_cutter(identity_tree_map(), const_zero_backward(),
                           Fraction(1, 2), Fraction(3, 4), stages=12)
    for level in range(0, 11):
        explicit = sum(
            1 for bits in itertools.product((0, 1), repeat=level) if Prefix(bits) in tree
        )
        assert explicit == tree.level_count(level)


def test_stage_log_append_only():
    log = StageLog()
    log.add(StageRecord(3, "1"))
    with pytest.raises(InputError):
        log.add(StageRecord(2, "1"))


# --- TS1 diagonalizer ------------------------------------------------------------


def embed_2_to_3():
    # identity recoloring: the 2-coloring read back as a 3-coloring point
    from wred.problems import color_block_width, read_color

    def step(ctx, x):
        r, off = divmod(x, 2)  # width of 3 colors is 2 bits
        return (ctx.query(0, r) >> off) & 1 if off == 0 else 0

    def step2(ctx, x):
        r, off = divmod(x, 2)
        v = ctx.query(0, r) % 2
        return (v >> off) & 1

    return pointwise(1, step2, "embed23")


def prefix_echo():
    return pointwise(1, lambda ctx, x: ctx.query(0, x), "echo")


def shifted_echo():
    return pointwise(1, lambda ctx, x: ctx.query(0, x + 1), "echo+1")


def test_ts1_identity_recolor_one_action():
    res = ts1_diagonalizer(embed_2_to_3(), prefix_echo(), 2, 3, stages=24)
    assert len(res.log.action_stages()) == 1
    assert res.invalidated == [0]  # color 0 dies first
    assert set(res.colors[2:]) == {1}  # after the action the tail is the survivor
    assert res.assembled is not None
    assert len(res.assembled_colors) <= 2  # at most j image colors on T
    pulled = ts1_backward_sample(prefix_echo(), res.assembled, 32)
    f_colors = {res.colors[x] for x in pulled if x < len(res.colors)}
    assert f_colors == {0, 1}  # the pulled-back set mixes both source colors


def test_ts1_never_converging_backward_no_action():
    res = ts1_diagonalizer(embed_2_to_3(), never_converging(), 2, 3, stages=16, fuel=200)
    assert res.log.action_stages() == []
    assert set(res.colors) == {0}  # all-least-valid-color tail


def test_ts1_shifted_echo_fires():
    res = ts1_diagonalizer(embed_2_to_3(), shifted_echo(), 2, 3, stages=24)
    assert len(res.log.action_stages()) == 1
    assert res.assembled is not None and len(res.assembled_colors) <= 2


def test_ts1_action_bound_respected():
    for psi in (prefix_echo(), shifted_echo()):
        res = ts1_diagonalizer(embed_2_to_3(), psi, 2, 3, stages=30)
        assert len(res.log.action_stages()) <= 1  # j - 1


def test_ts1_rejects_bad_colors():
    with pytest.raises(InputError):
        ts1_diagonalizer(embed_2_to_3(), prefix_echo(), 3, 3, stages=4)


# --- Delta2 diagonalizer -----------------------------------------------------------


def test_delta2_empty_guess_is_constant_zero():
    g = Delta2Approx(rule=lambda e, i, b, s: 0, limit=lambda e, b: 0)
    colorings, _ = delta2_diagonalizer(3, g, stages=16)
    for i in (0, 1, 2):
        assert all(colorings[i].value((b,)) == 0 for b in range(16))


def test_delta2_evens_guesser_defeated():
    stab = 8

    def rule(e, i, b, s):
        if s < stab:
            return 0
        return 1 if b % 2 == 0 else 0

    g = Delta2Approx(rule=rule, stabilization=stab, limit=lambda e, b: 1 if b % 2 == 0 else 0)
    colorings, _ = delta2_diagonalizer(3, g, stages=64)
    ok, detail = check_defeats(colorings, g, e=2, horizon=64)
    assert ok and "all 3 colors" in detail


def test_delta2_finite_guess_trivially_defeated():
    g = Delta2Approx(rule=lambda e, i, b, s: 1 if b == 0 else 0,
                     limit=lambda e, b: 1 if b == 0 else 0)
    colorings, _ = delta2_diagonalizer(2, g, stages=16)
    ok, detail = check_defeats(colorings, g, e=1, horizon=16)
    assert ok and "members below" in detail


def test_delta2_deterministic():
    g = Delta2Approx(rule=lambda e, i, b, s: (b + s) % 2, limit=None)
    a, loga = delta2_diagonalizer(2, g, stages=20)
    b, logb = delta2_diagonalizer(2, g, stages=20)
    assert loga.digest() == logb.digest()
    assert [[c.value((x,)) for x in range(20)] for c in a] == [
        [c.value((x,)) for x in range(20)] for c in b
    ]


# --- pair-gluing rainbow colorings ------------------------------------------------


def all_ones_functional():
    return pointwise(1, lambda ctx, x: 1, "ones-out")


def single_one_functional():
    return pointwise(1, lambda ctx, x: 1 if x == 0 else 0, "one-at-0")


def test_cm_untriggered_injective():
    res = cm_coloring(single_one_functional())
    assert res.excluded_pair() is None
    f = res.coloring
    vals = [f.value(t) for t in itertools.combinations(range(12), 2)]
    assert len(vals) == len(set(vals))


def test_cm_immediate_trigger():
    res = cm_coloring(all_ones_functional())
    x, y, sigma, stage = res.excluded_pair()
    assert (x, y) == (0, 1) and sigma == Prefix()
    f = res.coloring
    for s in range(stage, stage + 8):
        assert f.value((x, s)) == f.value((y, s)) == cantor_pair(x, s)


def test_cm_two_bounded_exhaustively():
    res = cm_coloring(all_ones_functional())
    counts = {}
    for t in itertools.combinations(range(24), 2):
        v = res.coloring.value(t)
        counts[v] = counts.get(v, 0) + 1
    assert max(counts.values()) <= 2


def test_cm_glued_pair_blocks_rainbows():
    res = cm_coloring(all_ones_functional())
    x, y, sigma, stage = res.excluded_pair()
    budget = SearchBudget(horizon=20, size=5)
    found = find_rainbow(res.coloring, budget)
    assert found.found
    assert not {x, y} <= set(found.members)  # any rainbow avoids the glued pair


# --- arb-bounds cylinder search ----------------------------------------------------


def test_arb_bounds_inert_no_cylinders():
    res = rainbow_measure_coloring(single_one_functional(), Fraction(1, 4))
    assert res.cylinders == []
    f = res.coloring
    vals = [f.value(t) for t in itertools.combinations(range(12), 2)]
    assert len(vals) == len(set(vals))


def test_arb_bounds_immediate_full_cylinder():
    res = rainbow_measure_coloring(all_ones_functional(), Fraction(1, 4))
    assert len(res.cylinders) == 1
    assert res.cylinders[0].strings == (Prefix(),)
    assert res.cylinders[0].measure == 1 >= Fraction(1, 4)


def first_bit_functional():
    # two 1s only when the oracle starts with 0: triggers exactly on [0]
    def step(ctx, x):
        if ctx.query(0, 0) == 0:
            return 1 if x < 2 else 0
        return 1 if x == 2 else 0

    return pointwise(1, step, "first-bit")


def split_functional():
    # commits to witnesses {0,1} on the 0-side and {2,3} on the 1-side
    def step(ctx, x):
        b = ctx.query(0, 0)
        return 1 if x in ((0, 1) if b == 0 else (2, 3)) else 0

    return pointwise(1, step, "split")


def test_arb_bounds_split_finds_two_disjoint_sets():
    res = rainbow_measure_coloring(split_functional(), Fraction(1, 2))
    assert len(res.cylinders) == 2
    for cyl in res.cylinders:
        assert cyl.measure >= Fraction(1, 2)
    assert not res.cylinders[0].overlaps(res.cylinders[1])
    assert len(res.cylinders) <= 2  # ceil(1/q)


def test_arb_bounds_count_bound():
    for q in (Fraction(1, 2), Fraction(1, 4)):
        res = rainbow_measure_coloring(all_ones_functional(), q)
        import math

        assert len(res.cylinders) <= math.ceil(1 / q)


def test_arb_bounds_coloring_is_bounded():
    res = rainbow_measure_coloring(split_functional(), Fraction(1, 2))
    counts = {}
    for t in itertools.combinations(range(24), 2):
        v = res.coloring.value(t)
        counts[v] = counts.get(v, 0) + 1
    assert max(counts.values()) <= res.bound


def test_arb_bounds_exclusion():
    res = rainbow_measure_coloring(split_functional(), Fraction(1, 2))
    phi = split_functional()
    for cyl, trig in zip(res.cylinders, res.triggers):
        for sigma, (x, y) in zip(cyl.strings, cyl.used):
            ext = Point(lambda p, s=sigma: s.bits[p] if p < len(s) else 0, "ext")
            assert evaluate(phi, [ext], x, 1000).value == 1
            assert evaluate(phi, [ext], y, 1000).value == 1
            for s in range(trig, trig + 6):
                assert res.coloring.value(tuple(sorted((x, s)))) == res.coloring.value(
                    tuple(sorted((y, s)))
                )


# --- column splitter -----------------------------------------------------------------


def test_column_splitter_single_column_is_half():
    phi = pointwise(1, lambda ctx, x: 1, "ones")
    results = rrt_column_splitter(phi, columns=1)
    assert len(results) == 1
    assert results[0].cylinders and results[0].cylinders[0].measure >= Fraction(1, 2)


def test_column_splitter_targets_decrease():
    phi = pointwise(1, lambda ctx, x: 1, "ones")
    results = rrt_column_splitter(phi, columns=3)
    qs = [Fraction(1, 2 ** (j + 1)) for j in range(3)]
    for res, q in zip(results, qs):
        for cyl in res.cylinders:
            assert cyl.measure >= q


def test_column_restriction_positional_algebra():
    marks = {cantor_pair(5, cantor_pair(0, 1))}
    phi = pointwise(1, lambda ctx, x: 1 if x in marks else 0, "marked")
    from wred.adversaries import _inner_value
    from wred.kernel import EvalContext

    ctx = EvalContext([Point.zeros()], 1000)
    assert _inner_value(phi, ctx, 5, cantor_pair(0, 1), 1000) == 1
    assert _inner_value(phi, ctx, 4, cantor_pair(0, 1), 1000) == 0


def test_cutter_backward_may_read_the_tree_approximation():
    # arity-2 backward: reads the path string and the fixed tree region;
    # queries beyond the current height diverge and the stage retries
    def step(ctx, x):
        ctx.query(1, 0)  # root bit of the approximation: always fixed
        return 0

    psi2 = pointwise(2, step, "tree-reader")
    tree, log = qwwkl_cutter(identity_tree_map(), psi2, Fraction(1, 2), Fraction(3, 4),
                             stages=24)
    assert len([r for r in log.records if r.case == "2"]) == 3


# regression pins: the logs are replayable, so drift means semantics moved
TS1_LOG_DIGEST = "b33bad1d0f55252b5c2ae4d012f4f2319b2ee8995d5b93e506f5151c09931854"
DELTA2_LOG_DIGEST = "4ef4c767c65377df7d2d5f7e753225d7d604fe1fb93768cb3e8749aa44c7aa79"


def test_ts1_log_digest_pinned():
    res = ts1_diagonalizer(embed_2_to_3(), prefix_echo(), 2, 3, stages=24)
    assert res.log.digest() == TS1_LOG_DIGEST


def test_delta2_log_digest_pinned():
    g = Delta2Approx(rule=lambda e, i, b, s: 1 if (s >= 8 and b % 2 == 0) else 0,
                     stabilization=8, limit=lambda e, b: 1 if b % 2 == 0 else 0)
    _, log = delta2_diagonalizer(3, g, stages=32)
    assert log.digest() == DELTA2_LOG_DIGEST


def test_check_defeats_needs_declared_limit():
    g = Delta2Approx(rule=lambda e, i, b, s: 0, limit=None)
    colorings, _ = delta2_diagonalizer(2, g, stages=8)
    with pytest.raises(InputError):
        check_defeats(colorings, g, 0, 8)
