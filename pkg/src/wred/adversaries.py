"""Stage-based diagonalization constructions, run against supplied
functionals, with exact rational bookkeeping and replayable logs.

Every run is deterministic given its inputs and budgets; the logs
serialize canonically so regression tests can pin them by digest.
Measures are Fractions throughout, and the per-stage multiplicative
identities the constructions promise are asserted, not assumed.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .kernel import (
    Diverge,
    Functional,
    InputError,
    Prefix,
    ResourceError,
    cantor_pair,
    evaluate,
    pointwise,
)
from .problems import (
    Coloring,
    color_block_width,
    index_string,
    string_index,
)

DEFAULT_FUEL = 50_000


# ---------------------------------------------------------------------------
# stage logs


@dataclass(frozen=True)
class StageRecord:
    stage: int
    case: str
    detail: str = ""
    acted_for: tuple = ()
    alpha: tuple = ()
    measure_before: Optional[Fraction] = None
    measure_after: Optional[Fraction] = None
    image_measure: Optional[Fraction] = None

    def as_row(self) -> tuple:
        frac = lambda v: "" if v is None else f"{v.numerator}/{v.denominator}"
        return (
            self.stage,
            self.case,
            self.detail,
            " ".join(map(str, self.acted_for)),
            "".join(map(str, self.alpha)),
            frac(self.measure_before),
            frac(self.measure_after),
            frac(self.image_measure),
        )


@dataclass
class StageLog:
    records: list[StageRecord] = field(default_factory=list)

    HEADER = ("stage", "case", "detail", "acted_for", "alpha",
              "measure_before", "measure_after", "image_measure")

    def add(self, rec: StageRecord) -> None:
        if self.records and rec.stage < self.records[-1].stage:
            raise InputError("stage log is append-only")
        self.records.append(rec)

    def action_stages(self) -> list[StageRecord]:
        return [r for r in self.records if r.case == "2" or r.case == "action"]

    def to_csv(self) -> str:
        lines = [",".join(self.HEADER)]
        for r in self.records:
            lines.append(",".join(str(c) for c in r.as_row()))
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_csv().encode()).hexdigest()


# ---------------------------------------------------------------------------
# the q-WWKL measure cutter


@dataclass
class CutTree:
    """A leveled tree given by disjoint-support pattern exclusions.

    A string sigma survives a constraint (t, xs, alpha) unless it is
    longer than t and matches alpha on the positions xs; constraints from
    different stages use disjoint positions, so level counts multiply
    exactly.
    """

    height: int = 0
    constraints: list = field(default_factory=list)  # (stage, xs, alpha)

    def member(self, sigma: Prefix) -> bool:
        n = len(sigma)
        if n > self.height:
            return False
        for t, xs, alpha in self.constraints:
            if n > t and all(sigma.bits[x] == a for x, a in zip(xs, alpha)):
                return False
        return True

    def __contains__(self, sigma: Prefix) -> bool:
        return self.member(sigma)

    def level_count(self, level: int) -> int:
        if level > self.height:
            return 0
        total = Fraction(2**level)
        for t, xs, _alpha in self.constraints:
            if t < level:
                total *= 1 - Fraction(1, 2 ** len(xs))
        assert total.denominator == 1, "disjoint supports keep counts integral"
        return int(total)

    def measure(self, level: Optional[int] = None) -> Fraction:
        level = self.height if level is None else level
        return Fraction(self.level_count(level), 2**level)

    def as_partial_point(self):
        tree = self

        class _T:
            def bit(self, pos):
                sigma = index_string(pos)
                if len(sigma) > tree.height:
                    raise Diverge("gap", pos)
                return 1 if tree.member(sigma) else 0

        return _T()


def least_cut_width(p: Fraction, q: Fraction) -> int:
    """Least a with 2^-a < q - p."""
    if not 0 < p < q < 1:
        raise InputError("need 0 < p < q < 1")
    a = 1
    while Fraction(1, 2**a) >= q - p:
        a += 1
    return a


class _ImageSweep:
    """The image point materialized in index order across stages.

    Output bits are produced position by position against the growing
    tree oracle; a converged bit read a fixed region, so it never has to
    be revisited when the oracle extends.  The image height is the
    deepest fully-converged level.
    """

    def __init__(self, phi: Functional, fuel: int):
        self.phi = phi
        self.fuel = fuel
        self.bits: list[int] = []

    def advance(self, oracle, upto_index: int) -> None:
        from .kernel import _run_step

        while len(self.bits) <= upto_index:
            try:
                v, _, _ = _run_step(self.phi, [oracle], len(self.bits), self.fuel)
            except Diverge:
                return
            self.bits.append(v)

    def height(self, cap: int) -> int:
        n = 0
        while n < cap and len(self.bits) >= 2 ** (n + 2) - 1:
            n += 1
        return n

    def level(self, ell: int) -> list[Prefix]:
        members = [Prefix()]
        for _ in range(ell):
            members = [
                c for m in members for c in (m.extend(0), m.extend(1))
                if self.bits[string_index(c)] == 1
            ]
        return members


def qwwkl_cutter(phi: Functional, psi: Functional, p: Fraction, q: Fraction,
                 stages: int, image_cap: int = 12, fuel: int = DEFAULT_FUEL):
    """Cut a tree of measure >= p so the image tree drops below measure q.

    Case 2 stages pick a pattern alpha agreed on by at least a 2^-a
    fraction of the image level and prune exactly that pattern from the
    tree: the measure multiplies by precisely 1 - 2^-a each time, and the
    log certifies it.
    """
    a = least_cut_width(p, q)
    tree = CutTree()
    log = StageLog()
    acted: set[int] = set()
    sweep = _ImageSweep(phi, fuel)

    for s in range(stages):
        mu_before = tree.measure()
        cap = min(s, image_cap)
        sweep.advance(tree.as_partial_point(), 2 ** (cap + 1) - 2)
        n_s = sweep.height(cap)
        image = sweep.level(n_s)
        image_mu = Fraction(len(image), 2**n_s)
        xs = []
        probe = 0
        while len(xs) < a:
            if probe not in acted:
                xs.append(probe)
            probe += 1

        reason = None
        if Fraction(len(image), 2**n_s) < q:
            reason = f"image level {n_s} below q"
        if reason is None and xs[-1] >= s:
            reason = f"x_{a - 1} = {xs[-1]} not below the stage"
        votes = {}
        if reason is None:
            # an arity-2 backward also reads the construction's current
            # approximation; queries into the unfixed region diverge and
            # the stage is simply retried once more of the tree is fixed
            tapes_extra = [] if psi.arity == 1 else [tree.as_partial_point()]
            for tau in image:
                vals = []
                for x in xs:
                    out = evaluate(psi, [tau] + tapes_extra, x, fuel)
                    if not out.converged:
                        reason = f"backward diverged on a level-{n_s} string at {x}"
                        break
                    vals.append(out.value)
                if reason:
                    break
                votes[tuple(vals)] = votes.get(tuple(vals), 0) + 1

        if reason is not None:
            tree.height = s + 1
            log.add(StageRecord(s, "1", reason, measure_before=mu_before,
                                measure_after=tree.measure(), image_measure=image_mu))
            continue

        threshold = Fraction(len(image), 2**a)
        alpha = min(t for t, c in votes.items() if c >= threshold)
        tree.constraints.append((s, tuple(xs), alpha))
        tree.height = s + 1
        acted.update(xs)
        mu_after = tree.measure()
        if mu_after != mu_before * (1 - Fraction(1, 2**a)):
            raise ResourceError("cut bookkeeping broke the multiplicative identity",
                                stage=s, before=str(mu_before), after=str(mu_after))
        log.add(StageRecord(s, "2", f"acted with image count {len(image)} at level {n_s}",
                            acted_for=tuple(xs), alpha=alpha, measure_before=mu_before,
                            measure_after=mu_after, image_measure=image_mu))
    return tree, log


# ---------------------------------------------------------------------------
# the thin-set color invalidation game


@dataclass
class TS1Result:
    colors: list[int]  # f(0), f(1), ...
    f_sets: list[tuple]  # the homogeneous anchors F_0 < F_1 < ...
    anchors_x: list[int]
    invalidated: list[int]
    log: StageLog
    assembled: Optional[list[int]] = None  # T within the horizon
    assembled_colors: Optional[set] = None


def _canonical_set(index: int) -> tuple:
    return tuple(i for i in range(index.bit_length()) if (index >> i) & 1)


def ts1_diagonalizer(phi: Functional, psi: Functional, j: int, k: int, stages: int,
                     set_budget: int = 1 << 12, fuel: int = DEFAULT_FUEL,
                     horizon: int = 32, tail_size: int = 4) -> TS1Result:
    """Defeat a claimed TS^1_j <= TS^1_k reduction pair at finite scale.

    Colors are invalidated one at a time as the backward functional is
    caught asserting membership; at most j-1 action stages can fire, and
    the assembled set shows at most j of the k image colors while the
    backward image must mix source colors.
    """
    if not 2 <= j < k:
        raise InputError("need 2 <= j < k")
    w_j = color_block_width(j)
    colors: list[int] = []
    valid = list(range(j))
    f_sets: list[tuple] = []
    anchors: list[int] = []
    invalidated: list[int] = []
    log = StageLog()

    def f_prefix_tape():
        bits = []
        for c in colors:
            bits.extend((c >> b) & 1 for b in range(w_j))
        return Prefix(tuple(bits))

    def image_color(tape, x) -> Optional[int]:
        w_k = color_block_width(k)
        vals = []
        for b in range(w_k):
            out = evaluate(phi, [tape], x * w_k + b, fuel)
            if not out.converged:
                return None
            vals.append(out.value)
        return sum(v << b for b, v in enumerate(vals)) % k

    def set_prefix(members) -> Prefix:
        if not members:
            return Prefix()
        top = max(members)
        return Prefix(tuple(1 if i in members else 0 for i in range(top + 1)))

    psi_eval_budget = 512  # per stage; truncation is reported, never silent
    for s in range(1, stages + 1):
        acted = False
        truncated = False
        if len(f_sets) < j - 1 and colors:
            base = set()
            for fs in f_sets:
                base.update(fs)
            base_top = max(base) if base else -1
            ftape = f_prefix_tape()
            img = {}
            evals = 0
            # a number is eligible only where the backward still diverges
            # on the anchors built so far; this is per-stage, not per-F
            eligible = []
            for x in range(len(colors)):
                if x > s or colors[x] not in valid:
                    continue
                evals += 1
                if not evaluate(psi, [set_prefix(base)], x, fuel).converged:
                    eligible.append(x)
            for idx in range(1, set_budget):
                if acted or evals >= psi_eval_budget:
                    truncated = evals >= psi_eval_budget
                    break
                cand = _canonical_set(idx)
                if not cand or cand[-1] > s or cand[0] <= base_top:
                    continue
                vals = set()
                bad = False
                for m in cand:
                    if m not in img:
                        img[m] = image_color(ftape, m)
                    if img[m] is None:
                        bad = True
                        break
                    vals.add(img[m])
                if bad or len(vals) != 1:
                    continue
                for x in eligible:
                    evals += 1
                    out1 = evaluate(psi, [set_prefix(base | set(cand))], x, fuel)
                    if out1.converged and out1.value == 1:
                        f_sets.append(cand)
                        anchors.append(x)
                        dead = colors[x]
                        invalidated.append(dead)
                        valid.remove(dead)
                        log.add(StageRecord(s, "action",
                                            f"F_{len(f_sets) - 1}={cand} x={x} kills color {dead}",
                                            acted_for=cand))
                        acted = True
                        break
                    if evals >= psi_eval_budget:
                        break
        while len(colors) <= s:
            colors.append(valid[0])
        if not acted:
            note = "search truncated at the evaluation budget" if truncated else ""
            log.add(StageRecord(s, "wait", note or f"colors through {len(colors) - 1}"))

    # assemble T = union of anchors plus a homogeneous tail for the image
    result = TS1Result(colors, f_sets, anchors, invalidated, log)
    full_tape = f_prefix_tape()
    image_vals = {}
    for x in range(horizon):
        if x < len(colors):
            image_vals[x] = image_color(full_tape, x)
    start = (max(max(fs) for fs in f_sets) + 1) if f_sets else 0
    by_color: dict[int, list[int]] = {}
    for x in range(start, min(horizon, len(colors))):
        c = image_vals.get(x)
        if c is not None:
            by_color.setdefault(c, []).append(x)
    tail = max(by_color.values(), key=len, default=[])
    if len(tail) >= tail_size:
        t = sorted(set().union(*f_sets) | set(tail)) if f_sets else sorted(tail)
        result.assembled = t
        result.assembled_colors = {image_vals[x] for x in t if image_vals.get(x) is not None}
    return result


def ts1_backward_sample(psi: Functional, members, horizon: int,
                        fuel: int = DEFAULT_FUEL) -> list[int]:
    """Members the backward functional asserts on a finite set oracle."""
    if not members:
        return []
    top = max(members)
    tape = Prefix(tuple(1 if i in members else 0 for i in range(top + 1)))
    out = []
    for x in range(horizon):
        o = evaluate(psi, [tape], x, fuel)
        if o.converged and o.value == 1:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# the limit-guess color cycler


@dataclass
class Delta2Approx:
    """A total guesser g(e, i, b, s) -> {0,1} with optional declared limits."""

    rule: Callable[[int, int, int, int], int]
    stabilization: Optional[int] = None  # declared: g(e,i,b,s) constant for s >= this
    limit: Optional[Callable[[int, int], int]] = None  # declared lim_s g(e,i,b,s)


def delta2_diagonalizer(k: int, g: Delta2Approx, stages: int) -> tuple[list[Coloring], StageLog]:
    """The instance whose column e defeats the e-th limit-guessed set.

    Column i at stage s: with the approximated set's colors C_{i,s}, pick
    the least missing color, or else the color whose first occurrence is
    latest.
    """
    if k < 2:
        raise InputError("need at least 2 colors")
    log = StageLog()
    tables: list[list[int]] = []
    for i in range(stages):
        f_i: list[int] = []
        for s in range(stages):
            approx = [b for b in range(s) if b < len(f_i) and g.rule(i, i, b, s) == 1]
            used = {f_i[b] for b in approx}
            if used != set(range(k)):
                choice = min(c for c in range(k) if c not in used)
                case = "1"
            else:
                first = {}
                for c in range(k):
                    first[c] = next(b for b in range(len(f_i)) if f_i[b] == c)
                choice = max(first, key=lambda c: first[c])
                case = "2"
            f_i.append(choice)
            if i == s:
                log.add(StageRecord(s, case, f"f_{i}({s}) = {choice}"))
        tables.append(f_i)
    colorings = [
        Coloring(1, k, lambda t, tb=tuple(tab): tb[t[0]] if t[0] < len(tb) else 0,
                 f"diag[{i}]")
        for i, tab in enumerate(tables)
    ]
    return colorings, log


def check_defeats(colorings: list[Coloring], g: Delta2Approx, e: int, horizon: int,
                  finite_threshold: int = 4) -> tuple[bool, str]:
    """Confirm the e-th declared limit set is finite or uses all colors."""
    if g.limit is None:
        raise InputError("defeat checking needs a declared limit")
    d_e = [b for b in range(horizon) if g.limit(e, b) == 1]
    if len(d_e) < finite_threshold:
        return True, f"D_{e} has only {len(d_e)} members below {horizon}"
    k = colorings[e].colors
    used = {colorings[e].value((b,)) for b in d_e}
    if used == set(range(k)):
        return True, f"all {k} colors occur on D_{e}"
    return False, f"colors {sorted(used)} only"


# ---------------------------------------------------------------------------
# rainbow adversaries


@dataclass
class CMResult:
    coloring: Coloring
    trigger: Optional[tuple] = None  # (x, y, sigma, stage)

    def excluded_pair(self):
        return self.trigger


def _first_double_one(phi: Functional, sigma: Prefix, out_bound: int, fuel: int):
    """Least x < y with converged output 1 at both, on the string oracle."""
    ones = []
    for pos in range(out_bound):
        out = evaluate(phi, [sigma], pos, fuel)
        if not out.converged:
            break
        if out.value == 1:
            ones.append(pos)
            if len(ones) == 2:
                return ones[0], ones[1]
    return None


def cm_coloring(phi: Functional, len_cap: int = 6, out_bound: int = 16,
                fuel: int = DEFAULT_FUEL) -> CMResult:
    """Glue one pair per stage once the functional shows two 1s.

    Colors are fresh pairing values except that, after the trigger, the
    two glued witnesses share a color forever; the coloring is 2-bounded
    and anything extending the trigger string computes both witnesses.
    """
    found = None
    for length in range(len_cap + 1):
        for bits in itertools.product((0, 1), repeat=length):
            sigma = Prefix(bits)
            got = _first_double_one(phi, sigma, out_bound, fuel)
            if got is not None:
                found = (got[0], got[1], sigma)
                break
        if found:
            break
    if found is None:
        rule = lambda t: cantor_pair(t[0], t[1])
        return CMResult(Coloring(2, None, rule, "cm-untriggered"))
    x, y, sigma = found
    stage = max(x, y, len(sigma)) + 1

    def rule(t):
        z, s = t
        if s >= stage and z in (x, y):
            return cantor_pair(x, s)
        return cantor_pair(z, s)

    return CMResult(Coloring(2, None, rule, "cm-glued"), (x, y, sigma, stage))


@dataclass
class CylinderSet:
    strings: tuple
    measure: Fraction
    used: tuple  # (x, y) per string, in order

    def overlaps(self, other: "CylinderSet") -> bool:
        for a in self.strings:
            for b in other.strings:
                if a.is_prefix_of(b) or b.is_prefix_of(a):
                    return True
        return False


@dataclass
class ArbBoundsResult:
    coloring: Coloring
    cylinders: list[CylinderSet]
    bound: int  # the coloring is bound-bounded
    triggers: list[int]  # discovery stage per cylinder set


def rainbow_measure_coloring(phi: Functional, q: Fraction, len_cap: int = 6,
                             out_bound: int = 16, fuel: int = DEFAULT_FUEL) -> ArbBoundsResult:
    """Collect disjoint cylinder sets of measure >= q on which the
    functional commits to two rainbow members, then glue those members.

    At most ceil(1/q) sets can ever be found: more would give disjoint
    subsets of total measure above 1.
    """
    if not 0 < q < 1:
        raise InputError("need 0 < q < 1")
    cylinders: list[CylinderSet] = []
    used_all: set[int] = set()

    while True:
        collected: list[Prefix] = []
        pairs: list[tuple] = []
        mass = Fraction(0)
        for length in range(len_cap + 1):
            if mass >= q:
                break
            for bits in itertools.product((0, 1), repeat=length):
                sigma = Prefix(bits)
                if any(c.is_prefix_of(sigma) or sigma.is_prefix_of(c)
                       for cyl in cylinders for c in cyl.strings):
                    continue
                if any(c.is_prefix_of(sigma) or sigma.is_prefix_of(c) for c in collected):
                    continue
                fresh = _fresh_double_one(phi, sigma, out_bound, fuel, used_all)
                if fresh is None:
                    continue
                collected.append(sigma)
                pairs.append(fresh)
                mass += Fraction(1, 2 ** len(sigma))
                if mass >= q:
                    break
        if mass < q:
            break
        for x, y in pairs:
            used_all.update((x, y))
        cylinders.append(CylinderSet(tuple(collected), mass, tuple(pairs)))
        if len(cylinders) > math.ceil(1 / q):
            raise ResourceError("more disjoint cylinder sets than the measure allows",
                                count=len(cylinders))

    triggers = []
    t = 0
    for cyl in cylinders:
        t = max(t + 1, max((max(u) for u in cyl.used), default=0) + 1,
                max(len(s) for s in cyl.strings) + 1)
        triggers.append(t)

    glue: dict[int, tuple[int, int]] = {}  # member -> (least used in its set, trigger)
    for cyl, trig in zip(cylinders, triggers):
        members = sorted({v for pair in cyl.used for v in pair})
        for v in members:
            glue[v] = (members[0], trig)

    def rule(tup):
        z, s = tup
        if z in glue and s >= glue[z][1]:
            return cantor_pair(glue[z][0], s)
        return cantor_pair(z, s)

    bound = max((len({v for pair in cyl.used for v in pair}) for cyl in cylinders), default=1)
    return ArbBoundsResult(Coloring(2, None, rule, f"arb-bounds(q={q})"),
                           cylinders, bound, triggers)


def _fresh_double_one(phi: Functional, sigma: Prefix, out_bound: int, fuel: int,
                      used: set):
    ones = []
    for pos in range(out_bound):
        out = evaluate(phi, [sigma], pos, fuel)
        if not out.converged:
            break
        if out.value == 1 and pos not in used:
            ones.append(pos)
            if len(ones) == 2:
                return ones[0], ones[1]
    return None


def rrt_column_splitter(phi: Functional, columns: int, e: int = 0,
                        len_cap: int = 6, out_bound: int = 16,
                        fuel: int = DEFAULT_FUEL) -> list[ArbBoundsResult]:
    """One arb-bounds run per column, at geometrically shrinking targets.

    Column j (0-indexed) restricts the functional to output column
    pair(e, j) and runs the cylinder search at q = 2^-(j+1), so the
    measure of sets solving column j shrinks below 2^-j as in the
    splitting argument.
    """
    if columns < 1:
        raise InputError("need at least one column")
    out = []
    for jcol in range(columns):
        col = cantor_pair(e, jcol)
        restricted = pointwise(1, lambda ctx, x, col=col: _inner_value(phi, ctx, x, col, fuel),
                               f"column[{col}]")
        out.append(rainbow_measure_coloring(restricted, Fraction(1, 2 ** (jcol + 1)),
                                            len_cap, out_bound, fuel))
    return out


def _inner_value(phi: Functional, ctx, x: int, col: int, fuel: int):
    from .kernel import _run_step

    v, _, _ = _run_step(phi, [ctx.tapes[0]], cantor_pair(x, col), fuel)
    return v
