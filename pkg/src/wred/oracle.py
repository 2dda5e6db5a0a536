"""Brute-force finite solvers: the ground truth for every property test.

Deliberately naive.  Searches are greedy-first with an exhaustive DFS
fallback, both under a node budget, and every result records which
engine produced it.  Exhaustive results are canonical: the returned set
is lexicographically least among solutions of the requested size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .kernel import InputError, Prefix
from .problems import Coloring, TreeByRule, level_members


@dataclass(frozen=True)
class SearchBudget:
    horizon: int = 16
    size: int = 4
    node_limit: int = 200_000
    seed: int = 0

    def __post_init__(self):
        if self.horizon <= 0 or self.size <= 0 or self.node_limit <= 0:
            raise InputError("budget limits must be positive")


@dataclass(frozen=True)
class SearchResult:
    members: tuple = ()
    omitted: Optional[int] = None
    mode: str = "exhaustive"  # 'greedy' | 'exhaustive'
    nodes: int = 0
    exhausted: bool = False  # node limit hit: absence is NOT certified

    @property
    def found(self) -> bool:
        return bool(self.members)

    @property
    def inconclusive(self) -> bool:
        return not self.members and self.exhausted


class _Nodes:
    __slots__ = ("count", "limit")

    def __init__(self, limit):
        self.count, self.limit = 0, limit

    def spend(self) -> bool:
        self.count += 1
        return self.count <= self.limit


def _dfs_extend(consistent, budget: SearchBudget) -> SearchResult:
    """Lexicographic DFS for a size-s subset of [0, N) passing `consistent`.

    `consistent(chosen, x)` judges adding x to an already-consistent
    chosen prefix, so the first solution found is the least one.
    """
    nodes = _Nodes(budget.node_limit)
    chosen: list[int] = []

    def rec(start: int) -> Optional[list[int]]:
        if len(chosen) == budget.size:
            return list(chosen)
        for x in range(start, budget.horizon):
            if budget.horizon - x < budget.size - len(chosen):
                break
            if not nodes.spend():
                return None
            if consistent(chosen, x):
                chosen.append(x)
                got = rec(x + 1)
                if got is not None:
                    return got
                chosen.pop()
        return None

    got = rec(0)
    if got is not None:
        return SearchResult(tuple(got), mode="exhaustive", nodes=nodes.count)
    return SearchResult(mode="exhaustive", nodes=nodes.count, exhausted=nodes.count > nodes.limit)


def find_homogeneous(f: Coloring, budget: SearchBudget) -> SearchResult:
    """Least size-s subset of [0, N) monochromatic under f, if any."""
    n = f.arity

    def consistent(chosen, x):
        colors = {f.value(t) for t in itertools.combinations(sorted(chosen + [x]), n)}
        return len(colors) <= 1

    return _dfs_extend(consistent, budget)


def find_thin(f: Coloring, budget: SearchBudget, omit: Optional[int] = None) -> SearchResult:
    """Least thin set with the least feasible omitted color attached."""
    if f.colors is not None and f.colors < 2:
        raise InputError("thin sets need at least 2 colors")
    color_range = [omit] if omit is not None else list(range(f.colors if f.colors is not None else 8))
    best: Optional[SearchResult] = None
    any_exhausted = False
    for c in color_range:

        def consistent(chosen, x, c=c):
            return all(
                f.value(t) != c for t in itertools.combinations(sorted(chosen + [x]), f.arity)
            )

        res = _dfs_extend(consistent, budget)
        any_exhausted |= res.exhausted
        if res.found:
            return SearchResult(res.members, omitted=c, mode=res.mode, nodes=res.nodes)
    return SearchResult(exhausted=any_exhausted)


def enumerate_thin(f: Coloring, budget: SearchBudget, limit: int = 50) -> list:
    """Up to `limit` thin solutions (all omitted colors, lexicographic sets)."""
    out = []
    kk = f.colors if f.colors is not None else 8
    for c in range(kk):
        for members in itertools.combinations(range(budget.horizon), budget.size):
            if all(f.value(t) != c for t in itertools.combinations(members, f.arity)):
                out.append(SearchResult(members, omitted=c))
                if len(out) >= limit:
                    return out
    return out


def find_rainbow(f: Coloring, budget: SearchBudget) -> SearchResult:
    """Greedy-first rainbow search with exhaustive fallback."""
    n = f.arity
    greedy: list[int] = []
    for x in range(budget.horizon):
        trial = sorted(greedy + [x])
        colors = [f.value(t) for t in itertools.combinations(trial, n)]
        if len(colors) == len(set(colors)):
            greedy.append(x)
            if len(greedy) == budget.size:
                return SearchResult(tuple(greedy), mode="greedy", nodes=len(greedy))

    def consistent(chosen, x):
        trial = sorted(chosen + [x])
        colors = [f.value(t) for t in itertools.combinations(trial, n)]
        return len(colors) == len(set(colors))

    return _dfs_extend(consistent, budget)


def find_min_homogeneous(f: Coloring, budget: SearchBudget) -> SearchResult:
    """Set on which the color of a pair depends only on its minimum."""
    if f.arity != 2:
        raise InputError("min-homogeneity is defined for pair colorings")

    def consistent(chosen, x):
        trial = sorted(chosen + [x])
        for a, rest in zip(trial, range(len(trial))):
            vals = {f.value((a, b)) for b in trial[rest + 1 :]}
            if len(vals) > 1:
                return False
        return True

    return _dfs_extend(consistent, budget)


def enumerate_paths(tree: TreeByRule, depth: int) -> list[Prefix]:
    """Exactly the members of the tree at the given level, lexicographic."""
    return level_members(tree, depth)


STRUCTURAL_PROPERTIES = ("transitive", "semi-transitive", "semi-hereditary", "semi-trivial")


@dataclass(frozen=True)
class StructuralVerdict:
    holds: bool
    exceptional_color: Optional[int] = None
    witness: Optional[tuple] = None
    detail: str = ""


def structural_check(f: Coloring, members, prop: str) -> StructuralVerdict:
    """Exhaustive triple scan of a pair coloring restricted to `members`."""
    if f.arity != 2:
        raise InputError("structural properties are defined for pair colorings")
    if prop not in STRUCTURAL_PROPERTIES:
        raise InputError(f"unknown property {prop!r}")
    h = sorted(set(members))
    used_colors = {f.value(p) for p in itertools.combinations(h, 2)}

    def violators(condition):
        bad = {}
        for x, y, z in itertools.combinations(h, 3):
            c = condition(x, y, z)
            if c is not None and c not in bad:
                bad[c] = (x, y, z)
        return bad

    if prop in ("transitive", "semi-transitive"):
        bad = violators(
            lambda x, y, z: f.value((x, y))
            if f.value((x, y)) == f.value((y, z)) and f.value((x, z)) != f.value((x, y))
            else None
        )
        if prop == "transitive":
            if bad:
                c, w = next(iter(bad.items()))
                return StructuralVerdict(False, witness=w, detail=f"color {c} not transitive at {w}")
            return StructuralVerdict(True)
        if len(bad) <= 1:
            exc = next(iter(bad), None)
            return StructuralVerdict(True, exceptional_color=exc)
        items = sorted(bad.items())
        return StructuralVerdict(False, witness=items[0][1], detail=f"colors {sorted(bad)} all fail")

    if prop == "semi-hereditary":
        bad = violators(
            lambda x, y, z: f.value((x, z))
            if f.value((x, z)) == f.value((y, z)) and f.value((x, y)) != f.value((x, z))
            else None
        )
        if len(bad) <= 1:
            return StructuralVerdict(True, exceptional_color=next(iter(bad), None))
        items = sorted(bad.items())
        return StructuralVerdict(False, witness=items[0][1], detail=f"colors {sorted(bad)} all fail")

    # semi-trivial: for all colors but possibly one, every {y > x : f(x,y) = i}
    # restricted to the sample is homogeneous
    bad = {}
    for i in sorted(used_colors):
        for x in h:
            ys = [y for y in h if y > x and f.value((x, y)) == i]
            vals = {f.value(p) for p in itertools.combinations(ys, 2)}
            if len(vals) > 1:
                bad[i] = (x, tuple(ys))
                break
    if len(bad) <= 1:
        return StructuralVerdict(True, exceptional_color=next(iter(bad), None))
    items = sorted(bad.items())
    return StructuralVerdict(False, witness=items[0][1], detail=f"colors {sorted(bad)} all fail")
