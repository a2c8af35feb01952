"""Finite-coloring search for monochromatic solutions of ``P = 0``.

The engine colors ``1, 2, ..., N`` in order by depth-first search.  All
solution tuples in ``{1..N}^n`` are enumerated once and indexed by their
largest entry, so coloring element ``e`` only has to look at the tuples
whose other entries are already colored.  Colorings are kept canonical
(color ``c+1`` is used only after color ``c``), which removes the ``k!``
relabelings and makes the first avoiding coloring found the
lexicographically least one.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import SearchLimitError, WorkbenchError
from .parser import as_polynomial, print_poly
from .poly import Polynomial

MODES = ("ANY", "DISTINCT", "NONDEGENERATE")

DEFAULT_SOLUTION_CAP = 2_000_000
DEFAULT_NODE_BUDGET = 50_000_000


def _check_mode(mode: str) -> str:
    mode = mode.upper()
    if mode not in MODES:
        raise WorkbenchError("E_BAD_MODE", f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _compile(p: Polynomial):
    names = p.variables
    pos = {v: i for i, v in enumerate(names)}
    terms = [(c, tuple((pos[v], e) for v, e in m)) for m, c in p.items()]
    return names, terms


def iter_solutions(eq, N: int, mode: str = "ANY") -> Iterator[tuple[int, ...]]:
    """Yield roots in ``{1..N}^n`` in lexicographic order (variables in name order).

    Backtracking with interval pruning: with the first variables fixed,
    every monomial lies between its values at 1 and at N for the rest, and
    a branch is cut when 0 falls outside the summed range.  When the last
    variable occurs only linearly it is solved for directly.
    """
    p = as_polynomial(eq)
    mode = _check_mode(mode)
    if N < 1:
        raise WorkbenchError("E_BAD_N", "N must be at least 1")
    names, terms = _compile(p)
    n = len(names)
    if n == 0:
        raise WorkbenchError("E_NO_VARS", "equation has no variables")
    last = n - 1
    solve_last = all(e == 1 for _, mono in terms for i, e in mono if i == last)
    distinct = mode == "DISTINCT"
    vals = [0] * n

    def bounds(depth: int) -> tuple[int, int]:
        lo = hi = 0
        for c, mono in terms:
            known = c
            rest = 0
            for i, e in mono:
                if i < depth:
                    known *= vals[i] ** e
                else:
                    rest += e
            if rest:
                top = known * N ** rest
                if known > 0:
                    lo += known
                    hi += top
                else:
                    lo += top
                    hi += known
            else:
                lo += known
                hi += known
        return lo, hi

    def rec(depth: int):
        if depth == last and solve_last:
            a = b = 0
            for c, mono in terms:
                val = c
                has_last = False
                for i, e in mono:
                    if i == last:
                        has_last = True
                    else:
                        val *= vals[i] ** e
                if has_last:
                    a += val
                else:
                    b += val
            if a == 0:
                cands = range(1, N + 1) if b == 0 else ()
            elif -b % a == 0 and 1 <= -b // a <= N:
                cands = (-b // a,)
            else:
                cands = ()
            for x in cands:
                if distinct and x in vals[:depth]:
                    continue
                vals[depth] = x
                yield tuple(vals)
            return
        for x in range(1, N + 1):
            if distinct and x in vals[:depth]:
                continue
            vals[depth] = x
            lo, hi = bounds(depth + 1)
            if lo > 0 or hi < 0:
                continue
            if depth == last:
                if lo == 0 == hi:
                    yield tuple(vals)
            else:
                yield from rec(depth + 1)

    for t in rec(0):
        if mode == "NONDEGENERATE" and len(set(t)) == 1:
            continue
        yield t


def enumerate_solutions(eq, N: int, mode: str = "ANY", cap: int = DEFAULT_SOLUTION_CAP) -> list[tuple[int, ...]]:
    out = []
    for t in iter_solutions(eq, N, mode):
        out.append(t)
        if len(out) > cap:
            raise SearchLimitError(f"more than {cap} solutions up to N={N}", {"solutions": len(out)})
    return out


@dataclass(frozen=True)
class Coloring:
    """Colors of ``1..N`` as a tuple of ids ``1..k``, in canonical form."""

    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        top = 0
        for c in self.colors:
            if c < 1 or c > top + 1:
                raise WorkbenchError("E_NOT_CANONICAL",
                                     f"colors must start at 1 and introduce new ids in order: {self.colors}")
            top = max(top, c)

    @classmethod
    def canonical(cls, colors: Sequence) -> "Coloring":
        """Relabel arbitrary color ids by order of first appearance."""
        relabel: dict = {}
        return cls(tuple(relabel.setdefault(c, len(relabel) + 1) for c in colors))

    @classmethod
    def from_classes(cls, classes: Sequence[Sequence[int]]) -> "Coloring":
        n = sum(len(c) for c in classes)
        cols = [0] * n
        for cid, cl in enumerate(classes, start=1):
            for x in cl:
                if not 1 <= x <= n or cols[x - 1]:
                    raise WorkbenchError("E_NOT_CANONICAL", "classes must partition 1..N")
                cols[x - 1] = cid
        if 0 in cols:
            raise WorkbenchError("E_NOT_CANONICAL", "classes must partition 1..N")
        return cls.canonical(cols)

    @property
    def n_max(self) -> int:
        return len(self.colors)

    @property
    def k(self) -> int:
        return max(self.colors, default=0)

    def color(self, x: int) -> int:
        return self.colors[x - 1]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for x, c in enumerate(self.colors, start=1):
            out[c - 1].append(x)
        return out

    def restrict(self, n: int) -> "Coloring":
        return Coloring(self.colors[:n])

    def __str__(self) -> str:
        return "/".join("{" + ",".join(map(str, cl)) + "}" for cl in self.classes())


def check_coloring(eq, col: Coloring, mode: str = "ANY") -> tuple[int, ...] | None:
    """Lexicographically least monochromatic root under ``col``, or None."""
    for t in iter_solutions(eq, col.n_max, mode) if col.n_max else ():
        c = col.color(t[0])
        if all(col.color(x) == c for x in t):
            return t
    return None


class SolutionIndex:
    """Solutions grouped by their maximum entry.

    ``constraints[e]`` lists, for each root whose largest entry is ``e``,
    the other distinct entries; coloring ``e`` with color ``c`` is illegal
    when some listed group is entirely colored ``c``.  An empty group means
    ``(e, ..., e)`` is a root and no color is legal.
    """

    def __init__(self, eq, N: int, mode: str = "ANY", cap: int = DEFAULT_SOLUTION_CAP):
        self.N = N
        self.mode = _check_mode(mode)
        groups: list[set] = [set() for _ in range(N + 1)]
        self.per_max = [0] * (N + 1)
        count = 0
        for t in iter_solutions(eq, N, mode):
            count += 1
            if count > cap:
                raise SearchLimitError(f"more than {cap} solutions up to N={N}", {"solutions": count})
            m = max(t)
            self.per_max[m] += 1
            groups[m].add(tuple(sorted(set(t) - {m})))
        self.count = count
        self.constraints = [sorted(g, key=lambda s: (len(s), s)) for g in groups]

    def restricted(self, n: int) -> "SolutionIndex":
        if n > self.N:
            raise ValueError("cannot extend an index")
        out = object.__new__(SolutionIndex)
        out.N, out.mode = n, self.mode
        out.constraints = self.constraints[: n + 1]
        out.per_max = self.per_max[: n + 1]
        out.count = sum(out.per_max)
        return out


@dataclass
class SearchOutcome:
    kind: str  # "Forced" or "Witness"
    equation: str
    k: int
    N: int
    mode: str
    witness: Coloring | None = None
    nodes: int = 0
    solutions: int | None = None
    wall_ms: float = 0.0

    @property
    def forced(self) -> bool:
        return self.kind == "Forced"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "equation": self.equation,
            "k": self.k,
            "N": self.N,
            "constraint": self.mode,
            "outcome": self.kind,
            "nodes": self.nodes,
        }
        if self.solutions is not None:
            out["solutions"] = self.solutions
        if self.witness is not None:
            out["witness"] = list(self.witness.colors)
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


def _dfs(constraints, N: int, k: int, prefix: Sequence[int], budget: int) -> tuple[list[int] | None, int]:
    """Depth-first search below a fixed canonical prefix.

    Returns ``(colors or None, nodes)``; colors are 1-based.  Raises
    SearchLimitError after ``budget`` nodes.
    """
    col = [0] * (N + 1)
    top = 0
    for x, c in enumerate(prefix, start=1):
        col[x] = c
        top = max(top, c)
    nodes = 0
    start = len(prefix) + 1
    if start > N:
        return col[1:], 0

    # iterative DFS: choice[e] is the last color tried at element e
    choice = [0] * (N + 2)
    tops = [0] * (N + 2)
    tops[start] = top
    e = start
    while True:
        if e < start:
            return None, nodes
        limit = min(k, tops[e] + 1)
        c = choice[e] + 1
        placed = False
        cons = constraints[e]
        while c <= limit:
            nodes += 1
            ok = True
            for group in cons:
                for x in group:
                    if col[x] != c:
                        break
                else:
                    ok = False
                    break
            if ok:
                placed = True
                break
            c += 1
        if nodes > budget:
            raise SearchLimitError(f"node budget {budget} exhausted at N={N}", {"nodes": nodes})
        if not placed:
            choice[e] = 0
            col[e] = 0
            e -= 1
            continue
        choice[e] = c
        col[e] = c
        if e == N:
            return col[1:], nodes
        tops[e + 1] = max(tops[e], c)
        choice[e + 1] = 0
        e += 1


def _prefix_ok(constraints, prefix: Sequence[int]) -> bool:
    col = [0] + list(prefix)
    for e in range(1, len(prefix) + 1):
        c = col[e]
        for group in constraints[e]:
            if all(col[x] == c for x in group):
                return False
    return True


def _canonical_prefixes(constraints, k: int, depth: int) -> list[tuple[int, ...]]:
    out = [()]
    for _ in range(depth):
        nxt = []
        for pre in out:
            for c in range(1, min(k, max(pre, default=0) + 1) + 1):
                cand = pre + (c,)
                if _prefix_ok(constraints, cand):
                    nxt.append(cand)
        out = nxt
    return out


def _subtree(args):
    constraints, N, k, prefix, budget = args
    try:
        return _dfs(constraints, N, k, prefix, budget), None
    except SearchLimitError as exc:
        return (None, exc.stats.get("nodes", budget)), exc.message


def find_avoiding_coloring(eq, k: int, N: int, mode: str = "ANY", *,
                           node_budget: int = DEFAULT_NODE_BUDGET, workers: int = 1,
                           index: SolutionIndex | None = None) -> SearchOutcome:
    """Least canonical k-coloring of ``1..N`` with no monochromatic root.

    Returns a ``Witness`` outcome carrying that coloring, or ``Forced`` when
    none exists.  With ``workers > 1`` the canonical prefixes of the first
    few elements are searched in separate processes and the witness from
    the earliest prefix wins, so the result matches the sequential run.
    """
    p = as_polynomial(eq)
    mode = _check_mode(mode)
    if k < 1 or N < 1:
        raise WorkbenchError("E_BAD_ARGS", "k and N must be at least 1")
    t0 = time.perf_counter()
    if index is None:
        index = SolutionIndex(p, N, mode)
    elif index.N != N:
        index = index.restricted(N)
    cons = index.constraints
    outcome = SearchOutcome("Forced", print_poly(p), k, N, mode, solutions=index.count)

    if workers <= 1:
        try:
            colors, nodes = _dfs(cons, N, k, (), node_budget)
        except SearchLimitError as exc:
            exc.stats.update(equation=outcome.equation, k=k, N=N, constraint=mode)
            raise
    else:
        depth = 1
        prefixes = _canonical_prefixes(cons, k, depth)
        while depth < N and 0 < len(prefixes) < 4 * workers:
            depth += 1
            prefixes = _canonical_prefixes(cons, k, depth)
        jobs = [(cons, N, k, pre, node_budget) for pre in prefixes]
        colors, nodes = None, 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (found, sub_nodes), err in pool.map(_subtree, jobs):
                nodes += sub_nodes
                if colors is None and err is not None:
                    raise SearchLimitError(err, {"nodes": nodes, "equation": outcome.equation,
                                                 "k": k, "N": N, "constraint": mode})
                if colors is None and found is not None:
                    colors = found
    outcome.nodes = nodes
    if colors is not None:
        outcome.kind = "Witness"
        outcome.witness = Coloring(tuple(colors))
    outcome.wall_ms = (time.perf_counter() - t0) * 1000
    return outcome


@dataclass
class RadoNumberResult:
    equation: str
    k: int
    mode: str
    max_N: int
    n_star: int | None
    witness: Coloring | None  # avoiding coloring at n_star - 1 (or at max_N)
    nodes: int = 0
    outcomes: list[SearchOutcome] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "equation": self.equation,
            "k": self.k,
            "constraint": self.mode,
            "max_N": self.max_N,
            "rado_number": self.n_star,
            "witness": list(self.witness.colors) if self.witness is not None else None,
            "nodes": self.nodes,
        }


def rado_number(eq, k: int, mode: str = "ANY", max_N: int = 100, *,
                node_budget: int = DEFAULT_NODE_BUDGET, workers: int = 1) -> RadoNumberResult:
    """Least ``N <= max_N`` at which every k-coloring of ``1..N`` has a
    monochromatic root, with the avoiding coloring at ``N - 1``.

    ``n_star`` is None when ``max_N`` is still avoidable; ``witness`` is then
    the avoiding coloring at ``max_N``.  Scans N upward: forcing is monotone
    in N, so the first forced N is the answer.
    """
    p = as_polynomial(eq)
    mode = _check_mode(mode)
    if max_N < 1:
        raise WorkbenchError("E_BAD_ARGS", "max_N must be at least 1")
    result = RadoNumberResult(print_poly(p), k, mode, max_N, None, Coloring(()))
    index = None
    for N in range(1, max_N + 1):
        if index is None or index.N < N:
            index = SolutionIndex(p, min(max_N, max(2 * N, 8)), mode)
        out = find_avoiding_coloring(p, k, N, mode, node_budget=node_budget, workers=workers, index=index)
        result.nodes += out.nodes
        result.outcomes.append(out)
        if out.forced:
            result.n_star = N
            return result
        result.witness = out.witness
    return result
