"""Sum-over-assignments of products of partial functions.

An instance is a variable universe X, subsets X_i of X, and a dense integer
table f_i over the assignments of each X_i. The quantity of interest is
sum over all 2^|X| assignments of the product of the extended tables. The
naive evaluator is the oracle; the disjoint, k=2, and k=3 evaluators compute
the same value without touching all of 2^|X| by factoring over the overlap
structure. All arithmetic is arbitrary-precision integers since values reach
2^n and downstream consumers rely on exact sign cancellation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from .core import ParameterError, PreconditionError, SizeLimitError

TABLE_ENTRY_CEILING = 1 << 24


@dataclass(frozen=True)
class ExtSumInstance:
    """universe: variable count; subsets[i]: sorted variable indices;
    tables[i]: 2^len(subsets[i]) integers, indexed by the local bitmask whose
    bit j is the value of subsets[i][j]."""

    universe: int
    subsets: tuple[tuple[int, ...], ...]
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.universe < 0:
            raise ParameterError("universe must be non-negative")
        if len(self.subsets) != len(self.tables):
            raise ParameterError("one table per subset required")
        for xs, tab in zip(self.subsets, self.tables):
            if list(xs) != sorted(set(xs)):
                raise ParameterError(f"subset {xs} must be sorted and duplicate-free")
            if xs and (xs[0] < 0 or xs[-1] >= self.universe):
                raise ParameterError(f"subset {xs} outside universe of {self.universe}")
            if len(tab) != 1 << len(xs):
                raise ParameterError(
                    f"table has {len(tab)} entries, expected {1 << len(xs)}"
                )
            if len(tab) > TABLE_ENTRY_CEILING:
                raise SizeLimitError("table", f"{len(tab)} entries exceeds ceiling")

    @property
    def k(self) -> int:
        return len(self.subsets)

    def to_json(self) -> str:
        return json.dumps(
            {
                "universe": self.universe,
                "subsets": [list(xs) for xs in self.subsets],
                "tables": [list(t) for t in self.tables],
            }
        )

    @staticmethod
    def from_json(text: str) -> "ExtSumInstance":
        data = json.loads(text)
        return ExtSumInstance(
            universe=data["universe"],
            subsets=tuple(tuple(xs) for xs in data["subsets"]),
            tables=tuple(tuple(t) for t in data["tables"]),
        )


def _local_index(assignment: int, variables: tuple[int, ...]) -> int:
    idx = 0
    for j, v in enumerate(variables):
        if (assignment >> v) & 1:
            idx |= 1 << j
    return idx


def eval_naive(inst: ExtSumInstance, limit: int = 24) -> int:
    """Direct sum over all assignments; the oracle for every other evaluator."""
    if inst.universe > limit:
        raise SizeLimitError("naive-eval", f"universe {inst.universe} exceeds {limit}")
    # precompute value-by-projection so the main loop is one mask-and-lookup
    # per subset instead of a per-variable bit gather
    lookups = []
    for xs, tab in zip(inst.subsets, inst.tables):
        mask = 0
        for v in xs:
            mask |= 1 << v
        proj = {}
        for local in range(1 << len(xs)):
            global_bits = 0
            for j, v in enumerate(xs):
                if (local >> j) & 1:
                    global_bits |= 1 << v
            proj[global_bits] = tab[local]
        lookups.append((mask, proj))
    total = 0
    for alpha in range(1 << inst.universe):
        prod = 1
        for mask, proj in lookups:
            prod *= proj[alpha & mask]
            if prod == 0:
                break
        total += prod
    return total


def eval_disjoint(inst: ExtSumInstance) -> int:
    """Pairwise-disjoint subsets factor: 2^(free vars) * prod of table sums."""
    seen = 0
    for xs in inst.subsets:
        for v in xs:
            if (seen >> v) & 1:
                raise PreconditionError("subsets are not pairwise disjoint")
            seen |= 1 << v
    free = inst.universe - seen.bit_count()
    prod = 1
    for tab in inst.tables:
        prod *= sum(tab)
    return (1 << free) * prod


def _marginalize(
    variables: tuple[int, ...], table: tuple[int, ...], axes: tuple[tuple[int, ...], ...]
) -> dict[tuple[int, ...], int]:
    """Collapse a table onto keyed axes (tuples of variable ids), summing over
    the remaining variables. One pass over the full table."""
    pos = {v: j for j, v in enumerate(variables)}
    axis_bits = [[(1 << pos[v], 1 << j) for j, v in enumerate(axis)] for axis in axes]
    out: dict[tuple[int, ...], int] = {}
    for a in range(1 << len(variables)):
        key = tuple(
            sum(local for src, local in bits if a & src) for bits in axis_bits
        )
        out[key] = out.get(key, 0) + table[a]
    return out


def eval_k2(inst: ExtSumInstance, stats: dict | None = None) -> int:
    """Two subsets: marginalize both tables onto the shared variables, then
    sum the pointwise product. Work is one pass per table, 2^|X_1| + 2^|X_2|
    iterations in total (reported via stats['inner_iterations'])."""
    if inst.k != 2:
        raise ParameterError(f"eval_k2 needs exactly 2 subsets, got {inst.k}")
    x1, x2 = inst.subsets
    shared = tuple(v for v in x1 if v in set(x2))
    m1 = _marginalize(x1, inst.tables[0], (shared,))
    m2 = _marginalize(x2, inst.tables[1], (shared,))
    if stats is not None:
        stats["inner_iterations"] = (1 << len(x1)) + (1 << len(x2))
    covered = len(set(x1) | set(x2))
    free = inst.universe - covered
    total = 0
    for key, w1 in m1.items():
        total += w1 * m2.get(key, 0)
    return (1 << free) * total


def eval_k3(inst: ExtSumInstance) -> int:
    """Three subsets via weighted tripartite triangles.

    Axes: the triple overlap, plus the three pairwise overlaps outside it.
    Each table is marginalized once onto (triple, pair, pair); for every
    triple-overlap assignment the value is the weighted triangle sum of the
    three matrices, computed with one naive matrix product."""
    if inst.k != 3:
        raise ParameterError(f"eval_k3 needs exactly 3 subsets, got {inst.k}")
    s1, s2, s3 = (set(xs) for xs in inst.subsets)
    core = tuple(sorted(s1 & s2 & s3))
    p12 = tuple(sorted((s1 & s2) - s3))
    p13 = tuple(sorted((s1 & s3) - s2))
    p23 = tuple(sorted((s2 & s3) - s1))
    w1 = _marginalize(inst.subsets[0], inst.tables[0], (core, p12, p13))
    w2 = _marginalize(inst.subsets[1], inst.tables[1], (core, p12, p23))
    w3 = _marginalize(inst.subsets[2], inst.tables[2], (core, p13, p23))
    n12, n13, n23 = 1 << len(p12), 1 << len(p13), 1 << len(p23)
    free = inst.universe - len(s1 | s2 | s3)
    total = 0
    for g in range(1 << len(core)):
        # m[a13][a23] = sum over a12 of W1[a12][a13] * W2[a12][a23]
        m = [[0] * n23 for _ in range(n13)]
        for a12 in range(n12):
            for a13 in range(n13):
                v1 = w1.get((g, a12, a13), 0)
                if v1 == 0:
                    continue
                row = m[a13]
                for a23 in range(n23):
                    v2 = w2.get((g, a12, a23), 0)
                    if v2:
                        row[a23] += v1 * v2
        for a13 in range(n13):
            row = m[a13]
            for a23 in range(n23):
                if row[a23]:
                    total += row[a23] * w3.get((g, a13, a23), 0)
    return (1 << free) * total


def evaluate(inst: ExtSumInstance, naive_limit: int = 24) -> int:
    """Dispatch: disjoint product, k=2, k=3, or the naive oracle."""
    if inst.k == 0:
        return 1 << inst.universe
    try:
        return eval_disjoint(inst)
    except PreconditionError:
        pass
    if inst.k == 1:
        xs, tab = inst.subsets[0], inst.tables[0]
        return (1 << (inst.universe - len(xs))) * sum(tab)
    if inst.k == 2:
        return eval_k2(inst)
    if inst.k == 3:
        return eval_k3(inst)
    return eval_naive(inst, naive_limit)


def reduce_refinement(inst: ExtSumInstance, parts: list[tuple[int, ...]]) -> ExtSumInstance:
    """Merge the subsets of each part into one subset over the part's variable
    union, table = pointwise product of the members' extensions. The value of
    the instance is unchanged."""
    seen: set[int] = set()
    for part in parts:
        for i in part:
            if i < 0 or i >= inst.k or i in seen:
                raise ParameterError("parts must partition the subset indices")
            seen.add(i)
    if len(seen) != inst.k:
        raise ParameterError("parts must partition the subset indices")
    new_subsets = []
    new_tables = []
    for part in parts:
        union = sorted(set().union(*(inst.subsets[i] for i in part)))
        if 1 << len(union) > TABLE_ENTRY_CEILING:
            raise SizeLimitError(
                "refinement-merge", f"part union of {len(union)} variables too large"
            )
        pos = {v: j for j, v in enumerate(union)}
        member_bits = []
        for i in part:
            member_bits.append(
                (inst.tables[i], [(1 << pos[v], 1 << j) for j, v in enumerate(inst.subsets[i])])
            )
        table = []
        for a in range(1 << len(union)):
            prod = 1
            for tab, bits in member_bits:
                local = 0
                for src, dst in bits:
                    if a & src:
                        local |= dst
                prod *= tab[local]
                if prod == 0:
                    break
            table.append(prod)
        new_subsets.append(tuple(union))
        new_tables.append(tuple(table))
    return ExtSumInstance(inst.universe, tuple(new_subsets), tuple(new_tables))


def hyperclique_to_extsum(h, k: int) -> ExtSumInstance:
    """Encode k-hyperclique counting in an r-uniform hypergraph.

    k blocks of ceil(log2 n) variables each encode one vertex id; every
    r-subset of blocks gets an indicator table that is 1 exactly when the
    decoded ids are distinct, in range, and form an edge. The instance value
    is (number of k-hypercliques) * k!, since each clique appears once per
    ordering of its vertices over the blocks and invalid codes contribute 0."""
    if k <= h.r:
        raise ParameterError(f"k must exceed the uniformity {h.r}")
    n = h.n
    bits = max(1, (n - 1).bit_length()) if n > 1 else 1
    edge_set = set(h.edges)
    subsets = []
    tables = []
    for blocks in combinations(range(k), h.r):
        variables = tuple(
            b * bits + j for b in blocks for j in range(bits)
        )
        table = []
        for a in range(1 << (h.r * bits)):
            ids = [
                (a >> (pos * bits)) & ((1 << bits) - 1) for pos in range(h.r)
            ]
            if any(i >= n for i in ids) or len(set(ids)) != h.r:
                table.append(0)
            else:
                table.append(1 if tuple(sorted(ids)) in edge_set else 0)
        subsets.append(variables)
        tables.append(tuple(table))
    return ExtSumInstance(k * bits, tuple(subsets), tuple(tables))


def hyperclique_count(h, k: int, naive_limit: int = 24) -> int:
    inst = hyperclique_to_extsum(h, k)
    value = eval_naive(inst, naive_limit)
    fact = math.factorial(k)
    if value % fact:
        raise RuntimeError("encoding value not divisible by k!; this is a bug")
    return value // fact


# --- existence of small refinements for abstract subset collections --------

def refinement_witness(
    universe_n: int, subsets: list[frozenset[int] | set[int]], k: int
) -> tuple[int, ...] | None:
    """A k-part refinement with every part union != X exists iff some tuple
    (m_1..m_k) of universe elements has every subset missing at least one
    m_i (assign each subset to a part whose m_i it misses). The search over
    sorted tuples is exhaustive, so None is a proof of non-existence."""
    sets = [frozenset(s) for s in subsets]
    for tup in combinations_with_replacement(range(universe_n), k):
        if all(any(m not in s for m in tup) for s in sets):
            return tup
    return None


def refinement_from_witness(
    subsets: list[frozenset[int] | set[int]], witness: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Assign each subset index to the first witness element it misses."""
    parts: list[list[int]] = [[] for _ in witness]
    for idx, s in enumerate(subsets):
        for i, m in enumerate(witness):
            if m not in s:
                parts[i].append(idx)
                break
        else:
            raise ParameterError(f"subset {idx} misses no witness element")
    return [tuple(p) for p in parts if p]
