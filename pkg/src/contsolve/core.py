"""Core data types: graphs, uniform hypergraphs, CNF formulas, bitmask vertex sets.

All types are immutable after construction and safe to share between threads.
Vertex ids are 0-indexed internally; the DIMACS boundary is 1-indexed.
"""

from __future__ import annotations

import json
import random
from itertools import combinations


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParameterError(ValueError):
    """Arguments outside an operation's valid range."""


class PreconditionError(ValueError):
    """A documented precondition does not hold for the given input."""


class SizeLimitError(RuntimeError):
    """A configured resource ceiling was exceeded; names the failing stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class VertexSet:
    """Immutable vertex set backed by an arbitrary-width bitmask."""

    __slots__ = ("mask", "cardinality")

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise ValueError("bitmask must be non-negative")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "cardinality", mask.bit_count())

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    @classmethod
    def of(cls, vertices) -> "VertexSet":
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return cls(mask)

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, v: int) -> bool:
        return (self.mask >> v) & 1 == 1

    def __iter__(self):
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def to_list(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"VertexSet({{{', '.join(map(str, self))}}})"


class Graph:
    """Simple undirected graph with sorted adjacency lists and adjacency bitmasks."""

    __slots__ = ("n", "m", "adj", "adj_mask", "edges")

    def __init__(self, n: int, edges):
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        seen = set()
        adj = [[] for _ in range(n)]
        norm_edges = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"vertex id out of range in edge ({u}, {v})")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParameterError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            norm_edges.append(key)
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", len(norm_edges))
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in adj))
        masks = []
        for a in adj:
            mask = 0
            for w in a:
                mask |= 1 << w
            masks.append(mask)
        object.__setattr__(self, "adj_mask", tuple(masks))
        object.__setattr__(self, "edges", tuple(sorted(norm_edges)))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def average_degree(self) -> float:
        return 2.0 * self.m / self.n if self.n else 0.0

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def is_regular(self) -> bool:
        return self.n == 0 or all(len(a) == len(self.adj[0]) for a in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return (self.adj_mask[u] >> v) & 1 == 1

    def neighborhood_mask(self, vertices: int) -> int:
        """Union of neighborhoods of the vertices in the given bitmask."""
        out = 0
        mask = vertices
        while mask:
            low = mask & -mask
            out |= self.adj_mask[low.bit_length() - 1]
            mask ^= low
        return out

    def is_independent(self, vertices: int) -> bool:
        mask = vertices
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            if self.adj_mask[v] & vertices:
                return False
            mask ^= low
        return True

    def induced_edge_count(self, vertices: int) -> int:
        total = 0
        mask = vertices
        while mask:
            low = mask & -mask
            total += (self.adj_mask[low.bit_length() - 1] & vertices).bit_count()
            mask ^= low
        return total // 2

    def induced_subgraph(self, vertices: VertexSet) -> tuple["Graph", list[int]]:
        """Induced subgraph plus the list mapping new ids back to original ids."""
        order = vertices.to_list()
        index = {v: i for i, v in enumerate(order)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges
            if u in vertices and v in vertices
        ]
        return Graph(len(order), edges), order

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.n} {self.m}"]
        lines.extend(f"e {u + 1} {v + 1}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        return cls(data["n"], [tuple(e) for e in data["edges"]])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))


class Hypergraph:
    """r-uniform hypergraph. Edges are sorted r-tuples of distinct vertices.

    Repeated edges are permitted (they arise from repeated CNF clauses) and
    count with multiplicity in co-degree queries.
    """

    __slots__ = ("n", "r", "edges", "edge_masks", "incidence")

    def __init__(self, n: int, r: int, edges):
        if r < 1:
            raise ParameterError("uniformity must be at least 1")
        norm = []
        for e in edges:
            e = tuple(sorted(e))
            if len(e) != r or len(set(e)) != r:
                raise ParameterError(f"edge {e} does not have exactly {r} distinct vertices")
            if e[0] < 0 or e[-1] >= n:
                raise ParameterError(f"vertex id out of range in edge {e}")
            norm.append(e)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "edges", tuple(norm))
        masks = []
        incidence = [[] for _ in range(n)]
        for idx, e in enumerate(norm):
            mask = 0
            for v in e:
                mask |= 1 << v
                incidence[v].append(idx)
            masks.append(mask)
        object.__setattr__(self, "edge_masks", tuple(masks))
        object.__setattr__(self, "incidence", tuple(tuple(i) for i in incidence))

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    def codegree(self, vertices) -> int:
        """Number of edges containing every vertex of the given set."""
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return sum(1 for em in self.edge_masks if em & mask == mask)

    def is_independent(self, vertices: int) -> bool:
        """True when the bitmask spans no edge entirely."""
        return all(em & vertices != em for em in self.edge_masks)

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "r": self.r, "edges": [list(e) for e in self.edges]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        data = json.loads(text)
        return cls(data["n"], data["r"], data["edges"])


def max_codegree(h: Hypergraph, i: int) -> int:
    """Largest number of edges sharing a common i-subset of vertices.

    Counts i-subsets inside each edge instead of enumerating all i-subsets
    of the vertex set.
    """
    if not 1 <= i <= h.r:
        raise ParameterError(f"subset size {i} out of range 1..{h.r}")
    counts: dict[tuple, int] = {}
    for e in h.edges:
        for sub in combinations(e, i):
            counts[sub] = counts.get(sub, 0) + 1
    return max(counts.values(), default=0)


class CnfFormula:
    """k-CNF with signed-literal clauses; literal v means x_v, -v means not x_v (1-based)."""

    __slots__ = ("num_vars", "clauses", "k")

    def __init__(self, num_vars: int, clauses):
        norm = []
        for clause in clauses:
            clause = tuple(clause)
            if not clause:
                raise ParameterError("empty clause")
            vars_seen = set()
            for lit in clause:
                var = abs(lit)
                if lit == 0 or var > num_vars:
                    raise ParameterError(f"literal {lit} out of range")
                if var in vars_seen:
                    raise ParameterError(f"variable {var} occurs twice in clause {clause}")
                vars_seen.add(var)
            norm.append(clause)
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "clauses", tuple(norm))
        object.__setattr__(self, "k", max((len(c) for c in norm), default=0))

    def __setattr__(self, name, value):
        raise AttributeError("CnfFormula is immutable")

    def is_satisfied_by(self, assignment) -> bool:
        """assignment maps 1-based variable ids to bools; missing vars default to False."""
        for clause in self.clauses:
            if not any(
                assignment.get(abs(lit), False) == (lit > 0) for lit in clause
            ):
                return False
        return True

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"num_vars": self.num_vars, "clauses": [list(c) for c in self.clauses]}
        )

    @classmethod
    def from_json(cls, text: str) -> "CnfFormula":
        data = json.loads(text)
        return cls(data["num_vars"], data["clauses"])

    def __eq__(self, other):
        return (
            isinstance(other, CnfFormula)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )


def _decode_lines(text) -> list[str]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return text.splitlines()


def parse_dimacs_graph(text) -> Graph:
    """Parse DIMACS edge format: `p edge n m` header, `e u v` lines, 1-indexed."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(_decode_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("negative count in header", lineno)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge line before header", lineno)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex id out of range in edge ({u}, {v})", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in {tuple(e) for e in edges}:
                raise ParseError(f"duplicate edge ({u}, {v})", lineno)
            edges.append(key)
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise ParseError("missing header")
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def parse_dimacs_cnf(text, k_bound: int | None = None) -> CnfFormula:
    """Parse DIMACS CNF; clauses are zero-terminated and may span lines."""
    n = m = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(_decode_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            continue
        if n is None:
            raise ParseError("clause line before header", lineno)
        for tok in parts:
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal token {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                var_signs: dict[int, set[int]] = {}
                for x in current:
                    var_signs.setdefault(abs(x), set()).add(x > 0)
                for var, signs in var_signs.items():
                    if len(signs) == 2:
                        raise ParseError(f"tautological clause on variable {var}", lineno)
                if len(var_signs) != len(current):
                    raise ParseError("repeated literal in clause", lineno)
                if k_bound is not None and len(current) > k_bound:
                    raise ParseError(
                        f"clause width {len(current)} exceeds bound {k_bound}", lineno
                    )
                clauses.append(current)
                current = []
            else:
                if abs(lit) > n:
                    raise ParseError(f"literal {lit} out of range", lineno)
                current.append(lit)
    if n is None:
        raise ParseError("missing header")
    if current:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, clauses)


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """Random d-regular simple graph via the pairing model; deterministic
    for a fixed seed."""
    if d >= n or d < 0:
        raise ParameterError(f"degree {d} must satisfy 0 <= d < n = {n}")
    if (n * d) % 2 != 0:
        raise ParameterError(f"n*d = {n * d} must be even")
    rng = random.Random(seed)
    # pairing model with local rejection: draw two random stubs, redraw on a
    # loop or multi-edge, and restart the attempt only when stuck near the
    # end (a full restart per conflict is hopeless for dense cases)
    for _ in range(10_000):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges: set[tuple[int, int]] = set()
        stuck = False
        while stubs and not stuck:
            for _ in range(100):
                i = rng.randrange(len(stubs))
                j = rng.randrange(len(stubs))
                u, v = stubs[i], stubs[j]
                if u == v:
                    continue
                key = (min(u, v), max(u, v))
                if key in edges:
                    continue
                edges.add(key)
                for idx in sorted((i, j), reverse=True):
                    stubs[idx] = stubs[-1]
                    stubs.pop()
                break
            else:
                stuck = True
        if not stuck:
            return Graph(n, sorted(edges))
    raise RuntimeError(f"pairing model failed to produce a simple graph (n={n}, d={d})")


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic for a fixed seed."""
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def random_ksat_formula(n: int, m: int, k: int, seed: int) -> CnfFormula:
    """Random k-CNF: each clause has k distinct variables with random signs."""
    if k > n:
        raise ParameterError(f"clause width {k} exceeds variable count {n}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        vars_ = rng.sample(range(1, n + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vars_])
    return CnfFormula(n, clauses)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(10, outer + inner + spokes)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
