"""Simple undirected graphs on at most 62 vertices.

Graphs are stored as a tuple of adjacency bitmasks, one per vertex, which
keeps them hashable and cheap to copy.  Everything here is pure.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, NamedTuple

MAX_N = 62
MAX_CANON_N = 10


class GraphError(ValueError):
    """Invalid graph construction or unsupported size."""


class Graph6Error(ValueError):
    """Base class for graph6 decoding problems."""


class Graph6HeaderError(Graph6Error):
    pass


class Graph6TruncatedError(Graph6Error):
    pass


class Graph6SizeError(Graph6Error):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise GraphError(f"vertex count {self.n} outside 1..{MAX_N}")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match n")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full or (row >> u) & 1:
                raise GraphError(f"row {u} has out-of-range bits or a loop")
            for v in _bits(row):
                if not (self.rows[v] >> u) & 1:
                    raise GraphError(f"adjacency not symmetric at ({u},{v})")

    @classmethod
    def _trusted(cls, n: int, rows: tuple[int, ...]) -> Graph:
        # skips validation; only for rows built symmetric by construction
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", rows)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> Graph:
        """Build from an edge bitmask; bit k is the k-th pair in graph6 order."""
        if not 1 <= n <= MAX_N or mask >> (n * (n - 1) // 2):
            raise GraphError(f"mask {mask} does not fit n={n}")
        rows = [0] * n
        k = 0
        while mask:
            if mask & 1:
                u, v = pair_order(n)[k]
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            mask >>= 1
            k += 1
        return cls._trusted(n, tuple(rows))

    @property
    def adj(self) -> list[list[bool]]:
        return [[bool((r >> v) & 1) for v in range(self.n)] for r in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v, u in _upper_pairs(self.n) if self.has_edge(u, v)]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def mask(self) -> int:
        m = 0
        for k, (u, v) in enumerate(pair_order(self.n)):
            if self.has_edge(u, v):
                m |= 1 << k
        return m

    def relabel(self, perm: list[int]) -> Graph:
        """Vertex u of self becomes vertex perm[u] of the result."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __str__(self) -> str:
        return write_graph6(self)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _upper_pairs(n: int):
    # yields (v, u) with u < v in graph6 column order
    for v in range(1, n):
        for u in range(v):
            yield v, u


_PAIR_CACHE: dict[int, tuple[tuple[int, int], ...]] = {}


def pair_order(n: int) -> tuple[tuple[int, int], ...]:
    """Vertex pairs (u, v), u < v, in graph6 order: (0,1), (0,2), (1,2), (0,3), ..."""
    if n not in _PAIR_CACHE:
        _PAIR_CACHE[n] = tuple((u, v) for v, u in _upper_pairs(n))
    return _PAIR_CACHE[n]


# ---------------------------------------------------------------- graph6

def parse_graph6(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6HeaderError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d <= 63 for d in data):
        raise Graph6HeaderError(f"byte outside the graph6 range in {s!r}")
    n = data[0]
    if n == 63:
        raise Graph6SizeError("multi-byte size header (n > 62) is not supported")
    if n == 0:
        raise Graph6HeaderError("graph6 header encodes n = 0")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[1:]
    if len(body) < need:
        raise Graph6TruncatedError(f"expected {need} body bytes, got {len(body)}")
    if len(body) > need:
        raise Graph6HeaderError(f"{len(body) - need} trailing bytes after body")
    rows = [0] * n
    for k, (u, v) in enumerate(pair_order(n)):
        if (body[k // 6] >> (5 - k % 6)) & 1:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def write_graph6(g: Graph) -> str:
    if g.n > MAX_N:
        raise Graph6SizeError(f"n = {g.n} needs the multi-byte header")
    pairs = pair_order(g.n)
    out = [chr(g.n + 63)]
    for start in range(0, len(pairs), 6):
        val = 0
        for k in range(6):
            val <<= 1
            if start + k < len(pairs):
                u, v = pairs[start + k]
                val |= (g.rows[u] >> v) & 1
        out.append(chr(val + 63))
    return "".join(out)


# ---------------------------------------------------------------- structure

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph._trusted(g.n, tuple(full & ~r & ~(1 << u) for u, r in enumerate(g.rows)))


@dataclass(frozen=True)
class ComponentRecord:
    vertices: frozenset[int]
    bipartite: bool
    classes: tuple[frozenset[int], frozenset[int]] | None = None

    @property
    def p(self) -> int | None:
        """|W| - |U|, or None for a non-bipartite component."""
        if self.classes is None:
            return None
        u, w = self.classes
        return len(w) - len(u)

    @property
    def balanced(self) -> bool:
        return self.bipartite and self.p == 0


@dataclass(frozen=True)
class BipartiteProfile:
    components: tuple[ComponentRecord, ...]

    @property
    def b(self) -> int:
        return sum(c.bipartite for c in self.components)

    @property
    def bb(self) -> int:
        return sum(c.balanced for c in self.components)

    @property
    def bipartite_components(self) -> list[ComponentRecord]:
        return [c for c in self.components if c.bipartite]


@lru_cache(maxsize=256)
def bipartite_profile(g: Graph) -> BipartiteProfile:
    """Components in order of their lowest vertex, each 2-coloured if possible.

    The lowest vertex of a component always lands in U, so p = |W| - |U| is
    deterministic.  An isolated vertex is a bipartite component with W empty.
    """
    color = [-1] * g.n
    comps = []
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        seen = [start]
        ok = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in _bits(g.rows[u]):
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    seen.append(v)
                    queue.append(v)
                elif color[v] == color[u]:
                    ok = False
        verts = frozenset(seen)
        if ok:
            cls_u = frozenset(v for v in seen if color[v] == 0)
            comps.append(ComponentRecord(verts, True, (cls_u, verts - cls_u)))
        else:
            comps.append(ComponentRecord(verts, False))
    return BipartiteProfile(tuple(comps))


@dataclass(frozen=True)
class DegreeStats:
    delta: int
    Delta: int
    Delta2: int
    dbar: Fraction


def degree_stats(g: Graph) -> DegreeStats:
    degs = sorted(g.degrees(), reverse=True)
    second = degs[1] if len(degs) > 1 else degs[0]
    return DegreeStats(degs[-1], degs[0], second, Fraction(sum(degs), g.n))


class Multipartition(NamedTuple):
    parts: tuple[int, ...]
    degenerate: bool


def is_complete_multipartite(g: Graph) -> Multipartition | None:
    """Part sizes (ascending) if non-adjacency is an equivalence relation."""
    full = (1 << g.n) - 1
    seen = 0
    parts = []
    for u in range(g.n):
        if (seen >> u) & 1:
            continue
        cls = full & ~g.rows[u]
        for v in _bits(cls):
            if full & ~g.rows[v] != cls:
                return None
        seen |= cls
        parts.append(cls.bit_count())
    parts.sort()
    return Multipartition(tuple(parts), len(parts) == 1)


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class Complete:
    n: int


@dataclass(frozen=True)
class Empty:
    n: int


@dataclass(frozen=True)
class Star:
    """Star on n vertices in total, i.e. K_{1,n-1}."""
    n: int


@dataclass(frozen=True)
class CompleteMultipartite:
    parts: tuple[int, ...]


@dataclass(frozen=True)
class Path:
    n: int


@dataclass(frozen=True)
class Cycle:
    n: int


@dataclass(frozen=True)
class DisjointUnion:
    members: tuple


@dataclass(frozen=True)
class K1t:
    """K_{1,t,...,t} with r parts of size t."""
    t: int
    r: int


FamilySpec = Complete | Empty | Star | CompleteMultipartite | Path | Cycle | DisjointUnion | K1t


def construct_family(spec) -> Graph:
    match spec:
        case Complete(n):
            _need(n >= 1, spec)
            return Graph.from_edges(n, itertools.combinations(range(n), 2))
        case Empty(n):
            _need(n >= 1, spec)
            return Graph(n, (0,) * n)
        case Star(n):
            _need(n >= 2, spec)
            return construct_family(CompleteMultipartite((1, n - 1)))
        case CompleteMultipartite(parts):
            _need(len(parts) >= 1 and all(p >= 1 for p in parts), spec)
            label = []
            for i, p in enumerate(parts):
                label.extend([i] * p)
            n = len(label)
            return Graph.from_edges(
                n, [(u, v) for u, v in itertools.combinations(range(n), 2) if label[u] != label[v]])
        case Path(n):
            _need(n >= 1, spec)
            return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
        case Cycle(n):
            _need(n >= 3, spec)
            return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
        case DisjointUnion(members):
            _need(len(members) >= 1, spec)
            parts = [construct_family(m) for m in members]
            total = sum(p.n for p in parts)
            edges, off = [], 0
            for p in parts:
                edges.extend((u + off, v + off) for u, v in p.edges())
                off += p.n
            return Graph.from_edges(total, edges)
        case K1t(t, r):
            _need(t >= 1 and r >= 1, spec)
            return construct_family(CompleteMultipartite((1,) + (t,) * r))
    raise GraphError(f"unknown family spec {spec!r}")


def _need(ok: bool, spec) -> None:
    if not ok:
        raise GraphError(f"invalid family spec {spec!r}")


def parse_family(text: str):
    """Parse the CLI family mini-language.

    ``K:n``, ``E:n``, ``Km:a,b,c``, ``K1t:t,r``, ``star:n``, ``path:n``,
    ``cycle:n`` and ``union:SPEC+SPEC+...``.
    """
    kind, sep, rest = text.strip().partition(":")
    if not sep:
        raise GraphError(f"family spec {text!r} lacks ':'")
    kind = kind.lower()
    if kind == "union":
        return DisjointUnion(tuple(parse_family(s) for s in rest.split("+")))
    try:
        nums = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise GraphError(f"bad numbers in family spec {text!r}") from None
    single = {"k": Complete, "e": Empty, "star": Star, "path": Path, "cycle": Cycle}
    if kind in single:
        if len(nums) != 1:
            raise GraphError(f"{kind} takes one size, got {text!r}")
        return single[kind](nums[0])
    if kind == "km":
        return CompleteMultipartite(nums)
    if kind == "k1t":
        if len(nums) != 2:
            raise GraphError(f"K1t takes t,r, got {text!r}")
        return K1t(*nums)
    raise GraphError(f"unknown family kind {kind!r}")


# ---------------------------------------------------------------- canonical form

def _refine(g: Graph) -> list[list[int]]:
    # equitable refinement starting from degrees; cells ordered by invariant keys
    degs = g.degrees()
    keys = sorted(set(degs))
    cell_of = [keys.index(d) for d in degs]
    while True:
        ncells = max(cell_of) + 1
        sigs = []
        for u in range(g.n):
            counts = [0] * ncells
            for v in _bits(g.rows[u]):
                counts[cell_of[v]] += 1
            sigs.append((cell_of[u], tuple(counts)))
        order = sorted(set(sigs))
        new = [order.index(s) for s in sigs]
        if len(order) == ncells:
            break
        cell_of = new
    cells: list[list[int]] = [[] for _ in range(max(cell_of) + 1)]
    for u, c in enumerate(cell_of):
        cells[c].append(u)
    return cells


def canonical_key(g: Graph) -> bytes:
    """Isomorphism-invariant key: header byte plus the smallest upper-triangle bit string.

    The search ranges over orderings compatible with an equitable degree
    refinement, which is exhaustive enough for n <= 10.
    """
    if g.n > MAX_CANON_N:
        raise GraphError(f"canonical_key supports n <= {MAX_CANON_N}, got {g.n}")
    pairs = pair_order(g.n)
    nbits = len(pairs)
    cells = _refine(g)
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        order = [v for block in choice for v in block]  # position -> old vertex
        val = 0
        for u, v in pairs:
            val = (val << 1) | ((g.rows[order[u]] >> order[v]) & 1)
        if best is None or val < best:
            best = val
    return bytes([g.n]) + best.to_bytes((nbits + 7) // 8 or 1, "big")
