"""Directed graphs on prime divisors, and the four graph functions.

A graph function sends a group to a digraph whose vertices are the prime
divisors of the order.  The trivial group maps to the empty graph.  The four
built-in functions:

* ``gk_graph``      - edge both ways between p and q when an element of order
                      divisible by pq exists (loop-free, symmetric).
* ``hawkes_graph``  - edge (p, q) when q divides |G / O_{p',p}(G)|; loops can
                      occur.
* ``sylow_graph``   - edge (p, q) when q divides |N_G(P) / P C_G(P)| for a
                      Sylow p-subgroup P; always loop-free.
* ``schmidt_graph`` - edge (p, q) when G has a Schmidt (p, q)-subgroup, i.e.
                      a minimal non-nilpotent subgroup with normal Sylow
                      p-subgroup and a q-part; loop-free.

``theta_local_graph`` is the generic constructor: a selector assigns to each
prime a family of subgroups (or chief factors), and (p, q) is an edge when q
divides the order of an automorphism group the ambient group induces on a
selected object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import BudgetExceeded, SelectorUndefined
from .permcore import (FiniteGroup, Permutation, SubgroupRef,
                       _reduce_generators, subgroup_generated)
from .primeutil import is_p_power, p_part, prime_divisors
from .structure import (centralizer, cores, normal_subgroups, normalizer,
                        subgroup_is_nilpotent, sylow_subgroup, _bitset_indices)

SCHMIDT_SCAN_WORK_CAP = 20_000_000
P_SUBGROUP_BUDGET = 50_000


@dataclass(frozen=True)
class PrimeDigraph:
    """A directed graph on primes; loops allowed, everything kept sorted.

    Equality is vertex-set plus edge-set equality; union is componentwise.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        for a, b in self.edges:
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a},{b}) has an endpoint outside {sorted(vs)}")

    @staticmethod
    def make(vertices, edges) -> "PrimeDigraph":
        return PrimeDigraph(tuple(sorted(set(vertices))),
                            tuple(sorted({(int(a), int(b)) for a, b in edges})))

    @staticmethod
    def empty() -> "PrimeDigraph":
        return PrimeDigraph((), ())

    def union(self, other: "PrimeDigraph") -> "PrimeDigraph":
        return PrimeDigraph.make(self.vertices + other.vertices,
                                 self.edges + other.edges)

    __or__ = union

    def is_subgraph(self, other: "PrimeDigraph") -> bool:
        return (set(self.vertices) <= set(other.vertices)
                and set(self.edges) <= set(other.edges))

    def __le__(self, other):
        return self.is_subgraph(other)

    def successors(self, v: int) -> tuple[int, ...]:
        return tuple(b for a, b in self.edges if a == v)

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.edges)

    def is_symmetric(self) -> bool:
        es = set(self.edges)
        return all((b, a) in es for a, b in es)

    def all_cycles(self) -> tuple[tuple[int, ...], ...]:
        """All simple directed cycles, canonically rotated and sorted.

        A loop appears as a length-1 cycle.  Each cycle is rotated so its
        least vertex comes first.  Fine for the tiny graphs arising here.
        """
        succ = {v: sorted(self.successors(v)) for v in self.vertices}
        cycles = set()

        def dfs(start, path, on_path):
            for nxt in succ[path[-1]]:
                if nxt == start and len(path) >= 1:
                    cycles.add(tuple(path))
                elif nxt > start and nxt not in on_path:
                    on_path.add(nxt)
                    path.append(nxt)
                    dfs(start, path, on_path)
                    path.pop()
                    on_path.remove(nxt)

        for v in self.vertices:
            if (v, v) in set(self.edges):
                cycles.add((v,))
            dfs(v, [v], {v})
        return tuple(sorted(cycles))

    def has_cycle(self, min_len: int = 1, edge_filter=None):
        """A directed cycle of length >= min_len, or None.

        With an edge_filter only edges passing the predicate may be used.
        """
        if edge_filter is None:
            graph = self
        else:
            graph = PrimeDigraph.make(self.vertices,
                                      [e for e in self.edges if edge_filter(e)])
        for cyc in graph.all_cycles():
            if len(cyc) >= min_len:
                return cyc
        return None

    def weak_components(self) -> tuple[tuple[int, ...], ...]:
        """Partition of the vertices ignoring edge direction."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        comps: dict[int, list[int]] = {}
        for v in self.vertices:
            comps.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(c)) for r, c in sorted(comps.items()))

    def topological_peel(self) -> Optional[tuple[int, ...]]:
        """Repeatedly remove the least vertex with no incoming edges.

        Returns the removal order, or None when the graph is cyclic.
        """
        remaining = set(self.vertices)
        edges = set(self.edges)
        order = []
        while remaining:
            sources = [v for v in sorted(remaining)
                       if not any(b == v for a, b in edges if a in remaining)]
            if not sources:
                return None
            v = sources[0]
            remaining.remove(v)
            edges = {(a, b) for a, b in edges if a != v and b != v}
            order.append(v)
        return tuple(order)


def union(g1: PrimeDigraph, g2: PrimeDigraph) -> PrimeDigraph:
    return g1.union(g2)


def is_subgraph(g1: PrimeDigraph, g2: PrimeDigraph) -> bool:
    return g1.is_subgraph(g2)


# -- concrete graph functions ---------------------------------------------------

def gk_graph(G: FiniteGroup) -> PrimeDigraph:
    """Edges both ways between p and q when some element order is divisible by pq."""
    primes = G.prime_divisors()
    edges = set()
    for o in set(G.element_orders()):
        ds = prime_divisors(o)
        for i, p in enumerate(ds):
            for q in ds[i + 1:]:
                edges.add((p, q))
                edges.add((q, p))
    return PrimeDigraph.make(primes, edges)


def hawkes_graph(G: FiniteGroup) -> PrimeDigraph:
    """Edge (p, q) iff q divides the order of G / O_{p',p}(G)."""
    def compute():
        primes = G.prime_divisors()
        edges = []
        for p in primes:
            quotient_order = G.order // cores(G, p).o_p_prime_p.order
            for q in prime_divisors(quotient_order):
                edges.append((p, q))
        return PrimeDigraph.make(primes, edges)
    return G._memo("hawkes_graph", compute)


def sylow_graph(G: FiniteGroup) -> PrimeDigraph:
    """Edge (p, q) iff q divides |N_G(P) / P C_G(P)| for P Sylow p.

    The quotient has p'-order (P is Sylow in its normalizer), so the graph is
    loop-free by construction.
    """
    def compute():
        primes = G.prime_divisors()
        edges = []
        for p in primes:
            P = sylow_subgroup(G, p)
            N = normalizer(G, P)
            C = centralizer(G, P)
            pc = P.members | C.members
            pc_order = (P.order * C.order) // (P.members & C.members).bit_count()
            for q in prime_divisors(N.order // pc_order):
                edges.append((p, q))
        return PrimeDigraph.make(primes, edges)
    return G._memo("sylow_graph", compute)


def schmidt_graph(G: FiniteGroup, work_cap: int = SCHMIDT_SCAN_WORK_CAP) -> PrimeDigraph:
    """Edge (p, q) iff G contains a Schmidt (p, q)-subgroup.

    Pair scan: (p, q) is an edge iff there are a p-element a and a q-element
    x such that the closure P of the x-conjugation orbit of a is a p-group
    (then automatically x-invariant) and x moves a.  Then P<x> is a
    non-nilpotent {p,q}-group with normal Sylow p-subgroup, hence contains a
    Schmidt (p, q)-subgroup; conversely inside a Schmidt (p, q)-subgroup some
    generator of its p-part is moved by the acting q-element.  Only class
    representatives of q-elements need scanning.
    """
    def compute():
        primes = G.prime_divisors()
        orders = G.element_orders()
        idx = G._index
        elements = G.elements
        work = 0

        by_prime: dict[int, list[int]] = {p: [] for p in primes}
        for i, o in enumerate(orders):
            for p in primes:
                if o != 1 and o == p_part(o, p):
                    by_prime[p].append(i)
        reps_by_prime: dict[int, list[int]] = {p: [] for p in primes}
        for cls in G.conjugacy_classes():
            o = orders[cls[0]]
            for p in primes:
                if o != 1 and o == p_part(o, p):
                    reps_by_prime[p].append(cls[0])

        edges = []
        for p in primes:
            pk = p_part(G.order, p)
            p_elements = by_prime[p]
            for q in primes:
                if q == p:
                    continue
                found = False
                for xi in reps_by_prime[q]:
                    x = elements[xi]
                    xinv = x.inverse()
                    covered = set()
                    for ai in p_elements:
                        if ai in covered:
                            continue
                        a = elements[ai]
                        orbit = [a]
                        covered.add(ai)
                        cur = a
                        while True:
                            cur = (xinv * cur) * x
                            work += 2
                            if cur == a:
                                break
                            orbit.append(cur)
                            covered.add(idx[cur])
                        if len(orbit) == 1:
                            continue  # x centralizes <a>
                        work += len(orbit)
                        if _is_p_group_closure(G, orbit, p, pk):
                            found = True
                            break
                        if work > work_cap:
                            raise BudgetExceeded(
                                f"Schmidt pair scan work cap {work_cap} hit on {G.name}")
                    if found:
                        break
                if found:
                    edges.append((p, q))
        return PrimeDigraph.make(primes, edges)

    return G._memo("schmidt_graph", compute)


def _is_p_group_closure(G: FiniteGroup, gens, p: int, cap: int) -> bool:
    """True iff <gens> closes within cap elements with p-power order."""
    ident = G.identity
    seen = {ident}
    seen.update(gens)
    if len(seen) - 1 > cap:
        return False
    frontier = list(seen - {ident})
    while frontier:
        a = frontier.pop()
        for g in gens:
            b = Permutation([g[i] for i in a])
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    return False
                frontier.append(b)
    return is_p_power(len(seen), p)


def schmidt_graph_bruteforce(G: FiniteGroup,
                             threshold: int = None) -> PrimeDigraph:
    """Independent oracle for the Schmidt graph on small groups.

    Enumerates the full subgroup lattice, keeps the minimal non-nilpotent
    (Schmidt) subgroups, and classifies each by its prime pair and normal
    Sylow subgroup.  Deliberately shares nothing with the pair scan.
    """
    from .structure import (EXHAUSTIVE_LATTICE_THRESHOLD, is_normal,
                            subgroup_lattice, sylow_subgroup)
    if threshold is None:
        threshold = EXHAUSTIVE_LATTICE_THRESHOLD
    lattice = subgroup_lattice(G, threshold)
    edges = set()
    for m in lattice:
        H = SubgroupRef(G, m, _reduce_generators(G, m))
        if subgroup_is_nilpotent(H):
            continue
        proper_all_nilpotent = all(
            subgroup_is_nilpotent(SubgroupRef(G, k, _reduce_generators(G, k)))
            for k in lattice if k != m and k & ~m == 0)
        if not proper_all_nilpotent:
            continue
        HG = H.as_group()
        primes = prime_divisors(HG.order)
        assert len(primes) == 2, "a Schmidt group is biprimary"
        normal_sylow = [p for p in primes if is_normal(HG, sylow_subgroup(HG, p))]
        assert len(normal_sylow) == 1, "a Schmidt group has one normal Sylow subgroup"
        p = normal_sylow[0]
        q = primes[0] if primes[1] == p else primes[1]
        edges.add((p, q))
    return PrimeDigraph.make(G.prime_divisors(), edges)


# -- generic theta-local construction ---------------------------------------------

SELECTOR_KINDS = ("chief-factors-with-p", "sylow-p", "all-p-subgroups", "custom")


@dataclass(frozen=True)
class SectionSelector:
    """Assigns to each prime a family of subgroups or chief factors.

    ``custom`` enumerators receive (G, p) and yield SubgroupRefs; the edge
    test then uses the automorphism group N_G(P)/C_G(P) each subgroup
    induces.  Built-in kinds cover the chief factors containing p, the Sylow
    p-subgroups and all p-subgroups.
    """

    kind: str
    custom: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in SELECTOR_KINDS:
            raise SelectorUndefined(f"unknown selector kind {self.kind!r}")
        if self.kind == "custom" and self.custom is None:
            raise SelectorUndefined("custom selector requires an enumerator")


def theta_local_graph(G: FiniteGroup, selector: SectionSelector,
                      exclude_loops: bool) -> PrimeDigraph:
    """Edge (p, q) iff q divides the order of the automorphism group G
    induces on some object selected for p; loops dropped when exclude_loops.
    """
    primes = G.prime_divisors()
    edges: set[tuple[int, int]] = set()
    if selector.kind == "chief-factors-with-p":
        for p, q in _chief_factor_edges(G):
            edges.add((p, q))
    elif selector.kind == "sylow-p":
        for p in primes:
            P = sylow_subgroup(G, p)
            N = normalizer(G, P)
            C = centralizer(G, P)
            for q in prime_divisors(N.order // C.order):
                edges.add((p, q))
    elif selector.kind == "all-p-subgroups":
        for p in primes:
            remaining = set(primes)
            for P in _all_p_subgroups(G, p):
                if not remaining:
                    break
                N = normalizer(G, P)
                C = centralizer(G, P)
                for q in prime_divisors(N.order // C.order):
                    edges.add((p, q))
                    remaining.discard(q)
    else:
        for p in primes:
            family = selector.custom(G, p)
            if family is None:
                raise SelectorUndefined(f"custom selector undefined for prime {p}")
            for P in family:
                N = normalizer(G, P)
                C = centralizer(G, P)
                for q in prime_divisors(N.order // C.order):
                    edges.add((p, q))
    if exclude_loops:
        edges = {(a, b) for a, b in edges if a != b}
    return PrimeDigraph.make(primes, edges)


def _all_p_subgroups(G: FiniteGroup, p: int, budget: int = P_SUBGROUP_BUDGET):
    """All nontrivial p-subgroups, by layered normalizer extension.

    Every p-group of order p^(k+1) is a prime-cyclic extension of one of its
    maximal subgroups, so extending each found subgroup by order-p elements
    of its normalizer (with p-th power inside) enumerates everything.
    """
    orders = G.element_orders()
    seen = set()
    layer: list[SubgroupRef] = []
    for i, o in enumerate(orders):
        if o != 1 and o == p_part(o, p):
            P = subgroup_generated(G, [i])
            if P.members not in seen:
                seen.add(P.members)
                layer.append(P)
    out = list(layer)
    pk = p_part(G.order, p)
    while layer:
        nxt = []
        for P in layer:
            if P.order == pk:
                continue
            N = normalizer(G, P)
            for y in _bitset_indices(N.members):
                if P.contains_index(y):
                    continue
                o = orders[y]
                if o % p != 0 or o != p_part(o, p):
                    continue
                yperm = G.elements[y]
                ypow = yperm
                for _ in range(p - 1):
                    ypow = ypow * yperm
                if ypow not in P:
                    continue
                members = P.members
                cur = G.identity
                for _ in range(p - 1):
                    cur = cur * yperm
                    for j in P.indices():
                        members |= 1 << G._index[G.elements[j] * cur]
                if members not in seen:
                    seen.add(members)
                    if len(seen) > budget:
                        raise BudgetExceeded(
                            f"more than {budget} {p}-subgroups in {G.name}")
                    Q = SubgroupRef(G, members, _reduce_generators(G, members))
                    nxt.append(Q)
                    out.append(Q)
        layer = nxt
    return out


def _chief_factor_edges(G: FiniteGroup):
    """(p, q) pairs from chief factors: p divides the factor, q divides the
    order of the automorphism group G induces on it."""
    from .permcore import quotient_group  # local import to avoid cycle at module load

    edges = []
    Q = G
    while Q.order > 1:
        # minimal normal subgroup of the current quotient, least (order, members)
        nontrivial = [N for N in normal_subgroups(Q) if N.order > 1]
        M = None
        for N in sorted(nontrivial, key=lambda r: (r.order, _bitset_indices(r.members))):
            if not any(K.order > 1 and K.members != N.members and K.members & ~N.members == 0
                       for K in nontrivial):
                M = N
                break
        C = centralizer(Q, M)
        aut_order = Q.order // C.order
        for p in prime_divisors(M.order):
            for q in prime_divisors(aut_order):
                edges.append((p, q))
        Q = quotient_group(Q, M).group
    return edges
