"""Permutation arithmetic and the finite-group engine.

Groups are realised exclusively as permutation groups with a full, canonically
ordered element enumeration (lexicographic on image tables), so that equal
groups always produce identical enumerations.  Subgroups are bitsets over the
parent enumeration, which turns normality, intersection and index bookkeeping
into integer bit operations.

Points are 0-based internally; cycle notation at the text boundaries
(parsing, printing, group-spec files) is 1-based.
"""

from __future__ import annotations

import math
import os
import threading
from array import array
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DegreeMismatch, NotAMember, NotNormal
from .primeutil import prime_divisors

DEFAULT_ELEMENT_CAP = 200_000
ELEMENT_CAP_ENV = "GROUPGRAPHS_ELEMENT_CAP"

# full multiplication tables are built for groups up to this order
TABLE_LIMIT = 1024


def element_cap(cap=None) -> int:
    """Effective element budget: explicit argument, else env override, else default."""
    if cap is not None:
        return cap
    env = os.environ.get(ELEMENT_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_ELEMENT_CAP


class Permutation(tuple):
    """A bijection on {0..n-1} stored as an image table.

    ``p[i]`` is the image of point ``i``.  Composition is left-to-right:
    ``(p * q)[i] == q[p[i]]`` (apply p first, then q).  Instances compare and
    sort as plain tuples, which gives the canonical lexicographic element
    order used throughout.

    The raw constructor does not validate; use :meth:`from_images` for
    untrusted input.
    """

    __slots__ = ()

    @classmethod
    def from_images(cls, images) -> "Permutation":
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        return cls(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Permutation":
        """Build from disjoint cycles of 0-based points."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if not 0 <= a < degree:
                    raise ValueError(f"point {a} out of range for degree {degree}")
                if a in seen:
                    raise ValueError(f"point {a} repeated across cycles")
                seen.add(a)
                images[a] = b
        return cls.from_images(images)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        return Permutation([other[x] for x in self])

    def inverse(self) -> "Permutation":
        images = [0] * len(self)
        for i, j in enumerate(self):
            images[j] = i
        return Permutation(images)

    def conjugate_by(self, g: "Permutation") -> "Permutation":
        """g^-1 * self * g."""
        inv = g.inverse()
        return Permutation([g[self[inv[x]]] for x in range(len(self))])

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        """Disjoint cycle decomposition, each cycle led by its least point."""
        out = []
        seen = [False] * len(self)
        for start in range(len(self)):
            if seen[start]:
                continue
            cur, cyc = start, []
            while not seen[cur]:
                seen[cur] = True
                cyc.append(cur)
                cur = self[cur]
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()), 1)

    def cycle_string(self) -> str:
        """1-based cycle notation; identity prints as ``()``."""
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles)

    def __repr__(self):
        return f"Permutation{tuple(self)!r}"


def parse_cycle_string(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation like ``(1 2 3)(4 5)``; ``()`` is the identity."""
    text = text.strip()
    cycles = []
    i = 0
    while i < len(text):
        if text[i] != "(":
            raise ValueError(f"expected '(' in cycle notation: {text!r}")
        j = text.index(")", i)
        body = text[i + 1:j].replace(",", " ").split()
        if body:
            cycles.append([int(tok) - 1 for tok in body])
        i = j + 1
    return Permutation.from_cycles(cycles, degree)


class FiniteGroup:
    """A finite permutation group with full canonical element enumeration.

    Immutable after construction; all derived data (conjugacy classes,
    element orders, multiplication table for small groups) is memoised per
    instance behind a lock, so instances are safe to share across threads.
    """

    def __init__(self, degree: int, generators, elements, name: str = ""):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.name = name or f"group<{len(self.elements)}deg{degree}>"
        self._index = {p: i for i, p in enumerate(self.elements)}
        self._cache: dict = {}
        self._lock = threading.Lock()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[self.identity_index]

    @property
    def identity_index(self) -> int:
        # the identity is the lexicographically least bijection, so index 0
        return 0

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise NotAMember(f"{p!r} is not in {self.name}") from None

    def __contains__(self, p) -> bool:
        return p in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order}, degree={self.degree})"

    # -- memoised structure ------------------------------------------------

    def _memo(self, key, compute):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    def element_orders(self) -> tuple[int, ...]:
        """Order of every element, from its cycle type."""
        return self._memo("orders", lambda: tuple(p.order() for p in self.elements))

    def element_order(self, g: Permutation) -> int:
        self.index(g)  # membership check
        return g.order()

    def prime_divisors(self) -> tuple[int, ...]:
        return self._memo("primes", lambda: prime_divisors(self.order))

    def is_abelian(self) -> bool:
        def compute():
            return all(a * b == b * a for a in self.generators for b in self.generators)
        return self._memo("abelian", compute)

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Partition of element indices into conjugacy classes.

        Classes appear in order of their least member; members are ascending.
        The identity class {0} is always first.
        """
        return self._memo("classes", self._compute_classes)

    def _compute_classes(self):
        n = self.order
        gen_invs = [(g, g.inverse()) for g in self.generators]
        assigned = [False] * n
        classes = []
        for start in range(n):
            if assigned[start]:
                continue
            orbit = [start]
            assigned[start] = True
            frontier = [self.elements[start]]
            while frontier:
                x = frontier.pop()
                for g, gi in gen_invs:
                    y = (gi * x) * g
                    yi = self._index[y]
                    if not assigned[yi]:
                        assigned[yi] = True
                        orbit.append(yi)
                        frontier.append(y)
            classes.append(tuple(sorted(orbit)))
        return tuple(classes)

    def class_representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.conjugacy_classes())

    def mul_table(self):
        """Flat multiplication table rows for small groups, else None.

        Row i holds index(elements[i] * elements[j]) for all j.  Built lazily
        and only when order <= TABLE_LIMIT; purely an internal accelerator.
        """
        if self.order > TABLE_LIMIT:
            return None
        return self._memo("table", self._compute_table)

    def _compute_table(self):
        idx = self._index
        rows = []
        for a in self.elements:
            rows.append(array("i", [idx[Permutation([b[x] for x in a])] for b in self.elements]))
        return rows

    def inverse_table(self):
        def compute():
            return array("i", [self._index[p.inverse()] for p in self.elements])
        return self._memo("inv", compute)

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, seed) -> "SubgroupRef":
        """Smallest subgroup containing the seed elements (permutations or indices)."""
        return subgroup_generated(self, seed)

    def full_subgroup(self) -> "SubgroupRef":
        gens = tuple(self._index[g] for g in self.generators)
        return SubgroupRef(self, (1 << self.order) - 1, gens)


@dataclass(frozen=True)
class SubgroupRef:
    """A subgroup of a parent group: an element-index bitset plus generators."""

    parent: FiniteGroup = field(compare=False)
    members: int
    gen_idx: tuple[int, ...] = field(compare=False)

    @property
    def order(self) -> int:
        return self.members.bit_count()

    def indices(self) -> tuple[int, ...]:
        """Ascending member indices."""
        out = []
        m = self.members
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def perms(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.indices())

    def generator_perms(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.gen_idx)

    def contains_index(self, i: int) -> bool:
        return bool(self.members >> i & 1)

    def __contains__(self, p: Permutation) -> bool:
        i = self.parent._index.get(p)
        return i is not None and bool(self.members >> i & 1)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_full(self) -> bool:
        return self.order == self.parent.order

    def same_parent(self, other: "SubgroupRef") -> bool:
        return self.parent is other.parent

    def __and__(self, other: "SubgroupRef") -> "SubgroupRef":
        assert self.parent is other.parent
        inter = self.members & other.members
        return SubgroupRef(self.parent, inter, _reduce_generators(self.parent, inter))

    def __le__(self, other: "SubgroupRef") -> bool:
        assert self.parent is other.parent
        return self.members & ~other.members == 0

    def __eq__(self, other):
        return (isinstance(other, SubgroupRef) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"SubgroupRef(order={self.order} of {self.parent.name})"

    def as_group(self) -> FiniteGroup:
        """This subgroup as a standalone FiniteGroup on the parent's points."""
        key = ("as_group", self.members)
        def compute():
            els = sorted(self.perms())
            gens = self.generator_perms()
            if not gens and self.order > 1:
                gens = tuple(p for p in els if p != self.parent.identity)
            name = f"{self.parent.name}.sub{self.order}"
            return FiniteGroup(self.parent.degree, gens, els, name)
        return self.parent._memo(key, compute)

    def generator_cycle_strings(self) -> tuple[str, ...]:
        """Generators in 1-based cycle notation (re-check material for reports)."""
        return tuple(p.cycle_string() for p in self.generator_perms())


def _close_under(gens: list[Permutation], degree: int, cap: int, over_cap_full=None):
    """Closure of gens under composition.  Returns a set of permutations.

    If over_cap_full is given and the closure exceeds that many elements, the
    closure is known to be the whole parent group and None is returned.
    Raises BudgetExceeded when the closure grows past cap.
    """
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = Permutation([g[i] for i in x])
            if y not in seen:
                seen.add(y)
                if over_cap_full is not None and len(seen) > over_cap_full:
                    return None
                if len(seen) > cap:
                    raise BudgetExceeded(
                        f"closure exceeded element budget {cap} at degree {degree}")
                frontier.append(y)
    return seen


def group_from_generators(degree: int, gens, name: str = "", cap=None) -> FiniteGroup:
    """Closure of gens under composition, canonically sorted.

    Raises DegreeMismatch for generators of the wrong degree and
    BudgetExceeded when the closure grows past the element budget.
    """
    cap = element_cap(cap)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = [g if isinstance(g, Permutation) else Permutation.from_images(g) for g in gens]
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(f"generator degree {g.degree} != {degree}")
        Permutation.from_images(g)  # bijection check
    elements = sorted(_close_under(gens, degree, cap))
    return FiniteGroup(degree, gens, elements, name)


def _reduce_generators(G: FiniteGroup, members: int) -> tuple[int, ...]:
    """A small generating index set for the subgroup given by a member bitset."""
    if members.bit_count() <= 1:
        return ()
    gens: list[int] = []
    closure = 1 << G.identity_index
    m = members
    while m:
        low = m & -m
        i = low.bit_length() - 1
        m ^= low
        if closure >> i & 1:
            continue
        gens.append(i)
        closure = _index_closure(G, [G.elements[j] for j in gens])
        if closure == members:
            break
    return tuple(gens)


def _index_closure(G: FiniteGroup, gen_perms) -> int:
    """Bitset of the subgroup of G generated by gen_perms.

    Short-circuits to the full group once the closure passes |G|/2, since a
    proper subgroup has index at least 2.
    """
    table = G.mul_table()
    half = G.order // 2
    full = (1 << G.order) - 1
    if table is not None:
        gidx = [G._index[g] for g in gen_perms]
        members = 1 << G.identity_index
        frontier = [G.identity_index]
        count = 1
        while frontier:
            x = frontier.pop()
            row = table[x]
            for g in gidx:
                y = row[g]
                if not members >> y & 1:
                    members |= 1 << y
                    count += 1
                    if count > half:
                        return full
                    frontier.append(y)
        return members
    idx = G._index
    ident = G.identity
    seen = {ident}
    frontier = [ident]
    members = 1 << G.identity_index
    while frontier:
        x = frontier.pop()
        for g in gen_perms:
            y = Permutation([g[i] for i in x])
            if y not in seen:
                seen.add(y)
                if len(seen) > half:
                    return full
                members |= 1 << idx[y]
                frontier.append(y)
    return members


def subgroup_generated(G: FiniteGroup, seed) -> SubgroupRef:
    """Smallest subgroup of G containing the seed (permutations or element indices)."""
    perms = []
    for s in seed:
        if isinstance(s, int):
            perms.append(G.elements[s])
        else:
            G.index(s)  # NotAMember check
            perms.append(s)
    # greedy irredundant generating subset keeps later closures cheap
    gens: list[Permutation] = []
    members = 1 << G.identity_index
    for p in perms:
        if members >> G._index[p] & 1:
            continue
        gens.append(p)
        members = _index_closure(G, gens)
    return SubgroupRef(G, members, tuple(G._index[g] for g in gens))


def element_order(G: FiniteGroup, g: Permutation) -> int:
    """Least k >= 1 with g**k the identity; raises NotAMember if g not in G."""
    return G.element_order(g)


def conjugacy_classes(G: FiniteGroup):
    return G.conjugacy_classes()


def direct_product(G1: FiniteGroup, G2: FiniteGroup, name: str = "", cap=None) -> FiniteGroup:
    """Direct product acting on the disjoint union of the two point sets."""
    cap = element_cap(cap)
    if G1.order * G2.order > cap:
        raise BudgetExceeded(
            f"product order {G1.order * G2.order} exceeds element budget {cap}")
    d1, d2 = G1.degree, G2.degree
    shift = tuple(range(d1))
    elements = []
    for a in G1.elements:
        base = tuple(a)
        for b in G2.elements:
            elements.append(Permutation(base + tuple(x + d1 for x in b)))
    elements.sort()
    gens = [Permutation(tuple(a) + tuple(range(d1, d1 + d2))) for a in G1.generators]
    gens += [Permutation(shift + tuple(x + d1 for x in b)) for b in G2.generators]
    name = name or f"{G1.name}x{G2.name}"
    return FiniteGroup(d1 + d2, gens, elements, name)


def factor_embeddings(P: FiniteGroup, split_degree: int) -> tuple[SubgroupRef, SubgroupRef]:
    """Canonical embeddings of the two factors of a direct product.

    split_degree is the degree of the first factor.  The embeddings are the
    members acting trivially on the other factor's points.
    """
    m1 = m2 = 0
    for i, p in enumerate(P.elements):
        if all(p[x] == x for x in range(split_degree, P.degree)):
            m1 |= 1 << i
        if all(p[x] == x for x in range(split_degree)):
            m2 |= 1 << i
    return (SubgroupRef(P, m1, _reduce_generators(P, m1)),
            SubgroupRef(P, m2, _reduce_generators(P, m2)))


def is_normal(G: FiniteGroup, H: SubgroupRef) -> bool:
    """H normal in G, tested by conjugating H's generators by G's generators."""
    assert H.parent is G
    for g in G.generators:
        gi = g.inverse()
        for hi in H.gen_idx:
            h = G.elements[hi]
            if (gi * h) * g not in H:
                return False
    return True


class QuotientMap:
    """Quotient group G/N realised by the action of G on the cosets of N.

    ``group`` is the quotient as a FiniteGroup of degree |G:N| (for trivial N
    the group is G itself); ``project`` is the element-level homomorphism.
    """

    def __init__(self, parent: FiniteGroup, kernel: SubgroupRef, group: FiniteGroup,
                 coset_of, coset_to_qidx):
        self.parent = parent
        self.kernel = kernel
        self.group = group
        self._coset_of = coset_of          # parent element index -> coset id
        self._coset_to_qidx = coset_to_qidx  # coset id -> quotient element index

    def project_index(self, i: int) -> int:
        return self._coset_to_qidx[self._coset_of[i]]

    def project(self, p: Permutation) -> Permutation:
        return self.group.elements[self.project_index(self.parent.index(p))]

    def preimage(self, q_members: int) -> int:
        """Bitset of parent elements mapping into the given quotient bitset."""
        out = 0
        for i in range(self.parent.order):
            if q_members >> self.project_index(i) & 1:
                out |= 1 << i
        return out

    def preimage_subgroup(self, S: SubgroupRef) -> SubgroupRef:
        assert S.parent is self.group
        members = self.preimage(S.members)
        return SubgroupRef(self.parent, members, _reduce_generators(self.parent, members))


def quotient_group(G: FiniteGroup, N: SubgroupRef, cap=None) -> QuotientMap:
    """G/N via the coset action; N must be normal (checked).

    The trivial-kernel quotient returns G itself with the identity projection
    rather than the degree-|G| regular action.
    """
    assert N.parent is G
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.name}")
    if N.order == 1:
        ident_map = array("i", range(G.order))
        return QuotientMap(G, N, G, ident_map, ident_map)
    cap = element_cap(cap)

    n_members = N.indices()
    coset_of = array("i", [-1] * G.order)
    reps = []
    for i in range(G.order):
        if coset_of[i] >= 0:
            continue
        c = len(reps)
        reps.append(i)
        x = G.elements[i]
        for j in n_members:
            coset_of[G._index[G.elements[j] * x]] = c
    k = len(reps)

    def act(p: Permutation) -> Permutation:
        # right translation on cosets, Nx -> Nxp, so that act is a homomorphism
        # under the left-to-right composition convention
        return Permutation([coset_of[G._index[G.elements[reps[c]] * p]] for c in range(k)])

    qgens = [act(g) for g in G.generators]
    Q = group_from_generators(k, qgens, name=f"{G.name}/{N.order}", cap=cap)
    coset_to_qidx = array("i", [Q.index(act(G.elements[reps[c]])) for c in range(k)])
    return QuotientMap(G, N, Q, coset_of, coset_to_qidx)
