"""Structural subgroup machinery: Sylow subgroups, cores, normal subgroups,
the Frattini subgroup, derived series, nilpotency and Hall subgroups.

All searches are deterministic.  Where several subgroups satisfy a spec
(Sylow and Hall subgroups), the one whose sorted member-index tuple is
lexicographically least among its conjugates is returned.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .errors import (NotFound, NotSolubleAndTooLarge, PrimeNotDividing,
                     ThresholdExceeded)
from .permcore import (FiniteGroup, SubgroupRef, _index_closure,
                       _reduce_generators, is_normal, quotient_group,
                       subgroup_generated)
from .primeutil import p_part, pi_part, prime_divisors

FRATTINI_THRESHOLD = 1000
EXHAUSTIVE_LATTICE_THRESHOLD = 60
HALL_RETRY_BUDGET = 64


# -- normalizer / centralizer scans ------------------------------------------

def normalizer(G: FiniteGroup, H: SubgroupRef) -> SubgroupRef:
    """{g in G : H^g = H}, by a full scan over G."""
    assert H.parent is G
    table = G.mul_table()
    members = 0
    if table is not None:
        inv = G.inverse_table()
        hbits = H.members
        gens = H.gen_idx
        for y in range(G.order):
            yi = inv[y]
            row_yi = table[yi]
            ok = True
            for h in gens:
                if not hbits >> table[row_yi[h]][y] & 1:
                    ok = False
                    break
            if ok:
                members |= 1 << y
    else:
        gens = H.generator_perms()
        for i, y in enumerate(G.elements):
            yi = y.inverse()
            ok = True
            for h in gens:
                if (yi * h) * y not in H:
                    ok = False
                    break
            if ok:
                members |= 1 << i
    return SubgroupRef(G, members, _reduce_generators(G, members))


def centralizer(G: FiniteGroup, H: SubgroupRef) -> SubgroupRef:
    """{g in G : gh = hg for all h in H}, by a full scan over G."""
    assert H.parent is G
    table = G.mul_table()
    members = 0
    if table is not None:
        gens = H.gen_idx
        for y in range(G.order):
            row_y = table[y]
            ok = True
            for h in gens:
                if row_y[h] != table[h][y]:
                    ok = False
                    break
            if ok:
                members |= 1 << y
    else:
        gens = H.generator_perms()
        for i, y in enumerate(G.elements):
            ok = True
            for h in gens:
                if y * h != h * y:
                    ok = False
                    break
            if ok:
                members |= 1 << i
    return SubgroupRef(G, members, _reduce_generators(G, members))


def conjugate_subgroup(G: FiniteGroup, H: SubgroupRef, g_idx: int) -> int:
    """Member bitset of H^g."""
    g = G.elements[g_idx]
    gi = g.inverse()
    out = 0
    for i in H.indices():
        out |= 1 << G._index[(gi * G.elements[i]) * g]
    return out


def subgroup_conjugates(G: FiniteGroup, H: SubgroupRef) -> list[int]:
    """All member bitsets conjugate to H, by orbit under generator conjugation."""
    def compute():
        gen_idx = [G._index[g] for g in G.generators]
        seen = {H.members}
        frontier = [H]
        while frontier:
            K = frontier.pop()
            for gi in gen_idx:
                m = conjugate_subgroup(G, K, gi)
                if m not in seen:
                    seen.add(m)
                    frontier.append(SubgroupRef(G, m, _reduce_generators(G, m)))
        return sorted(seen)
    return G._memo(("conj_orbit", H.members), compute)


def _bitset_indices(members: int) -> tuple[int, ...]:
    out = []
    while members:
        low = members & -members
        out.append(low.bit_length() - 1)
        members ^= low
    return tuple(out)


def _lex_least_conjugate(G: FiniteGroup, H: SubgroupRef) -> SubgroupRef:
    """Deterministic representative: least sorted member tuple among conjugates."""
    best = min(subgroup_conjugates(G, H), key=_bitset_indices)
    return SubgroupRef(G, best, _reduce_generators(G, best))


# -- Sylow subgroups ----------------------------------------------------------

def sylow_subgroup(G: FiniteGroup, p: int) -> SubgroupRef:
    """A Sylow p-subgroup, by the classical normalizer climb.

    Starts from a cyclic p-subgroup and repeatedly adjoins a p-element y of
    the normalizer with y^p in P, which multiplies |P| by p; the climb
    terminates because a proper p-subgroup is proper in a Sylow normalizer.
    """
    if G.order % p != 0:
        raise PrimeNotDividing(f"{p} does not divide |{G.name}| = {G.order}")
    key = ("sylow", p)

    def compute():
        target = p_part(G.order, p)
        orders = G.element_orders()
        # seed: p-power part of the first element with order divisible by p
        seed = None
        for i, o in enumerate(orders):
            if o % p == 0:
                m = o // p_part(o, p)
                seed = G.elements[i]
                for _ in range(m - 1):
                    seed = seed * G.elements[i]
                break
        P = subgroup_generated(G, [seed])
        while P.order < target:
            N = normalizer(G, P)
            grown = False
            for i in _bitset_indices(N.members):
                if P.contains_index(i):
                    continue
                o = orders[i]
                if o % p != 0 or o != p_part(o, p):
                    continue
                y = G.elements[i]
                yp = y
                for _ in range(p - 1):
                    yp = yp * y
                if yp in P:
                    # P normal in <P, y> and y^p in P, so the extension is p|P| cosets
                    members = P.members
                    cur = G.identity
                    for _ in range(p - 1):
                        cur = cur * y
                        for j in P.indices():
                            members |= 1 << G._index[G.elements[j] * cur]
                    P = SubgroupRef(G, members, _reduce_generators(G, members))
                    grown = True
                    break
            if not grown:  # pragma: no cover - would contradict Sylow theory
                raise RuntimeError("normalizer climb stalled")
        return _lex_least_conjugate(G, P)

    return G._memo(key, compute)


# -- normal subgroups and cores ------------------------------------------------

def normal_subgroups(G: FiniteGroup) -> tuple[SubgroupRef, ...]:
    """All normal subgroups, as joins of conjugacy-class normal closures.

    Every normal subgroup is a union of classes, hence the join of the normal
    closures of the classes it contains; conversely any such join is normal.
    Sorted by (order, member tuple).
    """
    def compute():
        atoms = []
        seen_atoms = set()
        for cls in G.conjugacy_classes()[1:]:
            closure = _index_closure(G, [G.elements[cls[0]]])
            # the class closure is the normal closure of any of its members
            m = closure
            for i in cls:
                if not m >> i & 1:
                    m = _index_closure(G, [G.elements[j] for j in _reduce_generators(G, m)]
                                       + [G.elements[i]])
            if m not in seen_atoms:
                seen_atoms.add(m)
                atoms.append(m)
        trivial = 1 << G.identity_index
        found = {trivial}
        frontier = [trivial]
        while frontier:
            base = frontier.pop()
            base_gens = [G.elements[i] for i in _reduce_generators(G, base)]
            for a in atoms:
                if a & ~base == 0:
                    continue
                join = _index_closure(G, base_gens +
                                      [G.elements[i] for i in _reduce_generators(G, a)])
                if join not in found:
                    found.add(join)
                    frontier.append(join)
        refs = [SubgroupRef(G, m, _reduce_generators(G, m)) for m in found]
        refs.sort(key=lambda r: (r.order, _bitset_indices(r.members)))
        return tuple(refs)

    return G._memo("normals", compute)


def is_simple(G: FiniteGroup) -> bool:
    return G.order > 1 and len(normal_subgroups(G)) == 2


def largest_normal_pi_subgroup(G: FiniteGroup, pi) -> SubgroupRef:
    """O_pi(G): join of all normal subgroups whose order is a pi-number."""
    pi = set(pi)
    gens = []
    members = 1 << G.identity_index
    for N in normal_subgroups(G):
        if set(prime_divisors(N.order)) <= pi:
            gens.extend(G.elements[i] for i in N.gen_idx)
    if gens:
        members = _index_closure(G, gens)
    # the join of normal pi-subgroups is a normal pi-subgroup
    return SubgroupRef(G, members, _reduce_generators(G, members))


@dataclass(frozen=True)
class CoreTriple:
    """O_p(G), O_{p'}(G) and O_{p',p}(G) for a fixed prime p."""

    p: int
    o_p: SubgroupRef
    o_p_prime: SubgroupRef
    o_p_prime_p: SubgroupRef


def cores(G: FiniteGroup, p: int) -> CoreTriple:
    """The three cores for p: see CoreTriple.

    O_p is the intersection of the conjugates of one Sylow p-subgroup,
    O_{p'} the join of normal p'-subgroups, and O_{p',p} the full preimage of
    O_p(G/O_{p'}) under the quotient projection.
    """
    if G.order % p != 0:
        raise PrimeNotDividing(f"{p} does not divide |{G.name}| = {G.order}")
    key = ("cores", p)

    def compute():
        P = sylow_subgroup(G, p)
        inter = (1 << G.order) - 1
        for m in subgroup_conjugates(G, P):
            inter &= m
        o_p = SubgroupRef(G, inter, _reduce_generators(G, inter))
        pi_prime = tuple(q for q in G.prime_divisors() if q != p)
        o_pp = largest_normal_pi_subgroup(G, pi_prime)
        if o_pp.order == 1:
            o_ppp = o_p
        else:
            qm = quotient_group(G, o_pp)
            inner = cores(qm.group, p) if qm.group.order % p == 0 else None
            if inner is None:
                o_ppp = o_pp
            else:
                o_ppp = qm.preimage_subgroup(inner.o_p)
        return CoreTriple(p, o_p, o_pp, o_ppp)

    return G._memo(key, compute)


# -- derived series, solubility, nilpotency -----------------------------------

def derived_subgroup_of(G: FiniteGroup, H: SubgroupRef) -> SubgroupRef:
    """Commutator subgroup [H, H]: normal closure in H of generator commutators."""
    gens = H.generator_perms()
    comms = []
    for a in gens:
        ai = a.inverse()
        for b in gens:
            c = ((ai * b.inverse()) * a) * b
            if c != G.identity:
                comms.append(c)
    members = _normal_closure(G, H, comms)
    return SubgroupRef(G, members, _reduce_generators(G, members))


def _normal_closure(G: FiniteGroup, H: SubgroupRef, seed) -> int:
    """Bitset of the normal closure of <seed> under conjugation by H's generators."""
    closing = list(seed)
    members = _index_closure(G, closing) if closing else 1 << G.identity_index
    acting = H.generator_perms()
    stable = False
    while not stable:
        stable = True
        for g in acting:
            gi = g.inverse()
            for i in _reduce_generators(G, members):
                x = (gi * G.elements[i]) * g
                if not members >> G._index[x] & 1:
                    closing.append(x)
                    members = _index_closure(G, closing)
                    stable = False
    return members


@dataclass(frozen=True)
class SeriesReport:
    """A derived series or a Sylow tower, with its verdict."""

    kind: str                       # "derived" | "sylow-tower"
    terms: tuple[SubgroupRef, ...]
    verdict: bool
    ordering: tuple[int, ...] | None = None


def derived_series(G: FiniteGroup) -> SeriesReport:
    """G >= G' >= G'' >= ...; verdict True (soluble) iff it reaches 1."""
    def compute():
        terms = [G.full_subgroup()]
        while True:
            nxt = derived_subgroup_of(G, terms[-1])
            if nxt.members == terms[-1].members:
                break
            terms.append(nxt)
        return SeriesReport("derived", tuple(terms), terms[-1].order == 1)
    return G._memo("derived_series", compute)


def is_soluble(G: FiniteGroup) -> bool:
    return derived_series(G).verdict


def is_nilpotent(G: FiniteGroup) -> bool:
    """True iff every Sylow subgroup is normal."""
    def compute():
        return all(is_normal(G, sylow_subgroup(G, p)) for p in G.prime_divisors())
    return G._memo("nilpotent", compute)


def subgroup_is_nilpotent(H: SubgroupRef) -> bool:
    key = ("sub_nilpotent", H.members)
    return H.parent._memo(key, lambda: is_nilpotent(H.as_group()))


# -- subgroup lattice (cyclic extension with perfect seeds) ---------------------

def subgroup_lattice(G: FiniteGroup, threshold: int = FRATTINI_THRESHOLD):
    """All subgroups of G as member bitsets, for |G| <= threshold.

    Cyclic extension: every soluble subgroup is reached from the trivial
    subgroup by repeatedly adjoining a prime-order element of the normalizer
    modulo the current subgroup.  Insoluble subgroups are reached the same
    way from perfect seed subgroups, which are found by a two-generator sweep
    (every perfect group of order <= 1000 is 2-generated) closed under
    conjugacy.

    Raises ThresholdExceeded above the threshold.
    """
    if G.order > threshold:
        raise ThresholdExceeded(
            f"|{G.name}| = {G.order} exceeds lattice threshold {threshold}")

    def compute():
        table = G.mul_table()
        inv = G.inverse_table()
        orders = G.element_orders()
        primes = G.prime_divisors()
        trivial = 1 << G.identity_index

        seeds = {trivial}
        for m in _perfect_subgroups(G):
            seeds.add(m)

        found = set(seeds)
        frontier = sorted(seeds)
        full = (1 << G.order) - 1
        while frontier:
            h = frontier.pop()
            if h == full:
                continue
            h_gens = _reduce_generators(G, h)
            # normalizer of h by table scan
            norm = []
            for y in range(G.order):
                yi = inv[y]
                row_yi = table[yi]
                ok = True
                for hg in h_gens:
                    if not h >> table[row_yi[hg]][y] & 1:
                        ok = False
                        break
                if ok:
                    norm.append(y)
            for p in primes:
                for y in norm:
                    if h >> y & 1 or orders[y] % p != 0 or orders[y] != p_part(orders[y], p):
                        continue
                    # y^p must fall back into h for <h, y> to be p cosets of h
                    yp = y
                    for _ in range(p - 1):
                        yp = table[yp][y]
                    if not h >> yp & 1:
                        continue
                    ext = h
                    cur = G.identity_index
                    for _ in range(p - 1):
                        cur = table[cur][y]
                        hh = h
                        while hh:
                            low = hh & -hh
                            ext |= 1 << table[low.bit_length() - 1][cur]
                            hh ^= low
                    if ext not in found:
                        found.add(ext)
                        frontier.append(ext)
        return tuple(sorted(found))

    return G._memo("lattice", compute)


def _perfect_subgroups(G: FiniteGroup) -> list[int]:
    """Member bitsets of all perfect subgroups (equal to their derived subgroup)."""
    if is_soluble(G):
        return []
    table = G.mul_table()
    orders = G.element_orders()
    candidates = set()
    reps = G.class_representatives()
    # two-generator sweep; conjugation closure afterwards restores completeness
    for r in reps:
        if orders[r] == 1:
            continue
        for b in range(G.order):
            if orders[b] == 1:
                continue
            members = _index_closure(G, [G.elements[r], G.elements[b]])
            candidates.add(members)
    perfect = set()
    for m in sorted(candidates):
        if m.bit_count() < 60:   # smallest insoluble group has order 60
            continue
        H = SubgroupRef(G, m, _reduce_generators(G, m))
        if derived_subgroup_of(G, H).members == m:
            for c in subgroup_conjugates(G, H):
                perfect.add(c)
    return sorted(perfect)


def maximal_subgroups(G: FiniteGroup, threshold: int = FRATTINI_THRESHOLD) -> list[int]:
    """Member bitsets of the maximal subgroups, from the full lattice."""
    lattice = subgroup_lattice(G, threshold)
    full = (1 << G.order) - 1
    proper = [m for m in lattice if m != full]
    out = []
    for m in proper:
        if not any(m != k and m & ~k == 0 for k in proper):
            out.append(m)
    return out


def frattini_subgroup(G: FiniteGroup, threshold: int = FRATTINI_THRESHOLD) -> SubgroupRef:
    """Intersection of all maximal subgroups; ThresholdExceeded above threshold."""
    def compute():
        if G.order == 1:
            return G.full_subgroup()
        inter = (1 << G.order) - 1
        for m in maximal_subgroups(G, threshold):
            inter &= m
        return SubgroupRef(G, inter, _reduce_generators(G, inter))
    if G.order > threshold:
        raise ThresholdExceeded(
            f"|{G.name}| = {G.order} exceeds Frattini threshold {threshold}")
    return G._memo(("frattini", threshold), compute)


# -- Hall subgroups -------------------------------------------------------------

def _stable_seed(*parts) -> int:
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def hall_subgroup(G: FiniteGroup, pi, threshold: int = FRATTINI_THRESHOLD) -> SubgroupRef:
    """A Hall pi-subgroup: order the full pi-part of |G|, index a pi'-number.

    Strategy: join Sylow subgroups for the primes of pi, retrying with random
    conjugates (deterministically seeded, HALL_RETRY_BUDGET attempts); below
    the lattice threshold an exhaustive search is the fallback.  Raises
    NotSolubleAndTooLarge when G is insoluble and too large for the fallback,
    NotFound when the exhaustive fallback finds nothing.
    """
    pi = tuple(sorted(set(pi) & set(G.prime_divisors())))
    target = pi_part(G.order, pi)
    if target == 1:
        return subgroup_generated(G, [])
    if target == G.order:
        return G.full_subgroup()
    soluble = is_soluble(G)
    if not soluble and G.order > threshold:
        raise NotSolubleAndTooLarge(
            f"|{G.name}| = {G.order} insoluble and above lattice threshold {threshold}")

    sylows = [sylow_subgroup(G, p) for p in pi]
    rnd = random.Random(_stable_seed("hall", G.name, G.order, pi))
    for attempt in range(HALL_RETRY_BUDGET + 1):
        gens = []
        for P in sylows:
            if attempt == 0:
                gens.extend(P.generator_perms())
            else:
                g = G.elements[rnd.randrange(G.order)]
                gi = g.inverse()
                gens.extend((gi * h) * g for h in P.generator_perms())
        members = _index_closure(G, gens)
        if members.bit_count() == target:
            H = SubgroupRef(G, members, _reduce_generators(G, members))
            return _lex_least_conjugate(G, H)
    if G.order <= threshold:
        matches = [m for m in subgroup_lattice(G, threshold) if m.bit_count() == target]
        if matches:
            best = min(matches, key=_bitset_indices)
            return SubgroupRef(G, best, _reduce_generators(G, best))
        raise NotFound(f"no Hall {pi}-subgroup in {G.name}")
    # soluble large case: P. Hall guarantees existence; retries exhausted
    raise NotFound(f"Hall {pi}-subgroup search exhausted retries in {G.name}")


def normal_hall_subgroup(G: FiniteGroup, pi) -> SubgroupRef | None:
    """The normal Hall pi-subgroup if it exists (it is then O_pi(G)), else None."""
    pi = tuple(sorted(set(pi) & set(G.prime_divisors())))
    target = pi_part(G.order, pi)
    H = largest_normal_pi_subgroup(G, pi)
    return H if H.order == target else None


def sylow_tower_orderings(G: FiniteGroup) -> list[tuple[int, ...]]:
    """All orderings of the prime divisors for which G has a Sylow tower.

    Ordering (p1, .., pn) qualifies iff for every i the normal Hall
    {p1..pi}-subgroup exists, i.e. |O_{p1..pi}(G)| equals the full part.
    """
    import itertools
    primes = G.prime_divisors()
    out = []
    for perm in itertools.permutations(primes):
        ok = True
        for i in range(1, len(perm)):
            if normal_hall_subgroup(G, perm[:i]) is None:
                ok = False
                break
        if ok:
            out.append(perm)
    return out
