"""Constructors for the bundled named groups.

Covers symmetric/alternating/cyclic/dihedral families, PSL(2,q) on the
projective line, PSL(3,3) on the 13 projective points, Sz(8) from a bundled
generator file (order and simplicity are re-verified at load), the Schmidt
group builder, direct products and group files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .errors import InvalidSpec
from .permcore import (FiniteGroup, Permutation, direct_product,
                       group_from_generators, parse_cycle_string)
from .primeutil import (is_prime, multiplicative_order, prime_divisors,
                        prime_power_base)
from .structure import is_simple

SZ8_ORDER = 29120
SZ8_DEGREE = 65


# -- small finite fields ------------------------------------------------------

class GF:
    """GF(p^k) with elements encoded 0..q-1 as base-p coefficient vectors.

    The reducing polynomial is the lexicographically first irreducible monic
    polynomial of degree k, so the encoding is deterministic.
    """

    def __init__(self, q: int):
        pk = prime_power_base(q)
        if pk is None:
            raise InvalidSpec(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.modpoly = self._find_irreducible()
        self._mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def _coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs) -> int:
        val = 0
        for c in reversed(coeffs):
            val = val * self.p + (c % self.p)
        return val

    def _find_irreducible(self) -> list[int]:
        p, k = self.p, self.k
        if k == 1:
            return [0, 1]
        for low in range(p ** k):
            poly = self._coeffs(low) + [1]   # monic degree k
            if self._poly_irreducible(poly):
                return poly
        raise RuntimeError("no irreducible polynomial found")  # pragma: no cover

    def _poly_irreducible(self, poly) -> bool:
        p = self.p
        deg = len(poly) - 1
        if poly[0] == 0:
            return False
        for low in range(p ** (deg // 2 + 1)):
            for d in range(1, deg // 2 + 1):
                div = self._coeffs_n(low, d) + [1]
                if self._poly_rem(poly, div) == []:
                    return False
        return True

    def _coeffs_n(self, a: int, n: int) -> list[int]:
        out = []
        for _ in range(n):
            out.append(a % self.p)
            a //= self.p
        return out

    def _poly_rem(self, num, den) -> list[int]:
        p = self.p
        num = list(num)
        dd = len(den) - 1
        lead_inv = pow(den[-1], -1, p)
        while len(num) - 1 >= dd and any(num):
            while num and num[-1] == 0:
                num.pop()
            if len(num) - 1 < dd:
                break
            factor = num[-1] * lead_inv % p
            shift = len(num) - 1 - dd
            for i, c in enumerate(den):
                num[shift + i] = (num[shift + i] - factor * c) % p
        while num and num[-1] == 0:
            num.pop()
        return num

    def add(self, a: int, b: int) -> int:
        return self._encode([x + y for x, y in zip(self._coeffs(a), self._coeffs(b))])

    def neg(self, a: int) -> int:
        return self._encode([-x for x in self._coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_slow(self, a: int, b: int) -> int:
        ca, cb = self._coeffs(a), self._coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = self._poly_rem(prod, self.modpoly)
        rem += [0] * (self.k - len(rem))
        return self._encode(rem)

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 is not a unit")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def primitive_element(self) -> int:
        for a in range(2, self.q):
            if self.element_order(a) == self.q - 1:
                return a
        return 1  # q = 2


# -- group specs ---------------------------------------------------------------

KINDS = ("symmetric", "alternating", "cyclic", "dihedral", "psl2", "psl3_3",
         "sz8", "schmidt", "product", "file")


@dataclass(frozen=True)
class GroupSpec:
    """A recipe for a catalog group; see build()."""

    kind: str
    params: tuple[int, ...] = ()
    path: str | None = None
    factors: tuple["GroupSpec", ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown group kind {self.kind!r}")


def build(spec: GroupSpec, cap=None) -> FiniteGroup:
    """Construct the group a spec describes; deterministic enumeration.

    Raises InvalidSpec for bad parameters and BudgetExceeded past the element
    budget.
    """
    kind = spec.kind
    if kind == "symmetric":
        return symmetric_group(_one_param(spec), cap)
    if kind == "alternating":
        return alternating_group(_one_param(spec), cap)
    if kind == "cyclic":
        return cyclic_group(_one_param(spec), cap)
    if kind == "dihedral":
        return dihedral_group(_one_param(spec), cap)
    if kind == "psl2":
        return psl2(_one_param(spec), cap)
    if kind == "psl3_3":
        return psl3_3(cap)
    if kind == "sz8":
        return sz8(cap)
    if kind == "schmidt":
        if len(spec.params) != 2:
            raise InvalidSpec("schmidt takes two primes")
        return schmidt_group(spec.params[0], spec.params[1], cap)
    if kind == "product":
        if len(spec.factors) < 2:
            raise InvalidSpec("product needs at least two factors")
        G = build(spec.factors[0], cap)
        for f in spec.factors[1:]:
            G = direct_product(G, build(f, cap), cap=cap)
        return G
    if kind == "file":
        return group_from_file(spec.path, cap)
    raise InvalidSpec(f"unknown group kind {kind!r}")  # pragma: no cover


def _one_param(spec: GroupSpec) -> int:
    if len(spec.params) != 1:
        raise InvalidSpec(f"{spec.kind} takes exactly one parameter")
    return spec.params[0]


def symmetric_group(n: int, cap=None) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("symmetric group needs n >= 1")
    if n == 1:
        return group_from_generators(1, [], name="S1", cap=cap)
    gens = [Permutation.from_cycles([[0, 1]], n)]
    if n > 2:
        gens.append(Permutation(tuple(range(1, n)) + (0,)))
    return group_from_generators(n, gens, name=f"S{n}", cap=cap)


def alternating_group(n: int, cap=None) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("alternating group needs n >= 1")
    if n <= 2:
        return group_from_generators(n, [], name=f"A{n}", cap=cap)
    gens = [Permutation.from_cycles([[0, 1, 2]], n)]
    if n > 3:
        if n % 2:
            gens.append(Permutation(tuple(range(1, n)) + (0,)))
        else:
            gens.append(Permutation((0,) + tuple(range(2, n)) + (1,)))
    return group_from_generators(n, gens, name=f"A{n}", cap=cap)


def cyclic_group(n: int, cap=None) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("cyclic group needs n >= 1")
    if n == 1:
        return group_from_generators(1, [], name="C1", cap=cap)
    return group_from_generators(n, [Permutation(tuple(range(1, n)) + (0,))],
                                 name=f"C{n}", cap=cap)


def dihedral_group(n: int, cap=None) -> FiniteGroup:
    """Dihedral group of order 2n on n points; n >= 3."""
    if n < 3:
        raise InvalidSpec("dihedral(n) needs n >= 3 (order 2n on n points)")
    rot = Permutation(tuple(range(1, n)) + (0,))
    ref = Permutation(tuple((n - i) % n for i in range(n)))
    return group_from_generators(n, [rot, ref], name=f"D{n}", cap=cap)


def psl2(q: int, cap=None) -> FiniteGroup:
    """PSL(2, q) on the q+1 points of the projective line, q a prime power >= 4.

    Points are the field elements in encoding order followed by infinity.
    Generated by x -> x+1, x -> s*x (s the primitive element for even q, its
    square for odd q) and the inversion x -> -1/x; the enumerated order is
    checked against q(q^2-1)/gcd(2,q-1).
    """
    if prime_power_base(q) is None or q < 4:
        raise InvalidSpec(f"psl2 needs a prime power q >= 4, got {q}")
    F = GF(q)
    INF = q
    lam = F.primitive_element()
    scale = lam if q % 2 == 0 else F.mul(lam, lam)

    def moebius_t(x):   # x + 1
        return INF if x == INF else F.add(x, 1)

    def moebius_s(x):   # scale * x
        return INF if x == INF else F.mul(scale, x)

    def moebius_w(x):   # -1/x
        if x == INF:
            return 0
        if x == 0:
            return INF
        return F.neg(F.inv(x))

    gens = [Permutation([f(x) for x in range(q + 1)])
            for f in (moebius_t, moebius_s, moebius_w)]
    G = group_from_generators(q + 1, gens, name=f"PSL(2,{q})", cap=cap)
    expected = q * (q * q - 1) // (2 if q % 2 else 1)
    if G.order != expected:  # pragma: no cover - construction invariant
        raise InvalidSpec(f"PSL(2,{q}) came out with order {G.order}, expected {expected}")
    return G


def _projective_points(F: GF, dim: int) -> list[tuple[int, ...]]:
    """Normalised representatives (first nonzero coordinate 1), sorted."""
    points = set()
    def rec(prefix):
        if len(prefix) == dim:
            if any(prefix):
                points.add(_normalize(F, tuple(prefix)))
            return
        for c in range(F.q):
            rec(prefix + [c])
    rec([])
    return sorted(points)


def _normalize(F: GF, v: tuple[int, ...]) -> tuple[int, ...]:
    for c in v:
        if c:
            s = F.inv(c)
            return tuple(F.mul(s, x) for x in v)
    raise ValueError("zero vector")


def _matrix_perm(F: GF, M, points, index) -> Permutation:
    """Permutation a matrix induces on projective points (column action)."""
    dim = len(M)
    images = []
    for v in points:
        w = tuple(_dot_row(F, M[i], v) for i in range(dim))
        images.append(index[_normalize(F, w)])
    return Permutation(images)


def _dot_row(F: GF, row, v) -> int:
    acc = 0
    for a, b in zip(row, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def psl3_3(cap=None) -> FiniteGroup:
    """PSL(3,3) = SL(3,3) acting on the 13 points of the projective plane."""
    F = GF(3)
    points = _projective_points(F, 3)
    index = {pt: i for i, pt in enumerate(points)}
    A = ((0, 0, 1), (1, 0, 0), (0, 1, 0))        # coordinate 3-cycle, det 1
    B = ((1, 1, 0), (0, 1, 0), (0, 0, 1))        # transvection, det 1
    gens = [_matrix_perm(F, M, points, index) for M in (A, B)]
    G = group_from_generators(13, gens, name="PSL(3,3)", cap=cap)
    if G.order != 5616:  # pragma: no cover - construction invariant
        raise InvalidSpec(f"PSL(3,3) came out with order {G.order}, expected 5616")
    return G


def schmidt_group(p: int, q: int, cap=None) -> FiniteGroup:
    """The Schmidt group of shape (elementary abelian p) : (cyclic q).

    T is the d-dimensional space over GF(p) with d the multiplicative order
    of p mod q, acted on faithfully and irreducibly by an order-q field
    element; realised as permutations of the p^d vectors.  The result has
    order p^d * q, a normal Sylow p-subgroup, and Schmidt graph {(p, q)}.
    """
    if not (is_prime(p) and is_prime(q)) or p == q:
        raise InvalidSpec(f"schmidt needs distinct primes, got ({p}, {q})")
    d = multiplicative_order(p, q)
    F = GF(p ** d)
    # element of multiplicative order exactly q
    z = None
    for u in range(2, F.q):
        cand = F.pow(u, (F.q - 1) // q)
        if cand != 1:
            z = cand
            break
    translate = Permutation([F.add(v, 1) for v in range(F.q)])
    act = Permutation([F.mul(z, v) for v in range(F.q)])
    G = group_from_generators(F.q, [translate, act], name=f"Schmidt({p},{q})", cap=cap)
    if G.order != F.q * q:  # pragma: no cover - construction invariant
        raise InvalidSpec(f"Schmidt({p},{q}) came out with order {G.order}")
    return G


# -- group files -----------------------------------------------------------------

def parse_group_file_text(text: str, name: str = "", cap=None) -> FiniteGroup:
    """Line-oriented group file: a ``degree: n`` line, then one permutation
    per line in 1-based cycle notation (identity: ``()``); ``#`` comments."""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            if not line.startswith("degree:"):
                raise InvalidSpec(f"line {lineno}: expected 'degree: n' first")
            degree = int(line.split(":", 1)[1])
            continue
        try:
            gens.append(parse_cycle_string(line, degree))
        except ValueError as e:
            raise InvalidSpec(f"line {lineno}: {e}") from e
    if degree is None:
        raise InvalidSpec("group file has no degree line")
    return group_from_generators(degree, gens, name=name, cap=cap)


def group_from_file(path: str, cap=None) -> FiniteGroup:
    if path is None:
        raise InvalidSpec("file spec needs a path")
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InvalidSpec(f"cannot read group file {path!r}: {e}") from e
    import os
    return parse_group_file_text(text, name=os.path.basename(path), cap=cap)


def write_group_file(G: FiniteGroup, header_lines=()) -> str:
    out = [f"# {line}" for line in header_lines]
    out.append(f"degree: {G.degree}")
    for g in G.generators:
        out.append(g.cycle_string())
    return "\n".join(out) + "\n"


def _bundled_text(filename: str) -> str:
    return resources.files("groupgraphs").joinpath("data").joinpath(filename).read_text()


def sz8(cap=None) -> FiniteGroup:
    """Sz(8) on 65 points, from the bundled generator file.

    The generators are re-verified on every load: the closure must have order
    29120 and no proper nontrivial normal subgroup.
    """
    G = parse_group_file_text(_bundled_text("sz8.grp"), name="Sz(8)", cap=cap)
    if G.order != SZ8_ORDER:  # pragma: no cover - data invariant
        raise InvalidSpec(f"bundled Sz(8) data gave order {G.order}, expected {SZ8_ORDER}")
    if not is_simple(G):  # pragma: no cover - data invariant
        raise InvalidSpec("bundled Sz(8) data is not simple")
    return G
