"""Number-theoretic helpers and closed-form stabilizer-class counts.

The group of affine maps x -> a*x + b (a != 0) acts on F_q, q = p**alpha.
Every subgroup is generated by one map together with translations by an
F_p-subspace H, and its conjugacy data reduce to an arithmetic tuple:

    d     order of the multiplicative part (a divisor of q - 1),
    beta  with |H| = p**beta,
    i, j  encoding beta = o_d(p)*i*j and |H'| = p**(o_d(p)*i), where H'
          is the largest subfield of F_q mapping H into itself.

``count_N`` evaluates, purely in integer arithmetic, the number of
k-element subsets of F_q whose setwise stabilizer is exactly a subgroup
of the class (d, i, j).  ``enumerate_params`` walks the admissible
tuples for one field and ``build_table`` attaches the counts.  No
floating point is used anywhere in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from sympy import divisors, isprime, n_order, primefactors

#: column order of the emitted tables
CSV_COLUMNS = ("k", "d", "odp", "i", "j", "beta", "N")


def prime_set(u: int) -> tuple[int, ...]:
    """Distinct prime divisors of u in ascending order; empty for u = 1."""
    if u <= 0:
        raise ValueError(f"expected a positive integer, got {u}")
    return tuple(primefactors(u))


def mult_order(v: int, u: int) -> int:
    """Least m >= 1 with v**m == 1 (mod u).  The order modulo 1 is 1."""
    if u <= 0:
        raise ValueError(f"modulus must be positive, got {u}")
    if u == 1:
        return 1
    if math.gcd(u, v) != 1:
        raise ValueError(f"{v} is not a unit modulo {u}")
    return int(n_order(v, u))


def q_binomial(n: int, m: int, base: int) -> int:
    """Number of m-dimensional subspaces of an n-dimensional space over a
    field with ``base`` elements, as an exact integer."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if m < 0 or m > n:
        return 0
    num = den = 1
    for t in range(m):
        num *= base ** (n - t) - 1
        den *= base ** (t + 1) - 1
    quot, rem = divmod(num, den)
    assert rem == 0
    return quot


def moebius_exponent(dim_quotient: int, base: int) -> int:
    """Moebius value (-1)**l * base**C(l, 2) for an interval of subspaces
    whose quotient has dimension l over the base field."""
    if dim_quotient < 0:
        raise ValueError(f"dimension must be >= 0, got {dim_quotient}")
    return (-1) ** dim_quotient * base ** math.comb(dim_quotient, 2)


def s_qk(q: int, k: int, u: int, v: int) -> int:
    """Number of k-subsets of F_q that are unions of orbits of a subgroup
    with multiplicative part of order u and translation part of size v.

    Such a subgroup has one orbit of size v and (q - v)/(u*v) orbits of
    size u*v, so the count is C((q-v)/(u*v), k/(u*v)) plus
    C((q-v)/(u*v), (k-v)/(u*v)), a selector contributing 0 whenever it is
    not a nonnegative integer.  Total by convention: inconsistent (q, u, v)
    combinations yield 0 rather than an error.
    """
    if u < 1 or v < 1:
        raise ValueError(f"orbit parameters must be positive, got u={u}, v={v}")
    top, rem = divmod(q - v, u * v)
    if rem or top < 0:
        return 0
    total = 0
    for num in (k, k - v):
        sel, srem = divmod(num, u * v)
        if srem == 0 and sel >= 0:
            total += math.comb(top, sel)
    return total


@dataclass(frozen=True)
class ClassParams:
    """Arithmetic description of one subgroup class at one subset size.

    Structural constraints are enforced at construction; the congruence
    k == 0 or p**beta (mod d*p**beta) is *not* (counts for violating k
    are well defined and equal to 0), query it via congruence_violation.
    """

    p: int
    alpha: int
    k: int
    d: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.p < 2 or not isprime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        q = self.p ** self.alpha
        if not 0 <= self.k <= q:
            raise ValueError(f"k must lie in [0, {q}], got {self.k}")
        if self.d < 1 or (q - 1) % self.d:
            raise ValueError(f"d must divide q - 1 = {q - 1}, got {self.d}")
        odp = mult_order(self.p, self.d)
        top = self.alpha // odp
        if self.i < 1 or self.alpha % (odp * self.i):
            raise ValueError(
                f"i must divide alpha/o_d(p) = {top}, got {self.i}")
        if self.i == top:
            if self.j not in (0, 1):
                raise ValueError(
                    f"j must be 0 or 1 when i = alpha/o_d(p), got {self.j}")
        elif not 0 < self.j < top // self.i:
            raise ValueError(
                f"j must satisfy 0 < j < {top // self.i} "
                f"when i < alpha/o_d(p), got {self.j}")

    @cached_property
    def q(self) -> int:
        return self.p ** self.alpha

    @cached_property
    def odp(self) -> int:
        return mult_order(self.p, self.d)

    @cached_property
    def beta(self) -> int:
        return self.odp * self.i * self.j

    @cached_property
    def h_size(self) -> int:
        """|H| = p**beta."""
        return self.p ** self.beta

    @cached_property
    def hprime_size(self) -> int:
        """|H'| = p**(o_d(p)*i)."""
        return self.p ** (self.odp * self.i)

    @property
    def group_order(self) -> int:
        return self.d * self.h_size

    def congruence_violation(self) -> str | None:
        """Message naming the violated zero-pattern congruence, or None."""
        pb = self.h_size
        c = self.k % (self.d * pb)
        if c == 0 or c == pb:
            return None
        return (f"k = {self.k} is {c} mod d*p^beta = {self.d * pb}; "
                f"it must be 0 or p^beta = {pb}")

    @property
    def congruence_ok(self) -> bool:
        return self.congruence_violation() is None


@dataclass(frozen=True)
class CountRecord:
    """One table row (k, d, o_d(p), i, j, beta, N)."""

    k: int
    d: int
    odp: int
    i: int
    j: int
    beta: int
    count: int

    def as_tuple(self) -> tuple[int, int, int, int, int, int, int]:
        return (self.k, self.d, self.odp, self.i, self.j, self.beta, self.count)


def _subsets(items: tuple[int, ...]):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def count_N(params: ClassParams) -> int:
    """Exact number of k-subsets of F_q whose affine stabilizer is exactly
    a subgroup of the class described by ``params``.

    The value is an inclusion-exclusion over chains of supergroups,
    collapsed to a double sum: subsets P of the primes dividing
    (|H'| - 1)/d select multiplicative enlargements, and an inner sum
    over subspace dimensions l (Moebius-weighted, counted by q-binomials)
    selects translation enlargements.  For d = 1 an additional corrective
    sum with leading factor (1 - p**(alpha - beta)) accounts for the
    coset spread of the multiplicative enlargements.
    """
    p, alpha, k, d = params.p, params.alpha, params.k, params.d
    q, beta = params.q, params.beta
    total = 0
    if d == 1:
        inner = sum(
            moebius_exponent(l, p)
            * q_binomial(alpha - beta, l, p)
            * s_qk(q, k, 1, p ** (beta + l))
            for l in range(alpha - beta + 1)
        )
        total += (1 - p ** (alpha - beta)) * inner

    assert (params.hprime_size - 1) % d == 0
    rest = 0
    for P in _subsets(prime_set((params.hprime_size - 1) // d)):
        u = d * math.prod(P)
        m = mult_order(p, u)
        hi, rem = divmod(alpha - beta, m)
        assert rem == 0
        sign = (-1) ** len(P)
        rest += sign * sum(
            moebius_exponent(l, p ** m)
            * q_binomial(hi, l, p ** m)
            * s_qk(q, k, u, p ** (beta + l * m))
            for l in range(hi + 1)
        )
    total += rest * (p ** (alpha - beta) if d == 1 else 1)
    return total


def class_shapes(p: int, alpha: int) -> list[tuple[int, int, int]]:
    """All admissible (d, i, j) triples for F_{p**alpha}: d ascending over
    the divisors of q - 1, then i ascending, then j ascending."""
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    q = p ** alpha
    shapes = []
    for d in divisors(q - 1):
        odp = mult_order(p, d)
        top = alpha // odp
        for i in divisors(top):
            js = (0, 1) if i == top else range(1, top // i)
            shapes.extend((d, i, j) for j in js)
    return shapes


def enumerate_params(p: int, alpha: int, k_max: int | None = None) -> list[ClassParams]:
    """All table tuples with 0 <= k <= k_max (default q // 2) satisfying
    the zero-pattern congruence, in emission order: k outermost, then d
    ascending, then i, then j."""
    shapes = class_shapes(p, alpha)
    q = p ** alpha
    if k_max is None:
        k_max = q // 2
    out = []
    for k in range(k_max + 1):
        for d, i, j in shapes:
            cp = ClassParams(p, alpha, k, d, i, j)
            if cp.congruence_ok:
                out.append(cp)
    return out


def build_table(p: int, alpha: int, k_max: int | None = None) -> list[CountRecord]:
    """One CountRecord per enumerate_params tuple."""
    return [
        CountRecord(cp.k, cp.d, cp.odp, cp.i, cp.j, cp.beta, count_N(cp))
        for cp in enumerate_params(p, alpha, k_max)
    ]
