"""Independent verification engines for the closed-form counts.

Three routes to the same numbers, none sharing code with the closed
forms in :mod:`aglstab.counting`:

* ``stabilizer`` / ``full_census``: test all q*(q-1) affine maps against
  a subset bitmask and classify every k-subset by its exact stabilizer.
* ``count_N_bruteforce``: enumerate only the orbit unions of a subgroup
  (the subsets it fixes setwise) and keep those no outside map fixes.
* ``count_N_via_lattice``: the alternating sum over selections of
  immediate supergroups, each join evaluated on descriptors and its
  fixed-subset count read off the orbit sizes.  When the number of
  supergroups makes the 2**t walk infeasible, selections are grouped by
  their join: the aggregated coefficients solve a triangular system
  over the join closure and give the identical sum.

Subsets are plain integer bitmasks over the canonical element order.
Budgets are explicit and overruns raise; nothing is ever truncated
silently.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from functools import lru_cache

from sympy import divisors

from .agl import (Subgroup, immediate_supergroups, join, join_pair,
                  subgroup_from_pairs)
from .counting import mult_order, s_qk
from .ffield import Field, QuotientSpace, Subspace, span, zero_subspace

DEFAULT_STABILIZER_LIMIT = 4096
DEFAULT_SUBSET_BUDGET = 10_000_000
DEFAULT_DIRECT_WALK_LIMIT = 12
DEFAULT_CLOSURE_LIMIT = 5_000
DEFAULT_ALL_SUBGROUPS_LIMIT = 64


class BudgetExceededError(RuntimeError):
    """An oracle scan would exceed its configured budget."""


def subset_mask(elements) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << x
    return mask


def mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def stabilizing_pairs(field: Field, mask: int) -> list[tuple[int, int]]:
    """All (a, b) with a != 0 whose map fixes the masked subset setwise."""
    q = field.q
    elems = mask_elements(mask)
    table = field.mul_table
    mul = field.mul
    out = []
    for a in range(1, q):
        row = table[a] if table is not None else None
        imgs = [row[x] for x in elems] if row is not None else [mul(a, x) for x in elems]
        if field.p == 2:
            for b in range(q):
                for y in imgs:
                    if not (mask >> (y ^ b)) & 1:
                        break
                else:
                    out.append((a, b))
        else:
            add = field.add
            for b in range(q):
                for y in imgs:
                    if not (mask >> add(y, b)) & 1:
                        break
                else:
                    out.append((a, b))
    return out


def stabilizer(field: Field, mask: int,
               q_limit: int = DEFAULT_STABILIZER_LIMIT) -> Subgroup:
    """Canonical descriptor of the setwise stabilizer of a subset,
    computed by testing every affine map."""
    if field.q > q_limit:
        raise BudgetExceededError(
            f"stabilizer scan needs q <= {q_limit}, got q = {field.q}")
    return subgroup_from_pairs(field, stabilizing_pairs(field, mask))


# ---------------------------------------------------------------------------
# orbit-union enumeration


def _union_branches(S: Subgroup, k: int) -> list[tuple[int, list[int], int]]:
    """(base_mask, choosable_orbit_masks, how_many) branches whose unions
    are exactly the size-k orbit unions of S."""
    part = S.orbits()
    masks = [subset_mask(o) for o in part.orbits]
    h = S.H.size
    branches = []
    if S.d == 1:
        if k % h == 0:
            branches.append((0, masks, k // h))
    else:
        big = S.d * h
        special = next(m for m, o in zip(masks, part.orbits) if len(o) == h)
        bigs = [m for o, m in zip(part.orbits, masks) if len(o) == big]
        for base, rem in ((0, k), (special, k - h)):
            if rem >= 0 and rem % big == 0:
                branches.append((base, bigs, rem // big))
    return branches


def n_orbit_unions(S: Subgroup, k: int) -> int:
    """Number of size-k orbit unions, i.e. |S'|, counted directly."""
    return sum(math.comb(len(opts), t) for _, opts, t in _union_branches(S, k))


def orbit_union_masks(S: Subgroup, k: int):
    """Deterministic iterator over the size-k orbit unions of S."""
    for base, opts, t in _union_branches(S, k):
        for combo in itertools.combinations(opts, t):
            mask = base
            for m in combo:
                mask |= m
            yield mask


def is_exact_stabilizer(S: Subgroup, mask: int) -> bool:
    """True iff no affine map outside S fixes the masked subset.

    Only meaningful when the subset is a union of S-orbits, so that the
    stabilizer is known to contain S.
    """
    field = S.field
    q = field.q
    elems = mask_elements(mask)
    member = S.element_pairs()
    table = field.mul_table
    mul = field.mul
    for a in range(1, q):
        row = table[a] if table is not None else None
        imgs = [row[x] for x in elems] if row is not None else [mul(a, x) for x in elems]
        if field.p == 2:
            for b in range(q):
                for y in imgs:
                    if not (mask >> (y ^ b)) & 1:
                        break
                else:
                    if (a, b) not in member:
                        return False
        else:
            add = field.add
            for b in range(q):
                for y in imgs:
                    if not (mask >> add(y, b)) & 1:
                        break
                else:
                    if (a, b) not in member:
                        return False
    return True


def count_N_bruteforce(S: Subgroup, k: int,
                       budget: int = DEFAULT_SUBSET_BUDGET) -> int:
    """Count the k-subsets with stabilizer exactly S by scanning every
    size-k union of S-orbits."""
    if not 0 <= k <= S.field.q:
        raise ValueError(f"k must lie in [0, {S.field.q}], got {k}")
    candidates = n_orbit_unions(S, k)
    if candidates > budget:
        raise BudgetExceededError(
            f"{candidates} orbit unions exceed the budget of {budget}")
    return sum(is_exact_stabilizer(S, mask) for mask in orbit_union_masks(S, k))


def full_census(field: Field, k: int,
                budget: int = DEFAULT_SUBSET_BUDGET) -> dict[Subgroup, int]:
    """Stabilizer of every k-subset of F_q, grouped by canonical descriptor."""
    if not 0 <= k <= field.q:
        raise ValueError(f"k must lie in [0, {field.q}], got {k}")
    total = math.comb(field.q, k)
    if total > budget:
        raise BudgetExceededError(
            f"{total} subsets exceed the budget of {budget}")
    census: Counter[Subgroup] = Counter()
    for combo in itertools.combinations(range(field.q), k):
        census[stabilizer(field, subset_mask(combo))] += 1
    assert sum(census.values()) == total
    return dict(census)


# ---------------------------------------------------------------------------
# inclusion-exclusion over the supergroup lattice


def _closure_terms(S: Subgroup, supers: list[Subgroup],
                   closure_limit: int) -> Counter:
    members = {S}
    frontier = [S]
    while frontier:
        new = []
        for T in frontier:
            for U in supers:
                J = join_pair(T, U)
                if J not in members:
                    members.add(J)
                    new.append(J)
                    if len(members) > closure_limit:
                        raise BudgetExceededError(
                            f"join closure exceeds {closure_limit} subgroups")
        frontier = new
    ordered = sorted(members,
                     key=lambda T: (T.order, T.d, T.H.basis, T.b))
    coeff: dict[Subgroup, int] = {}
    for idx, T in enumerate(ordered):
        c = 1 if T == S else 0
        for U in ordered[:idx]:
            if U.order < T.order and T.contains(U):
                c -= coeff[U]
        coeff[T] = c
    agg: Counter = Counter()
    for T, c in coeff.items():
        if c:
            agg[(T.d, T.H.size)] += c
    return agg


@lru_cache(maxsize=None)
def lattice_terms(S: Subgroup,
                  direct_limit: int = DEFAULT_DIRECT_WALK_LIMIT,
                  closure_limit: int = DEFAULT_CLOSURE_LIMIT,
                  ) -> tuple[tuple[int, int, int], ...]:
    """Signed terms (coefficient, d, |H|) of the inclusion-exclusion for
    N(S, k); k enters only through the fixed-subset counts, so the terms
    are reusable across k.

    With t immediate supergroups the alternating sum has 2**t selections;
    up to ``direct_limit`` of them it is walked literally (one join per
    selection), beyond that selections are grouped by their join over the
    join closure.
    """
    if S.b != 0:
        raise ValueError("lattice evaluation requires b = 0; conjugate first")
    supers = immediate_supergroups(S)
    agg: Counter = Counter()
    if len(supers) <= direct_limit:
        for r in range(len(supers) + 1):
            for sel in itertools.combinations(supers, r):
                T = join(S, sel)
                agg[(T.d, T.H.size)] += (-1) ** r
    else:
        agg = _closure_terms(S, supers, closure_limit)
    return tuple((c, d, h) for (d, h), c in sorted(agg.items()) if c)


def count_N_via_lattice(S: Subgroup, k: int,
                        direct_limit: int = DEFAULT_DIRECT_WALK_LIMIT,
                        closure_limit: int = DEFAULT_CLOSURE_LIMIT) -> int:
    """N(S, k) by inclusion-exclusion over the immediate supergroups."""
    if not 0 <= k <= S.field.q:
        raise ValueError(f"k must lie in [0, {S.field.q}], got {k}")
    q = S.field.q
    return sum(c * s_qk(q, k, d, h)
               for c, d, h in lattice_terms(S, direct_limit, closure_limit))


# ---------------------------------------------------------------------------
# exhaustive subgroup enumeration


def all_subspaces(field: Field, K) -> list[Subspace]:
    """Every K-subspace of the field, ordered by (dimension, basis)."""
    zero = zero_subspace(field)
    out = {zero.basis: zero}
    frontier = [zero]
    while frontier:
        new = []
        for W in frontier:
            for x in range(1, field.q):
                if W.contains(x):
                    continue
                W2 = span(W.basis + (x,), K)
                if W2.basis not in out:
                    out[W2.basis] = W2
                    new.append(W2)
        frontier = new
    return sorted(out.values(), key=lambda W: (W.dim, W.basis))


def all_subgroups(field: Field,
                  q_limit: int = DEFAULT_ALL_SUBGROUPS_LIMIT) -> list[Subgroup]:
    """Every subgroup of the affine group on F_q, each exactly once.

    Walks d over the divisors of q - 1, H over the F_{p**o_d(p)}-subspaces
    and b over the coset representatives of H (b = 0 when d = 1); the
    canonical-descriptor uniqueness makes the enumeration duplicate-free.
    """
    if field.q > q_limit:
        raise BudgetExceededError(
            f"subgroup enumeration needs q <= {q_limit}, got q = {field.q}")
    out = []
    for d in divisors(field.q - 1):
        K = field.subfield(mult_order(field.p, d))
        for H in all_subspaces(field, K):
            if d == 1:
                out.append(Subgroup(field, 1, 0, H))
            else:
                quot = QuotientSpace(field, H)
                out.extend(Subgroup(field, d, b, H) for b in quot.transversal)
    return out
