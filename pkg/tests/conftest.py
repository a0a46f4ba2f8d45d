"""Shared corpora and naive reference implementations.

The predicates here are deliberate brute force straight off the definitions
(loops over all subsets) so the bit-twiddling library code is checked
against something independent of it.
"""

from __future__ import annotations

import itertools

from ordua.corpus import random_poset
from ordua.structures import Structure, bits, structure_from_closed_masks


def is_upper_set(s: Structure, m: int) -> bool:
    return all(m >> y & 1 for x in bits(m) for y in range(s.n) if s.leq(x, y))


def is_directed_set(s: Structure, m: int) -> bool:
    ms = list(bits(m))
    return all(
        any(m >> z & 1 and s.leq(z, x) and s.leq(z, y) for z in range(s.n))
        for x in ms for y in ms)


def brute_filters(s: Structure) -> list[int]:
    """Nonempty, upward-closed, downward-directed subsets, by definition."""
    return [m for m in range(1, 1 << s.n)
            if is_upper_set(s, m) and is_directed_set(s, m)]


def brute_join(s: Structure, a: int, b: int) -> int | None:
    uppers = [x for x in range(s.n) if s.leq(a, x) and s.leq(b, x)]
    least = [x for x in uppers if all(s.leq(x, y) for y in uppers)]
    return least[0] if least else None


def brute_prime_filters(s: Structure) -> list[int]:
    full = (1 << s.n) - 1
    out = []
    for m in brute_filters(s):
        if m == full:
            continue
        if all(not (m >> s.join[a][b] & 1) or (m >> a & 1) or (m >> b & 1)
               for a in range(s.n) for b in range(s.n)):
            out.append(m)
    return out


def brute_disjunctive_filters(s: Structure) -> list[int]:
    """Proper filters detecting every join of a disjoint antichain family."""
    full = (1 << s.n) - 1
    families = []
    for r in range(2, s.n + 1):
        for fam in itertools.combinations(range(s.n), r):
            if any(s.leq(a, b) or s.leq(b, a)
                   or s.meet[a][b] != s.bottom
                   for a, b in itertools.combinations(fam, 2)):
                continue
            join = fam[0]
            for a in fam[1:]:
                join = brute_join(s, join, a)
                if join is None:
                    break
            if join is not None:
                families.append((fam, join))
    out = []
    for m in brute_filters(s):
        if m == full:
            continue
        if all(not (m >> join & 1) or any(m >> a & 1 for a in fam)
               for fam, join in families):
            out.append(m)
    return out


def lower_set_lattice(p) -> Structure:
    return structure_from_closed_masks(p.labels, p.lower_set_masks())


def random_lattice(rng, max_points: int) -> Structure:
    """Lower-set lattice of a random poset: always distributive (Birkhoff)."""
    return lower_set_lattice(random_poset(rng, rng.randint(1, max_points)))
