"""Independent oracles the tests check the package against.

Everything here deliberately avoids the package's own algorithms: subgroup
enumeration is full-lattice closure over bitmasks, element orders come
from plain iteration, permutation closure is recomputed from scratch, and
polynomial invariance is brute-force substitution.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

GROUP_RING_PAIRS = [
    ("z2", "z2"),
    ("z4", "z4"),
    ("klein4", "klein4"),
    ("z2cubed", "z2cubed"),
    ("d8", "d8"),
    ("q8", "q8"),
]

ALL_GROUP_FIXTURES = sorted(p.stem for p in FIXTURES.glob("*.grp"))


@lru_cache(maxsize=None)
def load_group_fixture(name: str):
    from cohomreg.groups import load_group

    return load_group(FIXTURES / f"{name}.grp")


@lru_cache(maxsize=None)
def load_ring_fixture(name: str):
    from cohomreg.rings import load_presentation

    return load_presentation(FIXTURES / f"{name}.ring")


def element_order_oracle(table, x: int) -> int:
    acc = x
    n = 1
    while acc != 0:
        acc = table[acc][x]
        n += 1
    return n


def _closure_mask(table, mask: int, members: list[int], seed: int):
    """Subgroup generated by members + seed, as (bitmask, element list)."""
    mask |= 1 << seed
    members = list(members) + [seed]
    frontier = [seed]
    while frontier:
        fresh = []
        for a in frontier:
            row_a = table[a]
            for b in members:
                for c in (row_a[b], table[b][a]):
                    if not mask >> c & 1:
                        mask |= 1 << c
                        fresh.append(c)
        members.extend(fresh)
        frontier = fresh
    return mask, members


def all_subgroups_bruteforce(group) -> set[frozenset[int]]:
    """Every subgroup, by closing every subgroup under every outside element."""
    table = group.cayley
    n = group.order
    start = (1, (0,))
    seen = {1: (0,)}
    queue = [start]
    while queue:
        mask, members = queue.pop()
        for x in range(1, n):
            if mask >> x & 1:
                continue
            new_mask, new_members = _closure_mask(table, mask, list(members), x)
            if new_mask not in seen:
                new_members = tuple(sorted(new_members))
                seen[new_mask] = new_members
                queue.append((new_mask, new_members))
    return {frozenset(members) for members in seen.values()}


def elem_abelian_subgroups_bruteforce(group, p: int) -> set[frozenset[int]]:
    """Elementary abelian subgroups, filtered out of the full lattice."""
    table = group.cayley
    n = group.order
    small = {x for x in range(n) if element_order_oracle(table, x) in (1, p)}
    out = set()
    for sub in all_subgroups_bruteforce(group):
        if not sub <= small:
            continue
        if all(table[a][b] == table[b][a] for a in sub for b in sub):
            out.add(sub)
    return out


def p_rank_bruteforce(group, p: int) -> int:
    best = 1
    for sub in elem_abelian_subgroups_bruteforce(group, p):
        best = max(best, len(sub))
    rank = 0
    while best > 1:
        best //= p
        rank += 1
    return rank


def compose_perms(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a[b[i]] for i in range(len(a)))


def perm_closure_oracle(generators: list[tuple[int, ...]]) -> set[tuple[int, ...]]:
    degree = len(generators[0])
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for cur in frontier:
            for g in generators:
                nxt = compose_perms(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    fresh.append(nxt)
        frontier = fresh
    return seen


def binomial_jordan_criterion(s: int, p: int) -> bool:
    """J^p = I iff all binomials C(p, k), 0 < k < s, vanish mod p."""
    from math import comb

    return all(comb(p, k) % p == 0 for k in range(1, s))


def substitute_gl2(p: int, coeffs: dict, matrix) -> dict:
    """Apply t1 -> a*t1 + c*t2, t2 -> b*t1 + d*t2 to a 2-variable polynomial."""
    (a, b), (c, d) = matrix
    out: dict = {}
    for (e1, e2), coeff in coeffs.items():
        # expand (a t1 + c t2)^e1 (b t1 + d t2)^e2
        from math import comb

        for i in range(e1 + 1):
            for j in range(e2 + 1):
                term = (coeff * comb(e1, i) * comb(e2, j)
                        * pow(a, i, p) * pow(c, e1 - i, p)
                        * pow(b, j, p) * pow(d, e2 - j, p)) % p
                if term:
                    key = (i + j, (e1 - i) + (e2 - j))
                    out[key] = (out.get(key, 0) + term) % p
    return {k: v for k, v in out.items() if v}


def gl2_elements(p: int):
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p:
                        yield ((a, b), (c, d))


def invariant_degrees_bruteforce(p: int, max_degree: int) -> list[int]:
    """Degrees d <= max_degree admitting a nonzero GL2(F_p)-invariant.

    Solves the joint fixed-point system over the degree-d monomial basis of
    F_p[t1, t2] by elimination over F_p.
    """
    group = list(gl2_elements(p))
    degrees = []
    for d in range(1, max_degree + 1):
        basis = [(i, d - i) for i in range(d + 1)]
        index = {m: k for k, m in enumerate(basis)}
        rows = []
        for matrix in group:
            for k, mono in enumerate(basis):
                image = substitute_gl2(p, {mono: 1}, matrix)
                row = [0] * len(basis)
                for m, c in image.items():
                    row[index[m]] = c
                row[k] = (row[k] - 1) % p
                if any(row):
                    rows.append(row)
        dim = _nullity_mod_p(rows, len(basis), p)
        if dim > 0:
            degrees.append(d)
    return degrees


def _nullity_mod_p(rows, width, p) -> int:
    work = [list(r) for r in rows]
    pivots = 0
    col = 0
    while col < width and pivots < len(work):
        pivot_row = next((r for r in range(pivots, len(work)) if work[r][col]), None)
        if pivot_row is None:
            col += 1
            continue
        work[pivots], work[pivot_row] = work[pivot_row], work[pivots]
        inv = pow(work[pivots][col], p - 2, p)
        work[pivots] = [(v * inv) % p for v in work[pivots]]
        for r in range(len(work)):
            if r != pivots and work[r][col]:
                f = work[r][col]
                work[r] = [(a - f * b) % p for a, b in zip(work[r], work[pivots])]
        pivots += 1
        col += 1
    return width - pivots


def is_gl2_invariant(p: int, coeffs: dict) -> bool:
    return all(substitute_gl2(p, coeffs, m) == coeffs for m in gl2_elements(p))
