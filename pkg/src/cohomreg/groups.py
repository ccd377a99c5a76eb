"""Finite p-groups as closed multiplication tables.

Covers loading and validating group files, the greatest central elementary
abelian subgroup, centralizers, the inductive enumeration of elementary
abelian subgroups above it, p-rank, the group-theoretic defect profile,
and the Jordan-block order screens for high-defect groups.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    MalformedFile,
    NotAGroup,
    NotPGroup,
    OrderMismatch,
    UnsupportedTarget,
)
from .linalg import MatrixGFp, mat_pow

_ASSOC_SAMPLE = 4096


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group on indices 0..order-1 with index 0 the identity."""

    order: int
    cayley: tuple[tuple[int, ...], ...]
    name: str = "group"

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def power(self, x: int, k: int) -> int:
        acc = 0
        for _ in range(k):
            acc = self.cayley[acc][x]
        return acc

    def element_order(self, x: int) -> int:
        n = 1
        acc = x
        while acc != 0:
            acc = self.cayley[acc][x]
            n += 1
        return n

    def inverse(self, x: int) -> int:
        row = self.cayley[x]
        for y in range(self.order):
            if row[y] == 0:
                return y
        raise NotAGroup(f"element {x} has no inverse")

    def commutes(self, a: int, b: int) -> bool:
        return self.cayley[a][b] == self.cayley[b][a]

    def closure(self, seed) -> tuple[int, ...]:
        """Subgroup generated by seed indices, as a sorted tuple."""
        members = {0}
        members.update(seed)
        frontier = list(members)
        while frontier:
            nxt = []
            for a in frontier:
                row = self.cayley[a]
                for b in list(members):
                    for c in (row[b], self.cayley[b][a]):
                        if c not in members:
                            members.add(c)
                            nxt.append(c)
            frontier = nxt
        return tuple(sorted(members))


@dataclass(frozen=True)
class Subgroup:
    """Subset of parent element indices closed under the Cayley table."""

    elements: tuple[int, ...]
    rank: int | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in set(self.elements)


@dataclass(frozen=True)
class PGroupProfile:
    """Rank data of a p-group: defect = p_rank - center_rank."""

    prime: int
    exponent: int
    p_rank: int
    center_rank: int
    gtd: int
    name: str = "group"


def validate_group(order: int, cayley, name: str = "group") -> FiniteGroup:
    """Check the group axioms and wrap the table.

    Associativity is verified exhaustively for order <= 64 and on a fixed
    deterministic sample of triples above that.
    """
    n = order
    if n <= 0:
        raise NotAGroup("order must be positive")
    if len(cayley) != n or any(len(row) != n for row in cayley):
        raise NotAGroup(f"table is not {n}x{n}")
    table = tuple(tuple(row) for row in cayley)
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            raise NotAGroup("index 0 does not act as identity")
    full = frozenset(range(n))
    for i in range(n):
        if frozenset(table[i]) != full:
            raise NotAGroup(f"row {i} is not a permutation")
        if frozenset(table[j][i] for j in range(n)) != full:
            raise NotAGroup(f"column {i} is not a permutation")
    for i in range(n):
        if 0 not in table[i]:
            raise NotAGroup(f"element {i} has no right inverse")
    if n <= 64:
        triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
    else:
        state = 0x9E3779B97F4A7C15
        sampled = []
        for _ in range(_ASSOC_SAMPLE):
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            sampled.append(((state >> 5) % n, (state >> 23) % n, (state >> 41) % n))
        triples = iter(sampled)
    for a, b, c in triples:
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAGroup(f"associativity fails at ({a},{b},{c})")
    return FiniteGroup(order=n, cayley=table, name=name)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_permutation(text: str, line_no: int) -> dict[int, int]:
    """Parse disjoint cycles of 1-based points into a mapping."""
    stripped = re.sub(r"\s", "", text)
    if stripped and _CYCLE_RE.sub("", stripped):
        raise MalformedFile(f"line {line_no}: bad cycle syntax {text!r}")
    mapping: dict[int, int] = {}
    for body in _CYCLE_RE.findall(text):
        points = [s for s in body.split() if s]
        if not points:
            continue
        try:
            pts = [int(s) for s in points]
        except ValueError:
            raise MalformedFile(f"line {line_no}: non-integer point in {text!r}")
        if any(x < 1 for x in pts):
            raise MalformedFile(f"line {line_no}: points are 1-based")
        if len(set(pts)) != len(pts) or any(x in mapping for x in pts):
            raise MalformedFile(f"line {line_no}: repeated point in {text!r}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            mapping[a] = b
    return mapping


def _close_permutations(perms: list[dict[int, int]]) -> list[tuple[int, ...]]:
    degree = max((max(m) for m in perms if m), default=1)
    gens = []
    for m in perms:
        gens.append(tuple(m.get(x, x) - 1 for x in range(1, degree + 1)))
    identity = tuple(range(degree))
    elements = [identity]
    index = {identity: 0}
    queue = [identity]
    while queue:
        cur = queue.pop(0)
        for g in gens:
            nxt = tuple(cur[g[x]] for x in range(degree))
            if nxt not in index:
                index[nxt] = len(elements)
                elements.append(nxt)
                queue.append(nxt)
    return elements


def parse_group(source: str, name: str = "group") -> FiniteGroup:
    """Parse the line-oriented group file format.

    Either `order N` followed by `perm (..)` generator lines, or `order N`,
    a `table` line and N rows of N whitespace-separated 1-based indices.
    '#' starts a comment.
    """
    declared: int | None = None
    label = name
    perm_lines: list[tuple[str, int]] = []
    table_rows: list[list[int]] = []
    in_table = False
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_table:
            try:
                table_rows.append([int(tok) for tok in line.split()])
            except ValueError:
                raise MalformedFile(f"line {line_no}: bad table row")
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            label = rest or label
        elif key == "order":
            try:
                declared = int(rest)
            except ValueError:
                raise MalformedFile(f"line {line_no}: bad order {rest!r}")
        elif key == "perm":
            perm_lines.append((rest, line_no))
        elif key == "table":
            in_table = True
        else:
            raise MalformedFile(f"line {line_no}: unknown directive {key!r}")
    if declared is None or declared < 1:
        raise MalformedFile("missing or invalid `order` line")
    if perm_lines and table_rows:
        raise MalformedFile("both perm generators and a table present")

    if table_rows:
        if len(table_rows) != declared:
            raise MalformedFile(f"table has {len(table_rows)} rows, order {declared}")
        cayley = []
        for row in table_rows:
            if len(row) != declared:
                raise MalformedFile("ragged table row")
            if any(not 1 <= x <= declared for x in row):
                raise MalformedFile("table entry out of range (entries are 1-based)")
            cayley.append([x - 1 for x in row])
        return validate_group(declared, cayley, name=label)

    if not perm_lines:
        raise MalformedFile("no generators and no table")
    perms = [_parse_permutation(text, ln) for text, ln in perm_lines]
    elements = _close_permutations(perms)
    if len(elements) != declared:
        raise OrderMismatch(
            f"declared order {declared}, generated order {len(elements)}")
    index = {perm: i for i, perm in enumerate(elements)}
    degree = len(elements[0])
    cayley = []
    for a in elements:
        row = []
        for b in elements:
            row.append(index[tuple(a[b[x]] for x in range(degree))])
        cayley.append(row)
    return validate_group(declared, cayley, name=label)


def load_group(path) -> FiniteGroup:
    from pathlib import Path

    p = Path(path)
    return parse_group(p.read_text(encoding="utf-8"), name=p.stem)


def p_exponent(g: FiniteGroup, p: int) -> int:
    """n with |G| = p^n, or raise NotPGroup."""
    n = 0
    order = g.order
    while order % p == 0:
        order //= p
        n += 1
    if order != 1:
        raise NotPGroup(f"|{g.name}| = {g.order} is not a power of {p}")
    return n


def order_p_elements(g: FiniteGroup, p: int) -> list[int]:
    """Indices of the elements of order exactly p."""
    if g.order % p != 0 and g.order > 1:
        raise NotPGroup(f"{p} does not divide |{g.name}| = {g.order}")
    return [x for x in range(1, g.order) if g.power(x, p) == 0]


def omega1_center(g: FiniteGroup, p: int) -> Subgroup:
    """Greatest central elementary abelian subgroup.

    Central elements of order dividing p form a subgroup outright, so no
    closure pass is needed.
    """
    p_exponent(g, p)
    members = [x for x in range(g.order)
               if g.power(x, p) == 0
               and all(g.commutes(x, y) for y in range(g.order))]
    return Subgroup(elements=tuple(sorted(members)), rank=_ea_rank(len(members), p))


def _ea_rank(size: int, p: int) -> int:
    rank = 0
    while size > 1:
        if size % p:
            raise NotAGroup(f"subgroup size {size} is not a power of {p}")
        size //= p
        rank += 1
    return rank


def centralizer(g: FiniteGroup, s: Subgroup) -> Subgroup:
    members = [x for x in range(g.order)
               if all(g.commutes(x, y) for y in s.elements)]
    return Subgroup(elements=tuple(sorted(members)))


def enumerate_elem_abelians(g: FiniteGroup, p: int) -> list[Subgroup]:
    """All elementary abelian subgroups containing omega1_center.

    Inductive construction: starting from C, extend a rank-d subgroup V by
    any order-p element of C_G(V) outside V, deduplicating by element set.
    No maximal-rank subgroup is lost by the containment restriction since
    any elementary abelian E extends to the larger <C, E>.
    """
    core = omega1_center(g, p)
    seen = {core.elements: core.rank}
    queue = [core.elements]
    while queue:
        elements = queue.pop(0)
        rank = seen[elements]
        inside = set(elements)
        cent = centralizer(g, Subgroup(elements=elements))
        for x in cent.elements:
            if x in inside or x == 0 or g.power(x, p) != 0:
                continue
            extended = set(elements)
            acc = x
            while acc != 0:
                extended.update(g.mul(v, acc) for v in elements)
                acc = g.mul(acc, x)
            key = tuple(sorted(extended))
            if key not in seen:
                seen[key] = rank + 1
                queue.append(key)
    found = [Subgroup(elements=e, rank=r) for e, r in seen.items()]
    found.sort(key=lambda s: (s.rank, s.elements))
    return found


def p_rank(g: FiniteGroup, p: int) -> int:
    return max(s.rank for s in enumerate_elem_abelians(g, p))


def defect_profile(g: FiniteGroup, p: int) -> PGroupProfile:
    """Rank profile of a p-group; callers with general G pass its Sylow p-subgroup."""
    n = p_exponent(g, p)
    center_rank = omega1_center(g, p).rank
    prank = p_rank(g, p)
    return PGroupProfile(
        prime=p,
        exponent=n,
        p_rank=prank,
        center_rank=center_rank,
        gtd=prank - center_rank,
        name=g.name,
    )


def jordan_block_order_divides_p(s: int, p: int) -> bool:
    """Whether the s x s unipotent Jordan block J over F_p satisfies J^p = I."""
    if s < 1:
        raise ValueError("block size must be positive")
    flat = bytearray(s * s)
    for i in range(s):
        flat[i * s + i] = 1
        if i + 1 < s:
            flat[i * s + i + 1] = 1
    block = MatrixGFp(p, s, s, flat)
    return mat_pow(block, p) == MatrixGFp.identity(p, s)


def defect_feasible(p: int, order_exponent: int, target_gtd: int) -> bool:
    """Order screen: can a group of order p^n have group-theoretic defect >= target?

    Defect >= 3 forces p^5 | |G| (p^6 for p in {2, 3}); defect >= 4 forces
    p^6 | |G| (p^7 for p in {2, 3}) and additionally 2^8 | |G| when p = 2.
    """
    if target_gtd == 3:
        need = 6 if p in (2, 3) else 5
    elif target_gtd == 4:
        if p == 2:
            need = 8
        elif p == 3:
            need = 7
        else:
            need = 6
    else:
        raise UnsupportedTarget(f"no screen for target defect {target_gtd}")
    return order_exponent >= need
