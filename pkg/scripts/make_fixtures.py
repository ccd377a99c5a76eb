#!/usr/bin/env python3
"""Regenerate the bundled group fixtures in fixtures/*.grp.

Every p-group of order <= 16 plus the extraspecial group of order 32,
written either as permutation generators (where a small faithful degree
exists and reads naturally) or as an explicit multiplication table built
from a normal form.  Output is deterministic; re-running must reproduce
the committed files byte for byte.
"""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(ROOT / "src"))

from cohomreg.groups import validate_group  # noqa: E402


def table_from_normal_form(elements, mul):
    """Cayley table over sorted normal forms; identity must sort first."""
    elements = sorted(elements)
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return elements, table


def cyclic(n):
    return table_from_normal_form(range(n), lambda a, b: (a + b) % n)


def direct_product(t1, t2):
    n2 = len(t2)
    elements = [(a, b) for a in range(len(t1)) for b in range(len(t2))]
    return table_from_normal_form(
        elements, lambda x, y: (t1[x[0]][y[0]], t2[x[1]][y[1]]))


def metacyclic_16(twist, b_square=0):
    """<a, b | a^8 = 1, b^2 = a^b_square, b a b^-1 = a^twist> on pairs (i, j)."""
    def mul(x, y):
        i, j = x
        k, l = y
        i2 = (i + k * pow(twist, j, 8)) % 8
        j2 = j + l
        if j2 >= 2:
            j2 -= 2
            i2 = (i2 + b_square) % 8
        return (i2, j2)
    return table_from_normal_form([(i, j) for i in range(8) for j in range(2)], mul)


def quaternion_8():
    # normal form i^a j^b (-1)^c with ji = ij(-1), i^2 = j^2 = -1
    def mul(x, y):
        a, b, c = x
        d, e, f = y
        sign = c + f + b * d
        a2, b2 = a + d, b + e
        sign += (a2 // 2) + (b2 // 2)
        return (a2 % 2, b2 % 2, sign % 2)
    return table_from_normal_form(
        [(a, b, c) for a in range(2) for b in range(2) for c in range(2)], mul)


def semidirect_c4_c4():
    # <a, b | a^4 = b^4 = 1, b a b^-1 = a^-1>
    def mul(x, y):
        i, j = x
        k, l = y
        return ((i + k * pow(3, j, 4)) % 4, (j + l) % 4)
    return table_from_normal_form([(i, j) for i in range(4) for j in range(4)], mul)


def semidirect_c22_c4():
    # C2 x C2 extended by C4 whose generator swaps the two factors
    def mul(x, y):
        i, j, k = x
        a, b, c = y
        if k % 2:
            a, b = b, a
        return ((i + a) % 2, (j + b) % 2, (k + c) % 4)
    return table_from_normal_form(
        [(i, j, k) for i in range(2) for j in range(2) for k in range(4)], mul)


def pauli_16():
    # central product C4 . D8: elements w^k X^a Z^b with ZX = XZ w^2, w central
    def mul(x, y):
        k, a, b = x
        l, c, d = y
        return ((k + l + 2 * b * c) % 4, (a + c) % 2, (b + d) % 2)
    return table_from_normal_form(
        [(k, a, b) for k in range(4) for a in range(2) for b in range(2)], mul)


def extraspecial_32_plus():
    # x1,y1,x2,y2 of order 2 with [x_i, y_i] = z central, z^2 = 1
    def mul(x, y):
        e1, f1, e2, f2, g = x
        a1, b1, a2, b2, h = y
        sign = (g + h + f1 * a1 + f2 * a2) % 2
        return ((e1 + a1) % 2, (f1 + b1) % 2, (e2 + a2) % 2, (f2 + b2) % 2, sign)
    cube = [(a, b, c, d, e)
            for a in range(2) for b in range(2) for c in range(2)
            for d in range(2) for e in range(2)]
    return table_from_normal_form(cube, mul)


PERM_FIXTURES = {
    # name -> (order, [perm lines], description)
    "z2": (2, ["(1 2)"], "cyclic group of order 2"),
    "z3": (3, ["(1 2 3)"], "cyclic group of order 3"),
    "z4": (4, ["(1 2 3 4)"], "cyclic group of order 4"),
    "z5": (5, ["(1 2 3 4 5)"], "cyclic group of order 5"),
    "z7": (7, ["(1 2 3 4 5 6 7)"], "cyclic group of order 7"),
    "z8": (8, ["(1 2 3 4 5 6 7 8)"], "cyclic group of order 8"),
    "z9": (9, ["(1 2 3 4 5 6 7 8 9)"], "cyclic group of order 9"),
    "z11": (11, ["(1 2 3 4 5 6 7 8 9 10 11)"], "cyclic group of order 11"),
    "z13": (13, ["(1 2 3 4 5 6 7 8 9 10 11 12 13)"], "cyclic group of order 13"),
    "c16": (16, ["(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16)"],
            "cyclic group of order 16"),
    "klein4": (4, ["(1 2)", "(3 4)"], "elementary abelian of rank 2"),
    "z3xz3": (9, ["(1 2 3)", "(4 5 6)"], "elementary abelian 3-group of rank 2"),
    "z2cubed": (8, ["(1 2)", "(3 4)", "(5 6)"], "elementary abelian of rank 3"),
    "z2_4": (16, ["(1 2)", "(3 4)", "(5 6)", "(7 8)"],
             "elementary abelian of rank 4"),
    "z4xz2": (8, ["(1 2 3 4)", "(5 6)"], "direct product Z/4 x Z/2"),
    "c4xc4": (16, ["(1 2 3 4)", "(5 6 7 8)"], "direct product Z/4 x Z/4"),
    "c8xc2": (16, ["(1 2 3 4 5 6 7 8)", "(9 10)"], "direct product Z/8 x Z/2"),
    "c4xc2xc2": (16, ["(1 2 3 4)", "(5 6)", "(7 8)"],
                 "direct product Z/4 x Z/2 x Z/2"),
    "d8": (8, ["(1 2 3 4)", "(2 4)"], "dihedral group of order 8"),
    "d16": (16, ["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"],
            "dihedral group of order 16"),
}


def table_fixtures():
    d8 = [[0, 1, 2, 3, 4, 5, 6, 7],
          [1, 2, 3, 0, 5, 6, 7, 4],
          [2, 3, 0, 1, 6, 7, 4, 5],
          [3, 0, 1, 2, 7, 4, 5, 6],
          [4, 7, 6, 5, 0, 3, 2, 1],
          [5, 4, 7, 6, 1, 0, 3, 2],
          [6, 5, 4, 7, 2, 1, 0, 3],
          [7, 6, 5, 4, 3, 2, 1, 0]]
    q8 = quaternion_8()[1]
    z2 = cyclic(2)[1]
    return {
        "trivial": (cyclic(1)[1], "trivial group"),
        "q8": (q8, "quaternion group of order 8"),
        "q16": (metacyclic_16(7, b_square=4)[1],
                "generalized quaternion group of order 16"),
        "sd16": (metacyclic_16(3)[1], "semidihedral group of order 16"),
        "m16": (metacyclic_16(5)[1], "modular maximal-cyclic group of order 16"),
        "d8xc2": (direct_product(d8, z2)[1], "direct product D8 x Z/2"),
        "q8xc2": (direct_product(q8, z2)[1], "direct product Q8 x Z/2"),
        "pauli16": (pauli_16()[1], "central product Z/4 . D8 (Pauli group)"),
        "c4sdc4": (semidirect_c4_c4()[1], "semidirect product Z/4 : Z/4"),
        "c22sdc4": (semidirect_c22_c4()[1],
                    "semidirect product (Z/2 x Z/2) : Z/4, swap action"),
        "extraspecial32": (extraspecial_32_plus()[1],
                           "extraspecial group of order 32, plus type"),
    }


def invariant_tuple(g):
    orders = Counter(g.element_order(x) for x in range(g.order))
    center = sum(1 for x in range(g.order)
                 if all(g.commutes(x, y) for y in range(g.order)))
    commutators = {g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b)))
                   for a in range(g.order) for b in range(g.order)}
    derived = set(g.closure(commutators))
    # order histogram of the abelianization G / [G, G]
    coset_of = {}
    cosets = []
    for x in range(g.order):
        key = frozenset(g.mul(x, h) for h in derived)
        if key not in coset_of:
            coset_of[key] = len(cosets)
            cosets.append(key)
    rep = [min(c) for c in cosets]
    ab_orders = Counter()
    for i, r in enumerate(rep):
        acc, n = r, 1
        while acc not in derived:
            acc = g.mul(acc, r)
            n += 1
        ab_orders[n] += 1
    return (g.order, tuple(sorted(orders.items())), center, len(derived),
            tuple(sorted(ab_orders.items())))


def emit_perm_file(name, order, perms, description):
    lines = [f"# {description}", f"name {name}", f"order {order}"]
    lines += [f"perm {p}" for p in perms]
    return "\n".join(lines) + "\n"


def emit_table_file(name, table, description):
    lines = [f"# {description}", f"name {name}", f"order {len(table)}", "table"]
    for row in table:
        lines.append(" ".join(str(x + 1) for x in row))
    return "\n".join(lines) + "\n"


def main():
    FIXTURES.mkdir(exist_ok=True)
    seen_invariants = {}
    from cohomreg.groups import parse_group

    for name, (order, perms, desc) in sorted(PERM_FIXTURES.items()):
        content = emit_perm_file(name, order, perms, desc)
        group = parse_group(content, name=name)
        assert group.order == order, name
        seen_invariants.setdefault(invariant_tuple(group), []).append(name)
        (FIXTURES / f"{name}.grp").write_text(content, encoding="utf-8")

    for name, (table, desc) in sorted(table_fixtures().items()):
        group = validate_group(len(table), table, name=name)
        content = emit_table_file(name, table, desc)
        seen_invariants.setdefault(invariant_tuple(group), []).append(name)
        (FIXTURES / f"{name}.grp").write_text(content, encoding="utf-8")

    clashes = {inv: names for inv, names in seen_invariants.items()
               if len(names) > 1}
    assert not clashes, f"fixture groups not pairwise distinguished: {clashes}"
    order16 = [names[0] for inv, names in seen_invariants.items() if inv[0] == 16]
    assert len(order16) == 14, f"expected all 14 groups of order 16, got {order16}"
    print(f"wrote {sum(len(v) for v in seen_invariants.values())} group fixtures")


if __name__ == "__main__":
    main()
