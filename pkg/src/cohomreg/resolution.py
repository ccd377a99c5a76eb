"""Minimal free resolutions of the trivial module over F_p[G] for a p-group G.

The group algebra of a p-group is local with radical the augmentation
ideal, so minimal generator counts come from Nakayama: at each step take a
kernel basis, quotient out the radical span, and lift the surviving
vectors as free-module generators.  The rank sequence is the sequence of
Betti numbers dim H^n(G, F_p), cross-validated elsewhere against the
Hilbert functions of the bundled ring presentations.

Flattening convention: a vector in F_p[G]^b lives in F_p^(order*b) with
the coordinate for (group element h, free generator j) at index h*b + j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import FiniteGroup, p_exponent
from .linalg import MatrixGFp, SpanBuilder, kernel_basis


def regular_representation(g: FiniteGroup, p: int, x: int) -> MatrixGFp:
    """Permutation matrix of left multiplication by element x."""
    n = g.order
    flat = bytearray(n * n)
    row = g.cayley[x]
    for h in range(n):
        flat[row[h] * n + h] = 1
    return MatrixGFp(p, n, n, flat)


def _augmentation(g: FiniteGroup, p: int) -> MatrixGFp:
    return MatrixGFp(p, 1, g.order, bytes([1] * g.order))


def _shift(g: FiniteGroup, x: int, vec: tuple[int, ...], width: int) -> list[int]:
    """Left action of group element x on a flattened vector."""
    out = [0] * len(vec)
    row = g.cayley[x]
    n = g.order
    for h in range(n):
        base_src = h * width
        base_dst = row[h] * width
        for j in range(width):
            out[base_dst + j] = vec[base_src + j]
    return out


@dataclass
class ResolutionState:
    """Partial minimal resolution; advance with extend_resolution."""

    prime: int
    group: FiniteGroup
    betti: list[int] = field(default_factory=lambda: [1])
    maps: list[MatrixGFp] = field(default_factory=list)

    @property
    def computed_degree(self) -> int:
        return len(self.betti) - 1


def start_resolution(g: FiniteGroup, p: int) -> ResolutionState:
    p_exponent(g, p)
    return ResolutionState(prime=p, group=g)


def extend_resolution(state: ResolutionState) -> ResolutionState:
    """Compute the next step of the resolution in place and return it."""
    g = state.group
    p = state.prime
    degree = state.computed_degree
    boundary = state.maps[degree - 1] if degree > 0 else _augmentation(g, p)
    width = state.betti[degree]
    kernel = kernel_basis(boundary)

    radical = SpanBuilder(p, len(kernel[0]) if kernel else 0)
    for x in range(1, g.order):
        for v in kernel:
            shifted = _shift(g, x, v, width)
            radical.add([a - b for a, b in zip(shifted, v)])

    lifts: list[tuple[int, ...]] = []
    for v in kernel:
        if radical.add(v):
            lifts.append(v)

    new_rank = len(lifts)
    rows = state.betti[degree] * g.order
    cols = new_rank * g.order
    flat = bytearray(rows * cols)
    for h in range(g.order):
        for j, v in enumerate(lifts):
            col = h * new_rank + j
            shifted = _shift(g, h, v, width)
            for r, value in enumerate(shifted):
                if value:
                    flat[r * cols + col] = value
    state.maps.append(MatrixGFp(p, rows, cols, flat))
    state.betti.append(new_rank)
    return state


def betti_numbers(g: FiniteGroup, p: int, max_degree: int) -> list[int]:
    """Ranks (b_0 .. b_max_degree) of the minimal resolution of F_p over F_p[G]."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    state = start_resolution(g, p)
    while state.computed_degree < max_degree:
        extend_resolution(state)
    return list(state.betti[: max_degree + 1])
