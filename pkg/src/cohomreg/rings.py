"""Finitely presented graded-commutative algebras over F_p.

Degree-by-degree ideal slices take the place of a Groebner engine: the
degree-d piece of the relation ideal is spanned by monomial multiples of
the relations and reduced once with exact linear algebra.  Every question
asked downstream (normal forms, multiplication matrices, Hilbert
functions) is degree-bounded, so this is exact and cheap at the scales
handled here.

Sign conventions for odd p: generators of odd degree anticommute and
square to zero (the square is dropped structurally, which is what makes
the algebra graded-commutative rather than commutative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    BadCoefficient,
    InhomogeneousRelation,
    MalformedFile,
    NotHomogeneous,
    UnknownGenerator,
)
from .linalg import MatrixGFp, is_small_prime, rref_in_place


@dataclass(frozen=True)
class Polynomial:
    """Normalized terms: tuple of (coefficient in [1, p), exponent vector)."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)


ZERO = Polynomial(terms=())


@dataclass(frozen=True)
class RestrictionBlock:
    """Declared restriction map onto the cohomology model of one elementary abelian."""

    label: str
    rank: int
    target: "Presentation"
    images: tuple[Polynomial, ...]  # one per parent generator, in order


@dataclass(frozen=True)
class Presentation:
    """Connected finitely presented graded-commutative F_p-algebra.

    `exterior` optionally pins the parity of each generator (True =
    anticommuting with square zero).  When absent, parity follows the
    grading: everything commutes at p = 2, odd-degree generators are
    exterior at odd p.  Explicit flags exist for model rings that treat
    degree-1 variables as polynomial (restriction targets, invariant
    theory).
    """

    prime: int
    generators: tuple[tuple[str, int], ...]
    relations: tuple[Polynomial, ...] = ()
    restrictions: tuple[RestrictionBlock, ...] = ()
    params: tuple[Polynomial, ...] = ()
    name: str = "ring"
    exterior: tuple[bool, ...] | None = None
    _pieces: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not is_small_prime(self.prime):
            raise MalformedFile(f"{self.prime} is not a supported prime")
        for gname, deg in self.generators:
            if deg < 1:
                raise MalformedFile(f"generator {gname} has degree {deg} < 1")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.generators)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=1)

    def gen_index(self, gname: str) -> int:
        for i, (n, _) in enumerate(self.generators):
            if n == gname:
                return i
        raise UnknownGenerator(f"no generator named {gname!r}")

    def generator(self, gname: str) -> Polynomial:
        i = self.gen_index(gname)
        exps = [0] * len(self.generators)
        exps[i] = 1
        return Polynomial(terms=((1, tuple(exps)),))


def polynomial_ring(p: int, gens: list[tuple[str, int]], name: str = "ring") -> Presentation:
    gens = tuple(gens)
    return Presentation(prime=p, generators=gens, name=name,
                        exterior=tuple(False for _ in gens))


def _odd_flags(a: Presentation) -> tuple[bool, ...]:
    if a.prime == 2:
        return tuple(False for _ in a.generators)
    if a.exterior is not None:
        return a.exterior
    return tuple(d % 2 == 1 for d in a.degrees)


def mono_degree(a: Presentation, exps: tuple[int, ...]) -> int:
    return sum(e * d for e, d in zip(exps, a.degrees))


def mono_mul(a: Presentation, e1: tuple[int, ...], e2: tuple[int, ...]):
    """Product of two monomials: (sign in [0, p), combined exponents).

    Sign counts how many odd generators of the right factor cross odd
    generators of the left factor when merging into declaration order.
    A repeated odd generator kills the product.
    """
    p = a.prime
    combined = tuple(x + y for x, y in zip(e1, e2))
    if p == 2:
        return 1, combined
    odd = _odd_flags(a)
    crossings = 0
    left_higher = 0
    for i in reversed(range(len(odd))):
        if not odd[i]:
            continue
        if e1[i] and e2[i]:
            return 0, combined
        if e2[i]:
            crossings += left_higher
        if e1[i]:
            left_higher += 1
    # left_higher counts odd gens of e1 with index > current i as we sweep down
    sign = p - 1 if crossings % 2 else 1
    return sign, combined


def normalize_terms(a: Presentation, raw: dict[tuple[int, ...], int]) -> Polynomial:
    p = a.prime
    odd = _odd_flags(a)
    out = []
    for exps, coeff in raw.items():
        c = coeff % p
        if c == 0:
            continue
        if any(flag and e > 1 for flag, e in zip(odd, exps)):
            continue  # odd-degree generators square to zero
        out.append((c, exps))
    out.sort(key=lambda t: t[1])
    return Polynomial(terms=tuple(out))


def poly_add(a: Presentation, f: Polynomial, g: Polynomial) -> Polynomial:
    acc: dict[tuple[int, ...], int] = {}
    for c, e in f.terms + g.terms:
        acc[e] = acc.get(e, 0) + c
    return normalize_terms(a, acc)


def poly_scale(a: Presentation, c: int, f: Polynomial) -> Polynomial:
    acc = {e: c * coeff for coeff, e in f.terms}
    return normalize_terms(a, acc)


def poly_mul(a: Presentation, f: Polynomial, g: Polynomial) -> Polynomial:
    acc: dict[tuple[int, ...], int] = {}
    for c1, e1 in f.terms:
        for c2, e2 in g.terms:
            sign, e = mono_mul(a, e1, e2)
            if sign:
                acc[e] = acc.get(e, 0) + c1 * c2 * sign
    return normalize_terms(a, acc)


def poly_pow(a: Presentation, f: Polynomial, k: int) -> Polynomial:
    result = Polynomial(terms=((1, tuple(0 for _ in a.generators)),))
    for _ in range(k):
        result = poly_mul(a, result, f)
    return result


def poly_degree(a: Presentation, f: Polynomial) -> int | None:
    """Degree of a homogeneous polynomial, None for 0; raises if mixed."""
    if f.is_zero:
        return None
    degs = {mono_degree(a, e) for _, e in f.terms}
    if len(degs) > 1:
        raise NotHomogeneous(f"degrees {sorted(degs)} mixed in one polynomial")
    return degs.pop()


def is_homogeneous(a: Presentation, f: Polynomial) -> bool:
    try:
        poly_degree(a, f)
        return True
    except NotHomogeneous:
        return False


_TERM_FACTOR = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_polynomial(a: Presentation, text: str) -> Polynomial:
    """Parse `c*g1^e1*g2^e2 + ...`; coefficient omitted means 1; `0` is zero."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise MalformedFile("empty polynomial")
    if s == "0":
        return ZERO
    acc: dict[tuple[int, ...], int] = {}
    width = len(a.generators)
    for term_text in s.split("+"):
        if not term_text:
            raise MalformedFile(f"empty term in {text!r}")
        coeff = 1
        exps = [0] * width
        for pos, factor in enumerate(term_text.split("*")):
            if factor.isdigit():
                if pos != 0:
                    raise MalformedFile(
                        f"coefficient must lead its term: {term_text!r}")
                coeff = int(factor)
                continue
            m = _TERM_FACTOR.match(factor)
            if not m:
                raise MalformedFile(f"bad factor {factor!r} in {text!r}")
            idx = a.gen_index(m.group(1))
            exps[idx] += int(m.group(2) or 1)
        if coeff % a.prime == 0 or coeff >= a.prime:
            raise BadCoefficient(
                f"coefficient {coeff} invalid over F_{a.prime} in {text!r}")
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + coeff
    return normalize_terms(a, acc)


def poly_to_str(a: Presentation, f: Polynomial) -> str:
    if f.is_zero:
        return "0"
    chunks = []
    for c, exps in f.terms:
        factors = [] if c == 1 else [str(c)]
        for (gname, _), e in zip(a.generators, exps):
            if e == 1:
                factors.append(gname)
            elif e > 1:
                factors.append(f"{gname}^{e}")
        chunks.append("*".join(factors) if factors else str(c))
    return " + ".join(chunks)


def monomials(a: Presentation, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree d, odd generators capped at 1, lex order."""
    degs = a.degrees
    odd = _odd_flags(a)
    width = len(degs)
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == width:
            if remaining == 0:
                out.append(prefix)
            return
        cap = remaining // degs[i]
        if odd[i]:
            cap = min(cap, 1)
        for e in range(cap + 1):
            rec(i + 1, remaining - e * degs[i], prefix + (e,))

    rec(0, d, ())
    return tuple(out)


class GradedPiece:
    """Monomial basis and reduced ideal slice for one degree."""

    __slots__ = ("degree", "monomials", "index", "slice_rows", "slice_pivots",
                 "basis_cols", "dimension")

    def __init__(self, a: Presentation, d: int):
        monos = monomials(a, d)
        self.degree = d
        self.monomials = monos
        self.index = {m: i for i, m in enumerate(monos)}
        p = a.prime
        width = len(monos)
        rows: list[bytearray] = []
        for f in a.relations:
            df = poly_degree(a, f)
            if df is None or df > d:
                continue
            for m in monomials(a, d - df):
                vec = bytearray(width)
                for c, e in f.terms:
                    sign, prod = mono_mul(a, m, e)
                    if sign:
                        vec[self.index[prod]] = (vec[self.index[prod]] + c * sign) % p
                if any(vec):
                    rows.append(vec)
        pivots = rref_in_place(p, rows, width) if rows else []
        self.slice_rows = [rows[i] for i in range(len(pivots))]
        self.slice_pivots = pivots
        pivot_set = set(pivots)
        self.basis_cols = tuple(j for j in range(width) if j not in pivot_set)
        self.dimension = len(self.basis_cols)

    def slice_matrix(self, prime: int) -> MatrixGFp:
        flat = bytearray()
        for row in self.slice_rows:
            flat.extend(row)
        return MatrixGFp(prime, len(self.slice_rows), len(self.monomials), flat)

    def reduce(self, prime: int, vec: bytearray) -> bytearray:
        for row, c in zip(self.slice_rows, self.slice_pivots):
            f = vec[c]
            if f:
                for j in range(c, len(vec)):
                    vec[j] = (vec[j] - f * row[j]) % prime
        return vec

    def basis_monomials(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.monomials[j] for j in self.basis_cols)


def graded_piece(a: Presentation, d: int) -> GradedPiece:
    """Piece of degree d; cached on the presentation (idempotent inserts)."""
    if d < 0:
        raise ValueError("negative degree")
    piece = a._pieces.get(d)
    if piece is None:
        piece = GradedPiece(a, d)
        a._pieces[d] = piece
    return piece


def _coords(a: Presentation, f: Polynomial, piece: GradedPiece) -> bytearray:
    vec = bytearray(len(piece.monomials))
    for c, e in f.terms:
        vec[piece.index[e]] = (vec[piece.index[e]] + c) % a.prime
    return vec


def normal_form(a: Presentation, f: Polynomial) -> Polynomial:
    """Canonical representative of f modulo the ideal slice in its degree."""
    if f.is_zero:
        return ZERO
    d = poly_degree(a, f)
    piece = graded_piece(a, d)
    vec = piece.reduce(a.prime, _coords(a, f, piece))
    acc = {piece.monomials[j]: vec[j] for j in range(len(vec)) if vec[j]}
    return normalize_terms(a, acc)


def multiplication_matrix(a: Presentation, z: Polynomial, d: int) -> MatrixGFp:
    """Matrix of v -> z * v from the degree-d piece to the degree-(d+n) piece."""
    n = poly_degree(a, z)
    if n is None:
        n = 0
    source = graded_piece(a, d)
    target = graded_piece(a, d + n)
    p = a.prime
    cols = source.dimension
    rows = target.dimension
    flat = bytearray(rows * cols)
    for col, j in enumerate(source.basis_cols):
        m = source.monomials[j]
        vec = bytearray(len(target.monomials))
        for c, e in z.terms:
            sign, prod = mono_mul(a, e, m)
            if sign:
                t = target.index.get(prod)
                if t is None:
                    continue
                vec[t] = (vec[t] + c * sign) % p
        vec = target.reduce(p, vec)
        for rowpos, t in enumerate(target.basis_cols):
            if vec[t]:
                flat[rowpos * cols + col] = vec[t]
    return MatrixGFp(p, rows, cols, flat)


def quotient_by(a: Presentation, zs) -> Presentation:
    """Same generators, relations extended by the given homogeneous elements.

    Restriction blocks are not carried over: images of the added relations
    need not vanish in the targets, so the block data is only meaningful on
    the original presentation.
    """
    zs = tuple(zs)
    for z in zs:
        poly_degree(a, z)  # raises NotHomogeneous on mixed degrees
    if not zs:
        return a
    return Presentation(
        prime=a.prime,
        generators=a.generators,
        relations=a.relations + zs,
        params=a.params,
        name=a.name,
    )


def hilbert_function(a: Presentation, max_degree: int) -> list[int]:
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    return [graded_piece(a, d).dimension for d in range(max_degree + 1)]


def restrict_polynomial(a: Presentation, block: RestrictionBlock,
                        f: Polynomial) -> Polynomial:
    """Image of f under the block's generator-by-generator substitution."""
    target = block.target
    result_acc: dict[tuple[int, ...], int] = {}
    for c, exps in f.terms:
        img = Polynomial(terms=((c % a.prime, tuple(0 for _ in target.generators)),))
        for gen_pos, e in enumerate(exps):
            if e == 0:
                continue
            img = poly_mul(target, img, poly_pow(target, block.images[gen_pos], e))
            if img.is_zero:
                break
        for cc, ee in img.terms:
            result_acc[ee] = result_acc.get(ee, 0) + cc
    return normalize_terms(target, result_acc)


def _block_target(p: int, rank: int, label: str) -> Presentation:
    """Implied model of the target cohomology ring for a rank-s block.

    Polynomial generators t1..ts in degree 1; at odd p additionally the
    exterior generators u1..us in degree 1.  The t's carry an explicit
    polynomial parity flag so the degree-1 grading does not force their
    squares to vanish at odd p.
    """
    gens = [(f"t{i}", 1) for i in range(1, rank + 1)]
    flags = [False] * rank
    if p != 2:
        gens += [(f"u{i}", 1) for i in range(1, rank + 1)]
        flags += [True] * rank
    return Presentation(prime=p, generators=tuple(gens), name=f"H({label})",
                        exterior=tuple(flags))


def parse_presentation(source: str, name: str = "ring") -> Presentation:
    """Parse the ring file format into a validated Presentation."""
    prime: int | None = None
    label = name
    gens: list[tuple[str, int]] = []
    rel_lines: list[tuple[str, int]] = []
    param_lines: list[tuple[str, int]] = []
    block_order: list[str] = []
    block_rank: dict[str, int] = {}
    block_images: dict[str, dict[str, tuple[str, int]]] = {}

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            label = rest or label
        elif key == "prime":
            try:
                prime = int(rest)
            except ValueError:
                raise MalformedFile(f"line {line_no}: bad prime {rest!r}")
        elif key == "gen":
            parts = rest.split()
            if len(parts) != 2:
                raise MalformedFile(f"line {line_no}: expected `gen <name> <degree>`")
            try:
                deg = int(parts[1])
            except ValueError:
                raise MalformedFile(f"line {line_no}: bad degree {parts[1]!r}")
            if any(parts[0] == existing for existing, _ in gens):
                raise MalformedFile(f"line {line_no}: duplicate generator {parts[0]!r}")
            gens.append((parts[0], deg))
        elif key == "rel":
            rel_lines.append((rest, line_no))
        elif key == "param":
            param_lines.append((rest, line_no))
        elif key == "subgroup":
            m = re.fullmatch(r"(\S+)\s+rank\s+(\d+)", rest)
            if not m:
                raise MalformedFile(
                    f"line {line_no}: expected `subgroup <label> rank <s>`")
            blabel = m.group(1)
            if blabel in block_rank:
                raise MalformedFile(f"line {line_no}: duplicate block {blabel!r}")
            block_order.append(blabel)
            block_rank[blabel] = int(m.group(2))
            block_images[blabel] = {}
        elif key == "restrict":
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(.+)", rest)
            if not m:
                raise MalformedFile(
                    f"line {line_no}: expected `restrict <label> <gen> -> <poly>`")
            blabel, gname, poly_text = m.groups()
            if blabel not in block_rank:
                raise MalformedFile(f"line {line_no}: unknown block {blabel!r}")
            if gname in block_images[blabel]:
                raise MalformedFile(
                    f"line {line_no}: duplicate image for {gname!r} in {blabel!r}")
            block_images[blabel][gname] = (poly_text, line_no)
        else:
            raise MalformedFile(f"line {line_no}: unknown directive {key!r}")

    if prime is None:
        raise MalformedFile("missing `prime` line")
    if not gens:
        raise MalformedFile("no generators declared")

    base = Presentation(prime=prime, generators=tuple(gens), name=label)
    relations = []
    for text, line_no in rel_lines:
        f = parse_polynomial(base, text)
        if f.is_zero:
            continue
        try:
            deg = poly_degree(base, f)
        except NotHomogeneous as exc:
            raise InhomogeneousRelation(f"line {line_no}: {exc}")
        if deg == 0:
            raise InhomogeneousRelation(f"line {line_no}: degree-0 relation")
        relations.append(f)

    params = []
    for text, line_no in param_lines:
        f = parse_polynomial(base, text)
        deg = poly_degree(base, f)
        if deg is None or deg < 1:
            raise NotHomogeneous(f"line {line_no}: parameter must have positive degree")
        params.append(f)

    blocks = []
    gen_names = [n for n, _ in gens]
    for blabel in block_order:
        rank = block_rank[blabel]
        if rank < 1:
            raise MalformedFile(f"block {blabel!r}: rank must be >= 1")
        target = _block_target(prime, rank, blabel)
        images = []
        for gname, gdeg in gens:
            if gname not in block_images[blabel]:
                raise MalformedFile(
                    f"block {blabel!r}: missing image for generator {gname!r}")
            text, line_no = block_images[blabel][gname]
            img = parse_polynomial(target, text)
            if not img.is_zero:
                ideg = poly_degree(target, img)
                if ideg != gdeg:
                    raise MalformedFile(
                        f"line {line_no}: image of {gname!r} has degree {ideg}, "
                        f"generator has degree {gdeg}")
            images.append(img)
        extra = set(block_images[blabel]) - set(gen_names)
        if extra:
            raise UnknownGenerator(
                f"block {blabel!r}: images for unknown generators {sorted(extra)}")
        blocks.append(RestrictionBlock(label=blabel, rank=rank, target=target,
                                       images=tuple(images)))

    return Presentation(
        prime=prime,
        generators=tuple(gens),
        relations=tuple(relations),
        restrictions=tuple(blocks),
        params=tuple(params),
        name=label,
    )


def load_presentation(path) -> Presentation:
    from pathlib import Path

    p = Path(path)
    return parse_presentation(p.read_text(encoding="utf-8"), name=p.stem)
