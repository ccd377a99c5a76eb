"""Filter-regularity, very strong quasi-regularity, a-invariants and defects.

All local-cohomology data is read off degreewise from kernels of
multiplication maps; the modules themselves are never materialized.  The
top degree of the i-th local cohomology is recovered by the standard
annihilator recursion for filter-regular parameters, raising a parameter
to a higher power whenever the recursion step cannot be certified.

Certification policy: a graded quotient algebra is declared finite when
its Hilbert function vanishes on a full window of length equal to the
maximum generator degree (vanishing then persists, since the algebra is
generated in those degrees).  Kernel vanishing past the cap is only
*observed*, never proved; reports carry the degree through which they
were computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    DegreeMismatch,
    InconsistentInputs,
    MissingRestrictionBlock,
    NotHomogeneous,
    NotSystemOfParameters,
    PowerRaisingCapExceeded,
    SearchExhausted,
    UnboundedWithinCap,
    UndeterminedWithinCap,
)
from .groups import PGroupProfile
from .linalg import MatrixGFp, kernel_basis, solve
from .rings import (
    Polynomial,
    Presentation,
    RestrictionBlock,
    _odd_flags,
    graded_piece,
    hilbert_function,
    multiplication_matrix,
    normal_form,
    normalize_terms,
    poly_degree,
    poly_mul,
    polynomial_ring,
    quotient_by,
    restrict_polynomial,
)

NEG_INF = float("-inf")

DEFAULT_POWER_CAP = 4


@dataclass(frozen=True)
class ParameterSystem:
    """Ordered homogeneous parameters with their (already raised) degrees."""

    elements: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    power_multipliers: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_polynomials(cls, a: Presentation, polys,
                         multipliers=None) -> "ParameterSystem":
        polys = tuple(polys)
        degrees = []
        for f in polys:
            d = poly_degree(a, f)
            if d is None or d < 1:
                raise NotHomogeneous("parameters must be homogeneous of positive degree")
            degrees.append(d)
        if multipliers is None:
            multipliers = tuple(1 for _ in polys)
        return cls(elements=polys, degrees=tuple(degrees),
                   power_multipliers=tuple(multipliers))

    def raised(self, a: Presentation, index: int) -> "ParameterSystem":
        """Square the parameter at the given 0-based level."""
        elements = list(self.elements)
        degrees = list(self.degrees)
        multipliers = list(self.power_multipliers)
        elements[index] = poly_mul(a, elements[index], elements[index])
        degrees[index] *= 2
        multipliers[index] *= 2
        return ParameterSystem(elements=tuple(elements), degrees=tuple(degrees),
                               power_multipliers=tuple(multipliers))


@dataclass(frozen=True)
class VsqrStatus:
    """Outcome of the very-strong-quasi-regularity bound comparison."""

    status: str  # holds | fails | undetermined
    bounds: tuple
    witnesses: tuple
    certified_through: int


@dataclass(frozen=True)
class AInvariantReport:
    krull_dimension: int
    a: tuple
    kernel_tops: tuple
    depth: int
    delta: int
    regularity: int
    vsqr: VsqrStatus
    parameters: ParameterSystem
    computed_through_degree: int
    excess: int | None = None


def default_degree_cap(ps: ParameterSystem) -> int:
    """Sum of parameter degrees plus the largest, plus a closing margin."""
    return sum(ps.degrees) + max(ps.degrees) + 2


def algebra_top_degree(a: Presentation, cap: int) -> tuple:
    """(top nonzero degree, certified) of a graded quotient algebra.

    Certified means the Hilbert function vanishes on the closing window of
    length max generator degree ending at the cap.
    """
    window = a.max_degree
    dims = hilbert_function(a, cap)
    top = NEG_INF
    for d, dim in enumerate(dims):
        if dim:
            top = d
    clean = cap - window + 1 >= 0 and all(
        dims[d] == 0 for d in range(max(0, cap - window + 1), cap + 1))
    return top, clean


def _kernel_top(a: Presentation, z: Polynomial, cap: int) -> tuple:
    """(top degree with nonzero kernel of z-multiplication, window clean)."""
    n = poly_degree(a, z)
    if n is None:
        return (cap if cap >= 0 else NEG_INF), False  # z = 0 annihilates everything
    window = a.max_degree
    limit = cap - n
    if limit < 0:
        return NEG_INF, False
    top = NEG_INF
    for d in range(limit + 1):
        matrix = multiplication_matrix(a, z, d)
        if len(kernel_basis(matrix)) > 0:
            top = d
    clean = top == NEG_INF or top <= limit - window
    return top, clean


def annihilator_top_degree(a: Presentation, z: Polynomial, cap: int):
    """Top degree of the annihilator of z through the cap, or -inf.

    Raises UnboundedWithinCap when the kernel is still nonzero inside the
    closing window, i.e. the annihilator does not look finite.
    """
    if not z.is_zero:
        poly_degree(a, z)  # NotHomogeneous on mixed degrees
    top, clean = _kernel_top(a, z, cap)
    if not clean:
        raise UnboundedWithinCap(
            f"kernel of multiplication still nonzero near degree cap {cap}")
    return top


def _level_quotients(a: Presentation, ps: ParameterSystem) -> list[Presentation]:
    quotients = [a]
    for i in range(1, len(ps) + 1):
        quotients.append(quotient_by(a, ps.elements[:i]))
    return quotients


def _level_tops(a: Presentation, ps: ParameterSystem, cap: int,
                strict: bool) -> tuple[list, list]:
    """Kernel tops for levels 0..K-1 plus the final quotient top.

    strict=True raises UnboundedWithinCap on a dirty kernel window; either
    way a non-terminating final quotient raises NotSystemOfParameters.
    """
    quotients = _level_quotients(a, ps)
    tops = []
    flags = []
    for i in range(len(ps)):
        top, clean = _kernel_top(quotients[i], ps.elements[i], cap)
        if strict and not clean:
            raise UnboundedWithinCap(
                f"annihilator of parameter {i + 1} not finite through degree {cap}")
        tops.append(top)
        flags.append(clean)
    final_top, final_clean = algebra_top_degree(quotients[-1], cap)
    if not final_clean:
        raise NotSystemOfParameters(
            f"quotient by all {len(ps)} parameters does not vanish within "
            f"degree cap {cap}")
    tops.append(final_top)
    flags.append(final_clean)
    return tops, flags


def filter_regular_check(a: Presentation, ps: ParameterSystem,
                         cap: int | None = None) -> list[tuple]:
    """Annihilator top degree of each parameter on the previous quotient.

    Level i < K reports the kernel top of multiplication by parameter i+1
    on the quotient by the first i parameters; level K reports the top
    degree of the full quotient (multiplication by zero convention).
    """
    if len(ps) == 0:
        raise NotSystemOfParameters("empty parameter system")
    if cap is None:
        cap = default_degree_cap(ps)
    tops, _ = _level_tops(a, ps, cap, strict=True)
    return list(enumerate(tops))


def vsqr_bounds(ps: ParameterSystem) -> tuple:
    """Degree bounds: partial degree sums shifted by -i-1 (interior) or -K (top)."""
    K = len(ps)
    bounds = []
    partial = 0
    for i in range(K + 1):
        shift = -K if i == K else -i - 1
        bounds.append(partial + shift)
        if i < K:
            partial += ps.degrees[i]
    return tuple(bounds)


def vsqr_check(a: Presentation, ps: ParameterSystem,
               cap: int | None = None) -> VsqrStatus:
    """Compare each level's kernel top against the quasi-regularity bound.

    fails as soon as a witness exceeds its bound; holds only when every
    kernel also vanished on its closing window; undetermined when a kernel
    was still alive near the cap without a definite violation.
    """
    if len(ps) == 0:
        raise NotSystemOfParameters("empty parameter system")
    if cap is None:
        cap = default_degree_cap(ps)
    tops, flags = _level_tops(a, ps, cap, strict=False)
    bounds = vsqr_bounds(ps)
    violated = any(t > b for t, b in zip(tops, bounds))
    if violated:
        status = "fails"
    elif all(flags):
        status = "holds"
    else:
        status = "undetermined"
    return VsqrStatus(status=status, bounds=bounds, witnesses=tuple(tops),
                      certified_through=cap)


def _candidates(degrees, tops) -> list:
    """Candidate a-invariants: level tops shifted by partial degree sums."""
    out = [tops[0]]
    partial = 0
    for j, n in enumerate(degrees):
        partial += n
        t = tops[j + 1]
        out.append(NEG_INF if t == NEG_INF else t - partial)
    return out


def _first_violation(candidates, degrees):
    """First step where the recursion cannot be certified, or None.

    Step j computes level j+1 from level j and is accepted when the
    candidate at j+1 plus the degree of parameter j+1 strictly exceeds the
    candidate at j; a -inf candidate at j passes vacuously.
    """
    for j in range(len(degrees)):
        prev = candidates[j]
        if prev == NEG_INF:
            continue
        if candidates[j + 1] + degrees[j] > prev:
            continue
        return j
    return None


def _run_doubling(base_degrees, fetch_tops, power_cap: int):
    """Drive the annihilator recursion, squaring parameters as needed.

    fetch_tops(multipliers) returns the K+1 level tops for the system with
    each parameter raised to the given power.
    """
    K = len(base_degrees)
    multipliers = [1] * K
    doublings = [0] * K
    while True:
        degrees = [d * m for d, m in zip(base_degrees, multipliers)]
        tops = fetch_tops(tuple(multipliers))
        cands = _candidates(degrees, tops)
        j = _first_violation(cands, degrees)
        if j is None:
            return cands, tuple(multipliers), tuple(degrees), tuple(tops)
        if doublings[j] >= power_cap:
            raise PowerRaisingCapExceeded(
                f"recursion step {j} still uncertified after {power_cap} doublings")
        doublings[j] += 1
        multipliers[j] *= 2


def a_invariants(a: Presentation, ps: ParameterSystem, cap: int | None = None,
                 power_cap: int = DEFAULT_POWER_CAP) -> AInvariantReport:
    """Local-cohomology top degrees, depth, defect and regularity.

    The parameter system must be filter-regular within the cap.  When no
    cap is given the default policy is re-applied after each doubling so
    the window keeps pace with the raised degrees.
    """
    if len(ps) == 0:
        raise NotSystemOfParameters("empty parameter system")
    base = ps
    state = {}

    def fetch(multipliers):
        # multipliers are relative to the system the caller handed in
        system = base
        for idx, m in enumerate(multipliers):
            factor = m
            while factor > 1:
                system = system.raised(a, idx)
                factor //= 2
        level_cap = cap if cap is not None else default_degree_cap(system)
        tops, _ = _level_tops(a, system, level_cap, strict=True)
        state["system"] = system
        state["cap"] = level_cap
        return tops

    cands, multipliers, degrees, tops = _run_doubling(
        list(base.degrees), fetch, power_cap)
    final_system = state["system"]
    final_cap = state["cap"]
    K = len(ps)
    a_list = tuple(cands)
    depth = next(i for i, v in enumerate(a_list) if v != NEG_INF)
    report = AInvariantReport(
        krull_dimension=K,
        a=a_list,
        kernel_tops=tuple(tops),
        depth=depth,
        delta=K - depth,
        regularity=regularity_from_a(a_list),
        vsqr=vsqr_check(a, final_system, final_cap),
        parameters=final_system,
        computed_through_degree=final_cap,
    )
    return report


class ReplayResult:
    """Outcome of running the recursion on externally supplied kernel tops."""

    __slots__ = ("a", "multipliers", "degrees", "kernel_tops")

    def __init__(self, a, multipliers, degrees, kernel_tops):
        self.a = a
        self.multipliers = multipliers
        self.degrees = degrees
        self.kernel_tops = kernel_tops


def a_invariants_from_tops(base_degrees, tops_by_multiplier,
                           power_cap: int = DEFAULT_POWER_CAP) -> ReplayResult:
    """Run the doubling recursion on recorded kernel-top data.

    tops_by_multiplier maps a multiplier tuple (one entry per parameter) to
    the K+1 observed kernel top degrees for that raised system.
    """
    def fetch(multipliers):
        try:
            return tops_by_multiplier[multipliers]
        except KeyError:
            raise PowerRaisingCapExceeded(
                f"no recorded data for multipliers {multipliers}")

    cands, multipliers, degrees, tops = _run_doubling(
        list(base_degrees), fetch, power_cap)
    return ReplayResult(a=tuple(cands), multipliers=multipliers,
                        degrees=degrees, kernel_tops=tops)


def regularity_from_a(a_list) -> int:
    """Castelnuovo-Mumford regularity: max over i of a^i + i, -inf entries skipped."""
    if not a_list or a_list[-1] == NEG_INF:
        raise ValueError("top a-invariant must be finite")
    return max(int(v) + i for i, v in enumerate(a_list) if v != NEG_INF)


def depth_delta_from_a(a_list, krull_dimension: int) -> tuple[int, int]:
    """Depth (first finite a-invariant) and Cohen-Macaulay defect K - depth."""
    if not a_list or a_list[-1] == NEG_INF:
        raise ValueError("top a-invariant must be finite")
    depth = next(i for i, v in enumerate(a_list) if v != NEG_INF)
    return depth, krull_dimension - depth


def defect_report(profile: PGroupProfile, report: AInvariantReport) -> tuple[int, int, int]:
    """(group defect, Cohen-Macaulay defect, Duflot excess) with identity checks.

    Excess is depth minus central rank; the identities delta + excess =
    defect and central rank <= depth <= K = p-rank must hold, otherwise the
    ring model does not belong to the group.
    """
    if report.krull_dimension != profile.p_rank:
        raise InconsistentInputs(
            f"Krull dimension {report.krull_dimension} != p-rank {profile.p_rank}")
    excess = report.depth - profile.center_rank
    if excess < 0 or report.depth > report.krull_dimension:
        raise InconsistentInputs(
            f"depth {report.depth} outside [{profile.center_rank}, "
            f"{report.krull_dimension}]")
    if report.delta + excess != profile.gtd:
        raise InconsistentInputs(
            f"delta {report.delta} + excess {excess} != defect {profile.gtd}")
    return profile.gtd, report.delta, excess


def dickson_invariants(s: int, p: int) -> list[Polynomial]:
    """Fundamental invariants of GL_s(F_p) on F_p[t_1..t_s], ordered by degree.

    The i-th (1-based) has degree p^s - p^(s-i), restricts nontrivially to
    i-dimensional subspaces and to zero on smaller ones.  Computed from the
    product of X - v over all vectors v, whose X^(p^j) coefficients are the
    invariants up to sign.
    """
    if s < 1:
        raise ValueError("rank must be >= 1")
    target = polynomial_ring(p, [(f"t{i}", 1) for i in range(1, s + 1)],
                             name=f"dickson{s}_p{p}")
    zero_exps = tuple(0 for _ in range(s))
    # coeffs[k] = coefficient of X^k as an exponent-vector dict
    coeffs: list[dict] = [{zero_exps: 1}]
    for vector in product(range(p), repeat=s):
        linear: dict = {}
        for i, c in enumerate(vector):
            if c:
                e = list(zero_exps)
                e[i] = 1
                linear[tuple(e)] = c
        new: list[dict] = [dict() for _ in range(len(coeffs) + 1)]
        for k, poly in enumerate(coeffs):
            for e, c in poly.items():
                new[k + 1][e] = (new[k + 1].get(e, 0) + c) % p
            for le, lc in linear.items():
                for e, c in poly.items():
                    combined = tuple(x + y for x, y in zip(e, le))
                    new[k][combined] = (new[k].get(combined, 0) - lc * c) % p
        coeffs = new
    out = []
    for i in range(1, s + 1):
        j = s - i
        sign = 1 if i % 2 == 0 else p - 1
        raw = {e: sign * c for e, c in coeffs[p ** j].items()}
        out.append(normalize_terms(target, raw))
    return out


def dickson_target(s: int, p: int) -> Presentation:
    """Polynomial ring the Dickson invariants of rank s live in."""
    return polynomial_ring(p, [(f"t{i}", 1) for i in range(1, s + 1)],
                           name=f"dickson{s}_p{p}")


@dataclass(frozen=True)
class BlockDiagnostic:
    label: str
    rank: int
    hsop_ok: bool
    zeros_ok: bool
    detail: str


def _polynomial_part(block: RestrictionBlock, images):
    """Kill the odd (exterior, nilpotent) generators of a block target.

    Finiteness of the quotient only depends on the reduced ring, which is
    the polynomial part on the even generators.  Returns the polynomial
    ring and the projected images.
    """
    target = block.target
    if target.prime == 2:
        return target, list(images)
    flags = _odd_flags(target)
    poly_positions = [i for i, odd in enumerate(flags) if not odd]
    ring = polynomial_ring(
        target.prime,
        [target.generators[i] for i in poly_positions],
        name=target.name + "_poly",
    )
    projected = []
    for f in images:
        acc = {}
        for c, exps in f.terms:
            if any(e for i, e in enumerate(exps) if i not in poly_positions):
                continue
            acc[tuple(exps[i] for i in poly_positions)] = c
        projected.append(normalize_terms(ring, acc))
    return ring, projected


def check_weak_rank_restriction(a: Presentation, ps: ParameterSystem,
                                cap: int | None = None):
    """Restriction pattern over the declared elementary abelian blocks.

    For a block of rank s the first s parameters must restrict to a
    homogeneous system of parameters of the target and the remaining
    parameters must restrict to zero.  The hsop question is decided
    exactly: on the reduced (polynomial) part a finite quotient by s
    elements is a complete intersection, so it vanishes right after its
    socle degree, and an infinite one never clears a full closing window.
    Returns (bool, diagnostics per block).
    """
    if not a.restrictions:
        raise MissingRestrictionBlock(f"{a.name} declares no restriction blocks")
    K = len(ps)
    diagnostics = []
    overall = True
    for block in a.restrictions:
        s = block.rank
        images = [restrict_polynomial(a, block, el) for el in ps.elements]
        zeros_ok = all(normal_form(block.target, f).is_zero for f in images[s:])
        if s > K:
            diagnostics.append(BlockDiagnostic(
                block.label, s, False, zeros_ok,
                f"block rank {s} exceeds the {K} available parameters"))
            overall = False
            continue
        ring, head = _polynomial_part(block, images[:s])
        if any(f.is_zero for f in head):
            diagnostics.append(BlockDiagnostic(
                block.label, s, False, zeros_ok,
                "a leading parameter restricts to zero on the reduced part"))
            overall = False
            continue
        degrees = [poly_degree(ring, f) for f in head]
        socle = sum(degrees) - sum(ring.degrees)
        window = ring.max_degree
        needed = socle + window
        if cap is not None and cap < needed:
            raise UndeterminedWithinCap(
                f"block {block.label}: degree cap {cap} below the "
                f"decision degree {needed}")
        quotient = quotient_by(ring, head)
        dims = hilbert_function(quotient, needed)
        hsop_ok = all(dims[d] == 0 for d in range(socle + 1, needed + 1))
        detail = ("hsop certified" if hsop_ok else
                  f"quotient still nonzero past socle degree {socle}")
        if not zeros_ok:
            detail += "; trailing parameter has nonzero restriction"
        diagnostics.append(BlockDiagnostic(block.label, s, hsop_ok, zeros_ok, detail))
        overall = overall and hsop_ok and zeros_ok
    return overall, diagnostics


def lift_with_restrictions(a: Presentation, targets: dict, d: int):
    """Element of the degree-d piece restricting to each block's target.

    Solves the stacked linear system over the degree-d basis; returns None
    when no element matches at this degree (callers may then raise the
    targets to p-th powers and retry at degree p*d).
    """
    if not a.restrictions:
        raise MissingRestrictionBlock(f"{a.name} declares no restriction blocks")
    missing = [b.label for b in a.restrictions if b.label not in targets]
    if missing:
        raise MissingRestrictionBlock(f"no targets for blocks {missing}")
    piece = graded_piece(a, d)
    basis = piece.basis_monomials()
    width = len(basis)
    rows: list[list[int]] = []
    rhs: list[int] = []
    p = a.prime
    for block in a.restrictions:
        goal = targets[block.label]
        if not goal.is_zero and poly_degree(block.target, goal) != d:
            raise DegreeMismatch(
                f"target for block {block.label} is not homogeneous of degree {d}")
        t_piece = graded_piece(block.target, d)
        col_images = []
        for exps in basis:
            mono = Polynomial(terms=((1, exps),))
            col_images.append(restrict_polynomial(a, block, mono))
        goal_vec = [0] * len(t_piece.monomials)
        for c, e in goal.terms:
            goal_vec[t_piece.index[e]] = c
        for row_idx in range(len(t_piece.monomials)):
            row = [0] * width
            for col, img in enumerate(col_images):
                for c, e in img.terms:
                    if t_piece.index[e] == row_idx:
                        row[col] = c
            rows.append(row)
            rhs.append(goal_vec[row_idx])
    if width == 0:
        if any(rhs):
            return None
        return Polynomial(terms=())
    matrix = MatrixGFp.from_rows(p, rows, width)
    solution = solve(matrix, rhs)
    if solution is None:
        return None
    acc = {}
    for coeff, exps in zip(solution, basis):
        if coeff:
            acc[exps] = coeff
    return normalize_terms(a, acc)


def complete_sop(a: Presentation, partial: ParameterSystem, search_degrees,
                 cap: int) -> ParameterSystem:
    """Append one element making the quotient finite, by deterministic search.

    Candidates are all nonzero coefficient combinations over the degree-d
    quotient basis, enumerated in canonical order for each degree in turn.
    Completing a system whose initial segment is filter-regular yields a
    filter-regular system outright.
    """
    existing = list(partial.elements)
    for d in search_degrees:
        piece = graded_piece(a, d)
        basis = piece.basis_monomials()
        if not basis:
            continue
        for coeff_vector in product(range(a.prime), repeat=len(basis)):
            if not any(coeff_vector):
                continue
            acc = {}
            for c, exps in zip(coeff_vector, basis):
                if c:
                    acc[exps] = c
            candidate = normalize_terms(a, acc)
            quotient = quotient_by(a, existing + [candidate])
            _, clean = algebra_top_degree(quotient, cap)
            if clean:
                return ParameterSystem(
                    elements=tuple(existing) + (candidate,),
                    degrees=partial.degrees + (d,),
                    power_multipliers=partial.power_multipliers + (1,),
                )
    raise SearchExhausted(
        f"no completion found in degrees {list(search_degrees)} within cap {cap}")
