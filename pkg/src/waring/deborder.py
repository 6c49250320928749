"""Turning border certificates into exact weighted Waring decompositions.

The driver ``deborder`` takes a homogeneous polynomial f together with a
border certificate (a sum of weighted powers of linear forms over Q(eps)
whose limit at eps = 0 is f) and produces a plain rational decomposition
f = sum w_i * l_i**degree, exactly verified, together with a report carrying
the achieved rank, a certified a-priori ceiling, and a trace of which path
each recursion step took.

The recursion, per level:

1. rotate away inessential variables, then diagonalize the certificate into
   staircase coordinates (diagonal.py);
2. if degree >= rank - 1, partition the summands by the direction their
   forms degenerate to; each group converges on its own (checked, not
   assumed) to a local part divisible by a power of its base variable
   (checked as well); the cofactor has degree < rank, so small ranks fall
   to a dense solve and large ones to the Y/Z split below;
3. otherwise split the variables into a Y block and a Z block: monomials
   supported on Y go to a dense solve, and the cofactor of z_i**k (for the
   first Z variable present) is handled recursively, with a certificate
   obtained by differentiating the staircase summands k times in z_i and
   restricting z_1..z_i to zero.  Differentiation keeps at most
   rank - (pivot index) summands, so the branch rank drops strictly and
   the recursion terminates;
4. pieces are reassembled with ``multiply_by_power``, which rewrites
   l**e * z**k as a sum of e + k + 1 powers through exact interpolation.

Every intermediate certificate and every assembled piece is re-verified by
exact expansion; nothing in the pipeline is trusted twice.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

import mpmath

from .decomp import (
    BorderDecomposition,
    WaringDecomposition,
    base_of_form,
    check_border,
    essential_reduce,
    restrict_vars_zero,
    verify_waring,
)
from .diagonal import (
    DiagonalizedDecomposition,
    derivative_decomposition,
    diagonalize,
)
from .errors import CertificateCheckError, InvariantError, VerificationError
from .linalg import rat_inverse, rat_solve, solve_vandermonde
from .poly import HomoPoly, LinearForm, monomials_of_degree


@dataclass(frozen=True)
class DeborderConfig:
    """Knobs for the debordering recursion.

    seed drives the dense solver's random draws; base_threshold is the rank
    at or below which a local cofactor is solved densely instead of split;
    y_size overrides the Y-block width (default: floor(10 * sqrt(rank)),
    which at small ranks routes everything through the dense path -- set it
    to 1 or 2 to force the split); strengthened re-diagonalizes every
    derivative branch certificate and records the observed summand counts;
    check_levels re-verifies the assembled decomposition at every recursion
    level rather than only at the end.
    """

    seed: int = 0
    base_threshold: int = 4
    y_size: Optional[int] = None
    strengthened: bool = False
    dense_retries: int = 32
    check_levels: bool = True


@dataclass(frozen=True)
class TraceRecord:
    """One recursion step: which case fired, at what rank and degree.

    branch_i and branch_k identify the derivative branch (Z-variable
    ordinal and derivative order) that spawned the step; both are 0 for the
    top level and for pieces of the current level.
    """

    case: str  # "LOCAL" | "NONLOCAL" | "BASE"
    rank: int
    degree: int
    branch_i: int
    branch_k: int


@dataclass(frozen=True)
class DeborderReport:
    achieved_rank: int
    paper_bound: int
    verified: bool
    trace: Tuple[TraceRecord, ...]
    # (variable, order, summands kept, cap) per derivative branch; filled
    # only when config.strengthened is set
    derivative_counts: Tuple[Tuple[int, int, int, int], ...] = ()


def _bound_at(d: int, r: int, prec: int) -> int:
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        v = iv.mpf(d) * iv.mpf(r) ** (10 * iv.sqrt(r))
        hi = v.b
    finally:
        iv.prec = old
    # take the ceiling at enough working precision that the integer is exact
    with mpmath.workprec(prec + 16):
        return int(mpmath.ceil(hi))


def paper_bound(d: int, r: int) -> int:
    """Certified integer ceiling of d * r**(10 * sqrt(r)); d itself for r = 1.

    Evaluated in interval arithmetic and rounded up from the upper endpoint,
    so the result is always a true upper bound; the precision is doubled
    until two consecutive evaluations agree, which pins down the exact
    ceiling as well.
    """
    if d < 1 or r < 1:
        raise ValueError("degree and rank must be at least 1")
    if r == 1:
        return d
    bits = int(10 * math.sqrt(r) * math.log2(r) + math.log2(d)) + 80
    prec = max(160, bits)
    prev = None
    for _ in range(6):
        cur = _bound_at(d, r, prec)
        if prev is not None and cur == prev:
            return cur
        prev = cur
        prec *= 2
    raise InvariantError("interval ceiling did not stabilize under refinement")


def partition_into_local(
    B: BorderDecomposition, f: HomoPoly
) -> List[Tuple[BorderDecomposition, HomoPoly]]:
    """Group summands by the rational direction their forms degenerate to.

    Each group must converge at eps = 0 on its own; that is a structural
    hypothesis about the certificate (the full sum converging does not imply
    it), so a violating group raises CertificateCheckError with check tag
    "group-convergence".  Returns [(B_k, f_k)] in order of first appearance;
    group limits f_k may be zero, and they sum to f (asserted).
    """
    if B.rank() == 0:
        raise ValueError("cannot partition an empty decomposition")
    if f.nvars != B.nvars or f.degree != B.degree:
        raise ValueError("target polynomial shape does not match the decomposition")
    buckets: Dict[Tuple[Fraction, ...], List] = {}
    order: List[Tuple[Fraction, ...]] = []
    for w, form in B.summands:
        key = base_of_form(form).coefs
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append((w, form))
    out: List[Tuple[BorderDecomposition, HomoPoly]] = []
    total = HomoPoly.zero(f.nvars, f.degree)
    for key in order:
        Bk = BorderDecomposition(B.nvars, B.degree, tuple(buckets[key]))
        S = Bk.expand()
        if S.is_zero:
            fk = HomoPoly.zero(f.nvars, f.degree)
        else:
            val, wit = S.min_valuation()
            if val < 0:
                raise CertificateCheckError(
                    "group-convergence",
                    f"the group based at {LinearForm(key)!r} has a pole of order "
                    f"{-val} at eps = 0",
                    witness={"base": [str(c) for c in key], "monomial": list(wit)},
                )
            fk = S.limit_at_zero()
        total = total + fk
        out.append((Bk, fk))
    if total != f:
        raise InvariantError("group limits do not sum to the target")
    return out


def extract_local_cofactor(f: HomoPoly, rank: int) -> HomoPoly:
    """Exact quotient of f by x0**(degree - rank + 1).

    A local certificate of the given rank forces its limit to be divisible
    by that power of the base variable; divisibility is a checked hypothesis
    (tag "base-power-divisibility"), not an assumption.  The quotient has
    degree rank - 1.
    """
    if rank < 1:
        raise ValueError("rank must be at least 1")
    e = f.degree - rank + 1
    if e < 0:
        raise ValueError("rank exceeds degree + 1")
    if e == 0:
        return f
    acc = {}
    for m, c in f.items():
        if m[0] < e:
            raise CertificateCheckError(
                "base-power-divisibility",
                f"local limit is not divisible by x0^{e}",
                witness={"monomial": list(m), "required_power": e},
            )
        acc[(m[0] - e,) + m[1:]] = c
    return HomoPoly(f.nvars, f.degree - e, acc)


def split_and_group(
    g: HomoPoly, y: int
) -> Tuple[HomoPoly, Dict[Tuple[int, int], HomoPoly]]:
    """Write g = f0 + sum z_i**k * g_{i,k} over the Z variables y, y+1, ...

    f0 collects the monomials supported on the first y variables.  Every
    other monomial is charged to its first Z variable z_i (variable index
    y + i - 1, i starting at 1) and the exponent k it carries there, so each
    cofactor g_{i,k} involves no z_j with j <= i.  The identity is re-checked
    by exact reassembly.
    """
    if not 1 <= y < g.nvars:
        raise ValueError("Y block must be a proper nonempty prefix of the variables")
    f0acc: Dict[Tuple[int, ...], object] = {}
    table: Dict[Tuple[int, int], Dict[Tuple[int, ...], object]] = {}
    for m, c in g.items():
        zj = next((j for j in range(y, g.nvars) if m[j] > 0), None)
        if zj is None:
            f0acc[m] = c
            continue
        k = m[zj]
        q = m[:zj] + (0,) + m[zj + 1 :]
        table.setdefault((zj - y + 1, k), {})[q] = c
    f0 = HomoPoly(g.nvars, g.degree, f0acc)
    parts = {
        key: HomoPoly(g.nvars, g.degree - key[1], acc)
        for key, acc in sorted(table.items())
    }
    total = f0
    for (i, k), gik in parts.items():
        zk = tuple(k if j == y + i - 1 else 0 for j in range(g.nvars))
        total = total + HomoPoly.monomial(g.nvars, zk) * gik
    if total != g:
        raise InvariantError("Y/Z split does not reassemble to its input")
    return f0, parts


def dense_decompose(h: HomoPoly, seed: int = 0, retries: int = 32) -> WaringDecomposition:
    """Decompose h by solving a square linear system against random forms.

    Draws C(nvars + degree - 1, degree) integer forms with coefficients in
    [-9, 9], expands their powers in the monomial basis and solves for the
    weights; a singular draw is re-seeded deterministically.  Degree-1
    targets are themselves linear forms and need no solve.  The result is
    re-verified by exact expansion.
    """
    if h.is_zero:
        raise ValueError("dense decomposition of the zero polynomial")
    e = h.degree
    m = h.nvars
    if e < 1:
        raise ValueError("dense decomposition needs degree >= 1")
    if e == 1:
        coefs = tuple(h.coeff(tuple(1 if j == i else 0 for j in range(m))) for i in range(m))
        return WaringDecomposition(m, 1, ((Fraction(1), LinearForm(coefs)),))
    basis = monomials_of_degree(m, e)
    rhs = [h.coeff(mon) for mon in basis]
    M = len(basis)
    for attempt in range(retries):
        rng = random.Random(seed * 7919 + attempt)
        forms: List[LinearForm] = []
        while len(forms) < M:
            coefs = tuple(Fraction(rng.randint(-9, 9)) for _ in range(m))
            if any(coefs):
                forms.append(LinearForm(coefs))
        rows = [[None] * M for _ in range(M)]
        for j, form in enumerate(forms):
            p = form.power(e)
            for i, mon in enumerate(basis):
                rows[i][j] = p.coeff(mon)
        sol = rat_solve(rows, rhs)
        if sol is None:
            continue
        summands = tuple((w, form) for w, form in zip(sol, forms) if w != 0)
        W = WaringDecomposition(m, e, summands)
        if W.expand() != h:
            raise InvariantError("dense solve produced a non-matching decomposition")
        return W
    raise InvariantError(f"no solvable dense draw in {retries} attempts")


def _interpolation_nodes(count: int) -> List[Fraction]:
    out = [Fraction(0)]
    step = 1
    while len(out) < count:
        out.append(Fraction(step))
        if len(out) < count:
            out.append(Fraction(-step))
        step += 1
    return out


def multiply_by_power(W: WaringDecomposition, z: LinearForm, k: int) -> WaringDecomposition:
    """Exact decomposition of (the polynomial of W) times z**k.

    Per summand w * l**e: when l is parallel to z the product is a single
    power of z; otherwise l**e * z**k = sum_j c_j (l + t_j z)**(e+k) with
    nodes t_j = 0, 1, -1, 2, -2, ... and the c_j solving a transposed
    Vandermonde system whose right-hand side is delta_{s,k} / C(e+k, k).
    Duplicate output forms are merged.  The identity is re-checked by exact
    expansion.
    """
    if k < 1:
        raise ValueError("power must be at least 1")
    if not z.is_rational:
        raise ValueError("multiplier must be a rational form")
    if z.nvars != W.nvars:
        raise ValueError("multiplier arity mismatch")
    e = W.degree
    nodes = _interpolation_nodes(e + k + 1)
    rhs = [Fraction(0)] * (e + k + 1)
    rhs[k] = Fraction(1, comb(e + k, k))
    coeffs = solve_vandermonde(nodes, rhs)
    out = []
    for w, form in W.summands:
        if form.is_parallel(z):
            s = next(a / b for a, b in zip(form.coefs, z.coefs) if b != 0)
            out.append((w * s**e, z))
            continue
        for t, c in zip(nodes, coeffs):
            if c == 0:
                continue
            shifted = LinearForm(tuple(a + t * b for a, b in zip(form.coefs, z.coefs)))
            out.append((w * c, shifted))
    res = WaringDecomposition(W.nvars, e + k, tuple(out)).merged()
    if res.expand() != W.expand() * z.power(k):
        raise InvariantError("power multiplication changed the polynomial")
    return res


class _Session:
    """Mutable state threaded through one deborder run."""

    def __init__(self, cfg: DeborderConfig):
        self.cfg = cfg
        self.trace: List[TraceRecord] = []
        self.derivative_counts: List[Tuple[int, int, int, int]] = []
        self._dense_calls = 0

    def y_size(self, rank: int) -> int:
        if self.cfg.y_size is not None:
            return max(1, self.cfg.y_size)
        return max(1, math.isqrt(100 * rank))

    def next_dense_seed(self) -> int:
        s = self.cfg.seed + 104729 * self._dense_calls
        self._dense_calls += 1
        return s

    def record(self, case: str, rank: int, degree: int, bi: int, bk: int) -> None:
        self.trace.append(TraceRecord(case, rank, degree, bi, bk))


def deborder(
    f: HomoPoly, B: BorderDecomposition, config: Optional[DeborderConfig] = None
) -> Tuple[WaringDecomposition, DeborderReport]:
    """Convert a verified border certificate for f into an exact decomposition.

    Raises VerificationError if the input certificate does not verify,
    CertificateCheckError if one of the checked structural hypotheses fails
    on this certificate, and InvariantError on any internal inconsistency.
    The returned decomposition is re-verified; its rank never exceeds
    paper_bound(degree, input rank), which the report carries alongside the
    recursion trace.
    """
    cfg = config if config is not None else DeborderConfig()
    if f.nvars != B.nvars or f.degree != B.degree:
        raise ValueError("target polynomial shape does not match the certificate")
    if f.is_zero:
        raise ValueError("the zero polynomial needs no decomposition")
    chk = check_border(B, f)
    if not chk.ok:
        raise VerificationError(
            f"input certificate fails verification: {chk.reason}", witness=chk.witness
        )
    ses = _Session(cfg)
    W = _rec(f, B, ses, 0, 0, B.rank() + 1).merged()
    verified = verify_waring(W, f)
    if not verified:
        raise InvariantError("assembled decomposition does not expand to the target")
    bound = paper_bound(f.degree, B.rank())
    if W.rank() > bound:
        raise InvariantError(
            f"achieved rank {W.rank()} exceeds the certified ceiling {bound}"
        )
    report = DeborderReport(
        achieved_rank=W.rank(),
        paper_bound=bound,
        verified=verified,
        trace=tuple(ses.trace),
        derivative_counts=tuple(ses.derivative_counts),
    )
    return W, report


def _rec(
    f: HomoPoly, B: BorderDecomposition, ses: _Session, bi: int, bk: int, fuel: int
) -> WaringDecomposition:
    """One recursion level: essential variables, then the diagonalized solve."""
    if fuel <= 0:
        raise InvariantError("recursion did not terminate within the rank budget")
    f1, B1, T, N = essential_reduce(f, B)
    n = f.nvars
    if N < n:
        B1 = restrict_vars_zero(B1, range(N, n)).take_vars(N)
        f1 = f1.take_vars(N)
        W1 = _solve(f1, B1, ses, bi, bk, fuel)
        W = W1.extend_vars(n).substitute(rat_inverse(T))
    else:
        W = _solve(f, B, ses, bi, bk, fuel)
    if ses.cfg.check_levels and not verify_waring(W, f):
        raise InvariantError("level result does not expand to its target")
    return W


def _solve(
    f: HomoPoly, B: BorderDecomposition, ses: _Session, bi: int, bk: int, fuel: int
) -> WaringDecomposition:
    """Diagonalize and dispatch; f uses all of its variables essentially."""
    D = diagonalize(B, f)
    if D.p != f.nvars:
        raise InvariantError(
            f"{D.p} pivots for an essential target in {f.nvars} variables"
        )
    r = D.decomposition.rank()
    d = f.degree
    if d >= r - 1:
        WA = None
        for Bk, fk in partition_into_local(D.decomposition, D.limit):
            if fk.is_zero:
                continue
            Wk = _local(fk, Bk, ses, bi, bk, fuel)
            WA = Wk if WA is None else WA + Wk
        if WA is None:
            raise InvariantError("every group had zero limit against a nonzero target")
    else:
        WA = _nonlocal(D, ses, bi, bk, fuel)
    return WA.substitute(D.base_change_inv)


def _local(
    fk: HomoPoly, Bk: BorderDecomposition, ses: _Session, bi: int, bk: int, fuel: int
) -> WaringDecomposition:
    """Handle one group whose forms all degenerate to a common direction."""
    rk = Bk.rank()
    d = fk.degree
    ses.record("LOCAL", rk, d, bi, bk)
    Dk = diagonalize(Bk, fk)
    g = extract_local_cofactor(Dk.limit, rk)
    epow = d - rk + 1
    n = fk.nvars
    x0 = LinearForm.variable(n, 0)
    if rk == 1:
        c = g.coeff((0,) * n)
        W = WaringDecomposition(n, d, ((c, x0),))
    elif rk <= ses.cfg.base_threshold or Dk.p <= ses.y_size(rk):
        ses.record("BASE", rk, g.degree, bi, bk)
        Wg = dense_decompose(
            g.take_vars(Dk.p), ses.next_dense_seed(), ses.cfg.dense_retries
        ).extend_vars(n)
        W = multiply_by_power(Wg, x0, epow) if epow else Wg
    else:
        W = _split(g, epow, Dk, rk, ses, bi, bk, fuel)
    return W.substitute(Dk.base_change_inv)


def _nonlocal(
    D: DiagonalizedDecomposition, ses: _Session, bi: int, bk: int, fuel: int
) -> WaringDecomposition:
    """Degree below rank - 1: no partition; split or solve densely."""
    r = D.decomposition.rank()
    fA = D.limit
    if r <= ses.cfg.base_threshold or D.p <= ses.y_size(r):
        ses.record("BASE", r, fA.degree, bi, bk)
        return dense_decompose(
            fA.take_vars(D.p), ses.next_dense_seed(), ses.cfg.dense_retries
        ).extend_vars(fA.nvars)
    ses.record("NONLOCAL", r, fA.degree, bi, bk)
    return _split(fA, 0, D, r, ses, bi, bk, fuel)


def _split(
    g: HomoPoly,
    epow: int,
    D: DiagonalizedDecomposition,
    rr: int,
    ses: _Session,
    bi: int,
    bk: int,
    fuel: int,
) -> WaringDecomposition:
    """Decompose x0**epow * g by splitting g over a Y/Z variable block.

    The Y part goes to the dense solver.  The cofactor of z_i**k recurses on
    a certificate made by differentiating the staircase summands k times in
    z_i, restricting z_1..z_i to zero and dividing the weights by k!; the
    piece is reassembled by interpolation against z_i**k.
    """
    n = g.nvars
    y = ses.y_size(rr)
    d = D.decomposition.degree
    x0 = LinearForm.variable(n, 0)
    f0, parts = split_and_group(g, y)
    total: Optional[WaringDecomposition] = None
    if not f0.is_zero:
        ses.record("BASE", rr, f0.degree, bi, bk)
        W0 = dense_decompose(
            f0.take_vars(y), ses.next_dense_seed(), ses.cfg.dense_retries
        ).extend_vars(n)
        if epow:
            W0 = multiply_by_power(W0, x0, epow)
        total = W0
    for (i, k), gik in parts.items():
        zvar = y + i - 1
        z = LinearForm.variable(n, zvar)
        if epow:
            xp = tuple(epow if j == 0 else 0 for j in range(n))
            h = HomoPoly.monomial(n, xp) * gik
        else:
            h = gik
        if h.degree == 0:
            c = h.coeff((0,) * n)
            piece = WaringDecomposition(n, d, ((c, z),))
        else:
            Bik = derivative_decomposition(D, zvar, k)
            Bik = restrict_vars_zero(Bik, range(y, zvar + 1))
            Bik = Bik.scale_weights(Fraction(1, factorial(k)))
            res = check_border(Bik, h)
            if not res.ok:
                raise InvariantError(
                    f"branch certificate (z_{i}, order {k}) fails: {res.reason}"
                )
            if ses.cfg.strengthened:
                # re-certification only; diagonalize re-checks the staircase
                # and the limit on the branch certificate
                diagonalize(Bik, h)
                ses.derivative_counts.append(
                    (zvar, k, Bik.rank(), D.decomposition.rank() - zvar)
                )
            Wh = _rec(h, Bik, ses, i, k, fuel - 1)
            piece = multiply_by_power(Wh, z, k)
        total = piece if total is None else total + piece
    if total is None:
        raise InvariantError("Y/Z split produced no pieces for a nonzero polynomial")
    return total


__all__ = [
    "DeborderConfig",
    "DeborderReport",
    "TraceRecord",
    "deborder",
    "dense_decompose",
    "extract_local_cofactor",
    "multiply_by_power",
    "paper_bound",
    "partition_into_local",
    "split_and_group",
]
