"""Finite, explicitly computable models for the recurrence applications:
diagonal commuting unitaries (mean averages along primes), torus rotations
with exact box-overlap volumes, periodic integer sets with exact difference
sets, divisibility-filtered subsequences, and closed-form spectral probes.

Index sequences are d_n = (P_1(p_n + i), ..., P_l(p_n + i),
[xi_1(p_n)], ..., [xi_k(p_n)]) with i in {-1, 0, +1}; the shift applies only
to the polynomial coordinates, never inside xi.  Floors use the documented
near-integer tie-break and log boundary events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ddarith import floor_with_boundary
from .hardy import BOUNDARY_TOL, HardyExpr, evaluate_array
from .primes import PrimeTable


# -- index sequence generators ---------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    """Generator of integer index vectors along primes.

    Coordinates: (p + shift)^j for j = 1..poly_degree, then the floors of
    each expression at p; optionally composed with an integer matrix L.
    """

    exprs: tuple[HardyExpr, ...] = ()
    poly_degree: int = 0
    shift: int = 0
    L: tuple[tuple[int, ...], ...] | None = None  # m x (l + k), None = identity

    def __post_init__(self):
        if self.shift not in (-1, 0, 1):
            raise ValueError("shift must be -1, 0 or +1")
        if self.poly_degree < 0:
            raise ValueError("poly_degree must be >= 0")
        if self.poly_degree == 0 and not self.exprs:
            raise ValueError("spec generates no coordinates")

    @property
    def input_dim(self) -> int:
        return self.poly_degree + len(self.exprs)

    @property
    def output_dim(self) -> int:
        return len(self.L) if self.L is not None else self.input_dim


def index_vectors(spec: SequenceSpec, N: int, table: PrimeTable,
                  tol: float = BOUNDARY_TOL):
    """(N x m) int64 matrix of index vectors over the first N primes, plus
    the count of near-integer floor boundary events."""
    ps = table.first(N)
    cols = []
    if spec.poly_degree:
        base = ps + spec.shift
        if spec.poly_degree * math.log2(float(max(base.max(), 2))) > 62:
            raise OverflowError("polynomial coordinate exceeds int64")
        acc = np.ones_like(base)
        for _ in range(spec.poly_degree):
            acc = acc * base
            cols.append(acc.copy())
    events = 0
    for expr in spec.exprs:
        vals = evaluate_array(expr, ps.astype(np.float64), "compensated")
        fl, ev = floor_with_boundary(vals, tol)
        events += ev
        cols.append(fl)
    d = np.stack(cols, axis=1)
    if spec.L is not None:
        L = np.asarray(spec.L, dtype=np.int64)
        if L.shape[1] != d.shape[1]:
            raise ValueError(
                f"L has {L.shape[1]} columns, sequence has {d.shape[1]} coordinates"
            )
        d = d @ L.T
    return d, events


def prime_index_sequence(exprs: Sequence[HardyExpr], n_max: int,
                         table: PrimeTable, tol: float = BOUNDARY_TOL):
    """d_n = ([xi_1(p_n)], ..., [xi_k(p_n)]) for n = 1..n_max."""
    spec = SequenceSpec(exprs=tuple(exprs))
    return index_vectors(spec, n_max, table, tol)


# -- diagonal unitary systems ------------------------------------------------------


@dataclass(frozen=True)
class DiagonalUnitarySystem:
    """k commuting unitaries acting diagonally on C^dim: operator i
    multiplies basis vector j by e(frequencies[j, i]).  A basis vector is
    invariant under every operator exactly when its frequency row is zero.
    """

    frequencies: np.ndarray  # dim x k, entries in [0, 1)
    f: np.ndarray            # complex vector of length dim

    def __post_init__(self):
        freq = np.asarray(self.frequencies, dtype=np.float64)
        if freq.ndim != 2:
            raise ValueError("frequencies must be dim x k")
        if np.any(freq < 0.0) or np.any(freq >= 1.0):
            raise ValueError("frequencies must lie in [0, 1)")
        object.__setattr__(self, "frequencies", freq)
        fv = np.asarray(self.f, dtype=complex)
        if fv.shape != (freq.shape[0],):
            raise ValueError("f must have length dim")
        object.__setattr__(self, "f", fv)

    @property
    def dim(self) -> int:
        return self.frequencies.shape[0]

    @property
    def k(self) -> int:
        return self.frequencies.shape[1]

    @property
    def invariant_rows(self) -> np.ndarray:
        return np.all(self.frequencies == 0.0, axis=1)


@dataclass(frozen=True)
class ErgodicAverageResult:
    average: np.ndarray
    projection: np.ndarray
    deviation: float
    boundary_events: int


def ergodic_average(sys: DiagonalUnitarySystem, exprs: Sequence[HardyExpr],
                    N: int, table: PrimeTable) -> ErgodicAverageResult:
    """(1/N) sum_n U_1^{d_n,1} ... U_k^{d_n,k} f per basis coordinate, with
    the projection onto the joint invariant subspace and their distance.

    Invariant rows are averaged exactly (every term is f_j), so an
    all-invariant system reports deviation 0.0 identically.
    """
    if len(exprs) != sys.k:
        raise ValueError(f"system has k={sys.k} operators, {len(exprs)} exprs given")
    d, events = prime_index_sequence(exprs, N, table)
    df = d.astype(np.float64)
    invariant = sys.invariant_rows
    avg = np.zeros(sys.dim, dtype=complex)
    proj = np.where(invariant, sys.f, 0.0)
    for j in range(sys.dim):
        if invariant[j]:
            avg[j] = sys.f[j]
            continue
        phase = df @ sys.frequencies[j]
        phase -= np.rint(phase)
        w = 2.0 * np.pi * phase
        avg[j] = (np.sum(np.cos(w)) + 1j * np.sum(np.sin(w))) / N * sys.f[j]
    deviation = float(np.linalg.norm(avg - proj))
    return ErgodicAverageResult(average=avg, projection=proj,
                                deviation=deviation, boundary_events=events)


# -- torus systems ------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        lo = tuple(Fraction(v) for v in self.lo)
        hi = tuple(Fraction(v) for v in self.hi)
        if len(lo) != len(hi):
            raise ValueError("corner dimensions differ")
        for a, b in zip(lo, hi):
            if not (0 <= a < b <= 1):
                raise ValueError("boxes need 0 <= lo < hi <= 1 per dimension")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v


def _boxes_overlap(b1: Box, b2: Box) -> bool:
    return all(a1 < b2_ and a2 < b1_ for (a1, b1_), (a2, b2_)
               in zip(zip(b1.lo, b1.hi), zip(b2.lo, b2.hi)))


@dataclass(frozen=True)
class TorusSystem:
    """m commuting rotations of the m-torus, T_i x = x + alpha_i, acting on
    a set A that is a disjoint union of rational boxes (exact measure)."""

    alphas: np.ndarray  # m x m; row i is the translation vector of T_i
    boxes: tuple[Box, ...]

    def __post_init__(self):
        al = np.asarray(self.alphas, dtype=np.float64)
        if al.ndim != 2 or al.shape[0] != al.shape[1]:
            raise ValueError("alphas must be an m x m matrix of rotation vectors")
        if np.any(al < 0.0) or np.any(al >= 1.0):
            raise ValueError("rotation entries must lie in [0, 1)")
        object.__setattr__(self, "alphas", al)
        boxes = tuple(self.boxes)
        if not boxes:
            raise ValueError("A must contain at least one box")
        m = al.shape[0]
        for b in boxes:
            if len(b.lo) != m:
                raise ValueError("box dimension does not match torus dimension")
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if _boxes_overlap(boxes[i], boxes[j]):
                    raise ValueError("boxes must be pairwise disjoint")
        object.__setattr__(self, "boxes", boxes)

    @property
    def m(self) -> int:
        return self.alphas.shape[0]

    @property
    def mu_A(self) -> Fraction:
        return sum((b.volume for b in self.boxes), Fraction(0))


def _circular_overlap(a: float, b: float, c: float, d: float,
                      shift: np.ndarray) -> np.ndarray:
    """Length of [a,b) intersected with the circle arc [c,d) - shift, per
    shift value.  Input intervals do not wrap; the shifted one may."""
    ell = d - c
    u = (c - shift) % 1.0
    top = u + ell
    first = np.maximum(0.0, np.minimum(b, top) - np.maximum(a, u))
    wrapped = np.maximum(0.0, top - 1.0)
    second = np.maximum(0.0, np.minimum(b, wrapped) - a)
    return first + second


def _overlap_volumes(sysm: TorusSystem, shifts: np.ndarray) -> np.ndarray:
    """vol(A intersect (A - s)) for each shift row s, exact per-dimension
    interval bookkeeping (no sampling)."""
    n = shifts.shape[0]
    total = np.zeros(n)
    for b1 in sysm.boxes:
        for b2 in sysm.boxes:
            piece = np.ones(n)
            for dim in range(sysm.m):
                piece *= _circular_overlap(
                    float(b1.lo[dim]), float(b1.hi[dim]),
                    float(b2.lo[dim]), float(b2.hi[dim]),
                    shifts[:, dim],
                )
                if not np.any(piece):
                    break
            total += piece
    return total


@dataclass(frozen=True)
class RecurrenceResult:
    average: float
    mu_sq: float
    margin: float
    N: int
    boundary_events: int = 0


def torus_recurrence_average(sysm: TorusSystem, spec: SequenceSpec, N: int,
                             table: PrimeTable) -> RecurrenceResult:
    """Average over n <= N of vol(A intersect T_1^{-psi_1} ... T_m^{-psi_m} A)
    with psi = spec(p_n), against mu(A)^2."""
    if spec.output_dim != sysm.m:
        raise ValueError(
            f"spec produces {spec.output_dim} coordinates, torus has m={sysm.m}"
        )
    psi, events = index_vectors(spec, N, table)
    shifts = (psi.astype(np.float64) @ sysm.alphas) % 1.0
    vols = _overlap_volumes(sysm, shifts)
    avg = float(np.mean(vols))
    mu2 = float(sysm.mu_A) ** 2
    return RecurrenceResult(average=avg, mu_sq=mu2, margin=avg - mu2, N=N,
                            boundary_events=events)


# -- periodic integer sets -----------------------------------------------------------


@dataclass(frozen=True)
class LatticeSet:
    """Periodic subset of Z^k given by a boolean mask over the fundamental
    box prod [0, period_i); the density is exact and equals the upper
    density for periodic sets."""

    period: tuple[int, ...]
    mask: np.ndarray

    def __post_init__(self):
        period = tuple(int(p) for p in self.period)
        if any(p < 1 for p in period):
            raise ValueError("period entries must be >= 1")
        mask = np.asarray(self.mask, dtype=bool).reshape(period)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "mask", mask)

    @property
    def k(self) -> int:
        return len(self.period)

    @property
    def density(self) -> Fraction:
        cells = 1
        for p in self.period:
            cells *= p
        return Fraction(int(np.count_nonzero(self.mask)), cells)

    def difference_mask(self) -> np.ndarray:
        """Indicator of E - E over the fundamental box (exact, finite)."""
        cells = np.argwhere(self.mask)
        out = np.zeros(self.period, dtype=bool)
        period = np.asarray(self.period, dtype=np.int64)
        for c in cells:
            diffs = (c[None, :] - cells) % period
            out[tuple(diffs.T)] = True
        return out


@dataclass(frozen=True)
class LatticeScanResult:
    hit_density: float
    dstar_sq: float
    hits: int
    N: int
    boundary_events: int = 0

    @property
    def margin(self) -> float:
        return self.hit_density - self.dstar_sq


def lattice_recurrence_scan(E: LatticeSet, spec: SequenceSpec, N: int,
                            table: PrimeTable) -> LatticeScanResult:
    """Density of n <= N with d_n in E - E, against density(E)^2.

    Membership in E - E for periodic E is a lookup in the precomputed
    difference mask.
    """
    if spec.output_dim != E.k:
        raise ValueError("sequence dimension does not match the set")
    d, events = index_vectors(spec, N, table)
    diff = E.difference_mask()
    period = np.asarray(E.period, dtype=np.int64)
    idx = tuple((d % period).T)
    hits = int(np.count_nonzero(diff[idx]))
    dens = float(E.density)
    return LatticeScanResult(hit_density=hits / N, dstar_sq=dens * dens,
                             hits=hits, N=N, boundary_events=events)


# -- divisibility-filtered recurrence --------------------------------------------------


@dataclass(frozen=True)
class FilteredResult:
    r: int
    relative_density: float
    count: int
    N: int
    average: float | None
    reference_sq: float
    margin: float | None
    valid: bool
    boundary_events: int = 0


def filtered_recurrence(target, r: int, spec: SequenceSpec, N: int,
                        table: PrimeTable) -> FilteredResult:
    """Recurrence average restricted to indices n whose whole vector d_n is
    divisible by r; reports the relative density of the filtered
    subsequence alongside the filtered average.  r = 1 is the unfiltered
    scan.  An empty filtered set is reported, not raised."""
    if r < 1:
        raise ValueError("r must be >= 1")
    d, events = index_vectors(spec, N, table)
    keep = np.all(d % r == 0, axis=1)
    count = int(np.count_nonzero(keep))
    rel = count / N
    if isinstance(target, TorusSystem):
        if spec.output_dim != target.m:
            raise ValueError("dimension mismatch")
        ref = float(target.mu_A) ** 2
        if count == 0:
            return FilteredResult(r, rel, 0, N, None, ref, None, False, events)
        shifts = (d[keep].astype(np.float64) @ target.alphas) % 1.0
        avg = float(np.mean(_overlap_volumes(target, shifts)))
        return FilteredResult(r, rel, count, N, avg, ref, avg - ref, True, events)
    if isinstance(target, LatticeSet):
        if spec.output_dim != target.k:
            raise ValueError("dimension mismatch")
        ref = float(target.density) ** 2
        if count == 0:
            return FilteredResult(r, rel, 0, N, None, ref, None, False, events)
        diff = target.difference_mask()
        period = np.asarray(target.period, dtype=np.int64)
        idx = tuple((d[keep] % period).T)
        avg = float(np.count_nonzero(diff[idx])) / count
        return FilteredResult(r, rel, count, N, avg, ref, avg - ref, True, events)
    raise TypeError("target must be a TorusSystem or a LatticeSet")


# -- spectral probes ------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralMeasure:
    """Positive finite measure on the k-torus with closed-form Fourier
    transform: atoms plus an optional trigonometric-polynomial density
    (finite Fourier coefficient table)."""

    k: int
    atoms: tuple[tuple[tuple[Fraction, ...], float], ...] = ()
    ac_table: tuple[tuple[tuple[int, ...], complex], ...] = ()

    def __post_init__(self):
        atoms = []
        for loc, mass in self.atoms:
            loc = tuple(Fraction(v) for v in loc)
            if len(loc) != self.k:
                raise ValueError("atom location dimension mismatch")
            if any(not (0 <= v < 1) for v in loc):
                raise ValueError("atom locations must lie in [0, 1)^k")
            if mass <= 0:
                raise ValueError("atom masses must be positive")
            atoms.append((loc, float(mass)))
        object.__setattr__(self, "atoms", tuple(atoms))
        table = []
        for d, c in self.ac_table:
            d = tuple(int(v) for v in d)
            if len(d) != self.k:
                raise ValueError("density coefficient dimension mismatch")
            table.append((d, complex(c)))
        object.__setattr__(self, "ac_table", tuple(table))
        if not self.atoms and not self.ac_table:
            raise ValueError("measure must have positive total mass")

    @property
    def mass_at_zero(self) -> float:
        zero = tuple(Fraction(0) for _ in range(self.k))
        return math.fsum(m for loc, m in self.atoms if loc == zero)

    def fourier(self, d: np.ndarray) -> np.ndarray:
        """sigma-hat(d) = sum masses e(-d.loc) + density coefficient lookup,
        for an (N x k) integer matrix of frequencies."""
        d = np.asarray(d, dtype=np.int64)
        out = np.zeros(d.shape[0], dtype=complex)
        for loc, mass in self.atoms:
            phase = np.zeros(d.shape[0])
            for i, v in enumerate(loc):
                if v != 0:
                    phase += (d[:, i] % v.denominator) * (v.numerator / v.denominator)
            w = -2.0 * np.pi * phase
            out += mass * (np.cos(w) + 1j * np.sin(w))
        for key, c in self.ac_table:
            sel = np.all(d == np.asarray(key, dtype=np.int64), axis=1)
            out[sel] += c
        return out


@dataclass(frozen=True)
class FcPlusResult:
    mass_at_zero: float
    final_tail_max: float
    envelope: tuple[tuple[int, float], ...]  # (n, max_{n <= m <= N} |sigma-hat(d_m)|)
    N: int
    boundary_events: int = 0


def fcplus_probe(sigma: SpectralMeasure, spec: SequenceSpec, N: int,
                 table: PrimeTable) -> FcPlusResult:
    """Evaluate sigma-hat along the index sequence and report the tail-max
    envelope; the acceptance comparison is mass_at_zero against the tail
    max over the last tenth of the horizon."""
    if spec.output_dim != sigma.k:
        raise ValueError("sequence dimension does not match the measure")
    d, events = index_vectors(spec, N, table)
    vals = np.abs(sigma.fourier(d))
    tail = np.maximum.accumulate(vals[::-1])[::-1]
    checkpoints = sorted({1, N} | {min(N, 10**j) for j in range(1, 12) if 10**j <= N}
                         | {max(1, int(0.9 * N))})
    envelope = tuple((n, float(tail[n - 1])) for n in checkpoints)
    final = float(tail[max(1, int(0.9 * N)) - 1])
    return FcPlusResult(mass_at_zero=sigma.mass_at_zero, final_tail_max=final,
                        envelope=envelope, N=N, boundary_events=events)


# -- residue indicator ----------------------------------------------------------------


@dataclass(frozen=True)
class ResidueIndicatorResult:
    via_sum: complex
    direct: int
    agreement: float  # |via_sum - direct|

    @property
    def agrees(self) -> bool:
        return self.agreement < 1e-12


def residue_indicator_check(q: int, b: int, n: int) -> ResidueIndicatorResult:
    """(1/q) sum_{j=1}^q e((n-b) j / q) against the direct congruence
    indicator of n = b mod q; the two agree exactly up to rounding."""
    if not (1 <= b <= q):
        raise ValueError("need 1 <= b <= q")
    j = np.arange(1, q + 1, dtype=np.int64)
    residues = ((n - b) * j) % q
    w = 2.0 * np.pi * (residues / q)
    s = complex(np.sum(np.cos(w)) + 1j * np.sum(np.sin(w))) / q
    direct = 1 if (n - b) % q == 0 else 0
    return ResidueIndicatorResult(via_sum=s, direct=direct,
                                  agreement=abs(s - direct))
