"""
Exact Birkhoff averages along polynomial orbits of Toeplitz words.

Points of the subshift are represented as shifts sigma^r x of the word
generated by a viable pair.  Windows that touch a hole of the top level are
bracketed by the extreme values of F over their completions, so every
average is an exact rational interval.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .constructions import IwanikBlocks, ConstructionError
from .ntcore import (
    IntPolynomial,
    est2_bound,
    factorize,
    is_permutation_mod,
    max_count_over_shifts,
)
from .words import (
    PeriodCertificate,
    Symbol,
    Verdict,
    ViablePair,
    essential_period_certificate,
)

CHUNK = 1 << 21


class MissingCheckpoints(ValueError):
    pass


class NotPermutation(ValueError):
    pass


# ----------------------------------------------------------------------------
# cylinder functions


@dataclass
class CylinderFunction:
    """F(y) = table[y[-C..C]] with the window read as bits, y[-C] most significant."""

    radius: int
    table: tuple[Fraction, ...]
    name: str = "F"
    _lo: np.ndarray | None = field(default=None, repr=False)
    _hi: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        size = 2 ** (2 * self.radius + 1)
        if len(self.table) != size:
            raise ValueError(f"table needs {size} entries for radius {self.radius}")
        self.table = tuple(Fraction(v) for v in self.table)

    @classmethod
    def G(cls) -> "CylinderFunction":
        return cls(0, (Fraction(1), Fraction(-1)), "G")

    @classmethod
    def indicator(cls, window: str) -> "CylinderFunction":
        """Indicator of the cylinder y[-C..C] == window (odd length)."""
        if len(window) % 2 == 0:
            raise ValueError("window length must be odd")
        C = len(window) // 2
        idx = int(window, 2)
        tab = [Fraction(0)] * 2 ** len(window)
        tab[idx] = Fraction(1)
        return cls(C, tuple(tab), f"1[{window}]")

    @classmethod
    def from_callable(cls, radius: int, f: Callable[[str], object], name="F") -> "CylinderFunction":
        L = 2 * radius + 1
        return cls(radius, tuple(Fraction(f(format(i, f"0{L}b"))) for i in range(2**L)), name)

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def value(self, window: str) -> Fraction:
        return self.table[int(window, 2)]

    @property
    def value_range(self) -> Fraction:
        return max(self.table) - min(self.table)

    def _extremes(self):
        """Min / max of F over completions of every {0,1,?} window, base-3 indexed."""
        if self._lo is None:
            L = self.width
            denom = math.lcm(*(v.denominator for v in self.table))
            vals = [int(v * denom) for v in self.table]
            lo = np.empty(3**L, dtype=object)
            hi = np.empty(3**L, dtype=object)
            for code, syms in enumerate(itertools.product((0, 1, 2), repeat=L)):
                opts = [(0, 1) if s == 2 else (s,) for s in syms]
                cands = [vals[int("".join(map(str, bits)), 2)] for bits in itertools.product(*opts)]
                lo[code], hi[code] = min(cands), max(cands)
            self._lo, self._hi, self._denom = lo, hi, denom
        return self._lo, self._hi, self._denom


@dataclass
class IntervalValue:
    low: Fraction
    high: Fraction
    resolved: int
    unresolved: int

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    @property
    def is_point(self) -> bool:
        return self.low == self.high

    def __contains__(self, v) -> bool:
        return self.low <= v <= self.high

    def as_row(self, N) -> list[str]:
        return [str(N), frac_str(self.low), frac_str(self.high), str(self.resolved), str(self.unresolved)]


def frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def frac_dec(v: Fraction, digits: int = 12) -> str:
    return f"{float(v):.{digits}g}"


# ----------------------------------------------------------------------------
# sums along P


def _window_codes(pair: ViablePair, centers: np.ndarray, C: int) -> np.ndarray:
    code = np.zeros(len(centers), dtype=np.int64)
    for j in range(-C, C + 1):
        code = code * 3 + pair.lookup(centers + j).astype(np.int64)
    return code


def _pattern_counts(pair: ViablePair, P: IntPolynomial, r: int, start: int, stop: int, C: int) -> np.ndarray:
    """Histogram of base-3 window codes at P(m) + r for m in [start, stop)."""
    n = pair.top.n
    L = 2 * C + 1
    counts = np.zeros(3**L, dtype=np.int64)
    for lo in range(start, stop, CHUNK):
        ms = np.arange(lo, min(stop, lo + CHUNK), dtype=np.int64)
        pos = (np.asarray(P.eval_mod(ms % n, n), dtype=np.int64) + r) % n
        counts += np.bincount(_window_codes(pair, pos, C), minlength=3**L)
    return counts


def orbit_pattern_counts(pair: ViablePair, P: IntPolynomial, r: int, N: int, C: int) -> np.ndarray:
    """Window-code histogram over m in [0, N); P(m) mod n_T has period n_T in m."""
    n = pair.top.n
    r %= n
    q, b = divmod(N, n)
    counts = np.zeros(3 ** (2 * C + 1), dtype=np.int64)
    if q:
        counts += q * _pattern_counts(pair, P, r, 0, n, C)
    if b:
        counts += _pattern_counts(pair, P, r, 0, b, C)
    return counts


def _interval_from_counts(counts: np.ndarray, F: CylinderFunction, N: int) -> IntervalValue:
    lo, hi, denom = F._extremes()
    nz = np.flatnonzero(counts)
    low = sum(int(counts[c]) * lo[c] for c in nz)
    high = sum(int(counts[c]) * hi[c] for c in nz)
    hole_free = _hole_free_codes(F.width)
    resolved = int(counts[hole_free].sum())
    return IntervalValue(
        Fraction(low, denom * N), Fraction(high, denom * N), resolved, int(counts.sum()) - resolved
    )


_HOLE_FREE_CACHE: dict[int, np.ndarray] = {}


def _hole_free_codes(L: int) -> np.ndarray:
    if L not in _HOLE_FREE_CACHE:
        codes = [c for c, syms in enumerate(itertools.product((0, 1, 2), repeat=L)) if 2 not in syms]
        _HOLE_FREE_CACHE[L] = np.array(codes, dtype=np.int64)
    return _HOLE_FREE_CACHE[L]


def birkhoff_sum(pair, P, r, N, F) -> tuple[Fraction, Fraction]:
    """Exact [low, high] of sum_{m<N} F(sigma^{P(m)+r} x)."""
    iv = birkhoff_average(pair, P, r, N, F)
    return iv.low * N, iv.high * N


def birkhoff_average(
    pair: ViablePair, P: IntPolynomial, r: int, N: int, F: CylinderFunction
) -> IntervalValue:
    """(1/N) sum_{m<N} F(sigma^{P(m)+r} x) as an exact rational interval."""
    if N < 1:
        raise ValueError("N must be positive")
    counts = orbit_pattern_counts(pair, P, r, N, F.radius)
    return _interval_from_counts(counts, F, N)


# ----------------------------------------------------------------------------
# checkpoints


@dataclass
class CheckpointEntry:
    t: int
    C: int
    average: IntervalValue | None
    sign: int  # +1, -1, or 0 when undetermined
    gap: Fraction  # lower bound on |average|


@dataclass
class CheckpointReport:
    polynomial: IntPolynomial
    entries: list[CheckpointEntry]

    @property
    def alternates(self) -> bool:
        """Even t positive, odd t negative, at every checkpoint."""
        return bool(self.entries) and all(
            e.sign == (1 if e.t % 2 == 0 else -1) for e in self.entries
        )

    @property
    def min_gap(self) -> Fraction:
        return min((e.gap for e in self.entries), default=Fraction(0))

    def as_dict(self) -> dict:
        return {
            "report_version": 1,
            "polynomial": str(self.polynomial),
            "alternates": self.alternates,
            "min_gap": frac_str(self.min_gap),
            "checkpoints": [
                {
                    "t": e.t,
                    "C_t": e.C,
                    "low": frac_str(e.average.low) if e.average else None,
                    "high": frac_str(e.average.high) if e.average else None,
                    "low_decimal": frac_dec(e.average.low) if e.average else None,
                    "high_decimal": frac_dec(e.average.high) if e.average else None,
                    "unresolved": e.average.unresolved if e.average else None,
                    "sign": e.sign,
                    "gap": frac_str(e.gap),
                }
                for e in self.entries
            ],
        }


def checkpoint_polynomial(pair: ViablePair) -> IntPolynomial:
    meta = pair.construction
    kind = (meta.get("kind") or "").upper()
    if kind in ("A", "B"):
        return IntPolynomial.monomial(int(meta["k"]))
    if kind == "IWANIK":
        return IntPolynomial(tuple(meta["normalized"]))
    raise MissingCheckpoints("pair carries no construction metadata")


def checkpoint_report(pair: ViablePair, P: IntPolynomial | int | None = None) -> CheckpointReport:
    """Average of G along P over m in [0, C_t) at every recorded checkpoint."""
    if not pair.checkpoints:
        raise MissingCheckpoints("pair has no checkpoints")
    if P is None:
        P = checkpoint_polynomial(pair)
    elif isinstance(P, int):
        P = IntPolynomial.monomial(P)
    G = CylinderFunction.G()
    entries = []
    for t, C in enumerate(pair.checkpoints):
        if C <= 0:
            entries.append(CheckpointEntry(t, C, None, 0, Fraction(0)))
            continue
        iv = birkhoff_average(pair, P, 0, C, G)
        sign = 1 if iv.low > 0 else (-1 if iv.high < 0 else 0)
        gap = iv.low if sign > 0 else (-iv.high if sign < 0 else Fraction(0))
        entries.append(CheckpointEntry(t, C, iv, sign, gap))
    return CheckpointReport(P, entries)


# ----------------------------------------------------------------------------
# convergence diagnostics


def orbit_histogram(P: IntPolynomial, n: int) -> np.ndarray:
    """c(v) = |{i < n : P(i) = v mod n}|."""
    vals = np.asarray(P.eval_mod(np.arange(n, dtype=np.int64), n), dtype=np.int64)
    return np.bincount(vals, minlength=n).astype(np.int64)


@dataclass
class ShiftDensity:
    value: int
    argmax: int
    exact: bool  # False: sampled shifts, value is only a lower bound
    n: int
    est2: float | None = None  # n (2/3)^{ln omega(n)}, construction B only

    @property
    def within_est2(self) -> bool | None:
        return None if self.est2 is None else self.value <= self.est2


def shift_question_density(pair: ViablePair, t: int, P: IntPolynomial, **kw) -> ShiftDensity:
    """max over a of |{i < n_t : X_t(P(i) + a) = ?}| and the maximizing a."""
    lv = pair.levels[t]
    holes = (lv.word.data == Symbol.HOLE).astype(np.int64)
    res = max_count_over_shifts(orbit_histogram(P, lv.n), holes, **kw)
    est2 = None
    if (pair.construction.get("kind") or "").upper() == "B" and lv.n > 1:
        est2 = est2_bound(lv.n)
    return ShiftDensity(res.value, res.argmax, res.exact, lv.n, est2)


@dataclass
class Oscillation:
    shift: int
    N1: int
    N2: int
    value: Fraction  # worst case over the two intervals
    bound: Fraction
    holds: bool


@dataclass
class ProbeReport:
    level: int
    n: int
    density: ShiftDensity
    eps: Fraction
    averages: dict[tuple[int, int], IntervalValue]
    oscillations: list[Oscillation]

    @property
    def ok(self) -> bool:
        return all(o.holds for o in self.oscillations)

    @property
    def max_oscillation(self) -> Fraction:
        return max((o.value for o in self.oscillations), default=Fraction(0))


def worst_gap(a: IntervalValue, b: IntervalValue) -> Fraction:
    return max(abs(a.high - b.low), abs(b.high - a.low))


def convergence_probe(
    pair: ViablePair,
    P: IntPolynomial,
    F: CylinderFunction,
    shifts: Sequence[int],
    grid: Sequence[int],
    t: int | None = None,
    slack: bool = True,
    workers: int = 1,
) -> ProbeReport:
    """Oscillation of averages along P between consecutive grid points.

    With eps = (2C+1) * (shift question density at level t) / n_t, each
    oscillation is compared with 8 eps, plus 2 n_t / N for the larger grid
    point of the pair when ``slack`` is set (grid points that are not past
    the (1/eps + 1) n_t threshold).
    """
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    t = pair.height if t is None else t
    n = pair.levels[t].n
    dens = shift_question_density(pair, t, P)
    eps = Fraction(F.width * dens.value, n)
    scale = max(F.value_range, Fraction(1))
    jobs = [(r, N) for r in shifts for N in grid]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as ex:
            vals = list(ex.map(lambda job: birkhoff_average(pair, P, job[0], job[1], F), jobs))
    else:
        vals = [birkhoff_average(pair, P, r, N, F) for r, N in jobs]
    avgs = dict(zip(jobs, vals))
    osc = []
    for r in shifts:
        for N1, N2 in zip(grid, grid[1:]):
            val = worst_gap(avgs[(r, N1)], avgs[(r, N2)])
            bound = 8 * eps * scale
            if slack:
                bound += Fraction(2 * n, N2) * scale
            osc.append(Oscillation(r, N1, N2, val, bound, val <= bound))
    return ProbeReport(t, n, dens, eps, avgs, osc)


# ----------------------------------------------------------------------------
# equidistribution


@dataclass
class EquiReport:
    orbit: IntervalValue
    measure: IntervalValue
    tol: Fraction
    passed: bool
    identity_diff: Fraction  # worst-case |sum along P+r - sum along identity| at N = n_T
    identity_bound: Fraction
    identity_holds: bool


def equidistribution_check(
    pair: ViablePair, P: IntPolynomial, F: CylinderFunction, tol: Fraction, r: int = 0
) -> EquiReport:
    """Compare the orbit average along P at N = n_T with the block-frequency
    estimate of the integral of F, i.e. the cyclic average of F over X_T."""
    n = pair.top.n
    if not is_permutation_mod(P, n):
        raise NotPermutation(f"{P} is not a permutation modulo {n}")
    orbit = birkhoff_average(pair, P, r, n, F)
    measure = birkhoff_average(pair, IntPolynomial.x(), 0, n, F)
    gap = max(Fraction(0), max(orbit.low, measure.low) - min(orbit.high, measure.high))
    passed = gap <= tol
    diff = worst_gap(orbit, measure) * n
    holes = pair.top.word.hole_count
    bound = 2 * F.width * holes * F.value_range
    return EquiReport(orbit, measure, Fraction(tol), passed, diff, bound, diff <= bound)


# ----------------------------------------------------------------------------
# residues and density


def residues_covered(source, s: int) -> tuple[bool, list[int]]:
    """Whether a polynomial (over one period) or integer sequence hits every residue mod s."""
    if s < 1:
        raise ValueError("modulus must be positive")
    hit = np.zeros(s, dtype=bool)
    if isinstance(source, IntPolynomial):
        hit[np.asarray(source.eval_mod(np.arange(s, dtype=np.int64), s), dtype=np.int64)] = True
    else:
        for a in source:
            hit[int(a) % s] = True
    missing = [int(v) for v in np.flatnonzero(~hit)]
    return not missing, missing


class Density(str, Enum):
    DENSE = "DENSE-CERTIFIED"
    NOT_DENSE = "NOT-DENSE"
    UNDECIDED = "UNDECIDED"


@dataclass
class DensityReport:
    verdict: Density
    essential: list[int]
    witness_period: int | None = None
    missing: list[int] = field(default_factory=list)
    certificate: PeriodCertificate | None = None


def density_verdict(pair: ViablePair, P: IntPolynomial, T: int | None = None) -> DensityReport:
    """Density of the orbit along P, decided from the periodic structure at level T.

    NOT-DENSE when P misses a residue modulo a certified essential period;
    DENSE-CERTIFIED when level T is hole-free (so every essential period
    divides n_T and is known) and P permutes modulo each essential period;
    UNDECIDED otherwise.
    """
    cert = essential_period_certificate(pair, T)
    ess = cert.essential_periods()
    for s in ess:
        full, missing = residues_covered(P, s)
        if not full:
            return DensityReport(Density.NOT_DENSE, ess, s, missing, cert)
    lv = pair.levels[cert.level]
    if lv.word.hole_count == 0 and not cert.unknown_periods():
        if all(is_permutation_mod(P, s) for s in ess):
            return DensityReport(Density.DENSE, ess, certificate=cert)
    return DensityReport(Density.UNDECIDED, ess, certificate=cert)


def cylinder_witnesses(
    pair: ViablePair, P: IntPolynomial, radius: int, search: int | None = None
) -> dict[str, int | None]:
    """For every resolved word of length 2*radius+1 occurring in X_T, the first
    m < search with x[P(m)-radius, P(m)+radius] equal to it (None if absent)."""
    lv = pair.top
    n = lv.n
    search = n if search is None else search
    L = 2 * radius + 1
    offs = np.arange(-radius, radius + 1)
    words = {}
    for a in range(n):
        w = lv.word.data[(a + offs) % n]
        if np.any(w == Symbol.HOLE):
            continue
        words.setdefault("".join(map(str, w.tolist())), None)
    pos = np.asarray(P.eval_mod(np.arange(search, dtype=np.int64) % n, n), dtype=np.int64)
    wins = lv.word.data[(pos[:, None] + offs[None, :]) % n]
    codes = (wins.astype(np.int64) * (3 ** np.arange(L - 1, -1, -1))).sum(axis=1)
    first: dict[int, int] = {}
    for m, c in enumerate(codes.tolist()):
        first.setdefault(c, m)
    for w in words:
        c = sum(int(ch) * 3 ** (L - 1 - i) for i, ch in enumerate(w))
        words[w] = first.get(c)
    return words


class TowerExhausted(ValueError):
    pass


def almost_prime_obstruction(l: int, tower: Iterable[int]) -> tuple[int, int]:
    """Tower term n_{l+2} (1-based) and the residue 0 it leaves uncovered.

    Along a strictly increasing divisibility chain Omega grows by at least one
    per step, so Omega(n_{l+2}) > l even when n_1 = 1; no l-almost prime is a
    multiple of n_{l+2}, hence residue 0 mod n_{l+2} is never attained.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    prev = None
    for idx, n in enumerate(tower, start=1):
        n = int(n)
        if prev is not None and (n <= prev or n % prev):
            raise ValueError("tower must be strictly increasing under divisibility")
        if idx == l + 2:
            if factorize(n).big_omega <= l:
                raise ArithmeticError(f"Omega({n}) <= {l}")
            return n, 0
        prev = n
    raise TowerExhausted(f"tower has fewer than {l + 2} terms")


def minimal_almost_prime_obstruction(l: int, tower: Iterable[int]) -> tuple[int, int]:
    """First tower modulus with Omega(n) > l; already no l-almost prime is divisible by it."""
    if l < 1:
        raise ValueError("l must be at least 1")
    for n in tower:
        if factorize(int(n)).big_omega > l:
            return int(n), 0
    raise TowerExhausted("tower exhausted without a modulus of more than l prime factors")


def is_almost_prime(n: int, l: int) -> bool:
    return n > 0 and 1 < factorize(n).big_omega <= l


# ----------------------------------------------------------------------------
# block frequencies of the block construction


def ap_frequency(B, C) -> Fraction:
    """Fraction of the aligned |B|-blocks of C equal to B, weighted as |B|/|C| each."""
    b = np.asarray(_bits(B), dtype=np.uint8)
    c = np.asarray(_bits(C), dtype=np.uint8)
    if len(b) == 0 or len(c) % len(b):
        raise ValueError("|B| must divide |C|")
    hits = int(np.all(c.reshape(-1, len(b)) == b, axis=1).sum())
    return Fraction(hits * len(b), len(c))


def _bits(w):
    if isinstance(w, str):
        return [int(ch) for ch in w]
    return w


@dataclass
class ApEntry:
    t: int
    s: int
    e: int
    e2: int
    value: Fraction
    expected: Fraction

    @property
    def matches(self) -> bool:
        return self.value == self.expected


def ap_closed_form(ratios: Sequence[int], t: int, s: int, same: bool) -> Fraction:
    if all(m % 2 == 0 for m in ratios[t:s]):
        return Fraction(1, 2)
    prod = math.prod(ratios[t:s])
    return Fraction(1, 2) * (1 + Fraction(1 if same else -1, prod))


def iwanik_ap_check(blocks: IwanikBlocks, t: int, s: int) -> list[ApEntry]:
    if not 0 <= t < s < len(blocks.levels):
        raise ValueError("need 0 <= t < s within the built levels")
    ratios = blocks.ratios()
    if len({m % 2 for m in ratios[t:s]}) > 1:
        raise ConstructionError("mixed parity ratios")
    out = []
    for e in (0, 1):
        for e2 in (0, 1):
            val = ap_frequency(blocks.word(t, e), blocks.word(s, e2))
            out.append(ApEntry(t, s, e, e2, val, ap_closed_form(ratios, t, s, e == e2)))
    return out


def ap_deviation(blocks: IwanikBlocks, t: int, s: int) -> Fraction:
    return max(abs(e.value - Fraction(1, 2)) for e in iwanik_ap_check(blocks, t, s))
