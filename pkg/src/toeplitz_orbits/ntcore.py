"""
Exact modular kernels: factorization, power-residue counts and sets,
permutation polynomials, Dickson polynomials, solution counts for
x^k - y^l = a over F_p, and the residue sets used by construction B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

PERMUTATION_ENUM_LIMIT = 2**32
PREIMAGE_EXACT_LIMIT = 10**5
PREIMAGE_FFT_LIMIT = 2**24
DIRECT_WORK_LIMIT = 5 * 10**7


class BoundExceeded(ValueError):
    """Input too large for an exact enumeration path."""


class HypothesisError(ValueError):
    """Inputs violate the hypotheses an operation is defined under."""


class WeilBoundViolation(AssertionError):
    """A solution count fell outside the Weil window; indicates a bug."""


class SearchExhausted(RuntimeError):
    def __init__(self, msg, scanned=None):
        super().__init__(msg)
        self.scanned = scanned


# ----------------------------------------------------------------------------
# integers


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer, exact for any size."""
    if n < 0:
        raise ValueError("iroot of negative number")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    # deterministic for n < 3.3e24 with these bases; probable prime beyond
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_sieve(limit: int) -> np.ndarray:
    """All primes < limit as an int64 array."""
    if limit <= 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(limit - 1) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 200):
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n  # noqa: E731
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise RuntimeError(f"pollard rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]  # sorted (prime, exponent)

    @property
    def phi(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= (p - 1) * p ** (e - 1)
        return out

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


def factorize(n: int, trial_limit: int = 10**6) -> Factorization:
    """Trial division up to ``trial_limit``, then Miller-Rabin and Pollard rho."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    m = n
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    p = 5
    step = 2
    while p <= trial_limit and p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += step
        step = 6 - step
    stack = [m] if m > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        r = math.isqrt(v)
        if r * r == v:
            stack += [r, r]
            continue
        d = _pollard_rho(v)
        stack += [d, v // d]
    return Factorization(n, tuple(sorted(out.items())))


def nu(p: int, n: int) -> int:
    """p-adic valuation of n != 0."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


# ----------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[i]`` multiplies x^i."""

    coeffs: tuple[int, ...] = field(default=(0,))

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, d: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * d + (c,))

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def leading_magnitude(self) -> int:
        return abs(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __call__(self, v):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def eval_mod(self, xs, n: int) -> np.ndarray:
        """Horner evaluation mod n on an int64 array; requires n < 2**31."""
        if n >= 2**31:
            return np.array([self(int(v)) % n for v in np.asarray(xs)], dtype=object)
        xs = np.asarray(xs, dtype=np.int64) % n
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = (acc * xs + (c % n)) % n
        return acc

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(
            tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))
        )

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def compose(self, inner: "IntPolynomial") -> "IntPolynomial":
        acc = IntPolynomial((0,))
        for c in reversed(self.coeffs):
            acc = acc * inner + IntPolynomial((c,))
        return acc

    def shift(self, k: int) -> "IntPolynomial":
        """P(x + k)."""
        return self.compose(IntPolynomial((k, 1)))

    def __str__(self) -> str:
        return format_polynomial(self)


def format_polynomial(P: IntPolynomial, var: str = "m") -> str:
    """Canonical text form, e.g. ``3*m^3 - m + 7``."""
    terms = []
    for i in range(P.degree, -1, -1):
        c = P.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"


def dickson(n: int, alpha: int) -> IntPolynomial:
    """D_n(alpha, x) via D_{m+1} = x D_m - alpha D_{m-1}, D_0 = 2, D_1 = x."""
    if n < 1:
        raise ValueError("dickson degree must be >= 1")
    x = IntPolynomial.x()
    prev, cur = IntPolynomial((2,)), x
    for _ in range(n - 1):
        prev, cur = cur, x * cur - prev * alpha
    return cur


# ----------------------------------------------------------------------------
# residue sets


@dataclass
class ResidueSet:
    modulus: int
    members: np.ndarray  # bool mask of length modulus

    def __post_init__(self):
        self.members = np.asarray(self.members, dtype=bool)
        if self.members.shape != (self.modulus,):
            raise ValueError("membership mask must have length equal to the modulus")
        self._size = int(np.count_nonzero(self.members))

    @classmethod
    def from_iterable(cls, n: int, items: Iterable[int]) -> "ResidueSet":
        mask = np.zeros(n, dtype=bool)
        idx = np.fromiter((int(v) % n for v in items), dtype=np.int64)
        mask[idx] = True
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "ResidueSet":
        return cls(n, np.ones(n, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "ResidueSet":
        return cls(n, np.zeros(n, dtype=bool))

    def __len__(self) -> int:
        return self._size

    def __contains__(self, a: int) -> bool:
        return bool(self.members[a % self.modulus])

    def __iter__(self):
        return iter(self.to_list())

    def to_list(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.members)]

    def issubset(self, other: "ResidueSet") -> bool:
        return self.modulus == other.modulus and not np.any(self.members & ~other.members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResidueSet)
            and self.modulus == other.modulus
            and bool(np.array_equal(self.members, other.members))
        )

    def __repr__(self) -> str:
        items = self.to_list()
        shown = items if len(items) <= 12 else items[:12] + ["..."]
        return f"ResidueSet(mod {self.modulus}, size {len(self)}: {shown})"


def _powers_mod(n: int, k: int, xs=None) -> np.ndarray:
    if xs is None:
        xs = np.arange(n, dtype=np.int64)
    return IntPolynomial.monomial(k).eval_mod(xs, n)


def unit_mask(n: int) -> np.ndarray:
    return np.gcd(np.arange(n, dtype=np.int64), n) == 1


def power_residues(n: int, k: int, units_only: bool = False) -> ResidueSet:
    """R^k_n, or its unit part when ``units_only``."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    mask = np.zeros(n, dtype=bool)
    mask[_powers_mod(n, k)] = True
    if units_only:
        mask &= unit_mask(n)
    return ResidueSet(n, mask)


def rho(k: int, N: int, n: int, a: int) -> int:
    """|{1 <= m <= N : m^k = a mod n}|, using one period of m plus a remainder."""
    if k < 1 or n < 1 or N < 0:
        raise ValueError("k, n must be positive and N non-negative")
    a %= n
    hits = _powers_mod(n, k, np.arange(1, n + 1, dtype=np.int64)) == a
    q, r = divmod(N, n)
    return q * int(np.count_nonzero(hits)) + int(np.count_nonzero(hits[:r]))


def rho_max(k: int, n: int) -> int:
    counts = np.bincount(_powers_mod(n, k, np.arange(1, n + 1, dtype=np.int64)), minlength=n)
    return int(counts.max())


# ----------------------------------------------------------------------------
# permutation polynomials


def is_permutation_mod(P: IntPolynomial, n: int, limit: int = PERMUTATION_ENUM_LIMIT) -> bool:
    if n < 1:
        raise ValueError("modulus must be positive")
    if n > limit:
        raise BoundExceeded(f"modulus {n} exceeds the enumeration limit {limit}")
    if n == 1:
        return True
    seen = np.zeros(n, dtype=bool)
    chunk = 1 << 22
    for lo in range(0, n, chunk):
        vals = P.eval_mod(np.arange(lo, min(n, lo + chunk), dtype=np.int64), n)
        vals = np.asarray(vals, dtype=np.int64)
        if np.any(seen[vals]) or len(np.unique(vals)) != len(vals):
            return False
        seen[vals] = True
    return True


def lift_criterion(P: IntPolynomial, p: int) -> bool:
    """Permutation mod p whose derivative has no root mod p; equivalent to
    being a permutation modulo every power of p."""
    if not is_permutation_mod(P, p):
        return False
    dvals = P.derivative().eval_mod(np.arange(p, dtype=np.int64), p)
    return not bool(np.any(np.asarray(dvals) == 0))


def is_permutation_mod_factored(P: IntPolynomial, n: int, enum_limit: int = 10**7) -> bool:
    """Permutation test through the factorization of n.

    Prime powers p^e (e >= 2) use the lifting criterion; primes use direct
    enumeration, or the gcd(d, p-1) = 1 rule for monomials above ``enum_limit``.
    """
    for p, e in factorize(n).factors:
        nonzero = [i for i, c in enumerate(P.coeffs) if c % p]
        if p > enum_limit:
            if len(nonzero) == 1 and e == 1:
                d = nonzero[0]
                if math.gcd(d, p - 1) != 1:
                    return False
                continue
            raise BoundExceeded(f"cannot decide permutation mod {p}^{e} by enumeration")
        if e == 1:
            if not is_permutation_mod(P, p):
                return False
        elif not lift_criterion(P, p):
            return False
    return True


# ----------------------------------------------------------------------------
# solution counting over F_p


def weil_count(p: int, k: int, l: int, a: int, check: bool = True) -> int:
    """|{(x, y) in F_p^2 : x^k - y^l = a}| via value histograms.

    With ``check`` and a != 0, 1 <= k, l < p the result is compared with the
    window |count - p| <= k*l*sqrt(p).
    """
    xs = np.arange(p, dtype=np.int64)
    hx = np.bincount(_powers_mod(p, k, xs), minlength=p)
    hy = np.bincount((_powers_mod(p, l, xs) + a) % p, minlength=p)
    count = int(np.dot(hx, hy))
    if check and a % p and k < p and l < p:
        if (count - p) ** 2 > k * k * l * l * p:
            raise WeilBoundViolation(
                f"count {count} outside p +- kl sqrt(p) for p={p}, k={k}, l={l}, a={a}"
            )
    return count


def weil_bound(p: int, k: int, l: int) -> float:
    return k * l * math.sqrt(p)


# ----------------------------------------------------------------------------
# the residue set A of construction B


@dataclass
class ASetResult:
    aset: ResidueSet
    est1_bound: float
    threshold: float
    strict: bool  # large-prime hypotheses hold, so the est1 bound is guaranteed

    @property
    def size(self) -> int:
        return len(self.aset)

    @property
    def est1_holds(self) -> bool:
        return self.size > self.est1_bound


def _check_a_hypotheses(n: int, k: int, l: int) -> Factorization:
    f = factorize(n)
    if n < 2:
        raise HypothesisError("n must have at least one prime factor")
    if not f.squarefree:
        raise HypothesisError(f"{n} is not squarefree")
    if l % k:
        raise HypothesisError(f"k={k} does not divide l={l}")
    for p in f.primes:
        if (p - 1) % l:
            raise HypothesisError(f"l={l} does not divide {p}-1")
    return f


def a_set_threshold(omega: int) -> float:
    return math.log(omega)


def build_a_set(n: int, k: int, l: int) -> ASetResult:
    """Units that are k-th powers mod n and fail to be l-th powers modulo
    more than ln(omega(n)) of the primes dividing n (per-prime tables + CRT)."""
    f = _check_a_hypotheses(n, k, l)
    omega = f.omega
    threshold = a_set_threshold(omega)
    xs = np.arange(n, dtype=np.int64)
    is_kpow = np.ones(n, dtype=bool)
    non_l = np.zeros(n, dtype=np.int32)
    for p in f.primes:
        kp = np.zeros(p, dtype=bool)
        kp[_powers_mod(p, k)] = True
        kp[0] = False
        lp = np.zeros(p, dtype=bool)
        lp[_powers_mod(p, l)] = True
        r = xs % p
        is_kpow &= kp[r]
        non_l += ~lp[r]
    mask = is_kpow & (non_l > threshold)
    est1 = f.phi * (1 - 2 ** (-omega / 4)) / k**omega
    strict = all(p > (12 * k * l) ** 2 for p in f.primes) and k != l and k > 1
    return ASetResult(ResidueSet(n, mask), est1, threshold, strict)


def naive_a_set(n: int, k: int, l: int) -> ResidueSet:
    """Reference path: enumerate unit k-th powers mod n, then test each
    against brute-force l-th power sets modulo each prime."""
    primes = factorize(n).primes
    threshold = math.log(len(primes))
    base = {pow(x, k, n) for x in range(n) if math.gcd(x, n) == 1}
    lpows = {p: {pow(y, l, p) for y in range(p)} for p in primes}
    out = [a for a in base if sum(a % p not in lpows[p] for p in primes) > threshold]
    return ResidueSet.from_iterable(n, out)


def cyclic_correlation(c: np.ndarray, h: np.ndarray) -> np.ndarray:
    """out[a] = sum_v c[v] * h[(v + a) mod n], exact for non-negative integer inputs.

    Computed by FFT, rounded, and verified to be within 0.25 of integers;
    falls back to a direct sum over the support of ``c`` otherwise.
    """
    n = len(c)
    cf = np.fft.rfft(c.astype(np.float64))
    hf = np.fft.rfft(h.astype(np.float64))
    raw = np.fft.irfft(np.conj(cf) * hf, n)
    out = np.rint(raw)
    if n and np.max(np.abs(raw - out)) < 0.25:
        return out.astype(np.int64)
    acc = np.zeros(n, dtype=np.int64)
    for v in np.flatnonzero(c):
        acc += int(c[v]) * np.roll(h, -int(v)).astype(np.int64)
    return acc


def _direct_correlation(c: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = len(c)
    acc = np.zeros(n, dtype=np.int64)
    cs, hs = np.flatnonzero(c), np.flatnonzero(h)
    if len(cs) <= len(hs):
        for v in cs:
            acc += int(c[v]) * np.roll(h, -int(v)).astype(np.int64)
    else:
        # out[a] gets c[w - a] for each w in supp(h)
        rev = np.empty(n, dtype=np.int64)
        for w in hs:
            rev[:] = np.roll(c[::-1], int(w) + 1)
            acc += int(h[w]) * rev
    return acc


@dataclass
class ShiftMax:
    value: int
    argmax: int
    exact: bool  # False: sampled shifts, value is a lower bound


def max_count_over_shifts(
    counts: np.ndarray,
    target: np.ndarray,
    exact_limit: int = PREIMAGE_EXACT_LIMIT,
    fft_limit: int = PREIMAGE_FFT_LIMIT,
    samples: int = 4096,
    seed: int = 0,
) -> ShiftMax:
    """max over a of sum_v counts[v] * target[(v + a) mod n]."""
    n = len(counts)
    if not np.any(target) or not np.any(counts):
        return ShiftMax(0, 0, True)
    work = n * min(np.count_nonzero(counts), np.count_nonzero(target))
    if n <= exact_limit and work <= DIRECT_WORK_LIMIT:
        corr = _direct_correlation(counts, target.astype(np.int64))
    elif n <= fft_limit:
        corr = cyclic_correlation(counts, target.astype(np.int64))
    else:
        rng = np.random.default_rng(seed)
        shifts = rng.integers(0, n, size=samples)
        support = np.flatnonzero(counts)
        best, arg = -1, 0
        for a in shifts:
            val = int(np.dot(counts[support], target[(support + a) % n]))
            if val > best:
                best, arg = val, int(a)
        return ShiftMax(best, arg, False)
    a = int(np.argmax(corr))
    return ShiftMax(int(corr[a]), a, True)


def max_power_preimage_over_shifts(n: int, l: int, A: ResidueSet, **kw) -> ShiftMax:
    """max over i of |{x in Z/n : x^l - i in A}|."""
    if A.modulus != n:
        raise ValueError("residue set modulus mismatch")
    counts = np.bincount(_powers_mod(n, l), minlength=n).astype(np.int64)
    # x^l - i in A  <=>  A[(v - i) mod n]; correlate with shift -i
    res = max_count_over_shifts(counts, A.members, **kw)
    return ShiftMax(res.value, (-res.argmax) % n, res.exact)


def est2_bound(n: int) -> float:
    if n < 2:
        raise ValueError("n must have a prime factor")
    return n * (2 / 3) ** math.log(factorize(n).omega)


# ----------------------------------------------------------------------------
# primes for the k-does-not-divide-l construction


@dataclass(frozen=True)
class GcdPattern:
    k: int
    l: int
    q: int
    k_prime: int
    l_prime: int
    gcd_modulus: int
    gcd_target: int

    def admits(self, p: int) -> bool:
        return math.gcd(p - 1, self.gcd_modulus) == self.gcd_target

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "q": self.q,
            "k_prime": self.k_prime,
            "l_prime": self.l_prime,
            "gcd_modulus": self.gcd_modulus,
            "gcd_target": self.gcd_target,
        }


def gcd_pattern(k: int, l: int) -> GcdPattern:
    """Pick a prime q with nu_q(k) > nu_q(l) and the matching gcd condition on p-1.

    When l is odd a q not dividing l is preferred, which yields l' = 1.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if l % k == 0:
        raise HypothesisError(f"k={k} divides l={l}")
    candidates = [q for q in factorize(k).primes if nu(q, k) > nu(q, l)]
    if l % 2:
        coprime = [q for q in candidates if l % q]
        if coprime:
            candidates = coprime
    q = candidates[0]
    if q == 2:
        e = nu(2, l)
        return GcdPattern(k, l, 2, 2 ** (e + 1), 2**e, k * l, 2 ** (e + 1))
    e = nu(q, l)
    return GcdPattern(
        k,
        l,
        q,
        q ** (e + 1) * math.gcd(k, 2),
        q**e * math.gcd(l, 2),
        2 * k * l,
        2 * q ** (e + 1),
    )


def find_primes(
    predicate: GcdPattern | Callable[[int], bool],
    count: int,
    floor: int = 2,
    extra: Sequence[Callable[[int], bool]] = (),
    budget: int = 10**8,
) -> list[int]:
    """First ``count`` primes >= floor accepted by the predicate(s).

    Scans segmented sieve windows up to ``floor + budget``; beyond 2**40
    switches to Miller-Rabin on candidates.
    """
    test = predicate.admits if isinstance(predicate, GcdPattern) else predicate
    out: list[int] = []
    if count <= 0:
        return out
    lo = max(floor, 2)
    end = lo + budget
    if lo > 2**40:
        v = lo
        while v < end:
            if is_prime(v) and test(v) and all(f(v) for f in extra):
                out.append(v)
                if len(out) == count:
                    return out
            v += 1
        raise SearchExhausted(f"found {len(out)} of {count} primes in [{lo}, {end})", (lo, end))
    window = 1 << 20
    small = prime_sieve(math.isqrt(end) + 2)
    while lo < end:
        hi = min(end, lo + window)
        mask = np.ones(hi - lo, dtype=bool)
        for p in small:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            mask[start - lo :: p] = False
        if lo <= 1:
            mask[: 2 - lo] = False
        for v in np.flatnonzero(mask) + lo:
            v = int(v)
            if test(v) and all(f(v) for f in extra):
                out.append(v)
                if len(out) == count:
                    return out
        lo = hi
    raise SearchExhausted(
        f"found {len(out)} of {count} primes in [{max(floor, 2)}, {end})", (max(floor, 2), end)
    )


def dickson_functional_value(n: int, alpha: int, x: Fraction) -> tuple[Fraction, Fraction]:
    """(D_n(alpha, x + alpha/x), x^n + (alpha/x)^n) in exact arithmetic."""
    D = dickson(n, alpha)
    arg = x + Fraction(alpha) / x
    return D(arg), x**n + (Fraction(alpha) / x) ** n
