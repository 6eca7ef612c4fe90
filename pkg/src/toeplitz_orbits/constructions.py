"""
Builders for the three Toeplitz constructions.

* construction A (k does not divide l): primes with a prescribed gcd(p-1, .)
  pattern, holes kept on unit k-th power residues, k-th power positions
  filled with the level's sign;
* construction B (k divides l): squarefree tower, holes kept on the set
  returned by :func:`ntcore.build_a_set`, powers filled before the batch;
* the block construction (two words per level, sign sequences with fixed
  zero counts) giving a strictly ergodic, non-regular example.

Every builder has a STRICT mode, which plans the tower from the growth
conditions and materializes it only within a symbol budget, and a RELAXED
mode, which takes the tower from the caller and records it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ntcore import (
    HypothesisError,
    IntPolynomial,
    GcdPattern,
    SearchExhausted,
    build_a_set,
    factorize,
    find_primes,
    iroot,
    is_permutation_mod,
    is_permutation_mod_factored,
    is_prime,
    lift_criterion,
    gcd_pattern,
    power_residues,
)
from .words import Level, PartialWord, Symbol, ViablePair, viability_check

STRICT = "strict"
RELAXED = "relaxed"
DEFAULT_BUDGET = 2**30


class ConstructionError(ValueError):
    pass


class InvalidPrime(ConstructionError):
    pass


class StrictInfeasible(ConstructionError):
    def __init__(self, condition: str, detail: str = "", plan=None):
        super().__init__(f"strict condition {condition} cannot be met: {detail}".rstrip(": "))
        self.condition = condition
        self.plan = plan


class BudgetExceeded(ConstructionError):
    def __init__(self, msg: str, plan=None):
        super().__init__(msg)
        self.plan = plan


class PinConflict(ConstructionError):
    pass


@dataclass
class ConstructionConfig:
    kind: str  # "A", "B" or "IWANIK"
    k: int | None = None
    l: int | None = None
    poly: IntPolynomial | None = None
    levels: int = 1
    mode: str = RELAXED
    fill_policy: str = "zero"  # zero | one | seeded
    seed: int | None = None
    primes: Sequence[int] | None = None  # A: p_1..p_T
    tower: Sequence[int] | None = None  # B: moduli n_1..n_T; IWANIK: ratios m_0..m_{T-1}
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        self.kind = self.kind.upper()
        if self.kind not in ("A", "B", "IWANIK"):
            raise ConstructionError(f"unknown construction kind {self.kind}")
        if self.mode not in (STRICT, RELAXED):
            raise ConstructionError(f"unknown mode {self.mode}")
        if self.fill_policy not in ("zero", "one", "seeded"):
            raise ConstructionError(f"unknown fill policy {self.fill_policy}")
        if self.fill_policy == "seeded" and self.seed is None:
            raise ConstructionError("seeded fill needs a seed")
        if self.mode == STRICT and (self.primes is not None or self.tower is not None):
            raise ConstructionError("STRICT mode takes no tower overrides")
        if self.mode == RELAXED:
            given = self.primes if self.kind == "A" else self.tower
            if given is None:
                raise ConstructionError("RELAXED mode needs an explicit tower")
            self.levels = len(given)

    def overrides(self) -> dict:
        if self.mode == STRICT:
            return {}
        if self.kind == "A":
            return {"primes": [int(p) for p in self.primes]}
        return {"tower": [int(v) for v in self.tower]}


class Filler:
    """Arbitrary-choice policy for batch fills; SEEDED draws from one generator."""

    def __init__(self, policy: str, seed: int | None = None):
        self.policy = policy
        self.rng = np.random.default_rng(seed) if policy == "seeded" else None

    def __call__(self, count: int) -> np.ndarray:
        if self.policy == "zero":
            return np.zeros(count, dtype=np.uint8)
        if self.policy == "one":
            return np.ones(count, dtype=np.uint8)
        return self.rng.integers(0, 2, size=count, dtype=np.uint8)


def _fill(word: np.ndarray, mask: np.ndarray, filler: Filler) -> None:
    idx = np.flatnonzero(mask & (word == Symbol.HOLE))
    word[idx] = filler(len(idx))


def _fill_powers(word: np.ndarray, k: int, sign: int) -> int:
    n = len(word)
    top = iroot(n, k)
    pos = np.arange(top + 1, dtype=np.int64) ** k
    pos = pos[pos < n]
    hit = pos[word[pos] == Symbol.HOLE]
    word[hit] = sign
    return len(np.unique(hit))


def _metadata(cfg: ConstructionConfig, **extra) -> dict:
    meta = {
        "kind": cfg.kind,
        "k": cfg.k,
        "l": cfg.l,
        "mode": cfg.mode,
        "fill_policy": cfg.fill_policy,
        "seed": cfg.seed,
    }
    meta.update(cfg.overrides())
    meta.update(extra)
    return meta


# ----------------------------------------------------------------------------
# polynomial normalization


def _nonneg_from(R: IntPolynomial, start: int) -> bool:
    """R(n) >= 0 for every integer n >= start."""
    if R.is_zero():
        return True
    if R.leading < 0:
        return False
    bound = 1 + max((abs(c) for c in R.coeffs[:-1]), default=0) // R.leading + 1
    return all(R(n) >= 0 for n in range(start, max(start, bound) + 1))


def normalize_poly(P: IntPolynomial) -> tuple[IntPolynomial, int, int]:
    """Smallest k >= 0 and sign s with Q(x) = s*P(x+k) satisfying
    Q(n+1) - Q(n) > n for n >= 0 and Q(n) > M n^d for n >= 1."""
    d = P.degree
    if d <= 1:
        raise ConstructionError("normalization needs degree > 1")
    sign = 1 if P.leading > 0 else -1
    M = P.leading_magnitude
    base = P * sign
    x = IntPolynomial.x()
    one = IntPolynomial((1,))
    for k in range(0, 10**6):
        Q = base.shift(k)
        step = Q.shift(1) - Q - x - one
        growth = Q - IntPolynomial.monomial(d, M) - one
        if _nonneg_from(step, 0) and _nonneg_from(growth, 1):
            return Q, k, sign
    raise ConstructionError("no normalizing shift found")  # pragma: no cover


# ----------------------------------------------------------------------------
# strict planning


@dataclass
class LevelPlan:
    t: int
    n: int
    new_factor: int
    conditions: dict[str, tuple[bool, float]]
    materializable: bool


@dataclass
class StrictPlan:
    kind: str
    levels: list[LevelPlan] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for lv in self.levels for ok, _ in lv.conditions.values())

    def first_violation(self) -> tuple[int, str] | None:
        for lv in self.levels:
            for name, (ok, _) in lv.conditions.items():
                if not ok:
                    return lv.t, name
        return None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "notes": self.notes,
            "levels": [
                {
                    "t": lv.t,
                    "n": str(lv.n),
                    "n_digits": len(str(lv.n)),
                    "new_factor": str(lv.new_factor),
                    "materializable": lv.materializable,
                    "conditions": {k: {"ok": ok, "value": v} for k, (ok, v) in lv.conditions.items()},
                }
                for lv in self.levels
            ],
        }


def _phi_ratio(primes: Sequence[int]) -> Fraction:
    r = Fraction(1)
    for p in primes:
        r *= Fraction(p - 1, p)
    return r


def plan_strict_a(k: int, l: int, levels: int, budget: int = DEFAULT_BUDGET) -> StrictPlan:
    """Primes p_1 < p_2 < ... meeting the gcd pattern and the growth conditions.

    The summed loss 8k n_t / sqrt(p_{t+1}) is split as 2^-(t+1) / 10 per step,
    including the first step out of n_0 = 1 that the hole-count induction
    starts from, so every finite prefix extends without revisiting choices.
    """
    params = gcd_pattern(k, l)
    plan = StrictPlan("A", notes={"gcd_pattern": params.as_dict()})
    n, primes, running = 1, [], 0.0
    for t in range(levels):
        # 8k n / sqrt(p) < 2^-(t+1) / 10  <=>  p > (80 k n 2^(t+1))^2
        floor = max(30 * n**k + 1, (80 * k * n * 2 ** (t + 1)) ** 2 + 1)
        if primes:
            floor = max(floor, primes[-1] + 1)
        try:
            p = find_primes(params, 1, floor, extra=[lambda v: v > 10])[0]
        except SearchExhausted as exc:
            raise StrictInfeasible("gcd_pattern", str(exc), plan) from exc
        primes.append(p)
        new_n = n * p
        term = 8 * k * n / math.sqrt(p)
        running += term
        phi = _phi_ratio(primes)
        conds = {
            "gcd_pattern": (params.admits(p), math.gcd(p - 1, params.gcd_modulus)),
            "totient_ratio": (phi > Fraction(9, 10), float(phi)),
            "power_growth": (p > 30 * n**k, float(Fraction(p, 30 * n**k))),
            "loss_sum": (running < 0.1, running),
        }
        plan.levels.append(LevelPlan(t + 1, new_n, p, conds, new_n <= budget))
        n = new_n
    return plan


def plan_strict_b(k: int, l: int, levels: int, budget: int = DEFAULT_BUDGET) -> StrictPlan:
    """Squarefree tower from primes p = 1 mod l, p > (12kl)^2, adding primes
    per level until that level's share 2^-(t+1)/10 of the summed condition
    and the growth n_{t+1} > 10 n_t^k hold."""
    _check_b_params(k, l)
    plan = StrictPlan("B", notes={"prime_floor": (12 * k * l) ** 2})
    floor = (12 * k * l) ** 2 + 1
    n, omega, phi, running = 1, 0, 1, 0.0
    primes: list[int] = []
    next_p = floor
    for t in range(levels):
        share = 0.1 * 2.0 ** -(t + 1)
        added = []
        while True:
            p = find_primes(lambda v: (v - 1) % l == 0, 1, next_p)[0]
            next_p = p + 1
            added.append(p)
            primes.append(p)
            cand = n * math.prod(added)
            om = omega + len(added)
            ph = phi * math.prod(q - 1 for q in added)
            units_k = Fraction(ph, k**om)
            term = 2.0 ** (-om / 4) + float((2 * n + iroot(cand, k)) / units_k)
            if term < share and cand > 10 * n**k:
                break
        running += term
        ratio = _phi_ratio(primes)
        conds = {
            "loss_sum": (running < 0.1, running),
            "totient_ratio": (ratio > Fraction(9, 10), float(ratio)),
            "power_growth": (cand > 10 * n**k, len(str(cand)) - len(str(10 * n**k))),
            "prime_floor": (all(q > (12 * k * l) ** 2 for q in added), min(added)),
        }
        plan.levels.append(LevelPlan(t + 1, cand, math.prod(added), conds, cand <= budget))
        n, omega, phi = cand, om, ph
    return plan


def plan_strict_iwanik(P: IntPolynomial, levels: int, budget: int = DEFAULT_BUDGET) -> StrictPlan:
    """Tower n_t with n_{t+1} > (M+1)(10 n_t)^d and sum 2n_t/n_{t+1} < 1/5 (share
    2^-(t+1)/5 per level), built from prime powers over which P stays a
    permutation."""
    Q, _, _ = normalize_poly(P)
    d, M = Q.degree, Q.leading_magnitude
    plan = StrictPlan("IWANIK", notes={"degree": d, "M": M})
    lift_prime = next((p for p in range(2, 1000) if is_prime(p) and lift_criterion(Q, p)), None)
    n, running = 1, 0.0
    used: set[int] = set()
    for t in range(levels):
        need = (M + 1) * (10 * n) ** d
        share = Fraction(1, 5) / 2 ** (t + 1)
        if lift_prime is not None:
            m = lift_prime
            while n * m <= need or Fraction(2 * n, n * m) >= share:
                m *= lift_prime
        else:
            m = 1
            p = 3
            while n * m <= need or Fraction(2 * n, n * m) >= share:
                p += 2
                if p in used or not is_prime(p):
                    continue
                if is_permutation_mod_factored(Q, p):
                    used.add(p)
                    m *= p
        new_n = n * m
        running += 2 * n / new_n
        conds = {
            "growth": (new_n > need, len(str(new_n)) - len(str(need))),
            "recipsum": (running < 0.2, running),
            "parity": ((m % 2) == (plan.levels[0].new_factor % 2) if plan.levels else True, m % 2),
        }
        plan.levels.append(LevelPlan(t + 1, new_n, m, conds, new_n <= budget))
        n = new_n
    return plan


# ----------------------------------------------------------------------------
# construction A


def _check_a_primes(params: GcdPattern, primes: Sequence[int]) -> None:
    if len(set(primes)) != len(primes):
        raise InvalidPrime("primes must be distinct")
    for p in primes:
        if not is_prime(p):
            raise InvalidPrime(f"{p} is not prime")
        if not params.admits(p):
            raise InvalidPrime(
                f"gcd({p}-1, {params.gcd_modulus}) = {math.gcd(p - 1, params.gcd_modulus)}"
                f" != {params.gcd_target}"
            )


def _resolve_strict(plan: StrictPlan, budget: int) -> None:
    bad = plan.first_violation()
    if bad:
        raise StrictInfeasible(bad[1], f"level {bad[0]}", plan)
    too_big = [lv for lv in plan.levels if not lv.materializable]
    if too_big:
        raise BudgetExceeded(
            f"level {too_big[0].t} has n = {too_big[0].n} > budget {budget}", plan
        )


def build_construction_a(cfg: ConstructionConfig) -> ViablePair:
    k, l = cfg.k, cfg.l
    params = gcd_pattern(k, l)
    if cfg.mode == STRICT:
        plan = plan_strict_a(k, l, cfg.levels, cfg.budget)
        _resolve_strict(plan, cfg.budget)
        primes = [lv.new_factor for lv in plan.levels]
    else:
        primes = [int(p) for p in cfg.primes]
        _check_a_primes(params, primes)
    filler = Filler(cfg.fill_policy, cfg.seed)
    levels = [Level(1, PartialWord("?"))]
    checkpoints = []
    n = 1
    word = np.array([Symbol.HOLE], dtype=np.uint8)
    for t, p in enumerate(primes):
        n1 = n * p
        if n1 > cfg.budget:
            raise BudgetExceeded(f"n_{t + 1} = {n1} exceeds budget {cfg.budget}")
        word = np.tile(word, p)
        idx = np.arange(n1)
        batch = (idx < n) | (idx >= n1 - n) | ~power_residues(n1, k, units_only=True).members
        _fill(word, batch, filler)
        _fill_powers(word, k, t % 2)
        levels.append(Level(n1, PartialWord(word.copy())))
        checkpoints.append(iroot(n1, k))
        n = n1
    meta = _metadata(cfg, primes_used=primes, gcd_pattern=params.as_dict())
    return ViablePair(levels, meta, checkpoints)


# ----------------------------------------------------------------------------
# construction B


def _check_b_params(k: int, l: int) -> None:
    if k is None or l is None or k <= 1 or l % k or k == l:
        raise HypothesisError("construction B needs 1 < k, k | l and k != l")


def build_construction_b(cfg: ConstructionConfig) -> ViablePair:
    k, l = cfg.k, cfg.l
    _check_b_params(k, l)
    if cfg.mode == STRICT:
        plan = plan_strict_b(k, l, cfg.levels, cfg.budget)
        _resolve_strict(plan, cfg.budget)
        tower = [lv.n for lv in plan.levels]
    else:
        tower = [int(v) for v in cfg.tower]
    filler = Filler(cfg.fill_policy, cfg.seed)
    levels = [Level(1, PartialWord("?"))]
    checkpoints = []
    n = 1
    word = np.array([Symbol.HOLE], dtype=np.uint8)
    for t, n1 in enumerate(tower):
        if n1 <= n or n1 % n:
            raise ConstructionError(f"tower modulus {n1} is not a proper multiple of {n}")
        if n1 > cfg.budget:
            raise BudgetExceeded(f"n_{t + 1} = {n1} exceeds budget {cfg.budget}")
        aset = build_a_set(n1, k, l).aset
        word = np.tile(word, n1 // n)
        _fill_powers(word, k, t % 2)
        idx = np.arange(n1)
        batch = (idx < n) | (idx >= n1 - n) | ~aset.members
        _fill(word, batch, filler)
        levels.append(Level(n1, PartialWord(word.copy())))
        checkpoints.append(iroot(n1, k))
        n = n1
    return ViablePair(levels, _metadata(cfg, tower_used=tower), checkpoints)


# ----------------------------------------------------------------------------
# block construction


@dataclass
class IwanikLevel:
    n: int
    B0: np.ndarray
    B1: np.ndarray
    eps: np.ndarray | None = None  # sign word building level t+1 from this one
    eps_prime: np.ndarray | None = None
    pins: dict[int, int] = field(default_factory=dict)

    @property
    def A(self) -> np.ndarray:
        return np.flatnonzero(self.B0 != self.B1)

    @property
    def m(self) -> int | None:
        return None if self.eps is None else len(self.eps)


@dataclass
class IwanikBlocks:
    poly: IntPolynomial  # normalized polynomial driving the pins
    levels: list[IwanikLevel]

    def word(self, t: int, e: int) -> np.ndarray:
        lv = self.levels[t]
        return lv.B0 if e == 0 else lv.B1

    def ratios(self) -> list[int]:
        return [lv.m for lv in self.levels[:-1]]


def zero_quota(m: int) -> int:
    return m // 2 if m % 2 == 0 else (m + 1) // 2


def _qualifying(Q: IntPolynomial, n: int, n1: int, A_mask: np.ndarray) -> list[int]:
    out = []
    i = n + 1
    while True:
        v = Q(i)
        if v >= n1 - n:
            break
        if A_mask[v % n]:
            out.append(i)
        i += 1
    return out


def iwanik_checkpoint(Q: IntPolynomial, n: int, n1: int) -> int:
    """max{i >= 1 : Q(i) < n1 - n}, or 0 when Q(1) is already too large."""
    i = 0
    while Q(i + 1) < n1 - n:
        i += 1
    return i


def _sign_word(m: int, pins: dict[int, int]) -> np.ndarray:
    eps = np.full(m, -1, dtype=np.int8)
    for j, e in pins.items():
        if j in (0, m - 1) and e != (0 if j == 0 else 1):
            raise PinConflict(f"pin on endpoint block {j}")
        eps[j] = e
    eps[0], eps[m - 1] = 0, 1
    quota = zero_quota(m)
    zeros = int(np.count_nonzero(eps == 0))
    ones = int(np.count_nonzero(eps == 1))
    if zeros > quota or ones > m - quota:
        raise PinConflict(f"pins exceed the zero quota {quota} of m = {m}")
    for j in range(m):
        if eps[j] == -1:
            if zeros < quota:
                eps[j] = 0
                zeros += 1
            else:
                eps[j] = 1
    return eps.astype(np.uint8)


def build_iwanik(cfg: ConstructionConfig) -> tuple[ViablePair, IwanikBlocks]:
    P = cfg.poly
    if P is None or P.degree <= 1:
        raise ConstructionError("block construction needs a polynomial of degree > 1")
    Q, shift, sign = normalize_poly(P)
    if cfg.mode == STRICT:
        plan = plan_strict_iwanik(P, cfg.levels, cfg.budget)
        _resolve_strict(plan, cfg.budget)
        ratios = [lv.new_factor for lv in plan.levels]
    else:
        ratios = [int(m) for m in cfg.tower]
    if any(m < 2 for m in ratios):
        raise ConstructionError("ratios m_t must be at least 2")
    if len({m % 2 for m in ratios}) > 1:
        raise ConstructionError("all ratios m_t must share one parity")
    n = 1
    for m in ratios:
        n *= m
        if n > cfg.budget:
            raise BudgetExceeded(f"modulus {n} exceeds budget {cfg.budget}")
        if not is_permutation_mod_factored(P, n):
            raise ConstructionError(f"polynomial is not a permutation modulo {n}")

    blocks = [IwanikLevel(1, np.array([0], np.uint8), np.array([1], np.uint8))]
    checkpoints = []
    n = 1
    for t, m in enumerate(ratios):
        cur = blocks[-1]
        n1 = n * m
        target = t % 2  # even t pins 0 (G = +1), odd t pins 1
        A_mask = cur.B0 != cur.B1
        pins: dict[int, int] = {}
        for i in _qualifying(Q, n, n1, A_mask):
            v = Q(i)
            j, off = divmod(v, n)
            e = 0 if cur.B0[off] == target else 1
            if pins.get(j, e) != e:
                raise PinConflict(f"block {j} pinned both ways")
            pins[j] = e
        eps = _sign_word(m, pins)
        eps_p = 1 - eps
        eps_p[0], eps_p[-1] = 0, 1
        pair_words = (cur.B0, cur.B1)
        B0 = np.concatenate([pair_words[e] for e in eps])
        B1 = np.concatenate([pair_words[e] for e in eps_p])
        cur.eps, cur.eps_prime, cur.pins = eps, eps_p, pins
        blocks.append(IwanikLevel(n1, B0, B1))
        checkpoints.append(iwanik_checkpoint(Q, n, n1))
        n = n1

    levels = []
    for lv in blocks:
        w = lv.B0.copy()
        w[lv.B0 != lv.B1] = Symbol.HOLE
        levels.append(Level(lv.n, PartialWord(w)))
    meta = _metadata(
        cfg,
        poly=list(P.coeffs),
        normalized=list(Q.coeffs),
        shift=shift,
        sign=sign,
        ratios=ratios,
        eps=["".join(map(str, lv.eps.tolist())) for lv in blocks[:-1]],
    )
    meta["k"] = meta["l"] = None
    return ViablePair(levels, meta, checkpoints), IwanikBlocks(Q, blocks)


def blocks_from_pair(pair: ViablePair) -> IwanikBlocks:
    """Replay the block words from the sign sequences stored in the metadata."""
    meta = pair.construction
    Q = IntPolynomial(tuple(meta["normalized"]))
    blocks = [IwanikLevel(1, np.array([0], np.uint8), np.array([1], np.uint8))]
    for s in meta["eps"]:
        cur = blocks[-1]
        eps = np.array([int(c) for c in s], dtype=np.uint8)
        eps_p = 1 - eps
        eps_p[0], eps_p[-1] = 0, 1
        words = (cur.B0, cur.B1)
        cur.eps, cur.eps_prime = eps, eps_p
        blocks.append(
            IwanikLevel(
                cur.n * len(eps),
                np.concatenate([words[e] for e in eps]),
                np.concatenate([words[e] for e in eps_p]),
            )
        )
    return IwanikBlocks(Q, blocks)


def build(cfg: ConstructionConfig) -> ViablePair:
    if cfg.kind == "A":
        return build_construction_a(cfg)
    if cfg.kind == "B":
        return build_construction_b(cfg)
    return build_iwanik(cfg)[0]


def fill_top_level(pair: ViablePair, policy: str = "zero", seed: int | None = None) -> ViablePair:
    """Copy of the pair with every hole of the top level filled."""
    levels = [Level(lv.n, PartialWord(lv.word.data.copy())) for lv in pair.levels]
    word = levels[-1].word.data
    _fill(word, np.ones(len(word), dtype=bool), Filler(policy, seed))
    levels[-1] = Level(levels[-1].n, PartialWord(word))
    meta = dict(pair.construction)
    meta["top_filled"] = policy
    return ViablePair(levels, meta, list(pair.checkpoints))


# ----------------------------------------------------------------------------
# verification


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None
    asserted: bool = True


@dataclass
class InvariantReport:
    kind: str
    mode: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    def add(self, name, passed, value=None, asserted=True):
        self.checks.append(Check(name, bool(passed), value, asserted))

    def get(self, name) -> Check:
        return next(c for c in self.checks if c.name == name)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "asserted": c.asserted,
                    "value": _jsonable(c.value),
                }
                for c in self.checks
            ],
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


def _power_positions(n: int, k: int) -> np.ndarray:
    pos = np.arange(iroot(n, k) + 1, dtype=np.int64) ** k
    return pos[pos < n]


def verify_construction_invariants(pair: ViablePair, kind: str | None = None) -> InvariantReport:
    meta = pair.construction
    kind = (kind or meta.get("kind") or "").upper()
    mode = meta.get("mode", RELAXED)
    strict = mode == STRICT
    rep = InvariantReport(kind or "?", mode)
    v = viability_check(pair)
    rep.add("refinement_and_boundary", v.viable, v.violation)
    levels = pair.levels
    for t in range(1, len(levels)):
        prev, lv = levels[t - 1], levels[t]
        w = lv.word.data
        ends = np.concatenate((w[: prev.n], w[lv.n - prev.n :]))
        rep.add(f"ends_resolved[{t}]", not np.any(ends == Symbol.HOLE))
    if kind == "A":
        _verify_a(pair, rep, strict)
    elif kind == "B":
        _verify_b(pair, rep, strict)
    elif kind == "IWANIK":
        _verify_iwanik(pair, rep, strict)
    return rep


def _verify_a(pair, rep, strict):
    meta = pair.construction
    k = meta["k"]
    params = gcd_pattern(k, meta["l"])
    kp = params.k_prime
    for t, lv in enumerate(pair.levels[1:], start=1):
        w = lv.word.data
        holes = w == Symbol.HOLE
        units_k = power_residues(lv.n, k, units_only=True).members
        rep.add(f"holes_in_unit_powers[{t}]", not np.any(holes & ~units_k))
        rep.add(f"powers_filled[{t}]", not np.any(holes[_power_positions(lv.n, k)]))
        phi = factorize(lv.n).phi
        ratio = Fraction(lv.word.hole_count * kp**t, phi)
        rep.add(f"hole_count_ratio[{t}]", ratio >= Fraction(9, 10), ratio, asserted=strict)
        p = lv.n // pair.levels[t - 1].n
        rep.add(f"gcd_prime[{t}]", params.admits(p), p)


def _verify_b(pair, rep, strict):
    meta = pair.construction
    k, l = meta["k"], meta["l"]
    for t, lv in enumerate(pair.levels[1:], start=1):
        w = lv.word.data
        holes = w == Symbol.HOLE
        res = build_a_set(lv.n, k, l)
        rep.add(f"holes_in_A[{t}]", not np.any(holes & ~res.aset.members))
        rep.add(f"powers_filled[{t}]", not np.any(holes[_power_positions(lv.n, k)]))
        f = factorize(lv.n)
        ratio = Fraction(lv.word.hole_count * k**f.omega, f.phi)
        rep.add(f"hole_count_ratio[{t}]", ratio >= Fraction(9, 10), ratio, asserted=strict)
        rep.add(f"est1[{t}]", res.est1_holds, (res.size, res.est1_bound), asserted=res.strict)


def _verify_iwanik(pair, rep, strict):
    blocks = blocks_from_pair(pair)
    Q = blocks.poly
    for t, lv in enumerate(blocks.levels):
        w = pair.levels[t].word.data
        expect = lv.B0.copy()
        expect[lv.B0 != lv.B1] = Symbol.HOLE
        rep.add(f"level_matches_blocks[{t}]", np.array_equal(w, expect))
        frac = Fraction(len(lv.A), lv.n)
        if t > 0:
            rep.add(f"A_density[{t}]", frac >= Fraction(4, 5), frac, asserted=strict)
        if lv.eps is None:
            continue
        m = len(lv.eps)
        e, ep = lv.eps, lv.eps_prime
        rep.add(f"endpoints[{t}]", e[0] == 0 and e[-1] == 1 and ep[0] == 0 and ep[-1] == 1)
        rep.add(f"complement[{t}]", bool(np.all(ep[1:-1] == 1 - e[1:-1])))
        rep.add(f"zero_quota[{t}]", int(np.count_nonzero(e == 0)) == zero_quota(m))
        nxt = blocks.levels[t + 1]
        rep.add(f"A_growth[{t}]", len(nxt.A) >= (m - 2) * len(lv.A), (len(nxt.A), len(lv.A)))
        target = t % 2
        A_mask = lv.B0 != lv.B1
        ok = all(nxt.B0[Q(i)] == target for i in _qualifying(Q, lv.n, nxt.n, A_mask))
        rep.add(f"pins_satisfied[{t}]", ok)
