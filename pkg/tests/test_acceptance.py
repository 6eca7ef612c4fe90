"""Acceptance suite: one test per criterion, each with its runtime limit.

The terminal summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from toeplitz_orbits.constructions import (
    ConstructionConfig,
    build,
    build_iwanik,
    fill_top_level,
    plan_strict_a,
    plan_strict_b,
    verify_construction_invariants,
)
from toeplitz_orbits.ntcore import (
    HypothesisError,
    IntPolynomial,
    build_a_set,
    dickson_functional_value,
    is_permutation_mod,
    is_prime,
    lift_criterion,
    naive_a_set,
    weil_count,
)
from toeplitz_orbits.orbitstats import (
    CylinderFunction,
    Density,
    almost_prime_obstruction,
    birkhoff_sum,
    checkpoint_report,
    convergence_probe,
    cylinder_witnesses,
    density_verdict,
    iwanik_ap_check,
)
from toeplitz_orbits.words import Symbol, ViablePair

G = CylinderFunction.G()
PERM = IntPolynomial((0, 1, 210))  # permutes modulo every 2^a 3^b 5^c 7^d


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def report(num, detail):
    print(f"criterion {num}: {detail}")


def test_criterion_01_weil_bound_exhaustive():
    exceptions = checked = 0
    with Timer(10):
        for p in filter(is_prime, range(2, 101)):
            for k, l in itertools.product(range(2, 6), repeat=2):
                if k >= p or l >= p:
                    continue
                for a in range(1, p):
                    c = weil_count(p, k, l, a, check=False)
                    checked += 1
                    exceptions += (c - p) ** 2 > (k * l) ** 2 * p
    report(1, f"{checked} cases, {exceptions} exceptions")
    assert checked > 0 and exceptions == 0


def test_criterion_02_lift_criterion_equivalence():
    mismatches = []
    with Timer(30):
        for coeffs in itertools.product(range(-3, 4), repeat=4):
            P = IntPolynomial(coeffs)
            for p in (2, 3, 5, 7):
                if lift_criterion(P, p) != is_permutation_mod(P, p * p):
                    mismatches.append((coeffs, p))
    report(2, f"{7**4 * 4} cases, {len(mismatches)} mismatches")
    assert not mismatches


def test_criterion_03_dickson_identity():
    bad = []
    with Timer(1):
        xs = [Fraction(s * v) for v in range(1, 8) for s in (1, -1)]
        for n in range(1, 11):
            for alpha in range(-5, 6):
                for x in xs:
                    lhs, rhs = dickson_functional_value(n, alpha, x)
                    if lhs != rhs:
                        bad.append((n, alpha, x))
    report(3, f"{10 * 11 * 14} cases, {len(bad)} failures")
    assert not bad


def a_set_by_enumeration(n, k, l):
    """O(n) enumeration straight from the definition of the set."""
    primes = [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]
    kth = np.zeros(n, dtype=bool)
    for m in range(n):
        if math.gcd(m, n) == 1:
            kth[pow(m, k, n)] = True
    lth = {p: {pow(y, l, p) for y in range(p)} for p in primes}
    thr = math.log(len(primes))
    return {a for a in np.flatnonzero(kth).tolist() if sum(a % p not in lth[p] for p in primes) > thr}


def test_criterion_04_a_set_instance():
    with Timer(20):
        res = build_a_set(221, 2, 4)
        assert res.size == 36
        assert set(res.aset.to_list()) == a_set_by_enumeration(221, 2, 4)
        rng = np.random.default_rng(2024)
        primes = [p for p in range(3, 10**4) if is_prime(p)]
        done = 0
        while done < 20:
            k = int(rng.choice([2, 3]))
            l = k * int(rng.integers(1, 4))
            pool = [p for p in primes if (p - 1) % l == 0]
            chosen = sorted({int(v) for v in rng.choice(pool, size=int(rng.integers(1, 4)))})
            n = math.prod(chosen)
            if n > 10**4:
                continue
            try:
                fast = build_a_set(n, k, l).aset
            except HypothesisError:
                continue
            assert fast == naive_a_set(n, k, l), (n, k, l)
            done += 1
    report(4, "|A| = 36 for (221, 2, 4); fast path equals naive on 20 random instances")


def test_criterion_05_construction_a_golden():
    with Timer(1):
        pair = build(ConstructionConfig("A", 2, 3, primes=[11], fill_policy="zero"))
        word = pair.levels[1].word
        assert pair.levels[1].n == 11
        assert list(word.hole_positions()) == [3, 5]
        assert all(word[i] is Symbol.ZERO for i in (1, 4, 9))
        rep = checkpoint_report(pair)
        (e,) = rep.entries
        assert e.C == 3 and e.average.low == e.average.high == 1
    report(5, f"level-1 word {word}, C_0 = 3, average 1")


def _recheck_strict_a(plan, k):
    n, running, primes = 1, 0.0, []
    for lv in plan.levels:
        p = lv.new_factor
        assert is_prime(p) and math.gcd(p - 1, 6) == 2
        assert p > 30 * n**k
        primes.append(p)
        running += 8 * k * n / math.sqrt(p)
        phi = math.prod(Fraction(q - 1, q) for q in primes)
        assert running < 0.1 and phi > Fraction(9, 10)
        n *= p
        assert lv.n == n


def _recheck_strict_b(plan, k):
    n = 1
    for lv in plan.levels:
        assert lv.n % n == 0 and lv.n > 10 * n**k
        assert lv.conditions["loss_sum"][1] < 0.1
        n = lv.n


def test_criterion_06_divergence_alternation():
    with Timer(300):
        a = build(ConstructionConfig("A", 2, 3, primes=[227, 53, 59]))
        ra = checkpoint_report(a)
        b = build(ConstructionConfig("B", 2, 4, tower=[1073, 1073 * 41 * 53, 1073 * 41 * 53 * 61]))
        rb = checkpoint_report(b)
        for rep in (ra, rb):
            assert len(rep.entries) >= 3
            assert rep.alternates, [(e.t, e.sign) for e in rep.entries]
            assert rep.min_gap >= Fraction(1, 10)
        # strict towers: conditions re-derived from the reported magnitudes
        pa = plan_strict_a(2, 3, 3)
        pb = plan_strict_b(2, 4, 3)
        assert pa.ok and pb.ok
        _recheck_strict_a(pa, 2)
        _recheck_strict_b(pb, 2)
        assert pa.levels[1].n > 10**8 and not pa.levels[1].materializable
        assert not pb.levels[0].materializable
    fmt = lambda rep: ", ".join(f"{float(e.average.low):+.3f}" for e in rep.entries)
    report(6, f"A: {fmt(ra)}; B: {fmt(rb)}; gaps {float(ra.min_gap):.3f}, {float(rb.min_gap):.3f}")


ODD_TOWERS = [[5, 7, 9, 5], [9, 9, 9, 9], [7, 5, 7, 9], [9, 7, 5]]
EVEN_TOWERS = [[4, 6, 4, 6], [6, 6, 6, 6], [4, 4, 4, 4], [6, 4]]


def test_criterion_07_iwanik_ap_closed_form():
    checked = 0
    with Timer(30):
        for tower in ODD_TOWERS + EVEN_TOWERS:
            pair, blocks = build_iwanik(ConstructionConfig("IWANIK", poly=PERM, tower=tower))
            assert verify_construction_invariants(pair).ok
            height = len(blocks.levels)
            for s in range(height):
                for t in range(s):
                    entries = iwanik_ap_check(blocks, t, s)
                    assert len(entries) == 4
                    for e in entries:
                        assert e.matches, (tower, t, s, e)
                        if tower[0] % 2 == 0:
                            assert e.value == Fraction(1, 2)
                    checked += 4
    report(7, f"{checked} ap values match the closed form")


def test_criterion_08_permutation_identity():
    with Timer(10):
        pair = fill_top_level(build(ConstructionConfig("A", 2, 3, primes=[11, 17, 23])))
        n = pair.top.n
        P = IntPolynomial.monomial(3)
        assert pair.hole_free() and is_permutation_mod(P, n)
        rng = np.random.default_rng(8)
        shifts = rng.integers(0, 10**9, 10).tolist()
        for r in shifts:
            lhs = birkhoff_sum(pair, P, r, n, G)
            rhs = birkhoff_sum(pair, IntPolynomial.x(), r, n, G)
            assert lhs[0] == lhs[1] == rhs[0] == rhs[1]
    report(8, f"n_T = {n}, 10 shifts, sums equal exactly")


def test_criterion_09_convergence_bound():
    worst = []
    with Timer(120):
        pair = build(ConstructionConfig("B", 2, 4, tower=[221, 6409, 237133]))
        P = IntPolynomial.monomial(4)
        for t in range(1, pair.height + 1):
            n = pair.levels[t].n
            rep = convergence_probe(pair, P, G, [0, 1, 17], [n, 2 * n, 4 * n], t=t)
            assert rep.density.exact
            for osc in rep.oscillations:
                # 8 (2C+1) d / n_t + 2 n_t / N with C = 0, N the larger grid point
                bound = Fraction(8 * rep.density.value, n) + Fraction(2 * n, osc.N2)
                assert osc.value <= bound, (t, osc)
                worst.append(float(osc.value / bound))
            assert rep.ok
    report(9, f"worst oscillation/bound ratio {max(worst):.4f}")


def test_criterion_10_density_verdicts():
    with Timer(5):
        alt = ViablePair.from_words(["01"])
        rep = density_verdict(alt, IntPolynomial.monomial(3))
        assert rep.verdict is Density.DENSE
        for radius in range(4):
            assert all(m is not None for m in cylinder_witnesses(alt, IntPolynomial.monomial(3), radius).values())
        w = ViablePair.from_words(["0001"])
        rep = density_verdict(w, IntPolynomial.monomial(2))
        assert 4 in rep.essential
        assert rep.verdict is Density.NOT_DENSE and rep.missing == [2, 3]
        powers = (2**i for i in itertools.count(1))
        assert almost_prime_obstruction(2, powers) == (16, 0)
    report(10, "DENSE for 01/m^3, NOT-DENSE {2,3} for 0001/m^2, obstruction 16")
