"""
Partial words over {0, 1, ?}, viable pairs and their periodic structure.

A viable pair is stored as its materialized levels (n_t, x_t).  Lookups at
any integer position reduce modulo n_t, which covers negative indices too.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ntcore import ResidueSet

TPV_FORMAT = "TPV1"
RLE_THRESHOLD = 2**20


class Symbol(IntEnum):
    ZERO = 0
    ONE = 1
    HOLE = 2

    def __str__(self) -> str:
        return "01?"[self]


_CHAR_TO_CODE = {"0": 0, "1": 1, "?": 2}
_CODES_TO_BYTES = np.frombuffer(b"01?", dtype=np.uint8)


class PartialWord:
    """A finite word over {0, 1, ?} held as a uint8 array (2 marks a hole)."""

    __slots__ = ("data", "_holes")

    def __init__(self, data):
        if isinstance(data, str):
            raw = np.frombuffer(data.encode("ascii"), dtype=np.uint8)
            lut = np.full(256, 255, dtype=np.uint8)
            lut[_CODES_TO_BYTES] = [0, 1, 2]
            data = lut[raw]
            if data.size and data.max() == 255:
                raise ValueError("words use only the symbols 0, 1 and ?")
        arr = np.asarray(data, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("words are one-dimensional")
        if arr.size and arr.max() > 2:
            raise ValueError("symbols must be 0, 1 or 2 (hole)")
        self.data = arr
        self._holes = None

    @classmethod
    def holes(cls, n: int) -> "PartialWord":
        return cls(np.full(n, Symbol.HOLE, dtype=np.uint8))

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, i) -> Symbol:
        return Symbol(int(self.data[i]))

    @property
    def hole_count(self) -> int:
        if self._holes is None:
            self._holes = int(np.count_nonzero(self.data == Symbol.HOLE))
        return self._holes

    def hole_positions(self) -> np.ndarray:
        return np.flatnonzero(self.data == Symbol.HOLE)

    def __str__(self) -> str:
        return _CODES_TO_BYTES[self.data].tobytes().decode("ascii")

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialWord) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        s = str(self) if len(self) <= 64 else str(PartialWord(self.data[:64])) + "..."
        return f"PartialWord({s!r})"

    def to_runs(self) -> list[tuple[str, int]]:
        d = self.data
        if not len(d):
            return []
        edges = np.flatnonzero(np.diff(d)) + 1
        starts = np.concatenate(([0], edges))
        lengths = np.diff(np.concatenate((starts, [len(d)])))
        return [("01?"[int(d[s])], int(r)) for s, r in zip(starts, lengths)]

    @classmethod
    def from_runs(cls, runs: Iterable[Sequence]) -> "PartialWord":
        runs = list(runs)
        codes = np.array([_CHAR_TO_CODE[str(s)] for s, _ in runs], dtype=np.uint8)
        lengths = np.array([int(r) for _, r in runs], dtype=np.int64)
        return cls(np.repeat(codes, lengths))


@dataclass
class Level:
    n: int
    word: PartialWord
    encoding: str | None = None  # TPV1 encoding hint, kept for byte-exact round trips

    def __post_init__(self):
        if not isinstance(self.word, PartialWord):
            self.word = PartialWord(self.word)
        if len(self.word) != self.n:
            raise ValueError(f"level word has length {len(self.word)}, expected {self.n}")


@dataclass
class ViablePair:
    levels: list[Level]
    construction: dict = field(default_factory=dict)
    checkpoints: list[int] = field(default_factory=list)

    @classmethod
    def from_words(cls, words: Sequence[str], **kw) -> "ViablePair":
        return cls([Level(len(w), PartialWord(w)) for w in words], **kw)

    @property
    def height(self) -> int:
        """Index of the top materialized level."""
        return len(self.levels) - 1

    @property
    def top(self) -> Level:
        return self.levels[-1]

    def moduli(self) -> list[int]:
        return [lv.n for lv in self.levels]

    def lookup(self, positions, level: int | None = None) -> np.ndarray:
        """Symbols of the periodic extension X_T at integer positions (vectorized)."""
        lv = self.levels[self.height if level is None else level]
        pos = np.asarray(positions)
        if pos.dtype == object:
            pos = np.array([int(v) % lv.n for v in pos], dtype=np.int64)
        return lv.word.data[np.mod(pos, lv.n)]

    def hole_free(self, level: int | None = None) -> bool:
        lv = self.levels[self.height if level is None else level]
        return lv.word.hole_count == 0


# ----------------------------------------------------------------------------
# viability and lookups


@dataclass
class ViabilityReport:
    viable: bool
    violation: tuple[int, int] | None = None  # (level, position)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.viable


def viability_check(pair: ViablePair) -> ViabilityReport:
    """Refinement between consecutive levels, and resolution at the top level
    of every i < n_{T-1} together with its mirror n_T - i (read mod n_T)."""
    levels = pair.levels
    for t in range(len(levels) - 1):
        a, b = levels[t], levels[t + 1]
        if b.n <= a.n or b.n % a.n:
            return ViabilityReport(False, (t + 1, 0), f"n_{t + 1}={b.n} is not a proper multiple of {a.n}")
        tiled = np.tile(a.word.data, b.n // a.n)
        bad = np.flatnonzero((tiled != Symbol.HOLE) & (tiled != b.word.data))
        if len(bad):
            return ViabilityReport(False, (t + 1, int(bad[0])), "refinement broken")
    # finite towers can only vouch for positions below n_{T-1}
    top = pair.top
    n = top.n
    span = levels[-2].n if len(levels) > 1 else n
    holes = top.word.data == Symbol.HOLE
    idx = np.arange(span)
    bad = np.flatnonzero(holes[idx] | holes[(-idx) % n])
    if len(bad):
        return ViabilityReport(False, (pair.height, int(bad[0])), "position never resolved")
    return ViabilityReport(True)


def symbol_at(pair: ViablePair, i: int) -> tuple[Symbol, int]:
    """First non-hole symbol across levels at position i, with its level."""
    for t, lv in enumerate(pair.levels):
        s = lv.word.data[i % lv.n]
        if s != Symbol.HOLE:
            return Symbol(int(s)), t
    return Symbol.HOLE, pair.height


@dataclass
class QuestionStats:
    level: int
    n: int
    holes: int
    ratio: Fraction
    rho_ratio: Fraction | None


def question_stats(pair: ViablePair, k: int | None = None) -> list[QuestionStats]:
    from .ntcore import rho_max

    out = []
    for t, lv in enumerate(pair.levels):
        q = lv.word.hole_count
        rr = Fraction(q * rho_max(k, lv.n), lv.n) if k else None
        out.append(QuestionStats(t, lv.n, q, Fraction(q, lv.n), rr))
    return out


# ----------------------------------------------------------------------------
# periodic structure


def per_residues(word, s: int, eps: Symbol) -> ResidueSet:
    """Residues r mod s whose positions inside the window all carry ``eps``.

    ``word`` is a finite window starting at index 0; holes never qualify.
    """
    data = word.data if isinstance(word, PartialWord) else PartialWord(word).data
    L = len(data)
    ok = np.ones(s, dtype=bool)
    pad = (-L) % s
    grid = np.concatenate((data, np.full(pad, eps, dtype=np.uint8))).reshape(-1, s)
    ok &= np.all(grid == eps, axis=0)
    return ResidueSet(s, ok)


class Verdict(str, Enum):
    ESSENTIAL = "ESSENTIAL"
    NOT_ESSENTIAL = "NOT-ESSENTIAL"
    UNKNOWN = "UNKNOWN"


@dataclass
class PeriodEntry:
    s: int
    per0: ResidueSet  # certified Per^(0)_s residues
    per1: ResidueSet  # certified Per^(1)_s residues
    refuted: ResidueSet  # residues certainly outside Per_s
    verdict: Verdict

    @property
    def per(self) -> ResidueSet:
        return ResidueSet(self.s, self.per0.members | self.per1.members)

    @property
    def determined(self) -> bool:
        return bool(np.all(self.per0.members | self.per1.members | self.refuted.members))


@dataclass
class PeriodCertificate:
    level: int
    n: int
    entries: dict[int, PeriodEntry]

    def essential_periods(self) -> list[int]:
        return [s for s, e in sorted(self.entries.items()) if e.verdict is Verdict.ESSENTIAL]

    def unknown_periods(self) -> list[int]:
        return [s for s, e in sorted(self.entries.items()) if e.verdict is Verdict.UNKNOWN]


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _class_table(data: np.ndarray, s: int):
    grid = data.reshape(-1, s)
    has0 = np.any(grid == Symbol.ZERO, axis=0)
    has1 = np.any(grid == Symbol.ONE, axis=0)
    hole = np.any(grid == Symbol.HOLE, axis=0)
    return has0, has1, hole


def essential_period_certificate(pair: ViablePair, T: int | None = None) -> PeriodCertificate:
    """Certified periodic structure of X_T for every divisor s of n_T.

    A residue class mod s is certified in Per^(eps)_s when all its positions in
    one period of X_T are resolved and equal eps; it is refuted when two of its
    resolved positions disagree.  Both facts survive any further refinement.
    """
    T = pair.height if T is None else T
    lv = pair.levels[T]
    data = lv.word.data
    entries: dict[int, PeriodEntry] = {}
    for s in divisors(lv.n):
        has0, has1, hole = _class_table(data, s)
        per0 = has0 & ~has1 & ~hole
        per1 = has1 & ~has0 & ~hole
        refuted = has0 & has1
        entries[s] = PeriodEntry(
            s, ResidueSet(s, per0), ResidueSet(s, per1), ResidueSet(s, refuted), Verdict.UNKNOWN
        )
    for s, e in entries.items():
        cert = e.per0.members | e.per1.members
        if e.determined and not cert.any():
            e.verdict = Verdict.NOT_ESSENTIAL
            continue
        strict_all = True
        equal_some = False
        for d in divisors(s)[:-1]:
            sub = entries[d]
            r = np.arange(s) % d
            # some certified class of s whose image mod d is refuted
            if np.any(cert & sub.refuted.members[r]):
                continue
            strict_all = False
            if e.determined and sub.determined:
                sub_cert = (sub.per0.members | sub.per1.members)[r]
                if np.array_equal(sub_cert, cert):
                    equal_some = True
        if cert.any() and strict_all:
            e.verdict = Verdict.ESSENTIAL
        elif equal_some:
            e.verdict = Verdict.NOT_ESSENTIAL
    return PeriodCertificate(T, lv.n, entries)


def block_frequency(pair: ViablePair, B: str, T: int | None = None) -> tuple[Fraction, Fraction]:
    """[certain, possible] cyclic frequency of the 0/1 block B in X_T."""
    T = pair.height if T is None else T
    lv = pair.levels[T]
    n = lv.n
    if len(B) > n:
        raise ValueError("block longer than the level period")
    data = lv.word.data
    certain = np.ones(n, dtype=bool)
    possible = np.ones(n, dtype=bool)
    for j, ch in enumerate(B):
        sym = np.roll(data, -j)
        want = _CHAR_TO_CODE[ch]
        certain &= sym == want
        possible &= (sym == want) | (sym == Symbol.HOLE)
    return Fraction(int(certain.sum()), n), Fraction(int(possible.sum()), n)


def separation_radius(pair: ViablePair, s: int) -> int:
    """Radius M with d(y, shift^n y) >= 2^-M for every y when s does not divide n.

    Needs a hole-free top level and an essential period s of it.  Follows the
    witness construction: a position a certifying s, the window nu = x[a, a+N]
    pinning down Per^(eps)_s, and M bounding the gaps between occurrences of nu.
    """
    lv = pair.top
    if lv.word.hole_count:
        raise ValueError("separation radius needs a hole-free level")
    n, data = lv.n, lv.word.data
    cert = essential_period_certificate(pair)
    entry = cert.entries.get(s)
    if entry is None or entry.verdict is not Verdict.ESSENTIAL:
        raise ValueError(f"{s} is not an essential period of this word")
    # a residue in Per_s outside Per_d for every proper divisor d
    good = entry.per.members.copy()
    for d in divisors(s)[:-1]:
        sub = cert.entries[d].per.members
        good &= ~sub[np.arange(s) % d]
    a = int(np.flatnonzero(good)[0])
    eps = int(data[a])
    per_eps = (entry.per0 if eps == 0 else entry.per1).members
    N = 0
    for i in range(s):
        if per_eps[i]:
            continue
        j = a + ((i - a) % s)
        while data[j % n] == eps:
            j += s
        N = max(N, j - a)
    nu_word = data[(a + np.arange(N + 1)) % n]
    L = N + 1
    ext = np.concatenate((data, data[: L - 1])) if L > 1 else data
    windows = np.lib.stride_tricks.sliding_window_view(ext, L)[:n]
    occ = np.flatnonzero(np.all(windows == nu_word, axis=1))
    gaps = np.diff(np.concatenate((occ, [occ[0] + n])))
    return int(gaps.max()) + L


def separation_holds(pair: ViablePair, s: int, M: int) -> bool:
    """For every shift r and n in [1, n_T] with s not dividing n, the windows
    [r-M, r+M] and [r+n-M, r+n+M] differ."""
    lv = pair.top
    n, data = lv.n, lv.word.data
    offs = np.arange(-M, M + 1)
    for r in range(n):
        base = data[(r + offs) % n]
        for k in range(1, n + 1):
            if k % s == 0:
                continue
            if np.array_equal(base, data[(r + k + offs) % n]):
                return False
    return True


# ----------------------------------------------------------------------------
# TPV1 files


def _level_to_json(lv: Level, encoding: str | None = None) -> dict:
    if encoding is None:
        encoding = lv.encoding or ("rle" if lv.n > RLE_THRESHOLD else "plain")
    if encoding == "plain":
        word = str(lv.word)
    elif encoding == "rle":
        word = [[s, r] for s, r in lv.word.to_runs()]
    else:
        raise ValueError(f"unknown encoding {encoding}")
    return {"n": lv.n, "encoding": encoding, "word": word}


def dumps_tpv(pair: ViablePair, encoding: str | None = None) -> str:
    c = pair.construction
    doc = {
        "format_version": TPV_FORMAT,
        "alphabet": "01?",
        "construction": {
            "kind": c.get("kind"),
            "k": c.get("k"),
            "l": c.get("l"),
            "mode": c.get("mode"),
            "fill_policy": c.get("fill_policy"),
            "seed": c.get("seed"),
        },
        "levels": [_level_to_json(lv, encoding) for lv in pair.levels],
        "checkpoints": [int(v) for v in pair.checkpoints],
    }
    extra = {k: v for k, v in c.items() if k not in doc["construction"]}
    if extra:
        doc["construction"]["extra"] = extra
    return json.dumps(doc, indent=1, separators=(",", ": ")) + "\n"


def loads_tpv(text: str) -> ViablePair:
    doc = json.loads(text)
    if doc.get("format_version") != TPV_FORMAT:
        raise ValueError(f"not a {TPV_FORMAT} document")
    if doc.get("alphabet") != "01?":
        raise ValueError("unsupported alphabet")
    levels = []
    for item in doc["levels"]:
        enc = item["encoding"]
        if enc == "plain":
            word = PartialWord(item["word"])
        elif enc == "rle":
            word = PartialWord.from_runs(item["word"])
        else:
            raise ValueError(f"unknown encoding {enc}")
        levels.append(Level(int(item["n"]), word, enc))
    cons = dict(doc.get("construction") or {})
    extra = cons.pop("extra", {}) or {}
    cons.update(extra)
    cons = {k: v for k, v in cons.items() if not (v is None and k not in ("kind",))}
    return ViablePair(levels, cons, [int(v) for v in doc.get("checkpoints", [])])


def save_tpv(pair: ViablePair, path, encoding: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_tpv(pair, encoding))


def load_tpv(path) -> ViablePair:
    with open(path, encoding="utf-8") as fh:
        return loads_tpv(fh.read())


def all_words(length: int) -> Iterable[str]:
    for bits in itertools.product("01", repeat=length):
        yield "".join(bits)
