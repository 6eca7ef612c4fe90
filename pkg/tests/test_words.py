from fractions import Fraction

import numpy as np
import pytest

from toeplitz_orbits.words import (
    Level,
    PartialWord,
    Symbol,
    ViablePair,
    all_words,
    block_frequency,
    divisors,
    dumps_tpv,
    essential_period_certificate,
    load_tpv,
    loads_tpv,
    per_residues,
    question_stats,
    save_tpv,
    separation_holds,
    separation_radius,
    symbol_at,
    viability_check,
)

HOLE_PAIR = ViablePair.from_words(["?", "0?"])
ALT = ViablePair.from_words(["?", "01"])


def test_partial_word_parsing_and_rendering():
    w = PartialWord("01??0")
    assert str(w) == "01??0" and len(w) == 5
    assert w.hole_count == 2 and list(w.hole_positions()) == [2, 3]
    assert w[2] is Symbol.HOLE and str(Symbol.HOLE) == "?"
    with pytest.raises(ValueError):
        PartialWord("01x")


def test_runs_round_trip():
    w = PartialWord("000??1000")
    assert w.to_runs() == [("0", 3), ("?", 2), ("1", 1), ("0", 3)]
    assert PartialWord.from_runs(w.to_runs()) == w


def test_level_length_must_match():
    with pytest.raises(ValueError):
        Level(3, PartialWord("01"))


# -- viability -----------------------------------------------------------------------


def test_viability_examples():
    assert viability_check(ALT).viable
    rep = viability_check(ViablePair.from_words(["0?", "0?0?"]))
    assert not rep.viable and rep.violation == (1, 1)
    rep = viability_check(ViablePair.from_words(["01", "0110"]))
    assert not rep.viable and rep.violation == (1, 2) and "refinement" in rep.reason


def test_viability_rejects_non_multiple_moduli():
    assert not viability_check(ViablePair.from_words(["01", "010"]))


def test_symbol_at_examples():
    assert symbol_at(ALT, -1) == (Symbol.ONE, 1)
    const = ViablePair.from_words(["0"])
    assert all(symbol_at(const, i)[0] is Symbol.ZERO for i in range(-5, 5))
    assert symbol_at(HOLE_PAIR, 1) == (Symbol.HOLE, 1)


def test_symbol_at_negative_index_matches_mirror_rule():
    pair = ViablePair.from_words(["?", "0?1", "001011?01"])
    for i in range(1, 20):
        sym, t = symbol_at(pair, -i)
        n = pair.levels[t].n
        assert sym == Symbol(int(pair.levels[t].word.data[n - (i % n) if i % n else 0]))


def test_question_stats_examples():
    assert [q.holes for q in question_stats(ViablePair.from_words(["0", "00"]))] == [0, 0]
    stats = question_stats(HOLE_PAIR)
    assert stats[1].holes == 1 and stats[1].ratio == Fraction(1, 2)
    stats = question_stats(ViablePair.from_words(["?", "000?0?00000"]), k=2)
    assert stats[1].holes == 2 and stats[1].ratio == Fraction(2, 11)
    assert stats[1].rho_ratio == Fraction(2 * 2, 11)


# -- periodic structure -------------------------------------------------------------


def test_per_residues_examples():
    assert per_residues("0101", 2, Symbol.ZERO).to_list() == [0]
    assert per_residues("000", 1, Symbol.ZERO).to_list() == [0]
    assert per_residues("010", 1, Symbol.ZERO).to_list() == []
    assert per_residues("0101", 4, Symbol.ONE).to_list() == [1, 3]


def test_per_residues_against_definition():
    for w in ["0110100110010110", "0010001000100010", "01?1"]:
        for s in range(1, 6):
            for eps in (Symbol.ZERO, Symbol.ONE):
                want = [
                    r
                    for r in range(s)
                    if all(w[i] == str(int(eps)) for i in range(r, len(w), s))
                ]
                assert per_residues(w, s, eps).to_list() == want


def test_certificate_examples():
    cert = essential_period_certificate(ViablePair.from_words(["01"]))
    assert cert.essential_periods() == [2]
    assert cert.entries[2].per.to_list() == [0, 1] and cert.entries[1].per.to_list() == []
    assert essential_period_certificate(ViablePair.from_words(["0"])).essential_periods() == [1]
    cert = essential_period_certificate(HOLE_PAIR, 1)
    e = cert.entries[2]
    assert e.per0.to_list() == [0] and e.per1.to_list() == [] and not e.refuted.members[1]


def brute_essential(word):
    """Essential periods of the periodic extension of a hole-free word."""
    n = len(word)
    per = {}
    for s in divisors(n):
        per[s] = {r for r in range(s) if len({word[i] for i in range(r, n, s)}) == 1}
    out = []
    for s in divisors(n):
        if not per[s]:
            continue
        if all(per[s] != {r for r in range(s) if r % d in per[d]} for d in divisors(s)[:-1]):
            out.append(s)
    return out


def test_essential_periods_of_all_short_words():
    # on hole-free words the certificate is exact; compare with the definition
    for L in (1, 2, 3, 4, 6, 8):
        for w in all_words(L):
            cert = essential_period_certificate(ViablePair.from_words([w]))
            assert not cert.unknown_periods()
            assert cert.essential_periods() == brute_essential(w), w


def test_certificate_divisor_monotonicity():
    pair = ViablePair.from_words(["?", "0?1?", "0010110?"])
    cert = essential_period_certificate(pair)
    for s, e in cert.entries.items():
        for d in divisors(s):
            sub = cert.entries[d].per.members
            lifted = sub[np.arange(s) % d]
            assert not np.any(lifted & ~e.per.members)


def test_block_frequency_examples():
    pair = ViablePair.from_words(["01"])
    assert block_frequency(pair, "1") == (Fraction(1, 2), Fraction(1, 2))
    assert block_frequency(HOLE_PAIR, "0", 1) == (Fraction(1, 2), Fraction(1))
    assert block_frequency(pair, "00") == (0, 0)


# -- separation ------------------------------------------------------------------------


@pytest.mark.parametrize("word", ["01", "0001", "0010", "001011", "0100110101001101"])
def test_separation_radius_separates(word):
    pair = ViablePair.from_words([word])
    for s in essential_period_certificate(pair).essential_periods():
        M = separation_radius(pair, s)
        assert separation_holds(pair, s, M)


# -- TPV1 ------------------------------------------------------------------------------


def test_tpv_round_trip_is_byte_exact(tmp_path):
    pair = ViablePair(
        [Level(1, PartialWord("?")), Level(4, PartialWord("0??1"), "rle")],
        {"kind": "A", "k": 2, "l": 3, "mode": "relaxed", "fill_policy": "zero", "seed": None, "note": [1, 2]},
        [2],
    )
    text = dumps_tpv(pair)
    assert dumps_tpv(loads_tpv(text)) == text
    path = tmp_path / "p.tpv"
    save_tpv(pair, path)
    assert path.read_bytes() == text.encode()
    again = load_tpv(path)
    assert [str(lv.word) for lv in again.levels] == ["?", "0??1"]
    assert again.checkpoints == [2]


def test_tpv_field_order_and_encodings():
    text = dumps_tpv(ViablePair.from_words(["?", "01"]))
    keys = ["format_version", "alphabet", "construction", "levels", "checkpoints"]
    positions = [text.index(f'"{k}"') for k in keys]
    assert positions == sorted(positions)
    rle = dumps_tpv(ViablePair.from_words(["?", "0011"]), encoding="rle")
    assert loads_tpv(rle).levels[1].word == PartialWord("0011")
    assert '"rle"' in rle


def test_tpv_rejects_foreign_documents():
    with pytest.raises(ValueError):
        loads_tpv('{"format_version": "TPV2", "alphabet": "01?", "levels": []}')
