import itertools
import math
import random
from fractions import Fraction

import pytest

import oracles
from typigraph.core import Alphabet, CondPmf, JointPmf, Pmf, conditionalize
from typigraph.typicality import (
    BigCount,
    DEFAULT_SCHEDULE,
    JointTypeVector,
    Sequence,
    TypeVector,
    cond_typical_set_size,
    count_types,
    default_params,
    empirical_joint_type,
    empirical_type,
    enumerate_types,
    is_cond_typical,
    is_jointly_typical,
    is_typical,
    jointly_typical_pair_count,
    jointly_typical_type_keys,
    log2_int,
    multinomial,
    pack_counts,
    sample_uniform_typical,
    schedule_delta,
    type_class_sequences,
    type_class_size,
    typical_set_rate_envelope,
    typical_set_size,
)

BIN = Alphabet((0, 1))
TERN = Alphabet((0, 1, 2))


def seq(alphabet, *symbols):
    return Sequence(alphabet, tuple(symbols))


# --- schedule ----------------------------------------------------------------


def test_schedule_delta_frozen():
    assert schedule_delta(4) == Fraction(63, 200)
    assert schedule_delta(8) == Fraction(1, 4)
    assert schedule_delta(12) == Fraction(2621, 12000)
    # vanishing but slower than 1/sqrt(n)
    assert float(schedule_delta(1000)) < float(schedule_delta(10))
    assert float(schedule_delta(1000)) * math.sqrt(1000) > 1
    with pytest.raises(ValueError):
        schedule_delta(0)
    with pytest.raises(ValueError):
        schedule_delta(8, "warp")


def test_default_params():
    p = default_params(8)
    assert p.eps1 == p.eps2 == p.lam == Fraction(1, 4)
    assert p.schedule == DEFAULT_SCHEDULE


# --- counting primitives ------------------------------------------------------


def test_multinomial_matches_factorials():
    rng = random.Random(5)
    for _ in range(200):
        k = rng.randrange(1, 5)
        counts = [rng.randrange(0, 6) for _ in range(k)]
        n = sum(counts)
        if n == 0:
            continue
        assert multinomial(n, tuple(counts)) == oracles.multinomial_factorial(
            n, counts
        )
    with pytest.raises(ValueError):
        multinomial(3, (1, 1))  # counts must sum to n


def test_type_class_size_joint():
    # all four pair-cells once: 4!/(1!1!1!1!) = 24 arrangements
    t = JointTypeVector(BIN, BIN, ((1, 1), (1, 1)))
    assert type_class_size(t).value == 24
    assert type_class_size(TypeVector(BIN, (2, 2))).value == 6


def test_type_class_sequences_lex_and_complete():
    t = TypeVector(BIN, (2, 2))
    seqs = list(type_class_sequences(t))
    assert len(seqs) == 6
    symbol_lists = [s.symbols for s in seqs]
    assert symbol_lists == sorted(symbol_lists)
    assert all(empirical_type(s).counts == (2, 2) for s in seqs)


def test_enumerate_types_colex_order():
    got = [t.counts for t in enumerate_types(3, 3)]
    want = sorted(
        (c for c in itertools.product(range(4), repeat=3) if sum(c) == 3),
        key=lambda c: tuple(reversed(c)),
    )
    assert got == want
    assert len(got) == 10  # stars and bars C(5,2)


def test_enumerate_types_ball_filter():
    p = Pmf(BIN, (Fraction(1, 2), Fraction(1, 2)))
    got = {t.counts for t in enumerate_types(2, 4, ball=(p, Fraction(1, 4)))}
    assert got == {(1, 3), (2, 2), (3, 1)}


def test_count_types_matches_enumeration():
    for k, n in ((2, 6), (3, 5), (4, 4)):
        assert count_types(k, n) == len(list(enumerate_types(k, n)))
        assert count_types(k, n) <= (n + 1) ** k


def test_total_class_sizes_cover_all_sequences():
    for k, n in ((2, 7), (3, 5)):
        total = sum(type_class_size(t).value for t in enumerate_types(k, n))
        assert total == k**n


# --- typicality predicates vs the definitions --------------------------------


def test_is_typical_matches_oracle():
    p = Pmf(BIN, (Fraction(3, 4), Fraction(1, 4)))
    for symbols in itertools.product(range(2), repeat=6):
        s = Sequence(BIN, symbols)
        for delta in (Fraction(0), Fraction(1, 6), Fraction(1, 4)):
            assert is_typical(s, p, delta) == oracles.robust_typical(
                symbols, p.probs, delta
            )


def test_zero_probability_symbol_is_never_typical():
    p = Pmf(BIN, (Fraction(1), Fraction(0)))
    assert is_typical(seq(BIN, 0, 0, 0), p, Fraction(1, 2))
    # delta = 1/2 would allow count 1 numerically, but the support rule bites
    assert not is_typical(seq(BIN, 0, 0, 1), p, Fraction(1, 2))


def test_is_cond_typical_matches_oracle(binary_joint):
    w = conditionalize(binary_joint, "row")
    w_rows = [None if r is None else list(r.probs) for r in w.rows]
    x = seq(BIN, 0, 0, 1, 0, 1)
    for ysym in itertools.product(range(2), repeat=5):
        y = Sequence(BIN, ysym)
        for delta in (Fraction(1, 10), Fraction(1, 5), Fraction(1, 2)):
            assert is_cond_typical(y, x, w, delta) == oracles.cond_typical(
                ysym, x.symbols, w_rows, delta
            )


def test_is_cond_typical_undefined_row():
    j = JointPmf(BIN, BIN, ((Fraction(1, 2), Fraction(1, 2)), (Fraction(0),) * 2))
    w = conditionalize(j, "row")
    x_bad = seq(BIN, 0, 1)
    with pytest.raises(ValueError, match="undefined"):
        is_cond_typical(seq(BIN, 0, 0), x_bad, w, Fraction(1, 4))
    # unused undefined rows are fine
    assert is_cond_typical(seq(BIN, 0, 1), seq(BIN, 0, 0), w, Fraction(1, 2))


def test_is_jointly_typical_matches_oracle(binary_joint):
    for xs in itertools.product(range(2), repeat=4):
        for ys in itertools.product(range(2), repeat=4):
            x, y = Sequence(BIN, xs), Sequence(BIN, ys)
            for delta in (Fraction(1, 10), Fraction(63, 200)):
                assert is_jointly_typical(
                    x, y, binary_joint, delta
                ) == oracles.jointly_typical(xs, ys, binary_joint.probs, delta)


# --- set sizes vs brute force -------------------------------------------------


def test_typical_set_size_binary_brute():
    ps = [
        Pmf(BIN, (Fraction(1, 2), Fraction(1, 2))),
        Pmf(BIN, (Fraction(3, 4), Fraction(1, 4))),
    ]
    for p in ps:
        for n in range(1, 9):
            for delta in (Fraction(0), Fraction(1, n), Fraction(1, 4)):
                assert typical_set_size(p, delta, n).value == (
                    oracles.brute_typical_count(p.probs, delta, n)
                )


def test_typical_set_size_ternary_brute():
    p = Pmf(TERN, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    for n in (3, 5, 7):
        for delta in (Fraction(1, n), Fraction(1, 5)):
            assert typical_set_size(p, delta, n).value == (
                oracles.brute_typical_count(p.probs, delta, n)
            )


def test_typical_set_size_degenerate_cases():
    p = Pmf(BIN, (Fraction(1, 2), Fraction(1, 2)))
    assert typical_set_size(p, Fraction(1), 5).value == 2**5
    point = Pmf(BIN, (Fraction(1), Fraction(0)))
    assert typical_set_size(point, Fraction(0), 6).value == 1
    assert typical_set_size(p, Fraction(63, 200), 4).value == 14


def test_cond_typical_set_size_brute(binary_joint):
    w = conditionalize(binary_joint, "row")
    w_rows = [None if r is None else list(r.probs) for r in w.rows]
    for xsym in ((0, 0, 1, 0, 1), (1, 1, 1, 1, 1), (0, 1, 0, 1, 0, 1)):
        x = Sequence(BIN, xsym)
        for delta in (Fraction(1, 10), Fraction(1, 5), Fraction(2, 5)):
            assert cond_typical_set_size(w, x, delta).value == (
                oracles.brute_cond_typical_count(w_rows, xsym, delta, 2)
            )


def test_jointly_typical_pair_count_brute(binary_joint):
    for n in (3, 4, 5):
        params = default_params(n)
        sizes = oracles.brute_pair_count(
            binary_joint.probs, params.eps1, params.eps2, params.lam, n
        )
        got = jointly_typical_pair_count(binary_joint, params, n)
        assert got.value == sizes[2]


# --- typical-set rate envelope -------------------------------------------------


def test_typical_set_rate_envelope_default_schedule():
    p = Pmf(BIN, (Fraction(2, 5), Fraction(3, 5)))
    h = -(0.4 * math.log2(0.4) + 0.6 * math.log2(0.6))
    for n in (8, 12, 16):
        delta = schedule_delta(n)
        c_n = typical_set_rate_envelope(p, n, delta)
        rate = log2_int(typical_set_size(p, delta, n).value) / n
        assert abs(rate - h) <= c_n + 1e-12


# --- sampling -----------------------------------------------------------------


def test_sample_uniform_typical_support_and_determinism():
    p = Pmf(BIN, (Fraction(1, 2), Fraction(1, 2)))
    delta = Fraction(63, 200)
    rng = random.Random(11)
    seen = set()
    for _ in range(3000):
        s = sample_uniform_typical(p, delta, 4, rng)
        assert is_typical(s, p, delta)
        seen.add(s.symbols)
    assert len(seen) == 14  # full coverage of the typical set

    a = sample_uniform_typical(p, delta, 4, random.Random(3)).symbols
    b = sample_uniform_typical(p, delta, 4, random.Random(3)).symbols
    assert a == b


def test_sample_uniform_typical_empty_set():
    p = Pmf(BIN, (Fraction(1, 3), Fraction(2, 3)))
    with pytest.raises(ValueError):
        sample_uniform_typical(p, Fraction(0), 4, random.Random(0))  # 4/3 not integral


def test_sample_uniform_typical_point_mass():
    point = Pmf(BIN, (Fraction(1), Fraction(0)))
    s = sample_uniform_typical(point, Fraction(0), 5, random.Random(0))
    assert s.symbols == (0, 0, 0, 0, 0)


def test_sampler_uniformity_chi_square():
    """Uniformity over the 14-member set: chi-square at p = 0.001, df = 13."""
    p = Pmf(BIN, (Fraction(1, 2), Fraction(1, 2)))
    delta = Fraction(63, 200)
    rng = random.Random(123)
    counts = {}
    draws = 14_000
    for _ in range(draws):
        s = sample_uniform_typical(p, delta, 4, rng)
        counts[s.symbols] = counts.get(s.symbols, 0) + 1
    assert len(counts) == 14
    expected = draws / 14
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 34.528  # chi2 critical value, df=13, alpha=0.001


# --- packed type keys ---------------------------------------------------------


def test_pack_counts_injective():
    rng = random.Random(9)
    n = 10
    seen = {}
    for _ in range(500):
        cells = [0, 0, 0, 0]
        for _ in range(n):
            cells[rng.randrange(4)] += 1
        key = pack_counts(cells, n + 1)
        if key in seen:
            assert seen[key] == tuple(cells)
        seen[key] = tuple(cells)


def test_jointly_typical_type_keys_match_predicate(binary_joint):
    n = 5
    params = default_params(n)
    keys = jointly_typical_type_keys(binary_joint, params.lam, n)
    for xs in itertools.product(range(2), repeat=n):
        for ys in itertools.product(range(2), repeat=n):
            x, y = Sequence(BIN, xs), Sequence(BIN, ys)
            jt = empirical_joint_type(x, y)
            packed = pack_counts([c for row in jt.counts for c in row], n + 1)
            assert (packed in keys) == is_jointly_typical(
                x, y, binary_joint, params.lam
            )


# --- misc ---------------------------------------------------------------------


def test_log2_int_big():
    assert log2_int(2**1000) == 1000.0
    assert abs(log2_int(3**500) - 500 * math.log2(3)) < 1e-9
    assert BigCount.from_int(70).log2 == pytest.approx(math.log2(70))


def test_sequence_validation():
    with pytest.raises(ValueError):
        Sequence(BIN, ())
    with pytest.raises(ValueError):
        Sequence(BIN, (0, 2))
    s = seq(BIN, 1, 0, 1)
    assert s.n == 3
    assert s.labels() == (1, 0, 1)
    assert empirical_type(s).counts == (1, 2)
