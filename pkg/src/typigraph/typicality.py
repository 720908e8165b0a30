"""Sequences, types, typical sets: exact counting and membership.

A length-n sequence over a finite alphabet has a type (empirical pmf with
denominator n). Membership predicates use closed balls with exact rational
comparisons:

  robust typicality     max_a |N(a|x)/n - P(a)| <= delta, and no symbol with
                        P(a) = 0 occurs in x;
  conditional           max_{a,b} |N(a,b|x,y)/n - (N(a|x)/n) W(b|a)| <= delta,
                        and N(a,b) = 0 wherever W(b|a) = 0;
  joint                 the robust predicate on the pair alphabet.

Counting is exact over big integers: a type class has multinomial size and
typical-set sizes are sums of type-class sizes over the admissible ball,
never enumerations of sequences.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import Alphabet, CondPmf, InvariantViolation, JointPmf, Pmf


# ---------------------------------------------------------------------------
# basic containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sequence:
    """Finite sequence stored as symbol indices into its alphabet."""

    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        if not syms:
            raise ValueError("sequences must have length >= 1")
        k = self.alphabet.size
        if any(s < 0 or s >= k for s in syms):
            raise ValueError("sequence symbol out of alphabet range")
        object.__setattr__(self, "symbols", syms)

    @property
    def n(self) -> int:
        return len(self.symbols)

    def labels(self) -> tuple:
        return tuple(self.alphabet.label(s) for s in self.symbols)

    @staticmethod
    def from_labels(alphabet: Alphabet, labels) -> "Sequence":
        return Sequence(alphabet, tuple(alphabet.index(l) for l in labels))


@dataclass(frozen=True)
class TypeVector:
    """Symbol counts of a length-n sequence."""

    alphabet: Alphabet
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != self.alphabet.size:
            raise ValueError("count vector length does not match alphabet")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be nonnegative")
        if sum(counts) < 1:
            raise ValueError("types need total count >= 1")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    def pmf(self) -> Pmf:
        n = self.n
        return Pmf(self.alphabet, tuple(Fraction(c, n) for c in self.counts))


@dataclass(frozen=True)
class JointTypeVector:
    """Pair counts of two aligned length-n sequences."""

    row_alphabet: Alphabet
    col_alphabet: Alphabet
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        counts = tuple(tuple(int(c) for c in row) for row in self.counts)
        if len(counts) != self.row_alphabet.size:
            raise ValueError("row count does not match row alphabet")
        for row in counts:
            if len(row) != self.col_alphabet.size:
                raise ValueError("column count does not match column alphabet")
            if any(c < 0 for c in row):
                raise ValueError("counts must be nonnegative")
        if sum(c for row in counts for c in row) < 1:
            raise ValueError("types need total count >= 1")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(c for row in self.counts for c in row)

    def flat(self) -> tuple[int, ...]:
        return tuple(c for row in self.counts for c in row)

    def row_type(self) -> TypeVector:
        return TypeVector(self.row_alphabet, tuple(sum(row) for row in self.counts))

    def col_type(self) -> TypeVector:
        k = self.col_alphabet.size
        return TypeVector(
            self.col_alphabet,
            tuple(sum(row[j] for row in self.counts) for j in range(k)),
        )

    def joint_pmf(self) -> JointPmf:
        n = self.n
        return JointPmf(
            self.row_alphabet,
            self.col_alphabet,
            tuple(tuple(Fraction(c, n) for c in row) for row in self.counts),
        )


@dataclass(frozen=True)
class TypicalityParams:
    """Per-n slack parameters: eps1 (left), eps2 (right), lam (joint)."""

    eps1: Fraction
    eps2: Fraction
    lam: Fraction
    schedule: str = "custom"

    def __post_init__(self):
        for name in ("eps1", "eps2", "lam"):
            v = Fraction(getattr(self, name))
            object.__setattr__(self, name, v)
            if v <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_SCHEDULE = "half-cube-root"


def schedule_delta(n: int, schedule: str = DEFAULT_SCHEDULE) -> Fraction:
    """Slack at blocklength n, rationalized to denominator 1000*n.

    The default rule delta_n = 1/(2 n^(1/3)) vanishes while sqrt(n)*delta_n
    diverges, the regime every asymptotic statement here assumes.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if schedule != DEFAULT_SCHEDULE:
        raise ValueError(f"unknown schedule {schedule!r}")
    return Fraction(round(500.0 * n ** (2.0 / 3.0)), 1000 * n)


def default_params(n: int, schedule: str = DEFAULT_SCHEDULE) -> TypicalityParams:
    d = schedule_delta(n, schedule)
    return TypicalityParams(eps1=d, eps2=d, lam=d, schedule=schedule)


@dataclass(frozen=True)
class BigCount:
    """Exact cardinality with a float log2 convenience view."""

    value: int
    log2: float

    @staticmethod
    def from_int(value: int) -> "BigCount":
        if value < 0:
            raise ValueError("counts are nonnegative")
        return BigCount(value=value, log2=log2_int(value))


def log2_int(v: int) -> float:
    """log2 of a nonnegative big integer (-inf at 0), good to ~1e-12."""
    if v < 0:
        raise ValueError("log2_int needs a nonnegative integer")
    if v == 0:
        return float("-inf")
    bl = v.bit_length()
    if bl <= 900:
        return math.log2(v)
    shift = bl - 900
    return math.log2(v >> shift) + shift


# ---------------------------------------------------------------------------
# empirical types and membership predicates
# ---------------------------------------------------------------------------


def empirical_type(x: Sequence) -> TypeVector:
    counts = [0] * x.alphabet.size
    for s in x.symbols:
        counts[s] += 1
    return TypeVector(x.alphabet, tuple(counts))


def empirical_joint_type(x: Sequence, y: Sequence) -> JointTypeVector:
    if x.n != y.n:
        raise ValueError("sequences must have equal length")
    kx, ky = x.alphabet.size, y.alphabet.size
    counts = [[0] * ky for _ in range(kx)]
    for a, b in zip(x.symbols, y.symbols):
        counts[a][b] += 1
    return JointTypeVector(x.alphabet, y.alphabet, tuple(tuple(r) for r in counts))


def _counts_in_ball(counts, flat_probs, n: int, delta: Fraction) -> bool:
    return all(abs(Fraction(c, n) - p) <= delta for c, p in zip(counts, flat_probs))


def _counts_respect_support(counts, flat_probs) -> bool:
    return all(c == 0 for c, p in zip(counts, flat_probs) if p == 0)


def is_typical(x: Sequence, p: Pmf, delta) -> bool:
    """Robust typicality of x for p at slack delta (closed ball, exact)."""
    if x.alphabet != p.alphabet:
        raise ValueError("sequence and pmf alphabets differ")
    d = Fraction(delta)
    t = empirical_type(x)
    return _counts_respect_support(t.counts, p.probs) and _counts_in_ball(
        t.counts, p.probs, x.n, d
    )


def is_cond_typical(y: Sequence, x: Sequence, w: CondPmf, delta) -> bool:
    """Conditional typicality of y given x under channel w at slack delta."""
    if x.alphabet != w.given_alphabet or y.alphabet != w.out_alphabet:
        raise ValueError("alphabets do not match the channel")
    d = Fraction(delta)
    n = x.n
    jt = empirical_joint_type(x, y)
    xt = jt.row_type()
    for a in range(x.alphabet.size):
        row = w.rows[a]
        if row is None:
            if xt.counts[a] > 0:
                raise ValueError(
                    "conditional typicality undefined: x uses a symbol whose "
                    "channel row is undefined"
                )
            continue
        for b in range(y.alphabet.size):
            wb = row.probs[b]
            cnt = jt.counts[a][b]
            if wb == 0:
                if cnt != 0:
                    return False
                continue
            if abs(Fraction(cnt, n) - Fraction(xt.counts[a], n) * wb) > d:
                return False
    return True


def is_jointly_typical(x: Sequence, y: Sequence, p: JointPmf, lam) -> bool:
    """Joint typicality: the robust predicate on the pair alphabet."""
    if x.alphabet != p.row_alphabet or y.alphabet != p.col_alphabet:
        raise ValueError("sequence alphabets do not match the joint pmf")
    d = Fraction(lam)
    jt = empirical_joint_type(x, y)
    flat_counts = jt.flat()
    flat_probs = p.flat()
    return _counts_respect_support(flat_counts, flat_probs) and _counts_in_ball(
        flat_counts, flat_probs, x.n, d
    )


# ---------------------------------------------------------------------------
# exact counting
# ---------------------------------------------------------------------------


def multinomial(n: int, counts) -> int:
    """n! / prod(c!) for counts summing to n."""
    if sum(counts) != n:
        raise ValueError("counts must sum to n")
    out = 1
    rem = n
    for c in counts:
        out *= math.comb(rem, c)
        rem -= c
    return out


def type_class_size(t) -> BigCount:
    """Exact number of sequences (or sequence pairs) with exactly this type."""
    if isinstance(t, TypeVector):
        return BigCount.from_int(multinomial(t.n, t.counts))
    if isinstance(t, JointTypeVector):
        return BigCount.from_int(multinomial(t.n, t.flat()))
    raise ValueError("type_class_size expects a TypeVector or JointTypeVector")


def _compositions_colex(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """All count vectors with given sum, colexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for rest in _compositions_colex(parts - 1, total - last):
            yield rest + (last,)


def _index_alphabet(k: int) -> Alphabet:
    return Alphabet(tuple(range(k)))


def enumerate_types(
    alphabet_size: int, n: int, ball: Optional[tuple[Pmf, object]] = None
) -> Iterator[TypeVector]:
    """All denominator-n types, colex order, optionally delta-ball filtered."""
    if alphabet_size < 1 or n < 1:
        raise ValueError("alphabet_size and n must be positive")
    if ball is None:
        alphabet = _index_alphabet(alphabet_size)
        for counts in _compositions_colex(alphabet_size, n):
            yield TypeVector(alphabet, counts)
        return
    p, delta = ball
    if p.alphabet.size != alphabet_size:
        raise ValueError("ball pmf does not match alphabet_size")
    d = Fraction(delta)
    for counts in _compositions_colex(alphabet_size, n):
        if _counts_in_ball(counts, p.probs, n, d):
            yield TypeVector(p.alphabet, counts)


def _ball_box(p: Fraction, n: int, delta: Fraction) -> tuple[int, int]:
    """Integer count range allowed by |c/n - p| <= delta, clipped to [0, n]."""
    lo = max(0, math.ceil(n * (p - delta)))
    hi = min(n, math.floor(n * (p + delta)))
    return lo, hi


def _admissible_count_vectors(
    flat_probs, n: int, delta: Fraction
) -> Iterator[tuple[int, ...]]:
    """Count vectors in the delta-ball that put no mass outside the support."""
    k = len(flat_probs)
    boxes = []
    for p in flat_probs:
        if p == 0:
            boxes.append((0, 0))
        else:
            lo, hi = _ball_box(p, n, delta)
            if lo > hi:
                return
            boxes.append((lo, hi))
    suffix_lo = [0] * (k + 1)
    suffix_hi = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + boxes[i][0]
        suffix_hi[i] = suffix_hi[i + 1] + boxes[i][1]

    vec = [0] * k

    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            if remaining == 0:
                yield tuple(vec)
            return
        lo = max(boxes[i][0], remaining - suffix_hi[i + 1])
        hi = min(boxes[i][1], remaining - suffix_lo[i + 1])
        for c in range(lo, hi + 1):
            vec[i] = c
            yield from rec(i + 1, remaining - c)

    yield from rec(0, n)


def typical_set_size(p: Pmf, delta, n: int) -> BigCount:
    """Exact |T_delta(p)| at blocklength n by type-class summation."""
    if n < 1:
        raise ValueError("n must be positive")
    d = Fraction(delta)
    if d < 0:
        raise ValueError("delta must be nonnegative")
    total = 0
    for counts in _admissible_count_vectors(p.probs, n, d):
        total += multinomial(n, counts)
    return BigCount.from_int(total)


def cond_typical_set_size(w: CondPmf, x: Sequence, delta) -> BigCount:
    """Exact |T_delta(w | x)|: output sequences conditionally typical given x.

    Counts factor over conditioning-symbol blocks: within the N(a) positions
    where x equals a, output counts m_{a,.} range over compositions of N(a)
    meeting the per-pair ball constraint (denominator n, not N(a)).
    """
    if x.alphabet != w.given_alphabet:
        raise ValueError("sequence alphabet does not match the channel")
    d = Fraction(delta)
    if d < 0:
        raise ValueError("delta must be nonnegative")
    n = x.n
    xt = empirical_type(x)
    ky = w.out_alphabet.size
    total = 1
    for a in range(x.alphabet.size):
        na = xt.counts[a]
        if na == 0:
            continue
        row = w.rows[a]
        if row is None:
            raise ValueError(
                "conditional count undefined: x uses a symbol whose channel "
                "row is undefined"
            )
        targets = [Fraction(na, n) * row.probs[b] for b in range(ky)]
        block = 0
        for comp in _admissible_count_vectors(row.probs, na, Fraction(na)):
            # the composition ranges over the block; the ball test is global
            if all(
                abs(Fraction(comp[b], n) - targets[b]) <= d for b in range(ky)
            ):
                block += multinomial(na, comp)
        total *= block
        if total == 0:
            break
    return BigCount.from_int(total)


# ---------------------------------------------------------------------------
# joint-type enumeration over pair balls
# ---------------------------------------------------------------------------


def enumerate_joint_ball(
    joint: JointPmf,
    lam,
    n: int,
    row_constraint: Optional[tuple[Pmf, object]] = None,
    col_constraint: Optional[tuple[Pmf, object]] = None,
    fixed_rows: Optional[tuple[int, ...]] = None,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Count matrices m in the joint lam-ball around joint (support-safe).

    Optional filters: marginal row/col types inside their own balls (with
    the support condition), or row sums pinned to fixed_rows exactly.
    """
    d = Fraction(lam)
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    flat_probs = joint.flat()
    for flat in _admissible_count_vectors(flat_probs, n, d):
        rows = tuple(
            tuple(flat[a * ky + b] for b in range(ky)) for a in range(kx)
        )
        rsums = tuple(sum(r) for r in rows)
        if fixed_rows is not None and rsums != tuple(fixed_rows):
            continue
        if row_constraint is not None:
            p, delta = row_constraint
            dd = Fraction(delta)
            if not (
                _counts_respect_support(rsums, p.probs)
                and _counts_in_ball(rsums, p.probs, n, dd)
            ):
                continue
        csums = tuple(sum(rows[a][b] for a in range(kx)) for b in range(ky))
        if col_constraint is not None:
            p, delta = col_constraint
            dd = Fraction(delta)
            if not (
                _counts_respect_support(csums, p.probs)
                and _counts_in_ball(csums, p.probs, n, dd)
            ):
                continue
        yield rows


def jointly_typical_pair_count(joint: JointPmf, params: TypicalityParams, n: int) -> BigCount:
    """Exact number of pairs (x, y) with x eps1-typical, y eps2-typical,
    and (x, y) jointly lam-typical."""
    px = joint.row_marginal()
    py = joint.col_marginal()
    total = 0
    for rows in enumerate_joint_ball(
        joint,
        params.lam,
        n,
        row_constraint=(px, params.eps1),
        col_constraint=(py, params.eps2),
    ):
        flat = [c for r in rows for c in r]
        total += multinomial(n, flat)
    return BigCount.from_int(total)


def conditional_pair_count(
    x: Sequence, joint: JointPmf, params: TypicalityParams, n: int
) -> BigCount:
    """Exact number of eps2-typical y jointly lam-typical with this x."""
    if x.n != n:
        raise ValueError("sequence length differs from n")
    xt = empirical_type(x)
    py = joint.col_marginal()
    total = 0
    for rows in enumerate_joint_ball(
        joint,
        params.lam,
        n,
        col_constraint=(py, params.eps2),
        fixed_rows=xt.counts,
    ):
        ways = 1
        for a in range(joint.row_alphabet.size):
            ways *= multinomial(xt.counts[a], rows[a])
        total += ways
    return BigCount.from_int(total)


# ---------------------------------------------------------------------------
# sequence enumeration and exact uniform sampling
# ---------------------------------------------------------------------------


def type_class_sequences(t: TypeVector) -> Iterator[Sequence]:
    """All sequences of exactly this type, lexicographic order."""
    k = len(t.counts)
    n = t.n
    remaining = list(t.counts)
    buf: list[int] = []

    def rec() -> Iterator[Sequence]:
        if len(buf) == n:
            yield Sequence(t.alphabet, tuple(buf))
            return
        for s in range(k):
            if remaining[s] > 0:
                remaining[s] -= 1
                buf.append(s)
                yield from rec()
                buf.pop()
                remaining[s] += 1

    yield from rec()


_SAMPLER_CACHE: dict = {}


def _sampler_table(p: Pmf, delta: Fraction, n: int):
    key = (p, delta, n)
    tab = _SAMPLER_CACHE.get(key)
    if tab is None:
        types = []
        cum = []
        total = 0
        for counts in _admissible_count_vectors(p.probs, n, delta):
            total += multinomial(n, counts)
            types.append(counts)
            cum.append(total)
        tab = (types, cum, total)
        _SAMPLER_CACHE[key] = tab
    return tab


def sample_uniform_typical(p: Pmf, delta, n: int, rng: random.Random) -> Sequence:
    """Exact uniform draw from T_delta(p) at blocklength n.

    Two stages: a type is drawn with probability proportional to its exact
    class size (big-integer arithmetic, no floats), then a uniformly random
    arrangement of that type's multiset is produced.
    """
    d = Fraction(delta)
    types, cum, total = _sampler_table(p, d, n)
    if total == 0:
        raise ValueError("typical set is empty; nothing to sample")
    r = rng.randrange(total)
    lo, hi = 0, len(cum) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if r < cum[mid]:
            hi = mid
        else:
            lo = mid + 1
    counts = types[lo]
    buf = []
    for s, c in enumerate(counts):
        buf.extend([s] * c)
    rng.shuffle(buf)
    return Sequence(p.alphabet, tuple(buf))


def count_types(alphabet_size: int, n: int) -> int:
    """Number of denominator-n types; at most (n+1)^alphabet_size."""
    return math.comb(n + alphabet_size - 1, alphabet_size - 1)


def pack_counts(flat_counts, base: int) -> int:
    """Injective big-integer encoding of a count vector (all entries < base)."""
    key = 0
    for c in flat_counts:
        key = key * base + c
    return key


def jointly_typical_type_keys(joint: JointPmf, lam, n: int) -> frozenset:
    """Packed (base n+1) joint count matrices passing the joint ball test.

    Turns the per-pair typicality predicate into one dictionary probe, which
    is what adjacency scans and Monte Carlo inner loops want.
    """
    base = n + 1
    return frozenset(
        pack_counts(flat, base)
        for flat in _admissible_count_vectors(joint.flat(), n, Fraction(lam))
    )


def typical_set_rate_envelope(p: Pmf, n: int, delta) -> float:
    """Two-sided rate gap c_n with |1/n log2 |T_delta(p)| - H(p)| <= c_n.

    Valid when the continuity precondition |supp|*delta <= 1/2 holds.
    """
    from .core import entropy_continuity_bound

    k = p.alphabet.size
    return entropy_continuity_bound(Fraction(delta) * k, k) + k * math.log2(n + 1) / n
