"""Nearly empty random subgraphs: exact moments, tail bounds, simulation.

Draw M1 row codewords uniformly (with replacement) from the eps1-typical
set and M2 column codewords from the eps2-typical set, and let U count the
jointly typical pairs among the M1*M2 crossings. Everything feeding the
bounds is computed exactly at the type level:

  alpha   = P(one crossing is typical), a ratio of big integers;
  gamma   = M1 M2 alpha = E[U];
  theta_cap ("Theta") = half the sum over dependent ordered pairs of
            crossings of E[U_ij U_kl], via exact degree second moments;
  theta_small ("theta") = (M1 + M2 - 2) alpha_max, tau = alpha_max.

P(U <= a gamma) is bounded above by Suen's correlation inequality and
P(U = 0) below by two local-lemma variants; Monte Carlo estimates with
Wilson intervals bracket-check both sides.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import InvariantViolation, JointPmf, Pmf
from .typicality import (
    BigCount,
    Sequence,
    TypicalityParams,
    enumerate_joint_ball,
    jointly_typical_pair_count,
    jointly_typical_type_keys,
    multinomial,
    pack_counts,
    sample_uniform_typical,
    typical_set_size,
    _admissible_count_vectors,
)

WILSON_Z_99 = 2.5758293035489004  # two-sided 99% normal quantile


# ---------------------------------------------------------------------------
# exact crossing probability and moments
# ---------------------------------------------------------------------------


def exact_alpha_fraction(joint: JointPmf, params: TypicalityParams, n: int) -> Fraction:
    """P(jointly typical) for one uniform typical crossing, exact."""
    t1 = typical_set_size(joint.row_marginal(), params.eps1, n).value
    t2 = typical_set_size(joint.col_marginal(), params.eps2, n).value
    if t1 == 0 or t2 == 0:
        raise ValueError("a typical set is empty; the crossing law is undefined")
    pairs = jointly_typical_pair_count(joint, params, n).value
    return Fraction(pairs, t1 * t2)


def exact_alpha(joint: JointPmf, params: TypicalityParams, n: int) -> float:
    return float(exact_alpha_fraction(joint, params, n))


def _transposed(joint: JointPmf) -> JointPmf:
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    return JointPmf(
        joint.col_alphabet,
        joint.row_alphabet,
        tuple(tuple(joint.cell(i, j) for i in range(kx)) for j in range(ky)),
    )


def _degree_second_moment(
    joint: JointPmf, own_pmf: Pmf, own_eps, other_pmf: Pmf, other_eps, lam, n: int
) -> Fraction:
    """E[(deg(x)/|T_other|)^2] for x uniform on its typical set, exact.

    deg(x) counts other-side typical sequences jointly typical with x; it
    depends on x only through its type, so the expectation is a sum over
    the own-side admissible types.
    """
    t_own = typical_set_size(own_pmf, own_eps, n).value
    t_other = typical_set_size(other_pmf, other_eps, n).value
    acc = Fraction(0)
    for counts in _admissible_count_vectors(own_pmf.probs, n, Fraction(own_eps)):
        deg = 0
        for rows in enumerate_joint_ball(
            joint,
            lam,
            n,
            col_constraint=(other_pmf, other_eps),
            fixed_rows=counts,
        ):
            ways = 1
            for a, row in enumerate(rows):
                ways *= multinomial(counts[a], row)
            deg += ways
        if deg:
            acc += Fraction(multinomial(n, counts) * deg * deg)
    return acc / (Fraction(t_own) * t_other * t_other)


@dataclass(frozen=True)
class MomentEstimates:
    """Exact pair moments for U, with float views for the bound formulas."""

    m1: int
    m2: int
    n: int
    alpha_exact: Fraction
    left_second_exact: Fraction  # E[U_ij U_il], j != l (shared row codeword)
    right_second_exact: Fraction  # E[U_ij U_kj], i != k
    alpha_min: float
    alpha_max: float
    beta_max: float
    gamma: float
    theta_cap: float  # "Theta": half-sum of dependent-pair second moments
    theta_small: float  # "theta": max over crossings of the dependent-sum
    tau: float


def codebook_size(n: int, rate: float) -> int:
    """ceil(2^{n*rate}) with float-noise absorbed at integer boundaries."""
    if rate < 0:
        raise ValueError("rates must be nonnegative")
    v = 2.0 ** (n * rate)
    m = math.ceil(v - 1e-9)
    return max(1, m)


def exact_pair_moments(
    joint: JointPmf, params: TypicalityParams, n: int, r1: float, r2: float
) -> MomentEstimates:
    m1 = codebook_size(n, r1)
    m2 = codebook_size(n, r2)
    alpha = exact_alpha_fraction(joint, params, n)
    px, py = joint.row_marginal(), joint.col_marginal()
    left_second = _degree_second_moment(
        joint, px, params.eps1, py, params.eps2, params.lam, n
    )
    right_second = _degree_second_moment(
        _transposed(joint), py, params.eps2, px, params.eps1, params.lam, n
    )
    gamma = Fraction(m1 * m2) * alpha
    theta_cap = (
        Fraction(m1 * m2, 2)
        * ((m2 - 1) * left_second + (m1 - 1) * right_second)
    )
    theta_small = (m1 + m2 - 2) * alpha
    return MomentEstimates(
        m1=m1,
        m2=m2,
        n=n,
        alpha_exact=alpha,
        left_second_exact=left_second,
        right_second_exact=right_second,
        alpha_min=float(alpha),
        alpha_max=float(alpha),
        beta_max=float(max(left_second, right_second)),
        gamma=float(gamma),
        theta_cap=float(theta_cap),
        theta_small=float(theta_small),
        tau=float(alpha),
    )


# ---------------------------------------------------------------------------
# Suen upper bounds
# ---------------------------------------------------------------------------


def suen_tail_bound(gamma: float, theta_cap: float, theta_small: float, a: float) -> float:
    """Upper bound on P(U <= a*gamma); branches with zero denominators drop."""
    if not 0 <= a < 1:
        raise ValueError("a must lie in [0, 1)")
    if gamma < 0 or theta_cap < 0 or theta_small < 0:
        raise ValueError("moments must be nonnegative")
    if gamma == 0:
        return 1.0
    branches = [(1 - a) ** 2 * gamma**2 / (8 * theta_cap + 2 * gamma)]
    if theta_small > 0:
        branches.append((1 - a) * gamma / (6 * theta_small))
    return math.exp(-min(branches))


def suen_zero_bound(gamma: float, theta_cap: float, theta_small: float) -> float:
    """Upper bound on P(U = 0)."""
    if gamma < 0 or theta_cap < 0 or theta_small < 0:
        raise ValueError("moments must be nonnegative")
    if gamma == 0:
        return 1.0
    branches = [gamma / 2]
    if theta_cap > 0:
        branches.append(gamma**2 / (8 * theta_cap))
    if theta_small > 0:
        branches.append(gamma / (6 * theta_small))
    return math.exp(-min(branches))


# ---------------------------------------------------------------------------
# local-lemma lower bounds
# ---------------------------------------------------------------------------

_E_INV = math.exp(-1.0)


def phi_root(x: float) -> float:
    """Smallest root of phi = e^{x phi} for x in [0, 1/e].

    phi(0) = 1, phi(1/e) = e; solved by bracketed bisection with a Newton
    polish, fixed-point residual at most 1e-12.
    """
    if x < 0 or x > _E_INV + 1e-15:
        raise ValueError("phi_root is defined on [0, 1/e]")
    if x == 0:
        return 1.0
    # At the right endpoint the two roots merge tangentially and bisection
    # loses half the mantissa; the merged root is exactly e there.
    if abs(x * math.e - 1.0) <= 1e-12:
        return math.e
    x = min(x, _E_INV)

    # f(phi) = ln(phi) - x*phi is concave, f(1) = -x < 0, and its maximum
    # sits at phi = 1/x with f(1/x) >= 0, so the smallest root lies in
    # [1, 1/x] where f is increasing.
    lo, hi = 1.0, 1.0 / x
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if math.log(mid) - x * mid < 0:
            lo = mid
        else:
            hi = mid
    phi = 0.5 * (lo + hi)
    for _ in range(3):
        deriv = 1.0 / phi - x
        if abs(deriv) < 1e-6:
            break
        step = (math.log(phi) - x * phi) / deriv
        candidate = phi - step
        if lo <= candidate <= hi:
            phi = candidate
    residual = abs(phi - math.exp(x * phi))
    if residual > 1e-12:
        raise InvariantViolation(f"phi_root residual {residual} exceeds 1e-12")
    return phi


@dataclass(frozen=True)
class LllBounds:
    """Lower bounds on P(U = 0); None marks an inapplicable variant."""

    symmetric: Optional[float]
    symmetric_condition_ok: bool
    symmetric_asymptotic_form: Optional[float]  # exp(-(M2+1)) simplification
    phi: Optional[float]
    phi_condition_ok: bool


def lll_lower_bounds(moments: MomentEstimates, m1: int, m2: int, n: int) -> LllBounds:
    """Symmetric and phi-function local-lemma lower bounds on P(U = 0).

    The symmetric variant needs the exact-arithmetic existence condition
    alpha_max <= x (1-x)^{M1+M2-2} with x = 1/M1 and then gives
    (1-x)^{M1 M2}, evaluated exactly (the exp(-(M2+1)) form usually quoted
    is its large-M1 shadow and is reported alongside). The phi variant
    needs theta_small + tau <= 1/e and gives exp(-gamma * phi(...)).
    """
    del n  # sizes are explicit; nothing here depends on blocklength
    x = Fraction(1, m1)
    degree = m1 + m2 - 2
    sym_ok = moments.alpha_exact <= x * (1 - x) ** degree
    if sym_ok:
        if m1 == 1:
            symmetric = 0.0 if m2 >= 1 else 1.0
        else:
            symmetric = math.exp(m1 * m2 * math.log1p(-1.0 / m1))
        asymptotic = math.exp(-(m2 + 1))
    else:
        symmetric = None
        asymptotic = None
    load = moments.theta_small + moments.tau
    phi_ok = load <= _E_INV
    phi_bound = (
        math.exp(-moments.gamma * phi_root(load)) if phi_ok else None
    )
    return LllBounds(
        symmetric=symmetric,
        symmetric_condition_ok=sym_ok,
        symmetric_asymptotic_form=asymptotic,
        phi=phi_bound,
        phi_condition_ok=phi_ok,
    )


# ---------------------------------------------------------------------------
# exponent bookkeeping
# ---------------------------------------------------------------------------


def deviation_exponent_target(r1: float, r2: float, i_xy: float, gamma: float = 0.0) -> float:
    """Analytic double-exponential rate for P(U <= (1-ish) share), at slack gamma."""
    if r1 >= i_xy:
        return r2 - gamma
    return r1 + r2 - i_xy - gamma


@dataclass(frozen=True)
class BoundReport:
    """Bounds with their double-log exponents and regime annotations."""

    bounds: dict
    exponents: dict  # name -> (1/n) log2 log2 (1/bound), when defined
    flagged: dict  # name -> reason the exponent is undefined
    target: float  # min(r2, r1 + r2 - i_xy)
    n: int
    r1: float
    r2: float
    i_xy: float
    regime_r1_above_mi: bool
    tightness_regime: bool  # r2 <= r1 <= i_xy
    consistency_ok: Optional[bool]  # every LLL lower bound <= every Suen upper


def exponent_report(bounds: dict, n: int, r1: float, r2: float, i_xy: float) -> BoundReport:
    exponents = {}
    flagged = {}
    for name, b in bounds.items():
        if b is None:
            flagged[name] = "inapplicable"
            continue
        if b <= 0.0:
            flagged[name] = "bound underflowed to 0; exponent infinite"
            continue
        if b >= 1.0:
            flagged[name] = "vacuous bound (>= 1)"
            continue
        inner = math.log2(1.0 / b)
        exponents[name] = math.log2(inner) / n
    lowers = [bounds.get(k) for k in ("lll_symmetric", "lll_phi")]
    uppers = [bounds.get(k) for k in ("suen_zero", "suen_tail")]
    lowers = [v for v in lowers if v is not None]
    uppers = [v for v in uppers if v is not None]
    consistency: Optional[bool]
    if lowers and uppers:
        consistency = max(lowers) <= min(uppers) + 1e-12
    else:
        consistency = None
    return BoundReport(
        bounds=dict(bounds),
        exponents=exponents,
        flagged=flagged,
        target=min(r2, r1 + r2 - i_xy),
        n=n,
        r1=r1,
        r2=r2,
        i_xy=i_xy,
        regime_r1_above_mi=r1 >= i_xy,
        tightness_regime=r2 <= r1 <= i_xy,
        consistency_ok=consistency,
    )


# ---------------------------------------------------------------------------
# codebooks and Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Codebook:
    side: str  # "left" or "right"
    rate: float
    size: int
    sequences: tuple[Sequence, ...]
    seed_info: str


@dataclass(frozen=True)
class PairCount:
    m1: int
    m2: int
    u: BigCount

    def __post_init__(self):
        if not 0 <= self.u.value <= self.m1 * self.m2:
            raise ValueError("pair count outside [0, M1*M2]")


def draw_codebook(
    pmf: Pmf,
    eps,
    n: int,
    size: int,
    rng: random.Random,
    side: str = "left",
    rate: float = 0.0,
    seed_info: str = "",
) -> Codebook:
    seqs = tuple(sample_uniform_typical(pmf, eps, n, rng) for _ in range(size))
    return Codebook(side=side, rate=rate, size=size, sequences=seqs, seed_info=seed_info)


def count_pairs(
    xs: Codebook, ys: Codebook, joint: JointPmf, lam, n: int
) -> PairCount:
    keys = jointly_typical_type_keys(joint, lam, n)
    ky = joint.col_alphabet.size
    base = n + 1
    u = 0
    for x in xs.sequences:
        for y in ys.sequences:
            cells = [0] * (joint.row_alphabet.size * ky)
            for a, b in zip(x.symbols, y.symbols):
                cells[a * ky + b] += 1
            if pack_counts(cells, base) in keys:
                u += 1
    return PairCount(m1=xs.size, m2=ys.size, u=BigCount.from_int(u))


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    seed: int
    m1: int
    m2: int
    n: int
    r1: float
    r2: float
    zero_count: int
    p_zero: float
    wilson_low: float
    wilson_high: float
    mean_u: float
    var_u: float
    gamma: float  # exact E[U] for reference
    tails: tuple  # ((a, empirical P(U <= a*gamma)), ...)


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z_99) -> tuple[float, float]:
    """Wilson score interval; exact zero-success inputs stay well-defined."""
    if trials < 1:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def _trial_rng(seed: int, trial: int) -> random.Random:
    digest = hashlib.sha256(f"typigraph:{seed}:{trial}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def simulate(
    joint: JointPmf,
    params: TypicalityParams,
    n: int,
    r1: float,
    r2: float,
    trials: int,
    seed: int,
    a_grid: tuple = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
) -> MonteCarloReport:
    """Monte Carlo law of U under fresh uniform codebooks each trial.

    Per-trial generators are derived from (seed, trial index) alone, so
    reports are byte-identical for identical (seed, trials) regardless of
    how the work is scheduled. Within a trial the row codebook is drawn
    first, then column codewords in sequence: enlarging M2 with the same
    seed extends the draw, it never reshuffles it.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    m1 = codebook_size(n, r1)
    m2 = codebook_size(n, r2)
    px, py = joint.row_marginal(), joint.col_marginal()
    gamma = float(Fraction(m1 * m2) * exact_alpha_fraction(joint, params, n))
    keys = jointly_typical_type_keys(joint, params.lam, n)
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    base = n + 1
    thresholds = [a * gamma for a in a_grid]
    tail_hits = [0] * len(a_grid)
    zero_count = 0
    sum_u = 0
    sum_u2 = 0
    eps1, eps2, lam = params.eps1, params.eps2, params.lam
    for t in range(trials):
        rng = _trial_rng(seed, t)
        xs = [sample_uniform_typical(px, eps1, n, rng).symbols for _ in range(m1)]
        ys = [sample_uniform_typical(py, eps2, n, rng).symbols for _ in range(m2)]
        u = 0
        for xsym in xs:
            for ysym in ys:
                cells = [0] * (kx * ky)
                for a, b in zip(xsym, ysym):
                    cells[a * ky + b] += 1
                if pack_counts(cells, base) in keys:
                    u += 1
        if u == 0:
            zero_count += 1
        sum_u += u
        sum_u2 += u * u
        for idx, thresh in enumerate(thresholds):
            if u <= thresh:
                tail_hits[idx] += 1
    mean_u = sum_u / trials
    var_u = (
        (sum_u2 - trials * mean_u * mean_u) / (trials - 1) if trials > 1 else 0.0
    )
    low, high = wilson_interval(zero_count, trials)
    return MonteCarloReport(
        trials=trials,
        seed=seed,
        m1=m1,
        m2=m2,
        n=n,
        r1=r1,
        r2=r2,
        zero_count=zero_count,
        p_zero=zero_count / trials,
        wilson_low=low,
        wilson_high=high,
        mean_u=mean_u,
        var_u=var_u,
        gamma=gamma,
        tails=tuple((a, tail_hits[i] / trials) for i, a in enumerate(a_grid)),
    )
