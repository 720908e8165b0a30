"""Explicit near-extremal subgraphs of the typicality graph.

Two constructions, both exact-type based:

* the single-type subgraph: round the joint pmf to a denominator-n type,
  take the exact type classes of its marginals as rosters, and connect
  (x, y) exactly when their joint type equals the rounded type. Every left
  vertex then has the same degree (a product of per-row multinomials, by
  exchangeability), pinned between 2^{n(H - delta3)} and 2^{nH} for the
  rounded conditional entropy H.

* the auxiliary-variable subgraph: round the triple law obtained from an
  auxiliary channel (one largest-remainder pass over all |U||X||Y| cells,
  which keeps marginals and conditionals consistent by construction), fix
  the lexicographically smallest u-sequence of the rounded u-type, and use
  conditional type classes given u as rosters with conditional joint-type
  adjacency. Left degrees concentrate at H(Y|XU) of the rounded triple and
  right degrees at H(X|YU); note the two roles are not symmetric.

Rate/slack measurement and exact Markov-mixture decompositions (weights
plus per-u factors, used to certify nearly-complete behavior) live here
as well.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    Alphabet,
    ApproxResult,
    CondPmf,
    InvariantViolation,
    JointPmf,
    Pmf,
    cond_from_dict,
    cond_to_dict,
    conditionalize,
    entropy,
    joint_entropy,
    joint_from_dict,
    joint_to_dict,
    parse_fraction,
    product_alphabet,
    rational_approximate,
    total_variation,
)
from .typicality import (
    BigCount,
    JointTypeVector,
    Sequence,
    TypeVector,
    TypicalityParams,
    default_params,
    log2_int,
    multinomial,
    type_class_sequences,
)


@dataclass(frozen=True)
class ContainmentReport:
    """Is the constructed subgraph inside the ambient typicality graph?

    Checked exactly at the type level against the given parameters; the
    premise flags record the 1/n-versus-parameter inequalities that make
    containment automatic at large n.
    """

    eps1: Fraction
    eps2: Fraction
    lam: Fraction
    left_contained: bool
    right_contained: bool
    edges_contained: bool
    premise_ok: bool


def _ball_ok(counts, probs, n: int, delta: Fraction) -> bool:
    return all(
        (p == 0 and c == 0) or abs(Fraction(c, n) - p) <= delta
        for c, p in zip(counts, probs)
    ) and all(c == 0 for c, p in zip(counts, probs) if p == 0)


def _containment(
    joint: JointPmf,
    n: int,
    params: TypicalityParams,
    overall_counts,  # flat |X|*|Y| pair counts of any (x, y) in the subgraph
) -> ContainmentReport:
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    rows = tuple(
        tuple(overall_counts[a * ky + b] for b in range(ky)) for a in range(kx)
    )
    xcounts = tuple(sum(r) for r in rows)
    ycounts = tuple(sum(rows[a][b] for a in range(kx)) for b in range(ky))
    px, py = joint.row_marginal(), joint.col_marginal()
    return ContainmentReport(
        eps1=params.eps1,
        eps2=params.eps2,
        lam=params.lam,
        left_contained=_ball_ok(xcounts, px.probs, n, Fraction(params.eps1)),
        right_contained=_ball_ok(ycounts, py.probs, n, Fraction(params.eps2)),
        edges_contained=_ball_ok(
            overall_counts, joint.flat(), n, Fraction(params.lam)
        ),
        premise_ok=(
            Fraction(params.lam) * n >= 1
            and Fraction(params.eps1) * n >= ky
            and Fraction(params.eps2) * n >= kx
        ),
    )


# ---------------------------------------------------------------------------
# single-type subgraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactTypeSubgraph:
    joint: JointPmf
    n: int
    params: TypicalityParams
    tilde: ApproxResult  # rounded joint, denominator n
    target: JointTypeVector  # n * tilde
    left_type: TypeVector
    right_type: TypeVector
    left_size: BigCount
    right_size: BigCount
    left_degree: BigCount  # shared by every left vertex (exchangeability)
    right_degree: BigCount
    containment: ContainmentReport
    delta3: float  # |X| |Y| log2(n+1) / n

    def vertex_counts(self) -> tuple[int, int]:
        return self.left_size.value, self.right_size.value

    def degree_extremes(self, side: str) -> tuple[int, int]:
        d = self.left_degree.value if side == "left" else self.right_degree.value
        return d, d


def build_exact_type_subgraph(
    joint: JointPmf, n: int, params: Optional[TypicalityParams] = None
) -> ExactTypeSubgraph:
    if params is None:
        params = default_params(n)
    tilde = rational_approximate(joint, n)
    tj: JointPmf = tilde.approx
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    counts = tuple(
        tuple(int(tj.cell(a, b) * n) for b in range(ky)) for a in range(kx)
    )
    target = JointTypeVector(joint.row_alphabet, joint.col_alphabet, counts)
    left_type = target.row_type()
    right_type = target.col_type()
    left_degree = 1
    for a in range(kx):
        left_degree *= multinomial(left_type.counts[a], counts[a])
    right_degree = 1
    for b in range(ky):
        right_degree *= multinomial(
            right_type.counts[b], tuple(counts[a][b] for a in range(kx))
        )
    return ExactTypeSubgraph(
        joint=joint,
        n=n,
        params=params,
        tilde=tilde,
        target=target,
        left_type=left_type,
        right_type=right_type,
        left_size=BigCount.from_int(multinomial(n, left_type.counts)),
        right_size=BigCount.from_int(multinomial(n, right_type.counts)),
        left_degree=BigCount.from_int(left_degree),
        right_degree=BigCount.from_int(right_degree),
        containment=_containment(joint, n, params, target.flat()),
        delta3=kx * ky * math.log2(n + 1) / n,
    )


@dataclass(frozen=True)
class SingleTypeReport:
    """Exact size/degree pins of the single-type subgraph.

    Roster rates sit within |X| log2(n+1)/n of the rounded marginal
    entropies; every degree sits in [2^{n(H - delta3)}, 2^{nH}] for the
    matching rounded conditional entropy.
    """

    left_rate: float
    left_entropy: float
    left_rate_bound: float
    right_rate: float
    right_entropy: float
    right_rate_bound: float
    left_degree_rate: float
    h_col_given_row: float
    right_degree_rate: float
    h_row_given_col: float
    delta3: float
    all_ok: bool


_FP_TOL = 1e-9


def verify_single_type(sub: ExactTypeSubgraph) -> SingleTypeReport:
    n = sub.n
    tj: JointPmf = sub.tilde.approx
    h_x = entropy(tj.row_marginal())
    h_y = entropy(tj.col_marginal())
    h_xy = joint_entropy(tj)
    h_y_x = h_xy - h_x
    h_x_y = h_xy - h_y
    kx, ky = tj.row_alphabet.size, tj.col_alphabet.size
    left_rate = sub.left_size.log2 / n
    right_rate = sub.right_size.log2 / n
    lbound = kx * math.log2(n + 1) / n
    rbound = ky * math.log2(n + 1) / n
    ldeg_rate = sub.left_degree.log2 / n
    rdeg_rate = sub.right_degree.log2 / n
    ok = (
        abs(left_rate - h_x) <= lbound + _FP_TOL
        and abs(right_rate - h_y) <= rbound + _FP_TOL
        and h_y_x - sub.delta3 - _FP_TOL <= ldeg_rate <= h_y_x + _FP_TOL
        and h_x_y - sub.delta3 - _FP_TOL <= rdeg_rate <= h_x_y + _FP_TOL
    )
    return SingleTypeReport(
        left_rate=left_rate,
        left_entropy=h_x,
        left_rate_bound=lbound,
        right_rate=right_rate,
        right_entropy=h_y,
        right_rate_bound=rbound,
        left_degree_rate=ldeg_rate,
        h_col_given_row=h_y_x,
        right_degree_rate=rdeg_rate,
        h_row_given_col=h_x_y,
        delta3=sub.delta3,
        all_ok=ok,
    )


# ---------------------------------------------------------------------------
# auxiliary-variable subgraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxSubgraph:
    joint: JointPmf
    aux: CondPmf  # U given (row, col) pairs
    n: int
    params: TypicalityParams
    tilde: ApproxResult  # rounded triple on U x (X x Y), denominator n
    u_seq: Sequence  # lexicographically smallest sequence of the u-type
    block_lengths: tuple[int, ...]  # per u
    block_targets: tuple  # per u: |X| x |Y| count matrices
    left_block_types: tuple  # per u: |X| count vectors
    right_block_types: tuple  # per u: |Y| count vectors
    left_size: BigCount
    right_size: BigCount
    left_degree: BigCount
    right_degree: BigCount
    containment: ContainmentReport
    target_rates: "RateTuple"  # entropic targets from the rounded triple
    delta3: float  # |X| |Y| |U| log2(n+1) / n

    def vertex_counts(self) -> tuple[int, int]:
        return self.left_size.value, self.right_size.value

    def degree_extremes(self, side: str) -> tuple[int, int]:
        d = self.left_degree.value if side == "left" else self.right_degree.value
        return d, d


def build_aux_subgraph(
    joint: JointPmf,
    aux: CondPmf,
    n: int,
    params: Optional[TypicalityParams] = None,
) -> AuxSubgraph:
    """Round the triple law jointly, then build conditional type classes.

    The single rounding pass over all |U||X||Y| cells makes every derived
    marginal and conditional an exact function of the same counts, so the
    construction can never disagree with itself.
    """
    if params is None:
        params = default_params(n)
    pairs = product_alphabet(joint.row_alphabet, joint.col_alphabet)
    if aux.given_alphabet != pairs:
        raise ValueError(
            "aux channel must condition on the joint's pair alphabet "
            "(row label, col label) in row-major order"
        )
    u_alpha = aux.out_alphabet
    ku = u_alpha.size
    kx, ky = joint.row_alphabet.size, joint.col_alphabet.size
    flat_joint = joint.flat()
    rows = []
    for u in range(ku):
        row = []
        for idx in range(kx * ky):
            p = flat_joint[idx]
            r = aux.rows[idx]
            if r is None:
                if p > 0:
                    raise ValueError(
                        "aux channel undefined on a pair inside the support"
                    )
                row.append(Fraction(0))
            else:
                row.append(p * r.probs[u])
        rows.append(tuple(row))
    triple = JointPmf(u_alpha, pairs, tuple(rows))
    tilde = rational_approximate(triple, n)
    tt: JointPmf = tilde.approx
    cells = tuple(
        tuple(int(tt.cell(u, idx) * n) for idx in range(kx * ky)) for u in range(ku)
    )
    block_targets = tuple(
        tuple(tuple(cells[u][a * ky + b] for b in range(ky)) for a in range(kx))
        for u in range(ku)
    )
    block_lengths = tuple(sum(cells[u]) for u in range(ku))
    u_symbols = []
    for u in range(ku):
        u_symbols.extend([u] * block_lengths[u])
    u_seq = Sequence(u_alpha, tuple(u_symbols))
    left_block_types = tuple(
        tuple(sum(block_targets[u][a]) for a in range(kx)) for u in range(ku)
    )
    right_block_types = tuple(
        tuple(sum(block_targets[u][a][b] for a in range(kx)) for b in range(ky))
        for u in range(ku)
    )
    left_size = 1
    right_size = 1
    left_degree = 1
    right_degree = 1
    for u in range(ku):
        nu = block_lengths[u]
        if nu == 0:
            continue
        left_size *= multinomial(nu, left_block_types[u])
        right_size *= multinomial(nu, right_block_types[u])
        for a in range(kx):
            left_degree *= multinomial(
                left_block_types[u][a], block_targets[u][a]
            )
        for b in range(ky):
            right_degree *= multinomial(
                right_block_types[u][b],
                tuple(block_targets[u][a][b] for a in range(kx)),
            )
    overall = tuple(
        sum(cells[u][idx] for u in range(ku)) for idx in range(kx * ky)
    )
    target_rates = _aux_target_rates(tt, kx, ky)
    return AuxSubgraph(
        joint=joint,
        aux=aux,
        n=n,
        params=params,
        tilde=tilde,
        u_seq=u_seq,
        block_lengths=block_lengths,
        block_targets=block_targets,
        left_block_types=left_block_types,
        right_block_types=right_block_types,
        left_size=BigCount.from_int(left_size),
        right_size=BigCount.from_int(right_size),
        left_degree=BigCount.from_int(left_degree),
        right_degree=BigCount.from_int(right_degree),
        containment=_containment(joint, n, params, overall),
        target_rates=target_rates,
        delta3=kx * ky * ku * math.log2(n + 1) / n,
    )


def _aux_target_rates(triple: JointPmf, kx: int, ky: int) -> "RateTuple":
    """(H(X|U), H(Y|U), H(X|YU), H(Y|XU)) of the rounded triple."""
    ku = triple.row_alphabet.size
    h_u = entropy(triple.row_marginal())
    h_uxy = joint_entropy(triple)

    def collapse(keep_col: bool) -> float:
        # entropy of (U, X) or (U, Y) under the triple
        acc = []
        for u in range(ku):
            row = triple.probs[u]
            if keep_col:
                sums = [
                    sum(row[a * ky + b] for a in range(kx)) for b in range(ky)
                ]
            else:
                sums = [
                    sum(row[a * ky + b] for b in range(ky)) for a in range(kx)
                ]
            acc.extend(sums)
        return -sum(
            float(p) * math.log2(p) if p > 0 else 0.0 for p in acc
        )

    h_ux = collapse(keep_col=False)
    h_uy = collapse(keep_col=True)
    return RateTuple(
        r_x=h_ux - h_u,
        r_y=h_uy - h_u,
        r_x_prime=h_uxy - h_uy,
        r_y_prime=h_uxy - h_ux,
    )


# ---------------------------------------------------------------------------
# rosters and adjacency for both constructions
# ---------------------------------------------------------------------------


def left_roster(sub) -> Iterator[Sequence]:
    """Materialize left vertices in lexicographic order."""
    if isinstance(sub, ExactTypeSubgraph):
        yield from type_class_sequences(sub.left_type)
        return
    if isinstance(sub, AuxSubgraph):
        yield from _spliced(
            sub.joint.row_alphabet, sub.block_lengths, sub.left_block_types
        )
        return
    raise ValueError("unsupported subgraph object")


def right_roster(sub) -> Iterator[Sequence]:
    if isinstance(sub, ExactTypeSubgraph):
        yield from type_class_sequences(sub.right_type)
        return
    if isinstance(sub, AuxSubgraph):
        yield from _spliced(
            sub.joint.col_alphabet, sub.block_lengths, sub.right_block_types
        )
        return
    raise ValueError("unsupported subgraph object")


def _spliced(alphabet: Alphabet, block_lengths, block_types) -> Iterator[Sequence]:
    """Sequences assembled per conditioning block, lexicographic overall.

    Blocks occupy contiguous position ranges in u order, so iterating the
    first block outermost yields global lexicographic order.
    """
    blocks = [u for u, nu in enumerate(block_lengths) if nu > 0]

    def rec(i: int, prefix: tuple[int, ...]) -> Iterator[Sequence]:
        if i == len(blocks):
            yield Sequence(alphabet, prefix)
            return
        u = blocks[i]
        t = TypeVector(alphabet, tuple(block_types[u]))
        for part in type_class_sequences(t):
            yield from rec(i + 1, prefix + part.symbols)

    yield from rec(0, ())


def is_edge(sub, x: Sequence, y: Sequence) -> bool:
    """Exact adjacency predicate for either construction."""
    if isinstance(sub, ExactTypeSubgraph):
        ky = sub.joint.col_alphabet.size
        want = sub.target.flat()
        cells = [0] * (sub.joint.row_alphabet.size * ky)
        for a, b in zip(x.symbols, y.symbols):
            cells[a * ky + b] += 1
        return tuple(cells) == want
    if isinstance(sub, AuxSubgraph):
        kx, ky = sub.joint.row_alphabet.size, sub.joint.col_alphabet.size
        offset = 0
        for u, nu in enumerate(sub.block_lengths):
            if nu == 0:
                continue
            cells = [0] * (kx * ky)
            for pos in range(offset, offset + nu):
                cells[x.symbols[pos] * ky + y.symbols[pos]] += 1
            want = tuple(
                sub.block_targets[u][a][b] for a in range(kx) for b in range(ky)
            )
            if tuple(cells) != want:
                return False
            offset += nu
        return True
    raise ValueError("unsupported subgraph object")


# ---------------------------------------------------------------------------
# measured rates and slack
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateTuple:
    """Rates in bits/symbol: vertex-set sizes and degree concentrations."""

    r_x: float
    r_y: float
    r_x_prime: float  # right-vertex degrees
    r_y_prime: float  # left-vertex degrees


@dataclass(frozen=True)
class SlackReport:
    gen: float  # two-sided degree-concentration slack
    nc: float  # one-sided nearly-complete slack


def measure_rates(subgraph, n: int) -> tuple[RateTuple, SlackReport]:
    """Measured rates plus the deviations needed to certify the subgraph.

    gen: the smallest two-sided slack for which all left degrees sit within
    2^{+-n*gen} of a common rate (and right degrees likewise). nc: the
    smallest one-sided slack for which left degrees reach the right roster
    rate and right degrees the left roster rate.
    """
    lcount, rcount = subgraph.vertex_counts()
    if lcount == 0 or rcount == 0:
        raise ValueError("empty roster: rates undefined")
    r_x = log2_int(lcount) / n
    r_y = log2_int(rcount) / n
    lmin, lmax = subgraph.degree_extremes("left")
    rmin, rmax = subgraph.degree_extremes("right")
    if lmax == 0 or rmax == 0:
        raise ValueError("subgraph has no edges: degree rates undefined")
    lhi = log2_int(lmax) / n
    rhi = log2_int(rmax) / n
    if lmin > 0 and rmin > 0:
        llo = log2_int(lmin) / n
        rlo = log2_int(rmin) / n
        rates = RateTuple(
            r_x=r_x,
            r_y=r_y,
            r_x_prime=(rlo + rhi) / 2,
            r_y_prime=(llo + lhi) / 2,
        )
        gen = max((lhi - llo) / 2, (rhi - rlo) / 2)
        nc = max(0.0, r_y - llo, r_x - rlo)
    else:
        rates = RateTuple(r_x=r_x, r_y=r_y, r_x_prime=rhi, r_y_prime=lhi)
        gen = math.inf
        nc = math.inf
    return rates, SlackReport(gen=gen, nc=nc)


# ---------------------------------------------------------------------------
# Markov mixture decompositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovDecomposition:
    """joint(x, y) ~= sum_u weights(u) * left(x|u) * right(y|u)."""

    weights: Pmf
    left_factors: CondPmf  # row variable given U
    right_factors: CondPmf  # col variable given U
    residual: Fraction  # exact TV distance to the reconstructed joint


def induced_joint(
    weights: Pmf, left: CondPmf, right: CondPmf
) -> JointPmf:
    if left.given_alphabet != weights.alphabet or right.given_alphabet != weights.alphabet:
        raise ValueError("factor conditioning alphabets must match the weights")
    kx = left.out_alphabet.size
    ky = right.out_alphabet.size
    cells = [[Fraction(0)] * ky for _ in range(kx)]
    for u, w in enumerate(weights.probs):
        if w == 0:
            continue
        lrow, rrow = left.rows[u], right.rows[u]
        if lrow is None or rrow is None:
            raise ValueError("factor row undefined for a positive-weight u")
        for a in range(kx):
            la = lrow.probs[a]
            if la == 0:
                continue
            for b in range(ky):
                cells[a][b] += w * la * rrow.probs[b]
    return JointPmf(left.out_alphabet, right.out_alphabet, tuple(tuple(r) for r in cells))


def verify_decomposition(d: MarkovDecomposition, joint: JointPmf) -> Fraction:
    """Exact TV distance between the mixture and the target joint."""
    return total_variation(
        induced_joint(d.weights, d.left_factors, d.right_factors), joint
    )


def make_decomposition(
    weights: Pmf, left: CondPmf, right: CondPmf, joint: JointPmf
) -> MarkovDecomposition:
    d = MarkovDecomposition(
        weights=weights, left_factors=left, right_factors=right, residual=Fraction(0)
    )
    residual = verify_decomposition(d, joint)
    return MarkovDecomposition(
        weights=weights, left_factors=left, right_factors=right, residual=residual
    )


def canonical_markov_decompositions(
    joint: JointPmf,
) -> tuple[MarkovDecomposition, MarkovDecomposition]:
    """The two trivial chains: U a copy of the row variable, and of the column.

    Both reconstruct the joint exactly (residual zero).
    """
    px = joint.row_marginal()
    py = joint.col_marginal()
    kx, ky = px.alphabet.size, py.alphabet.size

    def point_mass(alphabet: Alphabet, i: int) -> Pmf:
        return Pmf(
            alphabet,
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(alphabet.size)),
        )

    ident_x = CondPmf(
        px.alphabet, px.alphabet, tuple(point_mass(px.alphabet, u) for u in range(kx))
    )
    ident_y = CondPmf(
        py.alphabet, py.alphabet, tuple(point_mass(py.alphabet, u) for u in range(ky))
    )
    d_row = make_decomposition(px, ident_x, conditionalize(joint, "row"), joint)
    d_col = make_decomposition(py, conditionalize(joint, "col"), ident_y, joint)
    for d in (d_row, d_col):
        if d.residual != 0:
            raise InvariantViolation("canonical decomposition failed to reconstruct")
    return d_row, d_col


def rate_point(d: MarkovDecomposition, tol: float = 1e-9) -> tuple[float, float]:
    """(H(X|U), H(Y|U)) of the mixture; requires residual within tol."""
    if float(d.residual) > tol:
        raise ValueError(
            f"decomposition residual {float(d.residual)} exceeds tolerance {tol}"
        )
    h_x_u = 0.0
    h_y_u = 0.0
    for u, w in enumerate(d.weights.probs):
        if w == 0:
            continue
        h_x_u += float(w) * entropy(d.left_factors.rows[u])
        h_y_u += float(w) * entropy(d.right_factors.rows[u])
    return h_x_u, h_y_u


def load_decomposition(doc, joint: JointPmf) -> MarkovDecomposition:
    """Parse a JSON decomposition (rational entries) and attach its residual."""
    if isinstance(doc, str):
        with open(doc, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    u_alpha = Alphabet(tuple(doc["u_alphabet"]))
    weights = Pmf(u_alpha, tuple(parse_fraction(v) for v in doc["weights"]))
    left = CondPmf(
        u_alpha,
        joint.row_alphabet,
        tuple(
            None
            if row is None
            else Pmf(joint.row_alphabet, tuple(parse_fraction(v) for v in row))
            for row in doc["left_factors"]
        ),
    )
    right = CondPmf(
        u_alpha,
        joint.col_alphabet,
        tuple(
            None
            if row is None
            else Pmf(joint.col_alphabet, tuple(parse_fraction(v) for v in row))
            for row in doc["right_factors"]
        ),
    )
    return make_decomposition(weights, left, right, joint)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

SUBGRAPH_SCHEMA = "typigraph.subgraph/1"


def export_subgraph(
    sub, json_path: str, edges_csv_path: Optional[str] = None, edge_cap: int = 1 << 22
) -> None:
    """JSON header with exact provenance; optional edge CSV of roster ranks."""
    if isinstance(sub, ExactTypeSubgraph):
        kind = "single_type"
        extra = {
            "rounded_joint": joint_to_dict(sub.tilde.approx),
            "max_rounding_error": str(sub.tilde.max_error),
            "support_shrunk": sub.tilde.support_shrunk,
        }
    elif isinstance(sub, AuxSubgraph):
        kind = "aux_conditional"
        extra = {
            "rounded_triple": joint_to_dict(sub.tilde.approx),
            "max_rounding_error": str(sub.tilde.max_error),
            "support_shrunk": sub.tilde.support_shrunk,
            "u_sequence": [str(l) for l in sub.u_seq.labels()],
            "aux_channel": cond_to_dict(sub.aux),
        }
    else:
        raise ValueError("unsupported subgraph object")
    header = {
        "schema": SUBGRAPH_SCHEMA,
        "kind": kind,
        "spec": {
            "joint": joint_to_dict(sub.joint),
            "n": sub.n,
            "params": {
                "eps1": str(sub.params.eps1),
                "eps2": str(sub.params.eps2),
                "lambda": str(sub.params.lam),
                "schedule": sub.params.schedule,
            },
        },
        "left_size": {"value": str(sub.left_size.value), "log2": sub.left_size.log2},
        "right_size": {"value": str(sub.right_size.value), "log2": sub.right_size.log2},
        "left_degree": {"value": str(sub.left_degree.value), "log2": sub.left_degree.log2},
        "right_degree": {
            "value": str(sub.right_degree.value),
            "log2": sub.right_degree.log2,
        },
        "delta3": sub.delta3,
        "containment": {
            "left": sub.containment.left_contained,
            "right": sub.containment.right_contained,
            "edges": sub.containment.edges_contained,
            "premise_ok": sub.containment.premise_ok,
        },
        **extra,
    }
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if edges_csv_path is None:
        return
    total = sub.left_size.value * sub.right_size.value
    if total > edge_cap:
        raise ValueError(
            f"edge scan over {total} candidate pairs exceeds cap {edge_cap}"
        )
    left = list(left_roster(sub))
    right = list(right_roster(sub))
    with open(edges_csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["left_rank", "right_rank"])
        for i, x in enumerate(left):
            for j, y in enumerate(right):
                if is_edge(sub, x, y):
                    writer.writerow([i, j])


def import_subgraph(json_path: str):
    """Rebuild a subgraph deterministically from its export header."""
    with open(json_path, "r", encoding="utf-8") as fh:
        header = json.load(fh)
    if header.get("schema") != SUBGRAPH_SCHEMA:
        raise ValueError(f"unexpected schema {header.get('schema')!r}")
    sdoc = header["spec"]
    joint = joint_from_dict(sdoc["joint"])
    params = TypicalityParams(
        eps1=Fraction(sdoc["params"]["eps1"]),
        eps2=Fraction(sdoc["params"]["eps2"]),
        lam=Fraction(sdoc["params"]["lambda"]),
        schedule=sdoc["params"]["schedule"],
    )
    if header["kind"] == "single_type":
        sub = build_exact_type_subgraph(joint, sdoc["n"], params)
    else:
        sub = build_aux_subgraph(
            joint, cond_from_dict(header["aux_channel"]), sdoc["n"], params
        )
    if str(sub.left_size.value) != header["left_size"]["value"]:
        raise InvariantViolation("rebuilt subgraph disagrees with the header")
    return sub
