"""Naive reference implementations for pinning the exact combinatorics.

Everything here enumerates exhaustively, straight from the definitions,
with Fraction arithmetic and closed balls. Deliberately slow and
deliberately independent of the package internals.
"""

import itertools
import math
from fractions import Fraction


def all_sequences(k, n):
    return itertools.product(range(k), repeat=n)


def counts_of(symbols, k):
    c = [0] * k
    for s in symbols:
        c[s] += 1
    return c


def robust_typical(symbols, probs, delta):
    """|N(a)/n - P(a)| <= delta for all a, and no mass on P(a) = 0."""
    n = len(symbols)
    c = counts_of(symbols, len(probs))
    for a, p in enumerate(probs):
        if abs(Fraction(c[a], n) - p) > delta:
            return False
        if p == 0 and c[a] > 0:
            return False
    return True


def cond_typical(y_symbols, x_symbols, w_rows, delta):
    """|N(a,b)/n - N(a)/n * W(b|a)| <= delta cellwise; W = 0 cells empty.

    w_rows: list of rows (list of Fractions) or None for undefined rows.
    """
    n = len(x_symbols)
    kx = len(w_rows)
    ky = max(len(r) for r in w_rows if r is not None)
    joint = [[0] * ky for _ in range(kx)]
    for a, b in zip(x_symbols, y_symbols):
        joint[a][b] += 1
    xc = counts_of(x_symbols, kx)
    for a in range(kx):
        if xc[a] == 0:
            continue
        if w_rows[a] is None:
            raise ValueError("conditioning on an undefined row")
        for b in range(ky):
            w = w_rows[a][b]
            if abs(Fraction(joint[a][b], n) - Fraction(xc[a], n) * w) > delta:
                return False
            if w == 0 and joint[a][b] > 0:
                return False
    return True


def jointly_typical(x_symbols, y_symbols, joint_probs, delta):
    """Robust typicality of the pair sequence on the product alphabet."""
    ky = len(joint_probs[0])
    pair = [a * ky + b for a, b in zip(x_symbols, y_symbols)]
    flat = [p for row in joint_probs for p in row]
    return robust_typical(pair, flat, delta)


def brute_typical_count(probs, delta, n):
    return sum(
        1 for s in all_sequences(len(probs), n) if robust_typical(s, probs, delta)
    )


def brute_cond_typical_count(w_rows, x_symbols, delta, ky):
    n = len(x_symbols)
    return sum(
        1
        for y in all_sequences(ky, n)
        if cond_typical(y, x_symbols, w_rows, delta)
    )


def brute_pair_count(joint_probs, eps1, eps2, lam, n):
    """Edges of the typicality graph, counted pair by pair."""
    kx, ky = len(joint_probs), len(joint_probs[0])
    px = [sum(row) for row in joint_probs]
    py = [sum(row[b] for row in joint_probs) for b in range(ky)]
    left = [s for s in all_sequences(kx, n) if robust_typical(s, px, eps1)]
    right = [s for s in all_sequences(ky, n) if robust_typical(s, py, eps2)]
    edges = 0
    for x in left:
        for y in right:
            if jointly_typical(x, y, joint_probs, lam):
                edges += 1
    return len(left), len(right), edges


def multinomial_factorial(n, counts):
    v = math.factorial(n)
    for c in counts:
        v //= math.factorial(c)
    return v
