from fractions import Fraction

import pytest

from typigraph.core import Alphabet, CondPmf, JointPmf, Pmf, product_alphabet

BIN = Alphabet((0, 1))


@pytest.fixture
def binary_joint():
    """The running example: diagonal-heavy binary joint, I(X;Y) ~ 0.278."""
    return JointPmf(
        BIN,
        BIN,
        (
            (Fraction(2, 5), Fraction(1, 10)),
            (Fraction(1, 10), Fraction(2, 5)),
        ),
    )


@pytest.fixture
def asym_pmf():
    return Pmf(BIN, (Fraction(3, 4), Fraction(1, 4)))


@pytest.fixture
def copy_channel(binary_joint):
    """U = X as a channel conditioned on the (x, y) pair alphabet."""
    pairs = product_alphabet(binary_joint.row_alphabet, binary_joint.col_alphabet)
    rows = tuple(
        Pmf(BIN, (Fraction(1) if a == 0 else Fraction(0), Fraction(1) if a == 1 else Fraction(0)))
        for (a, b) in pairs.symbols
    )
    return CondPmf(pairs, BIN, rows)


@pytest.fixture
def const_channel(binary_joint):
    """U constant: one-letter auxiliary alphabet."""
    pairs = product_alphabet(binary_joint.row_alphabet, binary_joint.col_alphabet)
    u = Alphabet(("u",))
    return CondPmf(pairs, u, tuple(Pmf(u, (Fraction(1),)) for _ in pairs.symbols))
