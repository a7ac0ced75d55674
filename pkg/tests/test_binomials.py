import numpy as np
import pytest

from carlitz import binom_mod_p, binom_pascal_oracle
from carlitz.errors import InvalidCharacteristic


def test_frozen_values():
    assert binom_mod_p(5, 2, 2) == 0          # 10 even
    assert binom_pascal_oracle(4, 2, 2) == 0  # 6 even
    assert binom_pascal_oracle(4, 2, 7) == 6
    assert binom_pascal_oracle(0, 0, 5) == 1
    assert binom_mod_p(2, 1, 3) == 2


def test_left_edge():
    for l in (0, 1, 5, 100, 511):
        for p in (2, 3, 5, 7):
            assert binom_mod_p(l, 0, p) == 1


def test_above_diagonal_is_zero():
    assert binom_mod_p(3, 5, 2) == 0
    assert binom_pascal_oracle(3, 5, 3) == 0


def test_nonprime_rejected():
    with pytest.raises(InvalidCharacteristic):
        binom_mod_p(4, 2, 6)
    with pytest.raises(InvalidCharacteristic):
        binom_pascal_oracle(4, 2, 1)


def test_negative_rejected():
    with pytest.raises(ValueError):
        binom_mod_p(-1, 0, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lucas_equals_pascal_to_128(p):
    for l in range(129):
        for j in range(l + 1):
            assert binom_mod_p(l, j, p) == binom_pascal_oracle(l, j, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_vandermonde_convolution(p):
    # row_a conv row_b == row_{a+b} mod p, i.e.
    # sum_i C(a,i) C(b,n-i) = C(a+b,n); exhaustive for a, b <= 64
    rows = [
        np.array([binom_pascal_oracle(l, j, p) for j in range(l + 1)], dtype=np.int64)
        for l in range(129)
    ]
    for a in range(65):
        for b in range(65):
            conv = np.convolve(rows[a], rows[b]) % p
            assert np.array_equal(conv, rows[a + b])
