"""Algebraic properties of the small ket types."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclone.qubit import (
    BASIS_2Q,
    KET0,
    KET1,
    Ket2,
    Ket4,
    inner_product,
    linear_combination,
    normalized,
    tensor_product,
)

_reals = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
_complexes = st.builds(complex, _reals, _reals)
_ket2s = st.builds(lambda a, b: Ket2((a, b)), _complexes, _complexes)
_ket4s = st.builds(
    lambda a, b, c, d: Ket4((a, b, c, d)),
    _complexes,
    _complexes,
    _complexes,
    _complexes,
)


@settings(max_examples=1000, deadline=None)
@given(x=_ket4s, y=_ket4s)
def test_conjugate_symmetry(x: Ket4, y: Ket4) -> None:
    assert abs(inner_product(x, y) - inner_product(y, x).conjugate()) < 1e-13


@settings(max_examples=1000, deadline=None)
@given(x=_ket4s, y=_ket4s, z=_ket4s, a=_complexes, b=_complexes)
def test_linearity_in_second_argument(x, y, z, a, b) -> None:
    combined = linear_combination([a, b], [y, z])
    expected = a * inner_product(x, y) + b * inner_product(x, z)
    assert abs(inner_product(x, combined) - expected) < 1e-13


@settings(max_examples=1000, deadline=None)
@given(x=_ket2s, y=_ket2s)
def test_tensor_norm_multiplicative(x: Ket2, y: Ket2) -> None:
    assert abs(tensor_product(x, y).norm() - x.norm() * y.norm()) < 1e-13


def test_basis_order_is_global() -> None:
    # |01> must land in slot 1 of the fixed (|00>,|01>,|10>,|11>) ordering
    assert BASIS_2Q == ("00", "01", "10", "11")
    ket01 = tensor_product(KET0, KET1)
    assert ket01.amplitudes == (0.0, 1.0, 0.0, 0.0)
    ket10 = tensor_product(KET1, KET0)
    assert ket10.amplitudes == (0.0, 0.0, 1.0, 0.0)


def test_from_angle_overlap_is_cosine() -> None:
    for a, b in [(0.0, 0.3), (-0.7, 1.1), (0.25, 0.25), (1.4, -1.4)]:
        got = inner_product(Ket2.from_angle(a), Ket2.from_angle(b))
        assert abs(got - math.cos(b - a)) < 1e-14
        assert abs(got.imag) == 0.0


def test_linear_combination_identity() -> None:
    assert linear_combination([1.0, 0.0], [KET0, KET1]).amplitudes == (1.0, 0.0)


def test_singlet_combination() -> None:
    ket01 = tensor_product(KET0, KET1)
    ket10 = tensor_product(KET1, KET0)
    s = 1.0 / math.sqrt(2.0)
    singlet = linear_combination([s, -s], [ket01, ket10])
    assert abs(singlet.norm() - 1.0) < 1e-15
    assert abs(inner_product(singlet, tensor_product(KET0, KET0))) == 0.0


def test_dimension_mismatch_rejected() -> None:
    with pytest.raises(ValueError):
        inner_product(KET0, tensor_product(KET0, KET0))
    with pytest.raises(ValueError):
        linear_combination([1.0, 1.0], [KET0, tensor_product(KET0, KET0)])


def test_empty_and_mismatched_combinations_rejected() -> None:
    with pytest.raises(ValueError):
        linear_combination([], [])
    with pytest.raises(ValueError):
        linear_combination([1.0], [KET0, KET1])


def test_bad_amplitude_counts_rejected() -> None:
    with pytest.raises(ValueError):
        Ket2((1.0,))  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        Ket4((1.0, 0.0))  # type: ignore[arg-type]


def test_normalized_rejects_zero() -> None:
    with pytest.raises(ValueError):
        normalized(Ket2((0.0, 0.0)))
    assert abs(normalized(Ket2((3.0, 4.0))).norm() - 1.0) < 1e-15
