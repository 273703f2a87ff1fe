"""Small complex vectors for one- and two-qubit pure states.

Everything downstream works in dimension 2 or 4, so kets are stored as
plain tuples of Python complex numbers.  Basis ordering is fixed once and
for all: single-qubit kets are (|0>, |1>) and two-qubit kets are
(|00>, |01>, |10>, |11>), i.e. the second factor varies fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BASIS_1Q = ("0", "1")
BASIS_2Q = ("00", "01", "10", "11")


@dataclass(frozen=True)
class Ket2:
    """A single-qubit ket, amplitudes ordered (|0>, |1>)."""

    amplitudes: tuple[complex, complex]

    def __post_init__(self) -> None:
        if len(self.amplitudes) != 2:
            raise ValueError("Ket2 requires exactly two amplitudes")
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )

    @classmethod
    def from_angle(cls, angle: float) -> "Ket2":
        """Real ket cos(angle)|0> + sin(angle)|1>."""
        return cls((math.cos(angle), math.sin(angle)))

    def as_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes))


@dataclass(frozen=True)
class Ket4:
    """A two-qubit ket, amplitudes ordered (|00>, |01>, |10>, |11>)."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        if len(self.amplitudes) != 4:
            raise ValueError("Ket4 requires exactly four amplitudes")
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes))


Ket = Ket2 | Ket4

KET0 = Ket2((1.0, 0.0))
KET1 = Ket2((0.0, 1.0))


def inner_product(bra: Ket, ket: Ket) -> complex:
    """Hermitian inner product <bra|ket>, conjugate-linear in ``bra``.

    Parameters
    ----------
    bra, ket
        Kets of equal dimension (both Ket2 or both Ket4).

    Returns
    -------
    complex
        sum_k conj(bra_k) * ket_k.
    """
    if len(bra.amplitudes) != len(ket.amplitudes):
        raise ValueError(
            f"dimension mismatch: {len(bra.amplitudes)} vs {len(ket.amplitudes)}"
        )
    return sum(a.conjugate() * b for a, b in zip(bra.amplitudes, ket.amplitudes))


def tensor_product(left: Ket2, right: Ket2) -> Ket4:
    """Kronecker product of two single-qubit kets, in (|00>,|01>,|10>,|11>) order."""
    if not isinstance(left, Ket2) or not isinstance(right, Ket2):
        raise ValueError("tensor_product expects two Ket2 operands")
    a0, a1 = left.amplitudes
    b0, b1 = right.amplitudes
    return Ket4((a0 * b0, a0 * b1, a1 * b0, a1 * b1))


def linear_combination(coeffs: list[complex], kets: list[Ket]) -> Ket:
    """Weighted sum of kets sharing one dimension.

    Raises ValueError on empty input, length mismatch between the two lists,
    or kets of unequal dimension.
    """
    if not coeffs or not kets:
        raise ValueError("linear_combination requires at least one term")
    if len(coeffs) != len(kets):
        raise ValueError(
            f"coefficient/ket count mismatch: {len(coeffs)} vs {len(kets)}"
        )
    dim = len(kets[0].amplitudes)
    if any(len(k.amplitudes) != dim for k in kets):
        raise ValueError("kets in a linear combination must share a dimension")
    acc = [0j] * dim
    for c, k in zip(coeffs, kets):
        for i, a in enumerate(k.amplitudes):
            acc[i] += complex(c) * a
    if dim == 2:
        return Ket2((acc[0], acc[1]))
    return Ket4((acc[0], acc[1], acc[2], acc[3]))


def normalized(ket: Ket) -> Ket:
    """Rescale to unit norm; zero vectors are rejected."""
    n = ket.norm()
    if n < 1e-300:
        raise ValueError("cannot normalize a zero ket")
    return linear_combination([1.0 / n], [ket])
