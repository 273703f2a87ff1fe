"""Coplanar qubit families with a fixed total angular spread.

A family of N candidate states lives in the real span of (|0>, |1>).
Member angles form a uniform grid of pitch theta = phi / (N - 1), arranged
symmetrically about |0>:

* even N = 2n: a_m at +(m - 1/2) theta and its mirror b_m at -(m - 1/2) theta,
  for m = 1..n;
* odd N = 2n + 1: a_m at m theta for m = -n..n.

In both cases the extreme pair (the "boundary" states) subtends the full
angle phi, so their overlap is cos(phi).  The boundary pair spans the
family; every other member is a real combination of the two.  The
orthogonal complement of span{s1 s1, s2 s2} inside the symmetric two-qubit
subspace is two-dimensional and is spanned by the pair returned by
``complement_basis``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .qubit import Ket2, Ket4, inner_product, normalized, tensor_product


class DegenerateFamilyError(ValueError):
    """Raised when phi = 0 collapses the family onto a single state.

    Callers that can answer exactly in this regime (a single state is
    cloned perfectly, fidelity 1) are expected to short-circuit instead of
    propagating the error.
    """


@dataclass(frozen=True)
class StateFamily:
    """Immutable description of one N-state coplanar family."""

    n_states: int
    phi: float
    theta: float
    parity: str
    half_count: int
    members: tuple[tuple[str, Ket2], ...]
    angles: tuple[float, ...]
    boundary: tuple[Ket2, Ket2]
    complement: tuple[Ket4, Ket4]


def complement_pair(half_angle: float) -> tuple[Ket4, Ket4]:
    """Orthonormal basis of the complement of span{s1 s1, s2 s2}.

    ``half_angle`` is half the angle subtended by the boundary pair, so the
    boundary states sit at +/- half_angle.  The first basis ket is the
    normalization of sin^2(half_angle)|00> - cos^2(half_angle)|11>, the
    second is the singlet (|01> - |10>)/sqrt(2).  Both are orthogonal to
    s1 s1 and s2 s2 for every half_angle.
    """
    s = math.sin(half_angle) ** 2
    c = math.cos(half_angle) ** 2
    first = normalized(Ket4((s, 0.0, 0.0, -c)))
    second = Ket4((0.0, 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0), 0.0))
    return (first, second)


def build_family(n_states: int, phi: float) -> StateFamily:
    """Construct the N-member family with total spread ``phi``.

    Parameters
    ----------
    n_states
        Number of candidate states, at least 2.
    phi
        Total angle between the extreme members, in radians, within
        [0, pi).  phi = 0 is allowed and produces a degenerate family in
        which every member equals |0>; most downstream operations reject
        it (see DegenerateFamilyError).

    Returns
    -------
    StateFamily
    """
    if int(n_states) != n_states or isinstance(n_states, bool):
        raise ValueError("n_states must be an integer")
    n_states = int(n_states)
    if n_states < 2:
        raise ValueError("a family needs at least two candidate states")
    if not math.isfinite(phi):
        raise ValueError("phi must be finite")
    if phi < 0.0 or phi >= math.pi:
        raise ValueError("phi must lie in [0, pi)")

    theta = phi / (n_states - 1)
    if n_states % 2 == 0:
        parity = "even"
        half = n_states // 2
        labels: list[str] = []
        angles: list[float] = []
        for m in range(1, half + 1):
            labels.append(f"a{m}")
            angles.append((m - 0.5) * theta)
        for m in range(1, half + 1):
            labels.append(f"b{m}")
            angles.append(-(m - 0.5) * theta)
        boundary_angles = ((half - 0.5) * theta, -(half - 0.5) * theta)
    else:
        parity = "odd"
        half = (n_states - 1) // 2
        labels = [f"a{m}" for m in range(-half, half + 1)]
        angles = [m * theta for m in range(-half, half + 1)]
        boundary_angles = (half * theta, -half * theta)

    members = tuple(
        (label, Ket2.from_angle(angle)) for label, angle in zip(labels, angles)
    )
    boundary = (
        Ket2.from_angle(boundary_angles[0]),
        Ket2.from_angle(boundary_angles[1]),
    )
    # Half-spread equals phi/2 for both parities; keep the grid form so the
    # stored states and the complement come from the same angles.
    complement = complement_pair(boundary_angles[0])
    return StateFamily(
        n_states=n_states,
        phi=phi,
        theta=theta,
        parity=parity,
        half_count=half,
        members=members,
        angles=tuple(angles),
        boundary=boundary,
        complement=complement,
    )


def complement_basis(family: StateFamily) -> tuple[Ket4, Ket4]:
    """The two-ket orthonormal complement stored on the family."""
    return family.complement


def expansion_coeffs(family: StateFamily, member_index: int) -> tuple[float, float]:
    """Real coefficients (p, q) with member = p * s1 + q * s2.

    The boundary pair (s1, s2) is linearly independent whenever phi > 0,
    so the 2x2 system has a unique solution.  phi = 0 raises
    DegenerateFamilyError.
    """
    if family.phi == 0.0:
        raise DegenerateFamilyError(
            "boundary states coincide at phi = 0; expansion is not unique"
        )
    if not 0 <= member_index < family.n_states:
        raise ValueError(
            f"member_index {member_index} out of range for N={family.n_states}"
        )
    s1, s2 = family.boundary
    psi = family.members[member_index][1]
    a1, b1 = (x.real for x in s1.amplitudes)
    a2, b2 = (x.real for x in s2.amplitudes)
    det = a1 * b2 - a2 * b1
    if abs(det) < 1e-14:
        raise DegenerateFamilyError("boundary pair is numerically dependent")
    x0, x1 = (x.real for x in psi.amplitudes)
    p = (x0 * b2 - x1 * a2) / det
    q = (a1 * x1 - b1 * x0) / det
    return (p, q)


def denseness(family: StateFamily) -> float:
    """States per radian of spread, N / phi; infinite when phi = 0."""
    if family.phi == 0.0:
        return math.inf
    return family.n_states / family.phi


def shannon_entropy(n_states: int) -> float:
    """Entropy ln(N) of the uniform prior over N equally likely inputs."""
    if int(n_states) != n_states or n_states < 1:
        raise ValueError("n_states must be a positive integer")
    return math.log(n_states)
