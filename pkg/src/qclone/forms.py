"""Fidelity as a quadratic form in the symmetric machine parameters.

A symmetric cloning machine is fixed by three reals (xi, eta, c): the two
boundary inputs map to xi*s1s1 + eta*s2s2 + c*C1 and
eta*s1s1 + xi*s2s2 + c*C1, with C1 the first complement ket.  Because every
member is a real combination p*s1 + q*s2, the squared clone overlap of each
member is (u . v)^2 with v = (xi, eta, c) and a member-specific 3-vector u.
Averaging u u^T over the family (or integrating over a continuum of
members) gives a symmetric positive semidefinite matrix M with
global fidelity = v^T M v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .family import (
    DegenerateFamilyError,
    StateFamily,
    complement_pair,
    expansion_coeffs,
)
from .qubit import Ket2, Ket4, inner_product, tensor_product


@dataclass(frozen=True)
class OverlapVector:
    """Coefficients (u_xi, u_eta, u_c) of one member's clone amplitude."""

    u: tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.array(self.u, dtype=float)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """3x3 symmetric matrix M with fidelity = v^T M v, v = (xi, eta, c)."""

    matrix: np.ndarray
    source: str
    phi: float
    n_states: int | None = field(default=None)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("quadratic form must be 3x3")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def quad(self, v: np.ndarray) -> float:
        """Evaluate v^T M v."""
        v = np.asarray(v, dtype=float)
        return float(v @ self.matrix @ v)


def _member_u(
    psi: Ket2, s1: Ket2, s2: Ket2, comp1: Ket4, p: float, q: float
) -> np.ndarray:
    """Overlap 3-vector for one member with expansion (p, q) on (s1, s2)."""
    x = inner_product(psi, s1).real ** 2
    y = inner_product(psi, s2).real ** 2
    pair = tensor_product(psi, psi)
    kappa = inner_product(pair, comp1).real
    return np.array([p * x + q * y, p * y + q * x, (p + q) * kappa])


def overlap_vector(family: StateFamily, member_index: int) -> OverlapVector:
    """Overlap 3-vector of one family member.

    The clone amplitude of member m is u . (xi, eta, c); its components are
    u_xi = p*X + q*Y, u_eta = p*Y + q*X, u_c = (p + q) * kappa, where
    X and Y are the squared overlaps of the member with the two boundary
    states and kappa is the projection of the doubled member onto the first
    complement ket.
    """
    if family.phi == 0.0:
        raise DegenerateFamilyError("phi = 0 has no well-defined overlap vector")
    p, q = expansion_coeffs(family, member_index)
    s1, s2 = family.boundary
    psi = family.members[member_index][1]
    u = _member_u(psi, s1, s2, family.complement[0], p, q)
    return OverlapVector((float(u[0]), float(u[1]), float(u[2])))


def discrete_form(family: StateFamily) -> QuadraticForm:
    """Average of u u^T over the N family members, weighted uniformly."""
    if family.phi == 0.0:
        raise DegenerateFamilyError("phi = 0 has no well-defined quadratic form")
    m = np.zeros((3, 3))
    for idx in range(family.n_states):
        u = overlap_vector(family, idx).as_array()
        m += np.outer(u, u)
    m /= family.n_states
    return QuadraticForm(
        matrix=m, source="discrete", phi=family.phi, n_states=family.n_states
    )


def continuum_form(phi: float, node_count: int = 64) -> QuadraticForm:
    """Limit form (1/phi) * integral of u(x) u(x)^T over x in [-phi/2, phi/2].

    The member at angle x is expanded on the boundary pair at +/- phi/2; the
    integrand is a trigonometric polynomial of low degree, so Gauss-Legendre
    quadrature with the default 64 nodes is exact to machine precision.
    """
    if int(node_count) != node_count or node_count < 2:
        raise ValueError("node_count must be an integer >= 2")
    if not math.isfinite(phi) or phi < 0.0 or phi >= math.pi:
        raise ValueError("phi must lie in [0, pi)")
    if phi == 0.0:
        raise DegenerateFamilyError("phi = 0 has no continuum form")

    half = phi / 2.0
    s1 = Ket2.from_angle(half)
    s2 = Ket2.from_angle(-half)
    comp1 = complement_pair(half)[0]
    a1, b1 = (v.real for v in s1.amplitudes)
    a2, b2 = (v.real for v in s2.amplitudes)
    det = a1 * b2 - a2 * b1

    nodes, weights = np.polynomial.legendre.leggauss(int(node_count))
    m = np.zeros((3, 3))
    for t, w in zip(nodes, weights):
        x = half * t
        psi = Ket2.from_angle(x)
        c0, c1 = (v.real for v in psi.amplitudes)
        p = (c0 * b2 - c1 * a2) / det
        q = (a1 * c1 - b1 * c0) / det
        u = _member_u(psi, s1, s2, comp1, p, q)
        m += (w * half) * np.outer(u, u)
    m /= phi
    return QuadraticForm(matrix=m, source="continuum", phi=phi, n_states=None)
