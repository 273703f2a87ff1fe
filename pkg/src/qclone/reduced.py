"""Optimizer for symmetric machines after constraint elimination.

For a family of spread phi the two unitarity constraints (unit output
norms, preserved boundary overlap cos(phi)) pin two of the three machine
parameters (xi, eta, c):

    xi  = eta + delta,              delta = 1 / (sqrt(2) cos(phi/2)),
    c^2 = cos^2(phi/2) - (1 + cos^2 phi) / 2 * (2 eta + delta)^2.

Both hold for even, odd, and continuum families alike, because the
boundary half-angle is phi/2 in every case.  Fidelity then becomes a
one-dimensional problem over eta on the interval where c^2 >= 0, with a
residual sign choice for c.

Along one sign branch, F(eta) = Q(eta) + s * L(eta) * sqrt(g(eta)) with
polynomials Q (quadratic), L (linear) and g = c^2 (quadratic).  Setting
F' = 0 and squaring out the radical yields the quartic

    4 g Q'^2 - (2 L' g + L g')^2 = 0

whose real roots contain every interior stationary point of both branches,
plus the endpoints of the feasible interval whenever L vanishes there (the
fold points where the two branches meet).  Squaring also introduces
spurious roots; these are removed by an explicit stationarity filter.
The optimizer locates the maximum independently on a dense grid refined by
golden-section search, and cross-checks it against the filtered quartic
roots.  Disagreement beyond 1e-4 raises InternalConsistencyError rather
than returning a silently inconsistent result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .family import StateFamily, complement_pair
from .forms import QuadraticForm
from .qubit import Ket2, inner_product, linear_combination, tensor_product

Context = StateFamily | float

_GRID_POINTS = 2001
_GOLDEN_TOL = 1e-10
_FOLD_G_TOL = 1e-9
_STATIONARITY_TOL = 1e-8
_MATCH_HARD_LIMIT = 1e-4
_TIE_TOL = 1e-12


class InternalConsistencyError(RuntimeError):
    """Grid maximizer and filtered quartic roots disagree beyond tolerance."""


@dataclass(frozen=True)
class ReducedParams:
    """Machine parameters (eta, xi, c) on the constraint surface."""

    eta: float
    xi: float
    c: float


@dataclass(frozen=True)
class FeasibleInterval:
    eta_lo: float
    eta_hi: float


@dataclass(frozen=True)
class Quartic:
    """Coefficients z4..z0 (descending) of the squared stationarity polynomial.

    ``degree`` is the effective degree after discarding leading coefficients
    that vanish within a relative scale tolerance; a value below 4 flags a
    demoted (cubic or lower) polynomial.
    """

    z: tuple[float, float, float, float, float]
    degree: int


@dataclass(frozen=True)
class Optimum:
    params: ReducedParams
    fidelity: float
    c_sign: int
    quartic: Quartic | None
    root_residual: float
    method_agreement: float


def _phi_of(context: Context) -> float:
    if isinstance(context, StateFamily):
        return context.phi
    phi = float(context)
    if not math.isfinite(phi) or phi < 0.0 or phi >= math.pi:
        raise ValueError("phi must lie in [0, pi)")
    return phi


def _delta(phi: float) -> float:
    return 1.0 / (math.sqrt(2.0) * math.cos(phi / 2.0))


def xi_of_eta(context: Context, eta: float) -> float:
    """xi pinned by the unit-norm constraint: eta + 1/(sqrt(2) cos(phi/2))."""
    return eta + _delta(_phi_of(context))


def c_sq_of_eta(context: Context, eta: float):
    """Squared complement amplitude pinned by the overlap constraint.

    May be negative; callers use the sign to decide feasibility.  Accepts a
    scalar or an ndarray of eta values.
    """
    phi = _phi_of(context)
    delta = _delta(phi)
    a = 0.5 * (1.0 + math.cos(phi) ** 2)
    return math.cos(phi / 2.0) ** 2 - a * (2.0 * eta + delta) ** 2


def feasible_interval(context: Context) -> FeasibleInterval:
    """The closed eta-interval where c^2 >= 0; collapses as phi -> pi."""
    phi = _phi_of(context)
    delta = _delta(phi)
    a = 0.5 * (1.0 + math.cos(phi) ** 2)
    r = math.cos(phi / 2.0) / math.sqrt(a)
    return FeasibleInterval(eta_lo=(-delta - r) / 2.0, eta_hi=(-delta + r) / 2.0)


def _c_value(g, c_sign: int):
    """Signed complement amplitude from its square; clamps tiny negatives."""
    return c_sign * np.sqrt(np.maximum(g, 0.0))


def fidelity_of_eta(
    form: QuadraticForm, context: Context, eta: float, c_sign: int
) -> float:
    """Global fidelity at eta on the chosen sign branch."""
    if c_sign not in (1, -1):
        raise ValueError("c_sign must be +1 or -1")
    phi = _phi_of(context)
    if abs(form.phi - phi) > 1e-12:
        raise ValueError("form and context disagree on phi")
    g = c_sq_of_eta(context, eta)
    if g < -1e-12:
        raise ValueError(f"eta={eta} lies outside the feasible interval")
    v = np.array([xi_of_eta(context, eta), eta, float(_c_value(g, c_sign))])
    return form.quad(v)


def _poly_pieces(form: QuadraticForm, phi: float):
    """Descending-coefficient polynomials (Q, L, g) of the branch fidelity."""
    m = form.matrix
    delta = _delta(phi)
    a = 0.5 * (1.0 + math.cos(phi) ** 2)
    gamma = math.cos(phi / 2.0) ** 2
    g = np.array([-4.0 * a, -4.0 * a * delta, gamma - a * delta**2])
    q = np.array(
        [
            m[0, 0] + 2.0 * m[0, 1] + m[1, 1] + g[0] * m[2, 2],
            2.0 * delta * (m[0, 0] + m[0, 1]) + g[1] * m[2, 2],
            delta**2 * m[0, 0] + g[2] * m[2, 2],
        ]
    )
    ell = np.array([2.0 * (m[0, 2] + m[1, 2]), 2.0 * delta * m[0, 2]])
    return q, ell, g


def _compose_quartic(
    q: np.ndarray, ell: np.ndarray, g: np.ndarray
) -> tuple[np.ndarray, int]:
    qprime = np.polyder(q)
    gprime = np.polyder(g)
    left = 4.0 * np.polymul(g, np.polymul(qprime, qprime))
    inner = np.polyadd(2.0 * ell[0] * g, np.polymul(ell, gprime))
    right = np.polymul(inner, inner)
    z = np.polysub(left, right)
    z = np.concatenate([np.zeros(5 - len(z)), z])
    scale = max(1.0, float(np.max(np.abs(z))))
    degree = 0
    for i, coeff in enumerate(z):
        if abs(coeff) > 1e-13 * scale:
            degree = 4 - i
            break
    return z, degree


def derive_quartic(form: QuadraticForm, context: Context, c_sign: int) -> Quartic:
    """Quartic whose real roots contain every stationary eta of the branch.

    The coefficients do not depend on c_sign (squaring removes it); the sign
    matters only when filtering roots for branch stationarity.
    """
    if c_sign not in (1, -1):
        raise ValueError("c_sign must be +1 or -1")
    phi = _phi_of(context)
    if phi == 0.0:
        raise ValueError("phi = 0 is answered exactly, no quartic is defined")
    if abs(form.phi - phi) > 1e-12:
        raise ValueError("form and context disagree on phi")
    q, ell, g = _poly_pieces(form, phi)
    z, degree = _compose_quartic(q, ell, g)
    return Quartic(z=tuple(float(c) for c in z), degree=degree)


def _shift_poly(p: np.ndarray, mid: float) -> np.ndarray:
    """Coefficients of p(t + mid) in t, for the degree <= 2 pieces."""
    if len(p) == 3:
        return np.array([p[0], 2.0 * p[0] * mid + p[1], float(np.polyval(p, mid))])
    if len(p) == 2:
        return np.array([p[0], float(np.polyval(p, mid))])
    return np.asarray(p, dtype=float)


def _stationary_candidates(
    form: QuadraticForm, context: Context, c_sign: int
) -> list[tuple[float, int]]:
    """Quartic roots solved around the interval midpoint, as (eta, mult).

    In the raw eta variable the monomial-basis coefficients outgrow the
    polynomial's values on the feasible interval once that interval sits
    far from the origin (spreads approaching pi), and the companion-matrix
    roots drift by more than the matching tolerance.  Shifting the pieces
    to t = eta - mid before composing keeps the coefficients commensurate
    with the values, so the roots stay accurate at every spread.
    """
    phi = _phi_of(context)
    interval = feasible_interval(phi)
    mid = 0.5 * (interval.eta_lo + interval.eta_hi)
    q, ell, g = _poly_pieces(form, phi)
    z, degree = _compose_quartic(
        _shift_poly(q, mid), _shift_poly(ell, mid), _shift_poly(g, mid)
    )
    shifted = Quartic(z=tuple(float(c) for c in z), degree=degree)
    return [(t + mid, mult) for t, mult in solve_quartic(shifted)]


def solve_quartic(quartic: Quartic) -> list[tuple[float, int]]:
    """Real roots of the quartic, ascending, as (root, multiplicity) pairs.

    Roots come from the eigenvalues of the companion matrix of the effective
    (possibly demoted) polynomial.  Complex pairs are discarded; nearly
    coincident real roots are merged and reported with their multiplicity.
    """
    z = np.array(quartic.z)
    if quartic.degree == 0:
        if np.all(np.abs(z) <= 1e-300):
            raise ValueError("zero polynomial has no well-defined roots")
        return []
    trimmed = z[4 - quartic.degree :]
    roots = np.roots(trimmed)
    real = sorted(
        r.real for r in roots if abs(r.imag) <= 1e-6 * max(1.0, abs(r))
    )
    merged: list[tuple[float, int]] = []
    for r in real:
        if merged and abs(r - merged[-1][0]) <= 1e-7 * max(1.0, abs(r)):
            prev, mult = merged[-1]
            merged[-1] = ((prev * mult + r) / (mult + 1), mult + 1)
        else:
            merged.append((r, 1))
    return merged


def _branch_fidelities(
    form: QuadraticForm, context: Context, etas: np.ndarray, c_sign: int
) -> np.ndarray:
    delta = _delta(_phi_of(context))
    g = c_sq_of_eta(context, etas)
    c = _c_value(g, c_sign)
    v = np.vstack([etas + delta, etas, c])
    return np.sum(v * (form.matrix @ v), axis=0)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; returns the best point seen."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    best = max([(f(a), a), (f(b), b), (f1, x1), (f2, x2)])
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
            if (f1, x1) > best:
                best = (f1, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
            if (f2, x2) > best:
                best = (f2, x2)
    return best[1], best[0]


def _fold_distance(interval: FeasibleInterval, eta: float) -> float:
    return min(eta - interval.eta_lo, interval.eta_hi - eta)


def _fold_distance_tol(interval: FeasibleInterval) -> float:
    # Root-location noise grows with the coefficient scale of the quartic,
    # which tracks the magnitude of the interval endpoints.
    return 1e-7 * max(1.0, abs(interval.eta_lo), abs(interval.eta_hi))


def _stationarity_residual(
    form: QuadraticForm, phi: float, eta: float, c_sign: int
) -> tuple[float, bool]:
    """Residual certifying stationarity of eta on the branch.

    Interior points report |dF/deta|.  Within fold distance (c^2 = 0,
    where the two sign branches meet) that derivative amplifies root
    noise by 1/sqrt(g), so such points report the derivative transverse
    to the fold, |dF/dc| = |L(eta) + 2 M33 c|, when it certifies the fold
    as loop-stationary, and otherwise the fold-regular measure
    |2 sqrt(g) dF/deta| of an interior stationary point hugging the fold.
    Returns (residual, is_fold).
    """
    q, ell, g = _poly_pieces(form, phi)
    g_val = float(np.polyval(g, eta))
    l_val = float(np.polyval(ell, eta))
    interval = feasible_interval(phi)
    if g_val <= _FOLD_G_TOL or _fold_distance(interval, eta) <= _fold_distance_tol(interval):
        c = float(_c_value(g_val, c_sign))
        transverse = abs(l_val + 2.0 * form.matrix[2, 2] * c)
        if transverse < _STATIONARITY_TOL:
            return transverse, True
        on_branch, _off_branch = _branch_factors(form, phi, eta, c_sign)
        return on_branch, True
    qp = float(np.polyval(np.polyder(q), eta))
    gp = float(np.polyval(np.polyder(g), eta))
    root_g = math.sqrt(g_val)
    deriv = qp + c_sign * (ell[0] * root_g + l_val * gp / (2.0 * root_g))
    return abs(deriv), False


def _signed_branch_value(q, ell, g, eta: float, c_sign: int) -> float:
    """a + s b with a = 2 sqrt(g) Q' and b = 2 L' g + L g'.

    This is 2 sqrt(g) dF/deta evaluated from the low-degree pieces, so it
    stays accurate where the assembled quartic has lost its digits, and
    the 1/sqrt(g) pole of the plain derivative is cleared.
    """
    g_val = max(float(np.polyval(g, eta)), 0.0)
    qp = float(np.polyval(np.polyder(q), eta))
    a = 2.0 * math.sqrt(g_val) * qp
    b = 2.0 * ell[0] * g_val + float(np.polyval(ell, eta)) * float(
        np.polyval(np.polyder(g), eta)
    )
    return a + c_sign * b


def _branch_factors(
    form: QuadraticForm, phi: float, eta: float, c_sign: int
) -> tuple[float, float]:
    """Factor magnitudes (|a + s b|, |a - s b|) of the squared polynomial.

    The quartic is the product (a + s b)(a - s b), so a root belongs to
    branch s exactly when the first factor vanishes; only the second
    vanishing marks a root stationary on the opposite branch alone.
    Comparing the factors against each other rather than a fixed
    tolerance keeps the membership test scale-free.
    """
    q, ell, g = _poly_pieces(form, phi)
    plus = _signed_branch_value(q, ell, g, eta, c_sign)
    minus = _signed_branch_value(q, ell, g, eta, -c_sign)
    return abs(plus), abs(minus)


def _refine_root(
    form: QuadraticForm,
    phi: float,
    root: float,
    c_sign: int,
    interval: FeasibleInterval,
) -> float | None:
    """Polish a quartic root against the unsquared branch condition.

    The quartic is assembled in the monomial basis, and once the feasible
    interval sits far from the origin (spreads approaching pi) its
    coefficients grow until roots carry absolute errors above the matching
    tolerance.  A bracketed solve of a + s b = 0 around the reported root
    recovers the true stationary point from the well-conditioned pieces.
    Returns None when no nearby sign change brackets the root, as happens
    in particular for roots belonging to the other branch.
    """
    q, ell, g = _poly_pieces(form, phi)

    def value(eta: float) -> float:
        return _signed_branch_value(q, ell, g, eta, c_sign)

    width = interval.eta_hi - interval.eta_lo
    for frac in (1.0 / 1024.0, 1.0 / 128.0, 1.0 / 16.0):
        lo = max(root - frac * width, interval.eta_lo)
        hi = min(root + frac * width, interval.eta_hi)
        if not lo < hi:
            continue
        v_lo, v_hi = value(lo), value(hi)
        if v_lo == 0.0:
            return lo
        if v_hi == 0.0:
            return hi
        if (v_lo < 0.0) != (v_hi < 0.0):
            return float(brentq(value, lo, hi, xtol=1e-15, rtol=8.9e-16))
    return None


def filtered_roots(
    form: QuadraticForm, context: Context, c_sign: int
) -> list[tuple[float, float]]:
    """Stationary-point candidates on one sign branch, as (eta, residual).

    Pairs come back ascending in eta; the residual is the reporting
    measure of _stationarity_residual.  An in-interval quartic root is
    refined against the unsquared branch condition and kept when its
    on-branch factor is clearly the smaller of the two quartic factors.
    Roots within fold distance of an interval endpoint are kept outright:
    the branches merge there, so a squaring artifact cannot land at a
    fold it does not belong to.  Endpoints whose transverse derivative
    |dF/dc| vanishes are loop-stationary folds and enter as candidates at
    their closed-form locations, which unlike the quartic roots carry no
    coefficient-cancellation noise; any kept root within fold distance of
    such an endpoint is replaced by it.
    """
    phi = _phi_of(context)
    interval = feasible_interval(context)
    fold_tol = _fold_distance_tol(interval)
    kept: list[tuple[float, float]] = []
    for root, _mult in _stationary_candidates(form, context, c_sign):
        if not (interval.eta_lo - fold_tol <= root <= interval.eta_hi + fold_tol):
            continue
        root = min(max(root, interval.eta_lo), interval.eta_hi)
        if _fold_distance(interval, root) > fold_tol:
            refined = _refine_root(form, phi, root, c_sign, interval)
            if refined is not None:
                root = refined
        on_branch, off_branch = _branch_factors(form, phi, root, c_sign)
        near_fold = _fold_distance(interval, root) <= fold_tol
        if near_fold or on_branch <= 0.5 * off_branch:
            residual, _is_fold = _stationarity_residual(form, phi, root, c_sign)
            kept.append((root, residual))
    for endpoint in (interval.eta_lo, interval.eta_hi):
        residual, is_fold = _stationarity_residual(form, phi, endpoint, c_sign)
        if is_fold and residual < _STATIONARITY_TOL:
            kept = [
                (eta, res)
                for eta, res in kept
                if abs(eta - endpoint) > fold_tol
            ]
            kept.append((endpoint, residual))
    kept.sort()
    return kept


def optimize_reduced(form: QuadraticForm | None, context: Context) -> Optimum:
    """Maximize fidelity over the constraint surface.

    Scans both sign branches of c on a dense eta grid, refines the best
    bracket by golden-section search, and cross-checks the winner against
    the filtered quartic roots.  Ties between branches within 1e-12 report
    c_sign = +1.  phi = 0 short-circuits to the exact unit-fidelity machine
    (form may be None in that case and is otherwise ignored).
    """
    phi = _phi_of(context)
    if phi == 0.0:
        delta = _delta(0.0)
        eta = (1.0 - delta) / 2.0
        return Optimum(
            params=ReducedParams(eta=eta, xi=eta + delta, c=0.0),
            fidelity=1.0,
            c_sign=1,
            quartic=None,
            root_residual=0.0,
            method_agreement=0.0,
        )
    if form is None:
        raise ValueError("a quadratic form is required when phi > 0")
    if abs(form.phi - phi) > 1e-12:
        raise ValueError("form and context disagree on phi")
    if (
        isinstance(context, StateFamily)
        and form.n_states is not None
        and form.n_states != context.n_states
    ):
        raise ValueError("form and family disagree on the number of states")

    interval = feasible_interval(context)
    grid = np.linspace(interval.eta_lo, interval.eta_hi, _GRID_POINTS)
    best: dict[int, tuple[float, float]] = {}
    for sign in (1, -1):
        values = _branch_fidelities(form, context, grid, sign)
        idx = int(np.argmax(values))
        lo = grid[max(idx - 1, 0)]
        hi = grid[min(idx + 1, _GRID_POINTS - 1)]
        eta_s, f_s = _golden_max(
            lambda e, s=sign: fidelity_of_eta(form, context, e, s),
            lo,
            hi,
            _GOLDEN_TOL,
        )
        best[sign] = (eta_s, f_s)

    if best[1][1] >= best[-1][1] - _TIE_TOL:
        c_sign = 1
    else:
        c_sign = -1
    eta_star, _ = best[c_sign]

    survivors = filtered_roots(form, context, c_sign)
    if not survivors:
        raise InternalConsistencyError(
            f"no stationary quartic root survives filtering at phi={phi}"
        )
    matched = min(survivors, key=lambda pair: abs(pair[0] - eta_star))
    agreement = abs(matched[0] - eta_star)
    if agreement > _MATCH_HARD_LIMIT:
        raise InternalConsistencyError(
            f"grid maximizer {eta_star} vs quartic root {matched[0]} "
            f"differ by {agreement:.3e} at phi={phi}"
        )

    g_star = float(c_sq_of_eta(context, eta_star))
    params = ReducedParams(
        eta=eta_star,
        xi=xi_of_eta(context, eta_star),
        c=float(_c_value(g_star, c_sign)),
    )
    return Optimum(
        params=params,
        fidelity=fidelity_of_eta(form, context, eta_star, c_sign),
        c_sign=c_sign,
        quartic=derive_quartic(form, context, c_sign),
        root_residual=matched[1],
        method_agreement=agreement,
    )


def restoration_residuals(
    params: ReducedParams, context: Context
) -> tuple[float, float, float]:
    """Constraint residuals of explicitly reconstructed output states.

    Rebuilds the two boundary outputs as two-qubit kets from (eta, xi, c)
    and reports |<a|a> - 1|, |<b|b> - 1| and |<a|b> - cos(phi)|.  This is an
    independent route: it exercises the ket algebra rather than the closed
    forms used during optimization.
    """
    phi = _phi_of(context)
    if isinstance(context, StateFamily):
        s1, s2 = context.boundary
        comp1 = context.complement[0]
    else:
        s1 = Ket2.from_angle(phi / 2.0)
        s2 = Ket2.from_angle(-phi / 2.0)
        comp1 = complement_pair(phi / 2.0)[0]
    a_pair = tensor_product(s1, s1)
    b_pair = tensor_product(s2, s2)
    out_a = linear_combination([params.xi, params.eta, params.c], [a_pair, b_pair, comp1])
    out_b = linear_combination([params.eta, params.xi, params.c], [a_pair, b_pair, comp1])
    overlap = inner_product(out_a, out_b)
    return (
        abs(inner_product(out_a, out_a).real - 1.0),
        abs(inner_product(out_b, out_b).real - 1.0),
        abs(overlap - math.cos(phi)),
    )
