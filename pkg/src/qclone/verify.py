"""Cross-module invariant checks behind the ``verify`` subcommand.

Each check exercises more than one module at once, on a small grid of
families, and reports pass/fail with a short detail string naming the
failing (N, phi) points.  A check that raises is reported as failed rather
than aborting the suite, so injected regressions surface as FAIL lines
instead of tracebacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import forms, reduced
from .family import build_family

_PHI_GRID = (0.2, 0.6, 1.0, 1.4)
_OPT_PHI_GRID = (0.3, 0.7, 1.1, 1.5)
_N_GRID = tuple(range(2, 11))
_OPT_N_GRID = (2, 3, 4, 5, 8)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _verdict(name: str, worst_note: str, bad: list[str]) -> CheckResult:
    if bad:
        listed = ", ".join(bad[:8]) + (", ..." if len(bad) > 8 else "")
        return CheckResult(name, False, f"{worst_note}; failing: {listed}")
    return CheckResult(name, True, worst_note)


def _check_psd() -> CheckResult:
    worst = 0.0
    bad: list[str] = []
    for phi in _PHI_GRID:
        labeled = [("cont", forms.continuum_form(phi).matrix)] + [
            (str(n), forms.discrete_form(build_family(n, phi)).matrix)
            for n in _N_GRID
        ]
        for label, m in labeled:
            asym = float(np.max(np.abs(m - m.T)))
            low = float(np.linalg.eigvalsh(m)[0])
            violation = max(asym, -low)
            worst = max(worst, violation)
            if violation > 1e-12:
                bad.append(f"(N={label}, phi={phi})")
    return _verdict("psd", f"worst violation {worst:.2e}", bad)


def _check_reflection() -> CheckResult:
    worst = 0.0
    bad: list[str] = []
    for phi in _PHI_GRID:
        for n in _N_GRID:
            fam = build_family(n, phi)
            half = fam.half_count
            gap = 0.0
            for idx in range(n):
                if fam.parity == "even":
                    mirror = idx + half if idx < half else idx - half
                else:
                    mirror = n - 1 - idx
                u = forms.overlap_vector(fam, idx).as_array()
                v = forms.overlap_vector(fam, mirror).as_array()
                gap = max(gap, float(np.max(np.abs(u - v))))
            worst = max(worst, gap)
            if gap > 1e-12:
                bad.append(f"(N={n}, phi={phi})")
    return _verdict("reflection-symmetry", f"max member/mirror gap {worst:.2e}", bad)


def _check_monotonicity() -> CheckResult:
    worst_step = math.inf
    worst_bound = -math.inf
    bad: list[str] = []
    for phi in (0.4, 0.8, 1.2, math.pi / 2):
        fids = []
        for n in range(3, 11):
            fam = build_family(n, phi)
            fids.append(
                reduced.optimize_reduced(forms.discrete_form(fam), fam).fidelity
            )
        cont = reduced.optimize_reduced(forms.continuum_form(phi), phi).fidelity
        for i in range(len(fids) - 1):
            step = fids[i + 1] - fids[i]
            worst_step = min(worst_step, step)
            if step < -1e-9:
                bad.append(f"(N={i + 3}->{i + 4}, phi={phi:.4g})")
        for i, f in enumerate(fids):
            worst_bound = max(worst_bound, f - cont)
            if f - cont > 1e-6:
                bad.append(f"(N={i + 3} above continuum, phi={phi:.4g})")
    note = (
        f"min F(N+1)-F(N) {worst_step:+.2e}, max F(N)-F(cont) {worst_bound:+.2e}"
    )
    return _verdict("monotonicity", note, bad)


def _optima():
    for phi in _OPT_PHI_GRID:
        for n in _OPT_N_GRID:
            fam = build_family(n, phi)
            form = forms.discrete_form(fam)
            yield fam, form, reduced.optimize_reduced(form, fam)


def _check_restoration() -> CheckResult:
    worst = 0.0
    bad: list[str] = []
    for fam, _form, opt in _optima():
        residual = max(reduced.restoration_residuals(opt.params, fam))
        worst = max(worst, residual)
        if residual > 1e-10:
            bad.append(f"(N={fam.n_states}, phi={fam.phi})")
    return _verdict(
        "constraint-restoration", f"max reconstructed residual {worst:.2e}", bad
    )


def _check_quartic_agreement() -> CheckResult:
    worst_gap = 0.0
    worst_res = 0.0
    bad: list[str] = []
    for fam, _form, opt in _optima():
        worst_gap = max(worst_gap, opt.method_agreement)
        worst_res = max(worst_res, opt.root_residual)
        if opt.method_agreement > 1e-6 or opt.root_residual > 1e-8:
            bad.append(f"(N={fam.n_states}, phi={fam.phi})")
    note = (
        f"max grid/root gap {worst_gap:.2e}, "
        f"max stationarity residual {worst_res:.2e}"
    )
    return _verdict("quartic-agreement", note, bad)


def _check_fidelity_consistency() -> CheckResult:
    worst = 0.0
    bad: list[str] = []
    for fam, form, opt in _optima():
        v = np.array([opt.params.xi, opt.params.eta, opt.params.c])
        gap = abs(opt.fidelity - form.quad(v))
        in_range = 0.0 <= opt.fidelity <= 1.0 + 1e-12
        worst = max(worst, gap)
        if gap > 1e-12 or not in_range:
            bad.append(f"(N={fam.n_states}, phi={fam.phi})")
    return _verdict(
        "fidelity-consistency", f"max report/evaluation gap {worst:.2e}", bad
    )


_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    _check_psd,
    _check_reflection,
    _check_monotonicity,
    _check_restoration,
    _check_quartic_agreement,
    _check_fidelity_consistency,
)


def run_verification() -> list[CheckResult]:
    """Run every invariant check, never raising out of a single check."""
    results = []
    for check in _CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # noqa: BLE001 - report, don't abort the suite
            name = check.__name__.removeprefix("_check_").replace("_", "-")
            results.append(CheckResult(name, False, f"raised {exc!r}"))
    return results
