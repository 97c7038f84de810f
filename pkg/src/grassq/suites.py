"""Named verification suites and their machine-readable reports.

Every check certifies one identity and carries a short rendering of that
identity, a status, and the canonical defect (a term-ordered string for
symbolic checks, a residual for numeric ones).  Statuses:

    pass                  exact zero defect, or residual within tolerance
    fail                  an identity that must hold does not
    reported-discrepancy  a comparison against a quoted closed form that
                          the mechanical expansion contradicts; recorded
                          verbatim, never silently reconciled

Reports are deterministic: checks are sorted by id and timings are only
included on request, so the default output is byte-identical across runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import biortho as nb
from .coherent import (check_stability, exponential_form_defect,
                       make_coherent, verify_eigen)
from .errors import EngineError
from .opalg import PHI, PSI, eta_conjugate, ket_op, op_dagger
from .resolution import (MIXED_PAIRS, SAME_PAIRS, Weight, closed_form_weight,
                         compare_weights, mirror_weight, solve_weight,
                         verify_resolution)
from .scalars import Scalar
from .suq2 import (check_closure, make_squeeze, make_squeezed_state,
                   make_suq2, squeeze_defect, squeeze_tilde_exponential_defect,
                   squeezed_closed_form, squeezed_state_defect,
                   verify_suq2_relations)

SELECTORS = ("coherent", "resolution", "suq2", "dynamics", "biortho", "all")

DEFAULT_H = ((1.0, 4.0), (1.0, 1.0))


@dataclass(frozen=True)
class Problem:
    """Concrete parameters for numeric grounding."""

    n: int
    rho: tuple[Fraction, ...]
    H: Optional[np.ndarray] = None


def default_problem() -> Problem:
    return Problem(n=2, rho=(Fraction(2),),
                   H=np.array(DEFAULT_H, dtype=complex))


@dataclass
class CheckResult:
    id: str
    ref: str
    status: str
    defect: str | float
    runtime_ms: Optional[float] = None


@dataclass
class SuiteReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if c.status == "fail")

    @property
    def discrepancies(self) -> int:
        return sum(1 for c in self.checks if c.status == "reported-discrepancy")

    def sorted(self) -> "SuiteReport":
        return SuiteReport(sorted(self.checks, key=lambda c: c.id))


class _Runner:
    def __init__(self, timings: bool):
        self.timings = timings
        self.checks: list[CheckResult] = []

    def _record(self, check_id: str, ref: str, status: str,
                defect, started: float) -> None:
        elapsed = (time.perf_counter() - started) * 1000.0 if self.timings else None
        self.checks.append(CheckResult(check_id, ref, status, defect, elapsed))

    def zero(self, check_id: str, ref: str, fn: Callable) -> None:
        """Identity that must hold exactly."""
        t0 = time.perf_counter()
        defect = fn()
        ok = defect.is_zero if hasattr(defect, "is_zero") else not defect
        self._record(check_id, ref, "pass" if ok else "fail", str(defect), t0)

    def nonzero(self, check_id: str, ref: str, fn: Callable) -> None:
        """Structural obstruction that must NOT vanish."""
        t0 = time.perf_counter()
        defect = fn()
        ok = not (defect.is_zero if hasattr(defect, "is_zero") else not defect)
        self._record(check_id, ref, "pass" if ok else "fail", str(defect), t0)

    def discrepancy(self, check_id: str, ref: str, fn: Callable) -> None:
        """Comparison against a quoted form; mismatches are reported, not failed."""
        t0 = time.perf_counter()
        defect = fn()
        ok = defect.is_zero if hasattr(defect, "is_zero") else not defect
        status = "pass" if ok else "reported-discrepancy"
        self._record(check_id, ref, status, str(defect), t0)

    def residual(self, check_id: str, ref: str, fn: Callable, tol: float) -> None:
        t0 = time.perf_counter()
        value = float(fn())
        self._record(check_id, ref, "pass" if value <= tol else "fail", value, t0)

    def gap(self, check_id: str, ref: str, fn: Callable, threshold: float) -> None:
        t0 = time.perf_counter()
        value = float(fn())
        self._record(check_id, ref, "pass" if value > threshold else "fail",
                     value, t0)

    def condition(self, check_id: str, ref: str, fn: Callable, detail: str = "") -> None:
        t0 = time.perf_counter()
        ok = bool(fn())
        self._record(check_id, ref, "pass" if ok else "fail", detail, t0)


# ---------------------------------------------------------------------------
# suite builders
# ---------------------------------------------------------------------------

def _coherent_checks(r: _Runner, n_values: Sequence[int]) -> None:
    for n in n_values:
        psi = make_coherent(n, PSI)
        phi = make_coherent(n, PHI)
        r.zero(f"coherent/n={n}/eigen-psi", "b|theta> = theta |theta>",
               lambda psi=psi: verify_eigen(psi))
        r.zero(f"coherent/n={n}/eigen-phi", "b~|theta~> = theta |theta~>",
               lambda phi=phi: verify_eigen(phi))
        r.zero(f"coherent/n={n}/exp-form-psi",
               "|theta> = e_q^(b# theta) |psi_0>",
               lambda psi=psi: exponential_form_defect(psi))
        r.zero(f"coherent/n={n}/exp-form-phi",
               "|theta~> = e_q^(b~#' theta) |phi_0>",
               lambda phi=phi: exponential_form_defect(phi))
        r.zero(f"coherent/n={n}/eta-map", "eta |theta> = |theta~>",
               lambda psi=psi, phi=phi: eta_conjugate(psi.body) - phi.body)


def _dynamics_checks(r: _Runner, n_values: Sequence[int]) -> None:
    for n in n_values:
        r.zero(f"dynamics/n={n}/stability-psi",
               "|theta,t> = u^-(n-2) |theta(t)>",
               lambda n=n: check_stability(n, PSI))
        r.zero(f"dynamics/n={n}/stability-phi",
               "|theta~,t> = u^-(n-2) |theta~(t)>",
               lambda n=n: check_stability(n, PHI))
        r.zero(f"dynamics/n={n}/evolved-resolution",
               "int w |theta,t><theta~,t| = I",
               lambda n=n: verify_resolution(solve_weight(n), (PSI, PHI),
                                             evolved=True))


def _resolution_checks(r: _Runner, n_values: Sequence[int]) -> None:
    for n in n_values:
        weight = solve_weight(n)
        r.condition(f"resolution/n={n}/solver-diagonal",
                    "derived weight is diagonal and unique",
                    lambda weight=weight: weight.is_diagonal(),
                    detail=str(weight.expr))
        r.zero(f"resolution/n={n}/mixed-psi-phi",
               "int w |theta><theta~| = I",
               lambda weight=weight: verify_resolution(weight, (PSI, PHI)))
        r.zero(f"resolution/n={n}/mixed-phi-psi",
               "int w |theta~><theta| = I",
               lambda weight=weight: verify_resolution(weight, (PHI, PSI)))
        r.nonzero(f"resolution/n={n}/same-psi-psi",
                  "int w |theta><theta| != I",
                  lambda weight=weight: verify_resolution(weight, (PSI, PSI)))
        r.nonzero(f"resolution/n={n}/same-phi-phi",
                  "int w |theta~><theta~| != I",
                  lambda weight=weight: verify_resolution(weight, (PHI, PHI)))
        r.discrepancy(f"resolution/n={n}/weight-reversed-factorial",
                      "w = sum q^i(i+1) rho_(n-1-i)! theta^i thetabar^i",
                      lambda n=n, weight=weight:
                      weight.expr - closed_form_weight(n).expr)
        r.discrepancy(f"resolution/n={n}/weight-plain-factorial",
                      "c_ii = rho_i! q^i(i+1)",
                      lambda n=n, weight=weight:
                      weight.expr - mirror_weight(n).expr)
        if n == 3:
            r.discrepancy("resolution/n=3/weight-three-level",
                          "w = rho1 rho2 + rho1/q theta thetabar "
                          "+ theta^2 thetabar^2",
                          lambda weight=weight:
                          weight.expr - closed_form_weight(3).expr)


def _suq2_checks(r: _Runner) -> None:
    sys3 = make_suq2(3)
    r.condition("suq2/closure/cube-root-free-rho",
                "[b_z,b]_q closes at q = primitive cube root",
                lambda: check_closure(3).closes)
    r.condition("suq2/closure/equal-rho-any-root",
                "[b_z,b]_q closes when rho_1 = rho_2",
                lambda: check_closure(4, equal_rho=True).closes)
    v4 = check_closure(4)
    r.condition("suq2/closure/distinct-rho-other-root-fails",
                "(1+q+q^2)(rho_1-rho_2) obstruction at a fourth root",
                lambda: not v4.closes, detail=str(v4.defect_first))
    rel = verify_suq2_relations(sys3)
    r.zero("suq2/relations/bracket-defines-bz", "[b,b#]_q = b_z",
           lambda: rel.bracket_defines_bz)
    r.zero("suq2/relations/bz-b", "[b_z,b]_q = (rho1 - q rho2 + q^2 rho1) b",
           lambda: rel.bz_with_b)
    r.zero("suq2/relations/bsharp-bz",
           "[b#,b_z]_q = (rho1 - q rho2 + q^2 rho1) b#",
           lambda: rel.bsharp_with_bz)
    r.zero("suq2/relations/prefactor-equality",
           "rho1 - q rho2 + q^2 rho1 = rho2 - q rho1 + q^2 rho2",
           lambda: rel.prefactor_difference)
    r.condition("suq2/nilpotency", "b^3 = b#^3 = b~^3 = b~#'^3 = 0",
                lambda: sys3.b.power(3).is_zero
                and sys3.b_sharp.power(3).is_zero
                and eta_conjugate(sys3.b).power(3).is_zero
                and op_dagger(sys3.b).power(3).is_zero)
    r.condition("suq2/squeeze/terminates",
                "exp[(theta b#^2 - thetabar b^2)/2] terminates",
                lambda: not make_squeeze(sys3).is_zero)
    r.discrepancy("suq2/squeeze/quadratic-closed-form",
                  "S = I + (theta b#^2 - thetabar b^2)/2 "
                  "- qbar/4 theta thetabar (b#^2 b^2 + q b^2 b#^2)",
                  lambda: squeeze_defect(sys3))
    r.discrepancy("suq2/squeezed-state/closed-form",
                  "S|psi_0> = (1 - rho1 rho2/4 theta thetabar)|psi_0> "
                  "+ sqrt(rho1 rho2)/2 theta |psi_2>",
                  lambda: squeezed_state_defect(sys3, PSI))
    r.discrepancy("suq2/squeezed-state/tilde-closed-form",
                  "eta S|psi_0> over the phi family",
                  lambda: squeezed_state_defect(sys3, PHI))
    r.zero("suq2/squeezed-state/eta-channel",
           "eta (S|psi_0>) = (eta S eta^-1)|phi_0>",
           lambda: eta_conjugate(make_squeezed_state(sys3, PSI))
           - (eta_conjugate(make_squeeze(sys3)) @ ket_op(3, PHI, 0)))
    r.zero("suq2/squeeze/tilde-exponential-form",
           "eta S eta^-1 = exp[(theta b~#'^2 - thetabar b~^2)/2]",
           lambda: squeeze_tilde_exponential_defect(sys3))
    weight3 = solve_weight(3)
    r.zero("suq2/weight/three-level-resolution",
           "int w |theta><theta~| = I at n=3",
           lambda: verify_resolution(weight3, (PSI, PHI)))
    r.zero("suq2/stability/three-level", "|theta,t> = u |theta(t)> at n=3",
           lambda: check_stability(3, PSI))


def _biortho_checks(r: _Runner, problem: Problem, tol: float) -> None:
    if problem.H is None:
        raise EngineError("the biortho suite needs a concrete matrix")
    decomp = nb.biortho_decompose(problem.H, tol=tol)
    n = decomp.size
    rho_values = [float(x) for x in problem.rho[:n - 1]]
    if len(rho_values) < n - 1:
        raise EngineError("need one rho value per ladder step")
    residuals = nb.decomposition_residuals(decomp)
    for name in sorted(residuals):
        r.residual(f"biortho/decomp/{name}",
                   "biorthonormal eigendata residual",
                   lambda name=name: residuals[name], tol=1e-9)
    ph = nb.check_pseudo_hermiticity(decomp)
    r.residual("biortho/pseudo-hermiticity", "eta H eta^-1 = H^dag",
               lambda: ph.residual, tol=1e-9)
    r.gap("biortho/metric-positive", "eta > 0",
          lambda: ph.eta_min_eigenvalue, threshold=0.0)
    ladders = nb.numeric_ladder(decomp, rho_values)
    r.residual("biortho/ladder/nilpotency", "b^n = 0",
               lambda: ladders.nilpotency_residual, tol=1e-12)
    r.residual("biortho/ladder/sharp-form",
               "eta^-1 b^dag eta = sum sqrt(rho) |psi_{i+1}><phi_i|",
               lambda: ladders.sharp_form_residual, tol=1e-10)
    r.residual("biortho/ladder/dagger", "b~#' = b^dag",
               lambda: ladders.dagger_residual, tol=1e-12)
    r.residual("biortho/instantiate/eigen-defect",
               "symbolic eigen defect grounds to zero",
               lambda: nb.instantiate_numeric(
                   verify_eigen(make_coherent(n, PSI)), decomp, rho_values),
               tol=1e-10)
    weight = solve_weight(n)
    r.residual("biortho/instantiate/mixed-resolution",
               "symbolic resolution defect grounds to zero",
               lambda: nb.instantiate_numeric(
                   verify_resolution(weight, (PSI, PHI)), decomp, rho_values),
               tol=1e-10)
    same_gap = nb.instantiate_numeric(
        verify_resolution(weight, (PSI, PSI)), decomp, rho_values)
    hermitian = bool(np.linalg.norm(decomp.H - decomp.H.conj().T, 2)
                     <= tol * np.linalg.norm(decomp.H, 2))
    if hermitian:
        r.residual("biortho/instantiate/same-family-gap",
                   "same-family integral coincides with I for Hermitian input",
                   lambda: same_gap, tol=1e-10)
    else:
        r.gap("biortho/instantiate/same-family-gap",
              "int w |theta><theta| lands measurably away from I",
              lambda: same_gap, threshold=0.01)


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def run_suite(selector: str, n_range: tuple[int, int] = (2, 4), *,
              problem: Problem | None = None, tol: float = 1e-10,
              max_n: int = 8, timings: bool = False) -> SuiteReport:
    """Run one named suite over the requested levels.

    ``n_range`` bounds the symbolic levels (inclusive); the numeric suite
    takes its size from the problem matrix instead.
    """
    if selector not in SELECTORS:
        raise EngineError(f"unknown selector {selector!r}; choose from {SELECTORS}")
    lo, hi = n_range
    if not (2 <= lo <= hi <= max_n):
        raise EngineError(
            f"level range {lo}..{hi} must satisfy 2 <= lo <= hi <= {max_n}")
    n_values = range(lo, hi + 1)
    problem = problem or default_problem()
    r = _Runner(timings)
    if selector in ("coherent", "all"):
        _coherent_checks(r, n_values)
    if selector in ("dynamics", "all"):
        _dynamics_checks(r, n_values)
    if selector in ("resolution", "all"):
        _resolution_checks(r, n_values)
    if selector in ("suq2", "all"):
        _suq2_checks(r)
    if selector in ("biortho", "all"):
        _biortho_checks(r, problem, tol)
    return SuiteReport(r.checks).sorted()


def emit_report(report: SuiteReport, fmt: str = "text") -> str:
    """Serialize a report; json output is stable-keyed and diffable."""
    if fmt == "json":
        payload = {"checks": [
            {"id": c.id, "ref": c.ref, "status": c.status,
             "defect": c.defect, "runtime_ms": c.runtime_ms}
            for c in report.checks]}
        return json.dumps(payload, indent=2, sort_keys=True)
    if fmt != "text":
        raise EngineError(f"unknown report format {fmt!r}")
    lines = []
    for c in report.checks:
        defect = c.defect if isinstance(c.defect, str) else repr(c.defect)
        line = f"{c.status:<22} {c.id}  [{c.ref}]"
        show = defect not in ("", "0") or not isinstance(c.defect, str) \
            or c.status != "pass"
        if show and defect != "":
            line += f"  defect={defect}"
        if c.runtime_ms is not None:
            line += f"  ({c.runtime_ms:.1f} ms)"
        lines.append(line)
    lines.append(f"{len(report.checks)} checks: "
                 f"{len(report.checks) - report.failed - report.discrepancies} pass, "
                 f"{report.failed} fail, {report.discrepancies} reported-discrepancy")
    return "\n".join(lines)
