"""Explicit radial supersolution candidates and their grid verification.

Eight construction recipes (C1..C8) instantiate the candidate pairs used in
the existence regions.  Writing t1 = tau_+(mu1), t2 = tau_+(mu2):

  regime A (t1 < 0 <= t2):
    C1  strip q in (2/(-t1), (N+t2)/(-t1)), e1 > 0:
        u = r^t1 - r^((t1 q+2)p+2),  v = r^(t1 q+2)
    C2  q < 2/(-t1):
        u = r^t1 - r^(t2 p+2),       v = r^t2 - r^(t1 q+2)
    C3  q = 2/(-t1):
        u = r^t1 - r^(t2 p+1),       v = r^t2 (-ln r)   on a ball B_r1
  regime B (t1, t2 < 0), with qlo = (2-t2)/(-t1), plo = (2-t1)/(-t2):
    C4  strip q in (qlo, (N+t2)/(-t1)), e1 > 0: same formulas as C1
    C5  q < qlo, p < plo: same formulas as C2
    C6  q = qlo, p < plo:
        u = r^t1 - r^(t2 p+2+eps0),  v = r^t2 (-ln r)
    C7  p = plo, q < qlo:
        u = r^t1 (-ln r),            v = r^t2 - r^(t1 q+2)
    C8  p in (plo, (N+t1)/(-t2)), e2 > 0:
        u = r^(t2 p+2),              v = r^t2 - r^((t2 p+2)q+2)

In every recipe the leading power is a kernel function of its operator, so
the symbolic image has a single positive term and the supersolution slack
at scale t has the pointwise form a(r) t - b(r) t^s with s > 1: small t
always wins where the recipe is valid.

Verification is grid-based, not a proof: both inequalities are checked at
log-spaced radii and the symbolic operator is cross-checked against the
finite-difference oracle at sample radii.  Failures are reported, never
masked.

Known degeneracies handled here rather than assumed away:
  - in regime A with t2 > 0 the two-term v of C2 stays positive only for
    q < (2-t2)/(-t1); on the remaining band the single-power v of C1 is
    valid and is substituted (recorded in candidate.notes);
  - at q = (2-t2)/(-t1) exactly (t2 > 0) both recipes degenerate (v would
    vanish or be a kernel function); the builder rejects that line;
  - the log-bearing recipes C3/C6/C7 need the log-side coefficient
    2 tau_+ + N - 2 = 2 sqrt(mu - mu0) to be positive, hence mu > mu0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .exponents import (DomainValidationError, HardyParams, Powers,
                        boundary_expressions, mu_zero)
from .radial import (RadialFunction, RadialGrid, apply_hardy, default_grid,
                     evaluate, hardy_fd_oracle)

CASE_IDS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")

#: Tolerance for "on the line" case hypotheses (q = 2/(-t1) and friends).
LINE_TOL = 1e-9

#: Scan grid for the scaling parameter: descending powers of two.
SCALE_SCAN = tuple(2.0 ** -k for k in range(0, 61))

ORACLE_DEV_LIMIT = 1e-4


@dataclass(frozen=True)
class SupersolutionCandidate:
    """A candidate pair (u, v) for one construction case.

    The pair solves the system inequalities only after scaling by some
    t in (0, 1]; t stays None until find_scale determines it.  r_domain
    is the verification ball radius (1 except for the C3 log recipe).
    """

    case_id: str
    params: HardyParams
    pq: Powers
    u: RadialFunction
    v: RadialFunction
    r_domain: float = 1.0
    t: Optional[float] = None
    notes: Tuple[str, ...] = ()

    def with_scale(self, t: float) -> "SupersolutionCandidate":
        return replace(self, t=t)


@dataclass(frozen=True)
class VerificationReport:
    """Pointwise slack minima plus the symbolic/numeric cross-check.

    ok reflects the slack signs only (and positivity of the pair);
    oracle_max_dev is the largest scale-normalized deviation between
    apply_hardy and the finite-difference oracle at the sample radii, and
    oracle_exceeded flags deviations beyond the contract limit so they are
    never silently passed.
    """

    ok: bool
    min_slack_u: float
    min_slack_v: float
    grid: RadialGrid
    oracle_max_dev: float
    oracle_exceeded: bool
    positivity_ok: bool
    diagnostic: str = ""


def _require(cond: bool, case_id: str, msg: str, strict: bool,
             notes: list) -> None:
    if cond:
        return
    if strict:
        raise DomainValidationError(f"{case_id} hypothesis violated: {msg}")
    notes.append(f"hypothesis violated: {msg}")


def build_candidate(case_id: str, params: HardyParams, pq: Powers,
                    strict: bool = True) -> SupersolutionCandidate:
    """Instantiate the radial pair of the given case.

    With strict=True (default) the case hypothesis is validated and
    violations raise; strict=False records them in notes instead, which is
    how deliberately-wrong-side candidates are produced for testing.
    """
    if case_id not in CASE_IDS:
        raise DomainValidationError(f"unknown case id {case_id!r}")
    t1 = params.tau1.tau_plus
    t2 = params.tau2.tau_plus
    p, q = pq.p, pq.q
    vals = boundary_expressions(params, pq)
    notes: list = []
    # same tau-sign regime rule as the classifier kernel
    regime_a = t1 < 0.0 <= t2
    regime_b = t1 < 0.0 and t2 < 0.0

    if case_id in ("C1", "C2", "C3"):
        _require(regime_a, case_id, "needs mu1 < 0 <= mu2", strict, notes)
    else:
        _require(regime_b, case_id, "needs mu1, mu2 < 0", strict, notes)
    _require(p > 1.0 and q > 1.0, case_id,
             "constructions assume p, q > 1", strict, notes)

    mono = RadialFunction.monomial

    if case_id in ("C1", "C4"):
        if case_id == "C1":
            lo = 2.0 / (-t1)
        else:
            lo = vals.q_lower
        _require(lo < q < vals.q_upper, case_id,
                 f"q={q} outside the strip ({lo:g}, {vals.q_upper:g})",
                 strict, notes)
        _require(vals.e1 > 0.0, case_id, f"e1={vals.e1:g} not positive",
                 strict, notes)
        tau2c = t1 * q + 2.0
        tau1c = tau2c * p + 2.0
        u = mono(1.0, t1) - mono(1.0, tau1c)
        v = mono(1.0, tau2c)
        return SupersolutionCandidate(case_id, params, pq, u, v,
                                      notes=tuple(notes))

    if case_id == "C2":
        _require(q < 2.0 / (-t1), case_id,
                 f"q={q} not below 2/(-t1)={2.0 / (-t1):g}", strict, notes)
        tau4c = t1 * q + 2.0
        gap_edge = t2 - tau4c  # > 0 where the paper's two-term v is positive
        if gap_edge > LINE_TOL:
            # t2 > 0 band where r^t2 - r^(t1 q + 2) is negative near the
            # origin: the single-power v of C1 remains valid there.
            notes.append("two-term v not positive here; using the "
                         "single-power v recipe")
            tau2c = tau4c
            tau1c = tau2c * p + 2.0
            u = mono(1.0, t1) - mono(1.0, tau1c)
            v = mono(1.0, tau2c)
            return SupersolutionCandidate(case_id, params, pq, u, v,
                                          notes=tuple(notes))
        if gap_edge > -LINE_TOL:
            raise DomainValidationError(
                "C2 degenerates at q = (2 - tau_+(mu2))/(-tau_+(mu1)): "
                "the candidate v vanishes")
        tau3c = t2 * p + 2.0
        if not tau4c > 0.0:
            notes.append(f"exponent window note: t1*q+2 = {tau4c:g} <= 0")
        u = mono(1.0, t1) - mono(1.0, tau3c)
        v = mono(1.0, t2) - mono(1.0, tau4c)
        return SupersolutionCandidate(case_id, params, pq, u, v,
                                      notes=tuple(notes))

    if case_id == "C3":
        qlo = 2.0 / (-t1)
        _require(abs(q - qlo) <= LINE_TOL * max(1.0, qlo), case_id,
                 f"q={q} not on the line 2/(-t1)={qlo:g}", strict, notes)
        if t2 > 0.0:
            # the strip recipe is valid down to q = 2/(-t1) when t2 > 0
            notes.append("tau_+(mu2) > 0: single-power v recipe valid on "
                         "the line; no log factor needed")
            tau2c = t1 * q + 2.0
            tau1c = tau2c * p + 2.0
            u = mono(1.0, t1) - mono(1.0, tau1c)
            v = mono(1.0, tau2c)
            return SupersolutionCandidate(case_id, params, pq, u, v,
                                          notes=tuple(notes))
        tau5c = t2 * p + 1.0
        u = mono(1.0, t1) - mono(1.0, tau5c)
        v = mono(1.0, t2, log_power=1)
        cand = SupersolutionCandidate(case_id, params, pq, u, v,
                                      r_domain=1.0, notes=tuple(notes))
        r1 = find_domain(cand)
        return replace(cand, r_domain=r1,
                       notes=cand.notes + (f"log recipe on the ball of "
                                           f"radius {r1:g}",))

    if case_id == "C5":
        _require(q < vals.q_lower, case_id,
                 f"q={q} not below {vals.q_lower:g}", strict, notes)
        _require(p < vals.p_lower, case_id,
                 f"p={p} not below {vals.p_lower:g}", strict, notes)
        tau3c = t2 * p + 2.0
        tau4c = t1 * q + 2.0
        if not tau4c < 0.0:
            # the recipe stays positive; the claimed window is informational
            notes.append(f"exponent window note: t1*q+2 = {tau4c:g} >= 0")
        u = mono(1.0, t1) - mono(1.0, tau3c)
        v = mono(1.0, t2) - mono(1.0, tau4c)
        return SupersolutionCandidate(case_id, params, pq, u, v,
                                      notes=tuple(notes))

    if case_id == "C6":
        _require(abs(q - vals.q_lower) <= LINE_TOL * max(1.0, vals.q_lower),
                 case_id, f"q={q} not on the line {vals.q_lower:g}",
                 strict, notes)
        _require(p < vals.p_lower, case_id,
                 f"p={p} not below {vals.p_lower:g}", strict, notes)
        if params.mu2 <= mu_zero(params.N):
            raise DomainValidationError(
                "C6 needs mu2 > mu_zero: the log image coefficient "
                "2 tau_+ + N - 2 vanishes at the threshold")
        eps0 = max(1e-3, t1 - (t2 * p + 2.0) + 1e-3)
        tau6c = t2 * p + 2.0 + eps0
        u = mono(1.0, t1) - mono(1.0, tau6c)
        v = mono(1.0, t2, log_power=1)
        return SupersolutionCandidate(case_id, params, pq, u, v,
                                      notes=tuple(notes))

    if case_id == "C7":
        _require(abs(p - vals.p_lower) <= LINE_TOL * max(1.0, vals.p_lower),
                 case_id, f"p={p} not on the line {vals.p_lower:g}",
                 strict, notes)
        _require(q < vals.q_lower, case_id,
                 f"q={q} not below {vals.q_lower:g}", strict, notes)
        if params.mu1 <= mu_zero(params.N):
            raise DomainValidationError(
                "C7 needs mu1 > mu_zero: the log image coefficient "
                "2 tau_+ + N - 2 vanishes at the threshold")
        tau8c = t1 * q + 2.0
        u = mono(1.0, t1, log_power=1)
        v = mono(1.0, t2) - mono(1.0, tau8c)
        return SupersolutionCandidate(case_id, params, pq, u, v,
                                      notes=tuple(notes))

    # C8
    _require(vals.p_lower < p < vals.p_upper, case_id,
             f"p={p} outside the strip ({vals.p_lower:g}, {vals.p_upper:g})",
             strict, notes)
    _require(vals.e2 > 0.0, case_id, f"e2={vals.e2:g} not positive",
             strict, notes)
    tau10c = t2 * p + 2.0
    tau9c = tau10c * q + 2.0
    u = mono(1.0, tau10c)
    v = mono(1.0, t2) - mono(1.0, tau9c)
    return SupersolutionCandidate("C8", params, pq, u, v, notes=tuple(notes))


def _abs_coeffs(f: RadialFunction) -> RadialFunction:
    from .radial import RadialTerm
    return RadialFunction.from_terms(
        [RadialTerm(t.tau, t.log_power, abs(t.coeff)) for t in f.terms])


def _oracle_deviation(params: HardyParams, cand: SupersolutionCandidate,
                      grid: RadialGrid, h: float, samples: int) -> float:
    """Scale-normalized max deviation between the two operator evaluations.

    Deviation at radius r is |symbolic - finite difference| divided by
    max(1, |symbolic|, sum of |term| magnitudes), which keeps the measure
    meaningful for steeply singular candidates where absolute comparison
    would be dominated by the r^(tau-2) blow-up.
    """
    r_hi = grid.r_max * 0.85
    r_lo = max(grid.r_min, 0.25 * grid.r_max)
    radii = np.geomspace(r_lo, r_hi, samples)
    worst = 0.0
    for f, mu in ((cand.u, params.mu1), (cand.v, params.mu2)):
        sym_f = apply_hardy(params.N, mu, f)
        mag_f = _abs_coeffs(sym_f)
        for r in radii:
            h_r = min(h, r / 8.0)
            fd = hardy_fd_oracle(params.N, mu, f, float(r), h_r)
            sym = float(evaluate(sym_f, float(r)))
            scale_r = max(1.0, abs(sym), float(evaluate(mag_f, float(r))))
            worst = max(worst, abs(sym - fd) / scale_r)
    return worst


def _grid_slacks(cand: SupersolutionCandidate, t: float,
                 u_vals: np.ndarray, v_vals: np.ndarray,
                 lu: np.ndarray, lv: np.ndarray) -> Tuple[float, float]:
    """Minima of the two scaled inequality slacks over the grid."""
    with np.errstate(over="ignore"):
        slack_u = t * lu - np.power(t * v_vals, cand.pq.p)
        slack_v = t * lv - np.power(t * u_vals, cand.pq.q)
    return float(np.min(slack_u)), float(np.min(slack_v))


def verify_on_grid(cand: SupersolutionCandidate, t: Optional[float] = None,
                   grid: Optional[RadialGrid] = None, h: float = 1e-4,
                   oracle_samples: int = 16) -> VerificationReport:
    """Check both scaled inequalities pointwise and cross-check the operator.

    The scaled pair is (t u, t v); the slacks are

        slack_u(r) = t Lu(r) - (t v(r))^p,
        slack_v(r) = t Lv(r) - (t u(r))^q,

    and ok means both minima over the grid are nonnegative.  A positivity
    failure of u or v anywhere on the grid fails the report with a
    diagnostic instead of raising on the fractional power.
    """
    if t is None:
        t = cand.t
    if t is None or not (t > 0.0):
        raise DomainValidationError("verification needs a positive scale t")
    if grid is None:
        grid = default_grid(cand.r_domain)
    params, pq = cand.params, cand.pq
    radii = grid.radii

    u_vals = np.asarray(evaluate(cand.u, radii))
    v_vals = np.asarray(evaluate(cand.v, radii))
    if np.min(u_vals) <= 0.0 or np.min(v_vals) <= 0.0:
        which = "u" if np.min(u_vals) <= 0.0 else "v"
        bad = radii[np.argmin(u_vals if which == "u" else v_vals)]
        return VerificationReport(
            ok=False, min_slack_u=math.nan, min_slack_v=math.nan, grid=grid,
            oracle_max_dev=math.nan, oracle_exceeded=False,
            positivity_ok=False,
            diagnostic=f"{which} is not positive near r={bad:.3e}")

    lu = np.asarray(evaluate(apply_hardy(params.N, params.mu1, cand.u), radii))
    lv = np.asarray(evaluate(apply_hardy(params.N, params.mu2, cand.v), radii))
    min_u, min_v = _grid_slacks(cand, t, u_vals, v_vals, lu, lv)
    ok = (math.isfinite(min_u) and math.isfinite(min_v)
          and min_u >= 0.0 and min_v >= 0.0)
    dev = _oracle_deviation(params, cand, grid, h, oracle_samples)
    return VerificationReport(ok=ok, min_slack_u=min_u, min_slack_v=min_v,
                              grid=grid, oracle_max_dev=dev,
                              oracle_exceeded=dev > ORACLE_DEV_LIMIT,
                              positivity_ok=True)


def find_scale(cand: SupersolutionCandidate,
               grid: Optional[RadialGrid] = None
               ) -> Optional[Tuple[float, VerificationReport]]:
    """Scan t over descending powers of two; return the largest accepted one.

    Both slacks have the pointwise form a(r) t - b(r) t^s with s > 1 and
    a, b >= 0 where the recipe is valid, so acceptance is monotone in t and
    the first hit of the descending scan is the largest accepted scale.
    The scan evaluates the slack minima only; the accepted scale is then
    re-verified in full (including the operator cross-check) and that
    report is returned.  Returns None when no scale verifies: either the
    hypothesis is violated or the grid is too coarse; callers decide,
    nothing is masked.
    """
    if grid is None:
        grid = default_grid(cand.r_domain)
    radii = grid.radii
    u_vals = np.asarray(evaluate(cand.u, radii))
    v_vals = np.asarray(evaluate(cand.v, radii))
    if np.min(u_vals) <= 0.0 or np.min(v_vals) <= 0.0:
        return None
    params = cand.params
    lu = np.asarray(evaluate(apply_hardy(params.N, params.mu1, cand.u), radii))
    lv = np.asarray(evaluate(apply_hardy(params.N, params.mu2, cand.v), radii))
    for t in SCALE_SCAN:
        min_u, min_v = _grid_slacks(cand, t, u_vals, v_vals, lu, lv)
        if (math.isfinite(min_u) and math.isfinite(min_v)
                and min_u >= 0.0 and min_v >= 0.0):
            report = verify_on_grid(cand, t=t, grid=grid)
            if report.ok:
                return t, report
    return None


def find_domain(cand: SupersolutionCandidate, grid_points: int = 512,
                r_floor: float = 1e-8) -> float:
    """Largest ball radius on which a log-bearing candidate verifies.

    Bisects r1 in (r_floor, 1): feasibility at r1 means some scale t passes
    verification on a log grid over (r1 * 1e-6, r1].  Candidates without a
    log factor in v are valid on the unit ball and return 1 unchanged.
    """
    if all(term.log_power == 0 for term in cand.v.terms):
        return 1.0

    def feasible(r1: float) -> bool:
        g = RadialGrid(r1 * 1e-6, r1, grid_points)
        return find_scale(replace(cand, r_domain=r1), grid=g) is not None

    hi = 1.0 - 1e-6
    if feasible(hi):
        return hi
    lo = hi
    while lo > r_floor:
        lo *= 0.25
        if feasible(lo):
            break
    else:
        raise DomainValidationError(
            f"no verification radius found above {r_floor:g}")
    # invariant: feasible(lo), not feasible(hi)
    for _ in range(40):
        mid = math.sqrt(lo * hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def case_for_region(params: HardyParams, pq: Powers, citation: str) -> str:
    """Map an existence citation to the construction case that realizes it."""
    table = {"T3.i.case1": "C1", "T3.i.case2": "C2", "T3.i.case3": "C3",
             "T3.ii.a1": "C4", "T3.ii.b1": "C8", "T3.ii.b2": "C7"}
    if citation in table:
        return table[citation]
    if citation == "T3.ii.a2":
        vals = boundary_expressions(params, pq)
        if vals.q_lower is not None and \
                abs(pq.q - vals.q_lower) <= LINE_TOL * max(1.0, vals.q_lower):
            return "C6"
        return "C5"
    raise DomainValidationError(f"no construction for citation {citation!r}")
