"""Inequality-chain checking for relative growth indicators.

Each supported statement relates the indicators of f and g measured
through a third function h.  The checker estimates every quantity the
statement mentions, assembles the chain, and reports per-link slack.
Statements are conditional: when a hypothesis (regularity, finiteness of
an order) is not met by the estimates, the verdict is "vacuous", never
"fail" - a conditional claim cannot be falsified by a failed premise.

Per-link tolerance is the instance tolerance plus the interval
half-widths of the two linked quantities, so certified estimation slack
never masquerades as a counterexample.

Two readings forced by gaps in the source statements are flagged in the
report notes: the sigma-like symbols in the lower-type corollary are
read as the type/lower type of g, and a malformed exponent in the
tau-bar chain is read as 1/lambda of g at (m, p).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from .corpus import CorpusEntry, resolve_source
from .errors import IncompleteInstanceError, SpecFormatError
from .growth import GridSpec
from .indicators import (DEFAULT_CONFIG, EstimatorConfig, IndicatorEstimate,
                         RelativeIndicators, relative_indicators)

THEOREM_IDS = ("T1", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "R1",
               "Tt1", "Ct1", "Tt2", "Ct2", "Tt3", "Ct3", "Tt4", "Ct4", "T41", "T42")

DEFAULT_GRID = GridSpec(5.0, 30.0, 64)


@dataclass(frozen=True)
class TheoremInstance:
    theorem_id: str
    f: object  # source shorthand or JSON doc
    g: object
    h: object
    m: int = 0
    p: int = 0
    q: int = 0
    tolerance: float = 2e-2
    grid: Optional[GridSpec] = None

    def describe(self) -> dict:
        return {
            "theorem": self.theorem_id, "f": self.f, "g": self.g, "h": self.h,
            "m": self.m, "p": self.p, "q": self.q, "tolerance": self.tolerance,
            "grid": (self.grid or DEFAULT_GRID).describe(),
        }


@dataclass(frozen=True)
class Quantity:
    """A chain entry: point value plus the surrogate-pairing interval."""

    label: str
    value: float
    lo: float
    hi: float

    @property
    def halfwidth(self) -> float:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            return math.inf
        return 0.5 * (self.hi - self.lo)


def _qty(est: IndicatorEstimate, label: str) -> Quantity:
    return Quantity(label, est.value, est.lo, est.hi)


def _q_ratio(a: Quantity, b: Quantity, label: str) -> Quantity:
    if b.lo <= 0:
        raise IncompleteInstanceError(f"ratio {label} needs a positive denominator interval")
    return Quantity(label, a.value / b.value, a.lo / b.hi, a.hi / b.lo)


def _q_pow_inv(base: Quantity, expo: Quantity, label: str) -> Quantity:
    """base ** (1 / expo) with interval corners; base and expo positive."""
    if base.lo <= 0 or expo.lo <= 0:
        raise IncompleteInstanceError(f"power {label} needs positive intervals")
    e_lo, e_hi = 1.0 / expo.hi, 1.0 / expo.lo
    corners = [base.lo ** e_lo, base.lo ** e_hi, base.hi ** e_lo, base.hi ** e_hi]
    return Quantity(label, base.value ** (1.0 / expo.value), min(corners), max(corners))


def _q_min(label: str, *qs: Quantity) -> Quantity:
    return Quantity(label, min(q.value for q in qs), min(q.lo for q in qs), min(q.hi for q in qs))


def _q_max(label: str, *qs: Quantity) -> Quantity:
    return Quantity(label, max(q.value for q in qs), max(q.lo for q in qs), max(q.hi for q in qs))


def _q_mul(a: Quantity, b: Quantity, label: str) -> Quantity:
    if a.lo < 0 or b.lo < 0:
        raise IncompleteInstanceError(f"product {label} needs non-negative intervals")
    return Quantity(label, a.value * b.value, a.lo * b.lo, a.hi * b.hi)


def _q_const(v: float, label: str) -> Quantity:
    return Quantity(label, v, v, v)


@dataclass(frozen=True)
class Link:
    relation: str  # "le" | "ge" | "eq"
    left: Quantity
    right: Quantity
    slack: float
    tol: float
    ok: bool


def _link(relation: str, left: Quantity, right: Quantity, base_tol: float) -> Link:
    tol = base_tol + left.halfwidth + right.halfwidth
    if relation == "le":
        slack = right.value - left.value
    elif relation == "ge":
        slack = left.value - right.value
    elif relation == "eq":
        slack = -abs(left.value - right.value)
    else:
        raise ValueError(f"unknown relation '{relation}'")
    if math.isnan(slack):
        return Link(relation, left, right, slack, tol, False)
    # Degenerate agreements (inf vs inf) count as satisfied comparisons.
    if relation in ("le", "ge") and left.value == right.value:
        slack = 0.0
    return Link(relation, left, right, slack, tol, slack >= -tol)


@dataclass
class CheckReport:
    theorem_id: str
    subject: dict
    hypothesis_status: dict
    chain: list  # [(label, value)]
    slacks: list
    links: list
    notes: list
    verdict: str  # "pass" | "vacuous" | "fail"

    def to_json(self) -> dict:
        def num(v):
            if isinstance(v, float):
                if v == math.inf:
                    return "inf"
                if v == -math.inf:
                    return "-inf"
                if math.isnan(v):
                    return "nan"
            return v
        return {
            "theorem": self.theorem_id,
            "subject": self.subject,
            "hypotheses": {k: bool(v) for k, v in self.hypothesis_status.items()},
            "chain": [[label, num(value)] for label, value in self.chain],
            "slacks": [num(s) for s in self.slacks],
            "links": [
                {"relation": l.relation, "left": l.left.label, "left_value": num(l.left.value),
                 "right": l.right.label, "right_value": num(l.right.value),
                 "slack": num(l.slack), "tol": num(l.tol), "ok": l.ok}
                for l in self.links
            ],
            "notes": list(self.notes),
            "verdict": self.verdict,
        }


class IndicatorWorkspace:
    """Resolves source references and caches relative indicator sets.

    Theorem batches reuse the same (pair, indices, grid) sets heavily;
    estimates are deterministic, so caching cannot change any result.
    """

    def __init__(self, config: EstimatorConfig = DEFAULT_CONFIG, fast: bool = True):
        self.config = config
        self.fast = fast
        self._entries: dict = {}
        self._bundles: dict = {}
        self._sets: dict = {}

    def entry(self, ref) -> CorpusEntry:
        key = json.dumps(ref, sort_keys=True) if isinstance(ref, dict) else str(ref)
        if key not in self._entries:
            self._entries[key] = resolve_source(ref)
        return self._entries[key]

    def _bundle(self, entry: CorpusEntry):
        if entry.id not in self._bundles:
            self._bundles[entry.id] = entry.bundle(fast=self.fast)
        return self._bundles[entry.id]

    def rel_set(self, x_ref, y_ref, i: int, j: int, grid: GridSpec) -> RelativeIndicators:
        x, y = self.entry(x_ref), self.entry(y_ref)
        key = (x.id, y.id, i, j, tuple(sorted(grid.describe().items())))
        if key not in self._sets:
            self._sets[key] = relative_indicators(
                self._bundle(x), self._bundle(y), i, j, grid, self.config
            )
        return self._sets[key]


def _fn(config: EstimatorConfig, est: Optional[IndicatorEstimate]) -> bool:
    return est is not None and config.finite_nonzero(est.value)


def _regular(rho: IndicatorEstimate, lam: IndicatorEstimate, tol: float) -> bool:
    gap = abs(rho.value - lam.value)
    return gap <= tol + 0.5 * abs(rho.hi - rho.lo) + 0.5 * abs(lam.hi - lam.lo)


class _Checker:
    """Shared state for one instance: quantity construction and verdicts."""

    def __init__(self, instance: TheoremInstance, ws: IndicatorWorkspace):
        self.inst = instance
        self.ws = ws
        self.grid = instance.grid or DEFAULT_GRID
        self.tol = instance.tolerance
        self.cfg = ws.config
        self.hyp: dict = {}
        self.notes: list = []
        m, p, q = instance.m, instance.p, instance.q
        self.fh = ws.rel_set(instance.f, instance.h, m, q, self.grid)
        self.gh = ws.rel_set(instance.g, instance.h, m, p, self.grid)
        self.fg = ws.rel_set(instance.f, instance.g, p, q, self.grid)
        self._gf: Optional[RelativeIndicators] = None

    @property
    def gf(self) -> RelativeIndicators:
        if self._gf is None:
            self._gf = self.ws.rel_set(self.inst.g, self.inst.f, self.inst.q, self.inst.p, self.grid)
        return self._gf

    # quantity shorthands -------------------------------------------------
    def q(self, est: Optional[IndicatorEstimate], label: str) -> Quantity:
        if est is None:
            raise IncompleteInstanceError(f"estimate {label} was gated off and is unavailable")
        return _qty(est, label)

    def require_fn(self, name: str, est: Optional[IndicatorEstimate]) -> None:
        self.hyp[f"{name} finite nonzero"] = _fn(self.cfg, est)

    def require_regular(self, name: str, rho, lam) -> None:
        self.hyp[f"{name} regular"] = _regular(rho, lam, self.tol)

    def hypotheses_hold(self) -> bool:
        return all(self.hyp.values())

    def report(self, chain_qs: list, links: list) -> CheckReport:
        chain = [(q.label, q.value) for q in chain_qs]
        slacks = [links[i].slack for i in range(len(links))] if links else []
        if not self.hypotheses_hold():
            verdict = "vacuous"
        elif all(l.ok for l in links):
            verdict = "pass"
        else:
            verdict = "fail"
        return CheckReport(self.inst.theorem_id, self.inst.describe(), dict(self.hyp),
                           chain, slacks, links, list(self.notes), verdict)

    def chain_links(self, qs: list) -> list:
        return [_link("le", qs[i], qs[i + 1], self.tol) for i in range(len(qs) - 1)]


def _order_quantities(c: _Checker):
    lam_fh = c.q(c.fh.lam, "lambda_h(f)")
    rho_fh = c.q(c.fh.rho, "rho_h(f)")
    lam_gh = c.q(c.gh.lam, "lambda_h(g)")
    rho_gh = c.q(c.gh.rho, "rho_h(g)")
    return lam_fh, rho_fh, lam_gh, rho_gh


def _check_t1(c: _Checker) -> CheckReport:
    lam_fh, rho_fh, lam_gh, rho_gh = _order_quantities(c)
    for name, est in (("rho_h(f)", c.fh.rho), ("lambda_h(f)", c.fh.lam),
                      ("rho_h(g)", c.gh.rho), ("lambda_h(g)", c.gh.lam)):
        c.require_fn(name, est)
    if not c.hypotheses_hold():
        return c.report([], [])
    r_ll = _q_ratio(lam_fh, lam_gh, "lambda_h(f)/lambda_h(g)")
    r_rr = _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)")
    chain = [
        _q_ratio(lam_fh, rho_gh, "lambda_h(f)/rho_h(g)"),
        c.q(c.fg.lam, "lambda_g(f)"),
        _q_min("min(lambda/lambda, rho/rho)", r_ll, r_rr),
        _q_max("max(lambda/lambda, rho/rho)", r_ll, r_rr),
        c.q(c.fg.rho, "rho_g(f)"),
        _q_ratio(rho_fh, lam_gh, "rho_h(f)/lambda_h(g)"),
    ]
    return c.report(chain, c.chain_links(chain))


def _check_c1_c2(c: _Checker, regular_f: bool) -> CheckReport:
    lam_fh, rho_fh, lam_gh, rho_gh = _order_quantities(c)
    for name, est in (("rho_h(f)", c.fh.rho), ("lambda_h(f)", c.fh.lam),
                      ("rho_h(g)", c.gh.rho), ("lambda_h(g)", c.gh.lam)):
        c.require_fn(name, est)
    if regular_f:
        c.require_regular("f wrt h", c.fh.rho, c.fh.lam)
    else:
        c.require_regular("g wrt h", c.gh.rho, c.gh.lam)
    if not c.hypotheses_hold():
        return c.report([], [])
    links = []
    if regular_f:  # C1
        links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"),
                           _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)"), c.tol))
        links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"),
                           _q_ratio(rho_fh, lam_gh, "rho_h(f)/lambda_h(g)"), c.tol))
    else:  # C2
        links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"),
                           _q_ratio(lam_fh, rho_gh, "lambda_h(f)/rho_h(g)"), c.tol))
        links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"),
                           _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)"), c.tol))
    if abs(rho_fh.value - rho_gh.value) <= c.tol + rho_fh.halfwidth + rho_gh.halfwidth:
        one = _q_const(1.0, "1")
        if regular_f:
            links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"), one, c.tol))
            links.append(_link("eq", c.q(c.gf.rho, "rho_f(g)"), one, c.tol))
            c.notes.append("equal-orders clause: both orientations checked separately")
        else:
            links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"), one, c.tol))
            links.append(_link("eq", c.q(c.gf.lam, "lambda_f(g)"), one, c.tol))
    else:
        c.notes.append("equal-orders clause skipped: rho_h(f) != rho_h(g)")
    qs = [l.left for l in links]
    return c.report(qs, links)


def _check_c3_c4(c: _Checker, with_unit: bool) -> CheckReport:
    lam_fh, rho_fh, lam_gh, rho_gh = _order_quantities(c)
    for name, est in (("rho_h(f)", c.fh.rho), ("rho_h(g)", c.gh.rho)):
        c.require_fn(name, est)
    c.require_regular("f wrt h", c.fh.rho, c.fh.lam)
    c.require_regular("g wrt h", c.gh.rho, c.gh.lam)
    if with_unit:
        c.hyp["rho_h(f) = rho_h(g)"] = (
            abs(rho_fh.value - rho_gh.value) <= c.tol + rho_fh.halfwidth + rho_gh.halfwidth
        )
    if not c.hypotheses_hold():
        return c.report([], [])
    links = []
    if with_unit:  # C4
        one = _q_const(1.0, "1")
        for est, label in ((c.fg.lam, "lambda_g(f)"), (c.fg.rho, "rho_g(f)"),
                           (c.gf.lam, "lambda_f(g)"), (c.gf.rho, "rho_f(g)")):
            links.append(_link("eq", c.q(est, label), one, c.tol))
    else:  # C3
        target = _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)")
        links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"), target, c.tol))
        links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"), target, c.tol))
    qs = [l.left for l in links]
    return c.report(qs, links)


def _check_c5_c6(c: _Checker, upper: bool) -> CheckReport:
    for name, est in (("rho_h(f)", c.fh.rho), ("lambda_h(f)", c.fh.lam),
                      ("rho_h(g)", c.gh.rho), ("lambda_h(g)", c.gh.lam)):
        c.require_fn(name, est)
    if not c.hypotheses_hold():
        return c.report([], [])
    both_regular = (_regular(c.fh.rho, c.fh.lam, c.tol) and _regular(c.gh.rho, c.gh.lam, c.tol))
    one = _q_const(1.0, "1")
    if upper:  # C5: product of orders
        prod = _q_mul(c.q(c.fg.rho, "rho_g(f)"), c.q(c.gf.rho, "rho_f(g)"),
                      "rho_g(f) * rho_f(g)")
        link = _link("eq" if both_regular else "ge", prod, one, c.tol)
    else:  # C6: product of lower orders
        prod = _q_mul(c.q(c.fg.lam, "lambda_g(f)"), c.q(c.gf.lam, "lambda_f(g)"),
                      "lambda_g(f) * lambda_f(g)")
        link = _link("eq" if both_regular else "le", prod, one, c.tol)
    c.notes.append("both regular: equality" if both_regular else "irregular pair: one-sided bound")
    return c.report([prod], [link])


def _check_degenerate(c: _Checker, on_f: bool) -> CheckReport:
    """C7 (triggers on g's quantities) and C8 (triggers on f's).

    A case fires when an estimate crosses the numeric zero/infinity
    thresholds; the conclusion is asserted against the same thresholds.
    No trigger leaves the instance vacuous.
    """
    eps = c.cfg.finite_eps
    big, small = 1.0 / eps, eps
    if on_f:  # C7: f must have its relative pair; g's quantities trigger
        c.require_fn("rho_h(f)", c.fh.rho)
        trig_rho, trig_lam = c.gh.rho, c.gh.lam
        cases = [
            ("rho_h(g) ~ 0 => lambda_g(f) = inf", trig_rho.value < small, c.fg.lam, "ge"),
            ("lambda_h(g) ~ 0 => rho_g(f) = inf", trig_lam.value < small, c.fg.rho, "ge"),
            ("rho_h(g) ~ inf => lambda_g(f) = 0", trig_rho.value > big, c.fg.lam, "le"),
            ("lambda_h(g) ~ inf => rho_g(f) = 0", trig_lam.value > big, c.fg.rho, "le"),
        ]
    else:  # C8
        c.require_fn("rho_h(g)", c.gh.rho)
        trig_rho, trig_lam = c.fh.rho, c.fh.lam
        cases = [
            ("rho_h(f) ~ 0 => rho_g(f) = 0", trig_rho.value < small, c.fg.rho, "le"),
            ("lambda_h(f) ~ 0 => lambda_g(f) = 0", trig_lam.value < small, c.fg.lam, "le"),
            ("rho_h(f) ~ inf => rho_g(f) = inf", trig_rho.value > big, c.fg.rho, "ge"),
            ("lambda_h(f) ~ inf => lambda_g(f) = inf", trig_lam.value > big, c.fg.lam, "ge"),
        ]
    if not c.hypotheses_hold():
        return c.report([], [])
    links = []
    for label, fired, target, direction in cases:
        if not fired:
            continue
        bound = _q_const(big if direction == "ge" else small, "threshold")
        # point-value assertion: the conclusion estimate must itself cross
        # the threshold, interval slack does not substitute for it
        point = _q_const(c.q(target, label).value, label)
        links.append(_link(direction, point, bound, 0.0))
    if not links:
        c.hyp["some degenerate case triggered"] = False
        c.notes.append("no degenerate hypothesis triggered")
        return c.report([], [])
    return c.report([l.left for l in links], links)


def _check_remark(c: _Checker) -> CheckReport:
    lam_fh, rho_fh, lam_gh, rho_gh = _order_quantities(c)
    for name, est in (("rho_h(f)", c.fh.rho), ("lambda_h(f)", c.fh.lam),
                      ("rho_h(g)", c.gh.rho), ("lambda_h(g)", c.gh.lam)):
        c.require_fn(name, est)
    if not c.hypotheses_hold():
        return c.report([], [])
    g_regular = _regular(c.gh.rho, c.gh.lam, c.tol)
    f_regular = _regular(c.fh.rho, c.fh.lam, c.tol)
    links = []
    if g_regular:
        links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"),
                           _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)"), c.tol))
        links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"),
                           _q_ratio(lam_fh, lam_gh, "lambda_h(f)/lambda_h(g)"), c.tol))
        c.notes.append("branch: g regular wrt h")
    if f_regular:
        links.append(_link("eq", c.q(c.fg.rho, "rho_g(f)"),
                           _q_ratio(lam_fh, lam_gh, "lambda_h(f)/lambda_h(g)"), c.tol))
        links.append(_link("eq", c.q(c.fg.lam, "lambda_g(f)"),
                           _q_ratio(rho_fh, rho_gh, "rho_h(f)/rho_h(g)"), c.tol))
        c.notes.append("branch: f regular wrt h")
    if not links:
        c.hyp["one side regular"] = False
        return c.report([], [])
    return c.report([l.left for l in links], links)


def _type_quantities(c: _Checker):
    """Delta/tau quantities of f and g wrt h plus the inverted-order exponents."""
    names = {}
    for attr, sym in (("delta", "Delta"), ("delta_bar", "Delta_bar"),
                      ("tau", "tau"), ("tau_bar", "tau_bar")):
        for setname, s in (("f", c.fh), ("g", c.gh)):
            est = getattr(s, attr)
            label = f"{sym}_h({setname})"
            c.hyp[f"{label} finite nonzero"] = _fn(c.cfg, est)
            if est is not None:
                names[f"{attr}_{setname}"] = _qty(est, label)
    c.require_fn("rho_h(g)", c.gh.rho)
    c.require_fn("lambda_h(g)", c.gh.lam)
    if not c.hypotheses_hold():
        return None
    er = _qty(c.gh.rho, "rho_h(g)")
    el = _qty(c.gh.lam, "lambda_h(g)")
    return names, er, el


def _check_type_theorem(c: _Checker) -> CheckReport:
    tq = _type_quantities(c)
    if tq is None:
        return c.report([], [])
    n, er, el = tq
    tid = c.inst.theorem_id
    P = _q_pow_inv
    R = _q_ratio

    def target(attr, label):
        est = getattr(c.fg, attr)
        c.hyp[f"{label} available"] = est is not None
        return est

    if tid == "Tt1":
        t = target("delta", "Delta_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        chain = [
            _q_max("max of lower bounds",
                   P(R(n["delta_bar_f"], n["tau_g"], "Delta_bar_h(f)/tau_h(g)"), el, "lb1"),
                   P(R(n["delta_f"], n["tau_bar_g"], "Delta_h(f)/tau_bar_h(g)"), el, "lb2")),
            c.q(t, "Delta_g(f)"),
            P(R(n["delta_f"], n["delta_bar_g"], "Delta_h(f)/Delta_bar_h(g)"), er, "ub"),
        ]
        return c.report(chain, c.chain_links(chain))
    if tid == "Ct1":
        t = target("delta", "Delta_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        ub = _q_min("min of upper bounds",
                    P(R(n["tau_bar_f"], n["tau_g"], "tau_bar_h(f)/tau_h(g)"), el, "ub1"),
                    P(R(n["tau_bar_f"], n["delta_bar_g"], "tau_bar_h(f)/Delta_bar_h(g)"), er, "ub2"))
        links = [_link("le", c.q(t, "Delta_g(f)"), ub, c.tol)]
        return c.report([links[0].left, ub], links)
    if tid == "Tt2":
        t = target("delta_bar", "Delta_bar_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        chain = [
            P(R(n["delta_bar_f"], n["tau_bar_g"], "Delta_bar_h(f)/tau_bar_h(g)"), el, "lb"),
            c.q(t, "Delta_bar_g(f)"),
            _q_min("min of upper bounds",
                   P(R(n["delta_bar_f"], n["delta_bar_g"], "Delta_bar_h(f)/Delta_bar_h(g)"), er, "ub1"),
                   P(R(n["delta_f"], n["delta_g"], "Delta_h(f)/Delta_h(g)"), er, "ub2")),
        ]
        return c.report(chain, c.chain_links(chain))
    if tid == "Ct2":
        t = target("delta_bar", "Delta_bar_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        c.notes.append("sigma-type symbols read as Delta_h(g) / Delta_bar_h(g)")
        ub = _q_min("min of upper bounds",
                    P(R(n["tau_f"], n["tau_g"], "tau_h(f)/tau_h(g)"), el, "ub1"),
                    P(R(n["tau_bar_f"], n["tau_bar_g"], "tau_bar_h(f)/tau_bar_h(g)"), el, "ub2"),
                    P(R(n["tau_bar_f"], n["delta_g"], "tau_bar_h(f)/Delta_h(g)"), er, "ub3"),
                    P(R(n["tau_f"], n["delta_bar_g"], "tau_h(f)/Delta_bar_h(g)"), er, "ub4"))
        links = [_link("le", c.q(t, "Delta_bar_g(f)"), ub, c.tol)]
        return c.report([links[0].left, ub], links)
    if tid == "Tt3":
        t = target("tau_bar", "tau_bar_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        c.notes.append("malformed exponent read as 1/lambda_h(g)")
        chain = [
            _q_max("max of lower bounds",
                   P(R(n["tau_bar_f"], n["tau_bar_g"], "tau_bar_h(f)/tau_bar_h(g)"), el, "lb1"),
                   P(R(n["tau_f"], n["tau_g"], "tau_h(f)/tau_h(g)"), el, "lb2")),
            c.q(t, "tau_bar_g(f)"),
            P(R(n["tau_bar_f"], n["delta_bar_g"], "tau_bar_h(f)/Delta_bar_h(g)"), er, "ub"),
        ]
        return c.report(chain, c.chain_links(chain))
    if tid == "Ct3":
        t = target("tau_bar", "tau_bar_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        lb = _q_max("max of lower bounds",
                    P(R(n["delta_bar_f"], n["delta_bar_g"], "Delta_bar_h(f)/Delta_bar_h(g)"), er, "lb1"),
                    P(R(n["delta_f"], n["delta_g"], "Delta_h(f)/Delta_h(g)"), er, "lb2"),
                    P(R(n["delta_f"], n["tau_bar_g"], "Delta_h(f)/tau_bar_h(g)"), el, "lb3"),
                    P(R(n["delta_bar_f"], n["tau_g"], "Delta_bar_h(f)/tau_h(g)"), el, "lb4"))
        links = [_link("ge", c.q(t, "tau_bar_g(f)"), lb, c.tol)]
        return c.report([links[0].left, lb], links)
    if tid == "Tt4":
        t = target("tau", "tau_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        chain = [
            P(R(n["tau_f"], n["tau_bar_g"], "tau_h(f)/tau_bar_h(g)"), el, "lb"),
            c.q(t, "tau_g(f)"),
            _q_min("min of upper bounds",
                   P(R(n["tau_f"], n["delta_bar_g"], "tau_h(f)/Delta_bar_h(g)"), er, "ub1"),
                   P(R(n["tau_bar_f"], n["delta_g"], "tau_bar_h(f)/Delta_h(g)"), er, "ub2")),
        ]
        return c.report(chain, c.chain_links(chain))
    if tid == "Ct4":
        t = target("tau", "tau_g(f)")
        if not c.hypotheses_hold():
            return c.report([], [])
        lb = _q_max("max of lower bounds",
                    P(R(n["delta_bar_f"], n["delta_g"], "Delta_bar_h(f)/Delta_h(g)"), er, "lb1"),
                    P(R(n["delta_bar_f"], n["tau_bar_g"], "Delta_bar_h(f)/tau_bar_h(g)"), el, "lb2"))
        links = [_link("ge", c.q(t, "tau_g(f)"), lb, c.tol)]
        return c.report([links[0].left, lb], links)
    if tid in ("T41", "T42"):
        if tid == "T41":
            c.require_regular("g wrt h", c.gh.rho, c.gh.lam)
        else:
            c.require_regular("f wrt h", c.fh.rho, c.fh.lam)
        for attr, label in (("delta", "Delta_g(f)"), ("delta_bar", "Delta_bar_g(f)"),
                            ("tau", "tau_g(f)"), ("tau_bar", "tau_bar_g(f)")):
            c.hyp[f"{label} available"] = getattr(c.fg, attr) is not None
        if not c.hypotheses_hold():
            return c.report([], [])
        d_lo, d_hi = (("delta_bar", "delta") if tid == "T41" else ("tau", "tau_bar"))
        t_lo, t_hi = (("tau", "tau_bar") if tid == "T41" else ("delta_bar", "delta"))
        mid_d1 = P(R(n["delta_bar_f"], n["delta_bar_g"], "Delta_bar_h(f)/Delta_bar_h(g)"), er, "m1")
        mid_d2 = P(R(n["delta_f"], n["delta_g"], "Delta_h(f)/Delta_h(g)"), er, "m2")
        chain_a = [
            P(R(n["delta_bar_f"], n["delta_g"], "Delta_bar_h(f)/Delta_h(g)"), er, "lbA"),
            c.q(getattr(c.fg, d_lo), f"A:{d_lo}_g(f)"),
            _q_min("A:min", mid_d1, mid_d2),
            _q_max("A:max", mid_d1, mid_d2),
            c.q(getattr(c.fg, d_hi), f"A:{d_hi}_g(f)"),
            P(R(n["delta_f"], n["delta_bar_g"], "Delta_h(f)/Delta_bar_h(g)"), er, "ubA"),
        ]
        mid_t1 = P(R(n["tau_f"], n["tau_g"], "tau_h(f)/tau_h(g)"), el, "m3")
        mid_t2 = P(R(n["tau_bar_f"], n["tau_bar_g"], "tau_bar_h(f)/tau_bar_h(g)"), el, "m4")
        chain_b = [
            P(R(n["tau_f"], n["tau_bar_g"], "tau_h(f)/tau_bar_h(g)"), el, "lbB"),
            c.q(getattr(c.fg, t_lo), f"B:{t_lo}_g(f)"),
            _q_min("B:min", mid_t1, mid_t2),
            _q_max("B:max", mid_t1, mid_t2),
            c.q(getattr(c.fg, t_hi), f"B:{t_hi}_g(f)"),
            P(R(n["tau_bar_f"], n["tau_g"], "tau_bar_h(f)/tau_h(g)"), el, "ubB"),
        ]
        links = c.chain_links(chain_a) + c.chain_links(chain_b)
        return c.report(chain_a + chain_b, links)
    raise SpecFormatError(f"unhandled type theorem id '{tid}'")


def check_instance(instance: TheoremInstance, ws: Optional[IndicatorWorkspace] = None) -> CheckReport:
    if instance.theorem_id not in THEOREM_IDS:
        raise SpecFormatError(f"unknown theorem id '{instance.theorem_id}'")
    if min(instance.m, instance.p, instance.q) < 0:
        raise SpecFormatError("theorem indices m, p, q must be non-negative")
    if not instance.tolerance > 0:
        raise SpecFormatError("instance tolerance must be positive")
    ws = ws or IndicatorWorkspace()
    c = _Checker(instance, ws)
    tid = instance.theorem_id
    try:
        if tid == "T1":
            return _check_t1(c)
        if tid == "C1":
            return _check_c1_c2(c, regular_f=True)
        if tid == "C2":
            return _check_c1_c2(c, regular_f=False)
        if tid == "C3":
            return _check_c3_c4(c, with_unit=False)
        if tid == "C4":
            return _check_c3_c4(c, with_unit=True)
        if tid == "C5":
            return _check_c5_c6(c, upper=True)
        if tid == "C6":
            return _check_c5_c6(c, upper=False)
        if tid == "C7":
            return _check_degenerate(c, on_f=True)
        if tid == "C8":
            return _check_degenerate(c, on_f=False)
        if tid == "R1":
            return _check_remark(c)
        return _check_type_theorem(c)
    except IncompleteInstanceError as exc:
        # an interval degenerated (a bound touched zero/infinity): the
        # statement's quantities are not usable, so the claim is untested
        c.hyp["chain quantities well-posed"] = False
        c.notes.append(str(exc))
        return c.report([], [])


def load_batch(doc: dict) -> list[TheoremInstance]:
    """Batch document: {"instances": [{theorem, f, g, h, m, p, q, tolerance?, grid?}]}."""
    if not isinstance(doc, dict) or "instances" not in doc:
        raise SpecFormatError("batch document needs an 'instances' array")
    out = []
    for i, item in enumerate(doc["instances"]):
        if not isinstance(item, dict):
            raise SpecFormatError(f"instance {i} is not an object")
        unknown = set(item) - {"theorem", "f", "g", "h", "m", "p", "q", "tolerance", "grid"}
        if unknown:
            raise SpecFormatError(f"instance {i} has unknown fields {sorted(unknown)}")
        try:
            grid = None
            if "grid" in item:
                gdoc = item["grid"]
                grid = GridSpec(float(gdoc["sigma_min"]), float(gdoc["sigma_max"]),
                                int(gdoc["count"]), str(gdoc.get("spacing", "linear")))
            inst = TheoremInstance(
                theorem_id=str(item["theorem"]), f=item["f"], g=item["g"], h=item["h"],
                m=int(item.get("m", 0)), p=int(item.get("p", 0)), q=int(item.get("q", 0)),
                tolerance=float(item.get("tolerance", 2e-2)), grid=grid,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecFormatError(f"instance {i} is malformed: {exc}") from exc
        if min(inst.m, inst.p, inst.q) < 0:
            raise SpecFormatError(f"instance {i}: indices must be non-negative")
        if not inst.tolerance > 0:
            raise SpecFormatError(f"instance {i}: tolerance must be positive")
        out.append(inst)
    return out


def run_batch(instances: list[TheoremInstance],
              config: EstimatorConfig = DEFAULT_CONFIG) -> list[CheckReport]:
    ws = IndicatorWorkspace(config)
    return [check_instance(inst, ws) for inst in instances]
