"""Built-in growth families with analytically known indicators.

Three families cover the estimator test surface:

* expexp(a, c): the series with exponents a*n and norms c^n/n!, whose sum
  is exactly exp(c * e^(a sigma)) - 1.  Order a and type c at (2, 0);
  regular.
* tower(k, rho, q): synthetic rule log^[k]M = rho * log^[q]sigma, the
  canonical regular curve at any index-pair; its type at (k, q) is
  exactly 1.
* osc_profile(rho, lam, p, q): log^[p]M = (m0 + m1 sin log sigma) *
  log^[q]sigma with m0, m1 the mean and half-spread of (rho, lam);
  irregular with order rho and lower order lam when sampled on a
  log-uniform grid covering whole periods.

Irregular growth is deliberately synthetic: prescribing an oscillating
order through explicit coefficients is delicate and unnecessary for
testing the estimators.  Relative ground truth is only claimed for pairs
whose composition has a closed form (expexp-expexp and tower-tower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import SpecFormatError
from .growth import SeriesLowerSource, SeriesUpperSource, SourceBundle, SyntheticSource
from .levelindex import exp_iter, from_real, log_iter, to_real
from .series import expexp_spec, table_spec

# Reduced-precision caps used inside compositions/inversions, where the
# certified-window slack is divided by an exponentially large slope.
FAST_TAIL_TOL = 1e-10
FAST_WINDOW_CAP = 1 << 10


@dataclass(frozen=True)
class AnalyticValue:
    value: float
    note: str           # names the closed form it comes from
    tolerance: float    # agreement the estimator promises on a suitable grid


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    family: str
    params: dict
    regular: bool
    index_pair: Optional[tuple[int, int]]
    analytic: dict  # (kind, p, q) -> AnalyticValue
    tolerance: float  # default agreement tolerance for this entry
    _builder: Callable[[bool], SourceBundle]

    def bundle(self, fast: bool = False) -> SourceBundle:
        return self._builder(fast)

    def analytic_value(self, kind: str, p: int, q: int) -> Optional[float]:
        hit = self.analytic.get((kind, p, q))
        return hit.value if hit else None

    def describe(self) -> dict:
        return {
            "id": self.id, "family": self.family, "params": dict(self.params),
            "regular": self.regular, "index_pair": self.index_pair,
            "tolerance": self.tolerance,
            "analytic": [
                {"kind": k, "p": p, "q": q, "value": av.value, "note": av.note,
                 "tolerance": av.tolerance}
                for (k, p, q), av in sorted(self.analytic.items())
            ],
        }


def _expexp_entry(a: float, c: float) -> CorpusEntry:
    spec = expexp_spec(a, c)

    def build(fast: bool) -> SourceBundle:
        upper = SeriesUpperSource(spec)
        if fast:
            upper = upper.with_caps(FAST_TAIL_TOL, FAST_WINDOW_CAP)
        return SourceBundle(upper, SeriesLowerSource(spec))

    note_order = f"log M = {c}*exp({a}*sigma) + o(1), so log^[2]M / sigma -> {a}"
    note_type = f"log M / exp({a}*sigma) -> {c} with order exponent {a}"
    note_shift = "index shift (p+1, q+1) of a finite nonzero order"
    analytic = {
        ("order", 2, 0): AnalyticValue(a, note_order, 1e-3),
        ("lower_order", 2, 0): AnalyticValue(a, note_order, 1e-3),
        ("type", 2, 0): AnalyticValue(c, note_type, 1e-3),
        ("lower_type", 2, 0): AnalyticValue(c, note_type, 1e-3),
        ("weak_type_tau", 2, 0): AnalyticValue(c, note_type, 1e-3),
        ("weak_type_tau_bar", 2, 0): AnalyticValue(c, note_type, 1e-3),
        ("order", 3, 1): AnalyticValue(1.0, note_shift, 5e-2),
        ("lower_order", 3, 1): AnalyticValue(1.0, note_shift, 5e-2),
    }
    return CorpusEntry(f"expexp:a={_fmt(a)},c={_fmt(c)}", "expexp", {"a": a, "c": c},
                       True, (2, 0), analytic, 1e-3, build)


def tower_rule_source(k: int, rho: float, q: int) -> SyntheticSource:
    if k < 1 or q < 0 or rho <= 0:
        raise SpecFormatError("tower rule needs k >= 1, q >= 0, rho > 0")

    def rule(sigma: float):
        lq = to_real(log_iter(from_real(sigma), q))
        return exp_iter(from_real(rho * lq), k - 1)

    # log^[q]sigma must be defined and non-negative: sigma >= exp^[q-1](1).
    floor = 0.0 if q == 0 else to_real(exp_iter(from_real(1.0), q - 1))
    return SyntheticSource("tower", {"k": k, "rho": rho, "q": q}, rule, sigma_floor=floor)


def _tower_entry(k: int, rho: float, q: int) -> CorpusEntry:
    src = tower_rule_source(k, rho, q)

    def build(fast: bool) -> SourceBundle:
        return SourceBundle(src)

    note = f"rule log^[{k}]M = {rho} * log^[{q}]sigma is its own derivation"
    note_type = "exp(rho*log^[q]sigma) equals (log^[q-1]sigma)^rho exactly"
    note_weak = "regular: weak type coincides with type"
    note_shift = "index shift of a finite nonzero order"
    analytic = {
        ("order", k, q): AnalyticValue(rho, note, 1e-3),
        ("lower_order", k, q): AnalyticValue(rho, note, 1e-3),
        ("type", k, q): AnalyticValue(1.0, note_type, 1e-3),
        ("lower_type", k, q): AnalyticValue(1.0, note_type, 1e-3),
        ("weak_type_tau", k, q): AnalyticValue(1.0, note_weak, 1e-3),
        ("weak_type_tau_bar", k, q): AnalyticValue(1.0, note_weak, 1e-3),
        ("order", k + 1, q + 1): AnalyticValue(1.0, note_shift, 5e-2),
        ("lower_order", k + 1, q + 1): AnalyticValue(1.0, note_shift, 5e-2),
    }
    return CorpusEntry(f"tower:k={k},rho={_fmt(rho)},q={q}", "tower",
                       {"k": k, "rho": rho, "q": q}, True, (k, q), analytic, 1e-3, build)


def osc_rule_source(rho: float, lam: float, p: int, q: int) -> SyntheticSource:
    if not (rho > lam > 0):
        raise SpecFormatError("oscillating profile needs rho > lam > 0")
    m0 = 0.5 * (rho + lam)
    m1 = 0.5 * (rho - lam)
    if m0 <= m1 * math.sqrt(2.0):
        # derivative m0 + m1 (sin + cos)(log sigma) must stay positive
        raise SpecFormatError(
            f"rho/lam = {rho/lam} too large for a monotone oscillating rule (needs < 3 + 2*sqrt(2))"
        )
    if p < 1 or q < 0:
        raise SpecFormatError("oscillating rule needs p >= 1, q >= 0")

    def rule(sigma: float):
        lq = to_real(log_iter(from_real(sigma), q))
        v = (m0 + m1 * math.sin(math.log(sigma))) * lq
        return exp_iter(from_real(v), p - 1)

    floor = 1e-6 if q == 0 else to_real(exp_iter(from_real(1.0), q - 1))
    return SyntheticSource("osc_profile", {"rho": rho, "lam": lam, "p": p, "q": q},
                           rule, sigma_floor=floor)


def _osc_entry(rho: float, lam: float, p: int, q: int) -> CorpusEntry:
    src = osc_rule_source(rho, lam, p, q)

    def build(fast: bool) -> SourceBundle:
        return SourceBundle(src)

    note = "sup/inf of m0 + m1 sin(log sigma) on a log-uniform grid over whole periods"
    analytic = {
        ("order", p, q): AnalyticValue(rho, note, 1e-2),
        ("lower_order", p, q): AnalyticValue(lam, note, 1e-2),
    }
    return CorpusEntry(f"osc:rho={_fmt(rho)},lam={_fmt(lam)},p={p},q={q}", "osc_profile",
                       {"rho": rho, "lam": lam, "p": p, "q": q}, False, (p, q),
                       analytic, 1e-2, build)


def _table_entry(params: dict) -> CorpusEntry:
    """User-supplied finite prefix (JSON only); no analytic claims attached."""
    from .series import validate

    spec = table_spec(str(params.get("name", "table")), params["lam"], params["log_norm"])
    report = validate(spec, 64)
    if report.verdict == "fail":
        raise SpecFormatError(f"table series fails validation: {report.cause}")

    def build(fast: bool) -> SourceBundle:
        return SourceBundle(SeriesUpperSource(spec), SeriesLowerSource(spec))

    return CorpusEntry(f"table:{spec.name}", "table", dict(spec.params),
                       False, None, {}, math.inf, build)


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


_FAMILIES = {
    "expexp": lambda params: _expexp_entry(float(params["a"]), float(params["c"])),
    "tower": lambda params: _tower_entry(int(params["k"]), float(params["rho"]), int(params["q"])),
    "osc": lambda params: _osc_entry(float(params["rho"]), float(params["lam"]),
                                     int(params["p"]), int(params["q"])),
    "table": _table_entry,
}
_FAMILY_ALIASES = {"osc_profile": "osc"}

# Canonical instances: the estimator-recovery families plus the synthetic
# rules the theorem batches lean on.
DEFAULT_ENTRY_SPECS = [
    "expexp:a=1,c=1", "expexp:a=2,c=1", "expexp:a=1,c=3", "expexp:a=3,c=2",
    "tower:k=1,rho=2,q=1", "tower:k=2,rho=1,q=0", "tower:k=2,rho=2,q=0",
    "tower:k=3,rho=1,q=0", "tower:k=3,rho=2,q=0",
    "osc:rho=2,lam=1,p=2,q=0",
]


def instantiate(family: str, params: dict) -> CorpusEntry:
    family = _FAMILY_ALIASES.get(family, family)
    builder = _FAMILIES.get(family)
    if builder is None:
        raise SpecFormatError(f"unknown corpus family '{family}'")
    try:
        return builder(params)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"bad parameters for family '{family}': {exc}") from exc


def parse_shorthand(text: str) -> CorpusEntry:
    """'expexp:a=2,c=1' -> entry; the same shorthand the CLI accepts."""
    if ":" not in text:
        raise SpecFormatError(f"source shorthand '{text}' must look like family:key=value,...")
    family, _, rest = text.partition(":")
    params = {}
    for item in rest.split(","):
        if not item:
            continue
        if "=" not in item:
            raise SpecFormatError(f"bad parameter '{item}' in shorthand '{text}'")
        key, _, value = item.partition("=")
        params[key.strip()] = value.strip()
    return instantiate(family.strip(), params)


def source_from_doc(doc: dict) -> CorpusEntry:
    """JSON form: {"family": ..., <params>}; 'lambda' aliases the lam parameter."""
    if not isinstance(doc, dict) or "family" not in doc:
        raise SpecFormatError("source document must be an object with a 'family' field")
    params = {k: v for k, v in doc.items() if k != "family"}
    if "lambda" in params:
        params["lam"] = params.pop("lambda")
    return instantiate(str(doc["family"]), params)


def resolve_source(ref) -> CorpusEntry:
    """Accept shorthand strings or JSON documents."""
    if isinstance(ref, str):
        return parse_shorthand(ref)
    if isinstance(ref, dict):
        return source_from_doc(ref)
    raise SpecFormatError(f"cannot resolve source reference of type {type(ref).__name__}")


def default_entries() -> list[CorpusEntry]:
    return [parse_shorthand(s) for s in DEFAULT_ENTRY_SPECS]


def analytic_relative(f: CorpusEntry, g: CorpusEntry, kind: str, p: int, q: int) -> Optional[float]:
    """Closed-form relative indicators for the pairs that have one.

    expexp-expexp at (0,0): the composition is (a_f/a_g)sigma +
    log(c_f/c_g)/a_g + o(1), so the order is a_f/a_g and every type-kind
    indicator is (c_f/c_g)^(1/a_g).  tower-tower with equal depth at
    (0,0): composition (rho_f/rho_g)sigma exactly; order rho_f/rho_g,
    types 1.
    """
    if (p, q) != (0, 0):
        return None
    order_kinds = ("relative_order", "relative_lower_order")
    type_kinds = ("relative_type", "relative_lower_type",
                  "relative_weak_type_tau", "relative_weak_type_tau_bar")
    if f.family == "expexp" and g.family == "expexp":
        af, cf = f.params["a"], f.params["c"]
        ag, cg = g.params["a"], g.params["c"]
        if kind in order_kinds:
            return af / ag
        if kind in type_kinds:
            return (cf / cg) ** (1.0 / ag)
        return None
    if f.family == "tower" and g.family == "tower" and f.params["k"] == g.params["k"] \
            and f.params["q"] == 0 and g.params["q"] == 0:
        if kind in order_kinds:
            return f.params["rho"] / g.params["rho"]
        if kind in type_kinds:
            return 1.0
    return None
