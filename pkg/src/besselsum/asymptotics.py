"""Small-beta expansions of the Bessel series as explicit term lists.

Each series family has an integral representation whose integrand is a
product of meromorphic factors times beta^(-2t); shifting the integration
contour to the left converts the series into a sum of residues, one per pole,
each contributing a term (const + log_coeff * ln(beta)) * beta^p. This module
builds those term lists.

The construction is generic rather than formula-by-formula: every family is
described by its factor list, the engine enumerates all poles in the window
dictated by the requested order, groups coincident poles (these produce the
log terms via the double-pole rule), and assembles coefficients. Special
parameter values (integer or half-integer order s) are snapped to exact
rationals so pole collisions are detected exactly.

Families and their factor products (norm * Gamma(t) * ... * beta^{-2t}):

* h  (phase x):    1/4 * Gamma(t) Gamma(t+s) C(2t, x)
* h0:              1/2 * Gamma(t) Gamma(t+s) zeta(2t)
* g  (dim d):      1/2 * Gamma(t) Gamma(t+s) Z_d(s+t)      [Epstein zeta]
* f  (model, x):   1/4 * Gamma(t) Gamma(t+s) zeta_M(s+t) C(2t, x)
* f0 (model):      1/2 * Gamma(t) Gamma(t+s) zeta_M(s+t) zeta(2t)

where C(nu, x) = sum_m cos(2 pi m x)/m^nu is the cosine polylog pair and
zeta_M is the model's spectral zeta. At non-positive integer arguments
zeta_M is evaluated exactly through the heat-kernel coefficients
(zeta_M(-j) = (-1)^j j! A_{D/2+j}), which also supplies the exact zeros that
terminate many of the ladders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import specfun as sf
from .errors import DomainError, PoleError, WindowError
from .manifolds import ManifoldModel, TorusModel, torus_model

__all__ = [
    "ExpansionTerm",
    "Expansion",
    "double_pole_residue",
    "dispatch_case",
    "expand_h",
    "expand_h0",
    "expand_g",
    "expand_f",
    "expand_f0",
    "evaluate",
]

_SNAP = 2e-12  # half-integer snapping tolerance on 2s
_GRID = 1e-9  # float pole-grouping grid
_GUARD = 1e-7  # distinct poles closer than this are numerically unusable


# ---------------------------------------------------------------------------
# Term containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionTerm:
    """One expansion term (const_coeff + log_coeff * ln beta) * beta^power."""

    power: float
    const_coeff: float
    log_coeff: float = 0.0

    def evaluate(self, beta: float) -> float:
        return (self.const_coeff + self.log_coeff * math.log(beta)) * beta ** self.power

    def to_dict(self) -> dict:
        return {
            "power": self.power,
            "const_coeff": self.const_coeff,
            "log_coeff": self.log_coeff,
        }


@dataclass(frozen=True)
class Expansion:
    """Ordered small-beta expansion of one series instance."""

    family: str
    case_tag: str
    params: dict
    terms: tuple
    max_power: float
    remainder_power: Optional[float]

    def evaluate(self, beta: float) -> float:
        if not (beta > 0.0 and math.isfinite(beta)):
            raise DomainError(f"beta must be positive and finite, got {beta}")
        lb = math.log(beta)
        return math.fsum(
            (t.const_coeff + t.log_coeff * lb) * beta ** t.power for t in self.terms
        )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "case_tag": self.case_tag,
            "params": dict(self.params),
            "terms": [t.to_dict() for t in self.terms],
            "max_power": self.max_power,
            "remainder_power": self.remainder_power,
        }


def evaluate(expansion: Expansion, beta: float) -> float:
    """Numeric value of an expansion at a given beta."""
    return expansion.evaluate(beta)


def double_pole_residue(res_p, fp_p, res_q, fp_q, r_val, r_deriv) -> float:
    """Residue of a double pole built from two colliding simple poles.

    With factors p(t) ~ res_p/(t-t0) + fp_p, q(t) ~ res_q/(t-t0) + fp_q and an
    analytic rest r(t), the residue of p*q*r at t0 is

        res_p*fp_q*r(t0) + res_q*fp_p*r(t0) + res_p*res_q*r'(t0).
    """
    return (res_p * fp_q + res_q * fp_p) * r_val + res_p * res_q * r_deriv


# ---------------------------------------------------------------------------
# Snapping helpers
# ---------------------------------------------------------------------------

def _snap_half(s: float) -> Optional[Fraction]:
    """Nearest half-integer as a Fraction, if s is within snapping distance."""
    m = round(2.0 * float(s))
    if abs(2.0 * float(s) - m) < _SNAP:
        return Fraction(m, 2)
    return None


def _as_nonpos_int(t) -> Optional[int]:
    """Return j >= 0 when t == -j (exactly for Fractions, snapped for floats)."""
    if isinstance(t, Fraction):
        if t.denominator == 1 and t <= 0:
            return -int(t)
        return None
    r = round(t)
    if abs(t - r) < 1e-9 and r <= 0:
        return -int(r)
    return None


# ---------------------------------------------------------------------------
# Meromorphic factors of the integrand
# ---------------------------------------------------------------------------

class _Factor:
    """One meromorphic factor F(t) of the contour integrand."""

    def poles(self, t_min: float) -> list:
        """[(t0, residue, fp_callable)] for poles with t0 >= t_min."""
        return []

    def value(self, t) -> float:
        raise NotImplementedError

    def dvalue(self, t) -> float:
        raise NotImplementedError

    def exact_zero(self, t) -> bool:
        """True when value(t) is exactly zero; must never raise."""
        return False


class _GammaFactor(_Factor):
    """Gamma(t + shift); shift is 0 or the series order s."""

    def __init__(self, shift):
        self.shift = shift

    def poles(self, t_min: float) -> list:
        out = []
        j_max = int(math.floor(-float(self.shift) - t_min + 1e-9))
        for j in range(0, j_max + 1):
            t0 = -self.shift - j if isinstance(self.shift, Fraction) else -float(self.shift) - j
            res = (-1.0) ** j / math.factorial(j)
            fp = res * (sf.harmonic(j) - sf.EULER_GAMMA)  # res * psi(j+1)
            out.append((t0, res, (lambda v=fp: v)))
        return out

    def value(self, t) -> float:
        return sf.gamma(float(t + self.shift))

    def dvalue(self, t) -> float:
        u = float(t + self.shift)
        return sf.gamma(u) * sf.digamma(u)


class _RiemannZeta2tFactor(_Factor):
    """zeta(2t): pole at t=1/2 with residue 1/2 and finite part gamma."""

    def poles(self, t_min: float) -> list:
        if 0.5 >= t_min:
            return [(Fraction(1, 2), 0.5, (lambda: sf.EULER_GAMMA))]
        return []

    def value(self, t) -> float:
        return sf.riemann_zeta(2.0 * float(t))

    def dvalue(self, t) -> float:
        return 2.0 * sf.riemann_zeta_deriv(2.0 * float(t))

    def exact_zero(self, t) -> bool:
        j = _as_nonpos_int(t)
        return j is not None and j >= 1  # zeta(-2j) = 0


class _PolylogPairFactor(_Factor):
    """C(2t, x) = sum_m cos(2 pi m x) m^{-2t}; entire in t, zeros at -2t in 2N."""

    def __init__(self, x: float):
        self.x = x

    def value(self, t) -> float:
        return sf.polylog_pair(2.0 * float(t), self.x)

    def dvalue(self, t) -> float:
        return 2.0 * sf.polylog_pair_deriv(2.0 * float(t), self.x)

    def exact_zero(self, t) -> bool:
        j = _as_nonpos_int(t)
        return j is not None and j >= 1  # C(-2j, x) = 0


class _ModelZetaFactor(_Factor):
    """zeta_M(s + t) of a spectral model, with exact heat-kernel values at
    non-positive integer arguments: zeta_M(-j) = (-1)^j j! A_{D/2 + j}."""

    def __init__(self, model: ManifoldModel, s):
        self.model = model
        self.s = s

    def poles(self, t_min: float) -> list:
        out = []
        for u0 in self.model.zeta_poles():
            t0 = u0 - self.s if isinstance(self.s, Fraction) else float(u0) - float(self.s)
            if float(t0) >= t_min:
                res = self.model.zeta_res(float(u0))
                out.append((t0, res, (lambda u=float(u0): self.model.zeta_fp(u))))
        return out

    def _heat_value(self, j: int) -> float:
        a = self.model.heat_coeff(Fraction(self.model.D, 2) + j)
        return (-1.0) ** j * math.factorial(j) * a

    def value(self, t) -> float:
        u = t + self.s
        j = _as_nonpos_int(u)
        if j is not None:
            return self._heat_value(j)
        return self.model.zeta(float(u))

    def dvalue(self, t) -> float:
        return self.model.zeta_deriv(float(t + self.s))

    def exact_zero(self, t) -> bool:
        j = _as_nonpos_int(t + self.s)
        if j is None:
            return False
        try:
            return self._heat_value(j) == 0.0
        except WindowError:
            return False


# ---------------------------------------------------------------------------
# Engine: enumerate poles, group, take residues
# ---------------------------------------------------------------------------

def _group_poles(factors, t_min: float, exact: bool) -> list:
    """Group pole records by location; returns [(t0, [(fi, res, fp)...])]."""
    records = []
    for fi, fac in enumerate(factors):
        for (t0, res, fp) in fac.poles(t_min):
            records.append((t0, fi, res, fp))
    groups: dict = {}
    for (t0, fi, res, fp) in records:
        key = t0 if exact else round(float(t0) / _GRID)
        groups.setdefault(key, []).append((t0, fi, res, fp))
    # collision guard: distinct groups closer than _GUARD are numerically
    # unusable (residues blow up like 1/distance without cancelling exactly)
    locs = sorted(float(k if exact else k * _GRID) for k in groups)
    for a, b in zip(locs, locs[1:]):
        if 0.0 < b - a < _GUARD:
            raise PoleError(
                f"poles at t={a} and t={b} nearly collide; the order parameter "
                "is too close to a special value for the generic branch"
            )
    out = []
    for key, plist in groups.items():
        if len(plist) > 2:
            raise PoleError(f"unexpected pole of multiplicity {len(plist)} at t={plist[0][0]}")
        out.append((plist[0][0], [(fi, res, fp) for (_, fi, res, fp) in plist]))
    out.sort(key=lambda g: -float(g[0]))  # ascending beta-power
    return out


def _residue_term(factors, norm: float, t0, plist):
    """Coefficients (const, log) of the residue at t0, or None if it vanishes."""
    others = [fac for fi, fac in enumerate(factors) if fi not in {p[0] for p in plist}]
    zero_idx = [i for i, fac in enumerate(others) if fac.exact_zero(t0)]
    if len(plist) == 1:
        if zero_idx:
            return None
        _, res, _ = plist[0]
        prod = norm * res
        for fac in others:
            prod *= fac.value(t0)
        return (prod, 0.0) if prod != 0.0 else None
    # double pole
    (fi_p, res_p, fp_p), (fi_q, res_q, fp_q) = plist
    if len(zero_idx) >= 2:
        return None
    if len(zero_idx) == 1:
        z = zero_idx[0]
        p_val = 0.0
        p_der = others[z].dvalue(t0)
        for i, fac in enumerate(others):
            if i != z:
                p_der *= fac.value(t0)
    else:
        vals = [fac.value(t0) for fac in others]
        p_val = math.prod(vals)
        p_der = 0.0
        for i, fac in enumerate(others):
            part = fac.dvalue(t0)
            for jv, v in enumerate(vals):
                if jv != i:
                    part *= v
            p_der += part
    const = norm * double_pole_residue(res_p, fp_p(), res_q, fp_q(), p_val, p_der)
    logc = norm * res_p * res_q * p_val * (-2.0)
    if const == 0.0 and logc == 0.0:
        return None
    return (const, logc)


def _assemble(factors, norm: float, order: float, exact: bool, params: dict,
              family: str, case_tag: str) -> Expansion:
    if not (math.isfinite(order)):
        raise DomainError(f"order must be finite, got {order}")
    buffer = 4.0
    terms_map: dict = {}
    remainder: Optional[float] = None
    while True:
        t_min = -(order + buffer) / 2.0
        groups = _group_poles(factors, t_min, exact)
        terms_map.clear()
        remainder = None
        for (t0, plist) in groups:
            power = -2.0 * float(t0)
            if power <= order + 1e-12:
                coeffs = _residue_term(factors, norm, t0, plist)
                if coeffs is not None:
                    terms_map[power] = coeffs
            else:
                # beyond the requested order: only need to know whether the
                # term is nonzero to record the remainder power
                try:
                    coeffs = _residue_term(factors, norm, t0, plist)
                except WindowError:
                    coeffs = (math.nan, 0.0)  # unknown, generically nonzero
                if coeffs is not None:
                    remainder = power if remainder is None else min(remainder, power)
        if remainder is not None or buffer >= 40.0:
            break
        buffer += 4.0
    terms = tuple(
        ExpansionTerm(p, c, l) for p, (c, l) in sorted(terms_map.items())
    )
    return Expansion(
        family=family,
        case_tag=case_tag,
        params=params,
        terms=terms,
        max_power=float(order),
        remainder_power=remainder,
    )


# ---------------------------------------------------------------------------
# Case dispatch
# ---------------------------------------------------------------------------

def dispatch_case(family: str, s: float, D_or_d: Optional[int] = None) -> str:
    """Name the expansion branch that applies to (family, s, dimension).

    The engine computes every branch from the same pole data; the tag records
    which collision pattern is in play (integer s collides the two Gamma
    ladders; for the lattice/model families the spectral-zeta pole can land on
    a Gamma ladder or on t=1/2 depending on the parity of the dimension).
    """
    if family not in ("h", "h0", "g", "f", "f0"):
        raise DomainError(f"unknown family {family!r}")
    sh = _snap_half(s)
    if family in ("g", "f", "f0"):
        if D_or_d is None:
            raise DomainError(f"family {family!r} needs its dimension for dispatch")
        even = int(D_or_d) % 2 == 0
        parity = "evenD" if even else "oddD"
    if sh is None:
        return "generic"
    is_int = sh.denominator == 1
    if family == "h":
        if is_int:
            return "pos_int" if sh >= 1 else "neg_int"
        return "generic"
    if family == "h0":
        if is_int:
            return "pos_int" if sh >= 1 else "neg_int"
        return "generic" if sh > 0 else "neg_half"
    if family == "g":
        if is_int:
            if sh >= 0:
                return f"pos_int_{parity}"
            return f"neg_int_{parity}"
        if sh > 0 and not even:
            return "pos_half_oddD"
        return "generic"
    # f and f0
    if is_int:
        return f"pos_int_{parity}" if sh >= 1 else "neg_int"
    if sh > 0:
        return f"pos_half_{parity}"
    return "neg_half"


# ---------------------------------------------------------------------------
# Family front ends
# ---------------------------------------------------------------------------

def _order_check(order: float) -> float:
    order = float(order)
    if not math.isfinite(order):
        raise DomainError(f"order must be finite, got {order}")
    return order


def _check_x(x: float) -> float:
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"phase x must lie in (0, 1), got {x}")
    return x


def expand_h(s: float, x: float, order: float) -> Expansion:
    """Small-beta expansion of h(s, beta, x) up to beta^order."""
    x = _check_x(x)
    order = _order_check(order)
    sh = _snap_half(s)
    tag = dispatch_case("h", s)
    s_sym = sh if sh is not None else float(s)
    factors = [
        _GammaFactor(Fraction(0) if sh is not None else 0.0),
        _GammaFactor(s_sym),
        _PolylogPairFactor(x),
    ]
    params = {"s": float(s), "x": x}
    return _assemble(factors, 0.25, order, sh is not None, params, "h", tag)


def expand_h0(s: float, order: float) -> Expansion:
    """Small-beta expansion of h0(s, beta) up to beta^order."""
    order = _order_check(order)
    sh = _snap_half(s)
    tag = dispatch_case("h0", s)
    s_sym = sh if sh is not None else float(s)
    factors = [
        _GammaFactor(Fraction(0) if sh is not None else 0.0),
        _GammaFactor(s_sym),
        _RiemannZeta2tFactor(),
    ]
    params = {"s": float(s)}
    return _assemble(factors, 0.5, order, sh is not None, params, "h0", tag)


def expand_g(d: int, s: float, order: float) -> Expansion:
    """Small-beta expansion of the lattice series g(d; s, beta)."""
    if d != int(d) or int(d) < 1:
        raise DomainError(f"lattice dimension must be a positive integer, got {d}")
    order = _order_check(order)
    sh = _snap_half(s)
    tag = dispatch_case("g", s, int(d))
    s_sym = sh if sh is not None else float(s)
    factors = [
        _GammaFactor(Fraction(0) if sh is not None else 0.0),
        _GammaFactor(s_sym),
        _ModelZetaFactor(torus_model(int(d)), s_sym),
    ]
    params = {"d": int(d), "s": float(s)}
    return _assemble(factors, 0.5, order, sh is not None, params, "g", tag)


def expand_f(model: ManifoldModel, s: float, x: float, order: float) -> Expansion:
    """Small-beta expansion of f(model; s, beta, x)."""
    x = _check_x(x)
    order = _order_check(order)
    sh = _snap_half(s)
    tag = dispatch_case("f", s, model.D)
    s_sym = sh if sh is not None else float(s)
    factors = [
        _GammaFactor(Fraction(0) if sh is not None else 0.0),
        _GammaFactor(s_sym),
        _ModelZetaFactor(model, s_sym),
        _PolylogPairFactor(x),
    ]
    params = {"s": float(s), "x": x, "model": model.name, "D": model.D}
    return _assemble(factors, 0.25, order, sh is not None, params, "f", tag)


def expand_f0(model: ManifoldModel, s: float, order: float) -> Expansion:
    """Small-beta expansion of f0(model; s, beta) = f at phase x = 0."""
    order = _order_check(order)
    sh = _snap_half(s)
    tag = dispatch_case("f0", s, model.D)
    s_sym = sh if sh is not None else float(s)
    factors = [
        _GammaFactor(Fraction(0) if sh is not None else 0.0),
        _GammaFactor(s_sym),
        _ModelZetaFactor(model, s_sym),
        _RiemannZeta2tFactor(),
    ]
    params = {"s": float(s), "model": model.name, "D": model.D}
    return _assemble(factors, 0.5, order, sh is not None, params, "f0", tag)
