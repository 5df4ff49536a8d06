"""Physics-facing layer built on the series engines.

Three applications share the core machinery:

* ``product_zeta`` / ``product_zeta_expansion``: the spectral zeta function of
  a product space ``R^d x S^1 x N`` (d noncompact directions, a circle of
  circumference 2*beta with twist B, and a compact factor N described by a
  ManifoldModel). After integrating out the continuous directions it reduces
  to a gamma/zeta_N boundary term plus the twisted double Bessel series f:

      zeta(s) = beta / (2^d pi^{(d+1)/2} Gamma(s))
                * [ Gamma(s') zeta_N(s') + 4 f(s', beta, B) ],   s' = s-(d+1)/2.

* ``piston_zeta`` / ``casimir_energy`` / ``casimir_force``: the Casimir piston
  for fermions on ``M^D x N``; its zeta function is the B = 1/2 instance above
  with d = D-1 and an overall factor -2^{D-3}. casimir_energy splits the
  chamber energy E_C = (1/2) zeta_piston(eps - 1/2) into its 1/eps pole
  coefficient and finite part; casimir_force differentiates the summed
  two-chamber finite energy with respect to the chamber length.

* ``mass_sum`` / ``mass_expansion``: the one-loop mass correction series
  S(m) = sum_n (m/(nL))^{D/2-1} K_{D/2-1}(nLm) of the compactified lambda
  phi^4 model, equal to (2/L^2)^{D/2-1} beta^{D-2} h0(1-D/2, beta) at
  beta = mL/2, with its small-m expansion transformed from expand_h0.

``poisson_check`` exposes both sides of the Gaussian resummation identity the
continuations rest on, as a numeric self-test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import specfun as sf
from .asymptotics import (
    Expansion,
    ExpansionTerm,
    _snap_half,
    expand_f,
    expand_f0,
    expand_h0,
)
from .direct_eval import DEFAULT_TOL, EvalResult, sum_f
from .errors import ConfigError, DomainError, PoleError
from .manifolds import ManifoldModel

__all__ = [
    "ProductGeometry",
    "PistonConfig",
    "product_zeta",
    "product_zeta_expansion",
    "poisson_check",
    "piston_zeta",
    "casimir_energy",
    "casimir_force",
    "mass_sum",
    "mass_expansion",
]


# ---------------------------------------------------------------------------
# Geometry containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductGeometry:
    """Product space R^d x S^1(2*beta, twist B) x N.

    ``d`` counts the noncompact directions, ``model`` is the compact factor N
    (dimension Q = model.D), ``beta`` is the half-circumference of the circle
    direction and ``B`` its twist in [0, 1). The total dimension is
    D = d + 1 + Q.
    """

    d: int
    model: ManifoldModel
    beta: float
    B: float = 0.0

    def __post_init__(self):
        if self.d != int(self.d) or int(self.d) < 0:
            raise DomainError(f"d must be a nonnegative integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if not isinstance(self.model, ManifoldModel):
            raise DomainError(
                f"model must be a ManifoldModel, got {type(self.model).__name__}"
            )
        beta = float(self.beta)
        if not (beta > 0.0 and math.isfinite(beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        object.__setattr__(self, "beta", beta)
        B = float(self.B)
        if not (0.0 <= B < 1.0):
            raise DomainError(f"B must lie in [0, 1), got {self.B}")
        object.__setattr__(self, "B", B)

    @property
    def q(self) -> int:
        """Dimension of the compact factor N."""
        return self.model.D

    @property
    def total_dim(self) -> int:
        """Total dimension D = d + 1 + Q."""
        return self.d + 1 + self.model.D


@dataclass(frozen=True)
class PistonConfig:
    """Two-chamber Casimir piston of total length L on M^D x N.

    ``geometry`` describes one chamber: geometry.beta is the length of the
    first chamber, geometry.d = D - 1 its transverse Euclidean directions and
    geometry.B must be 1/2 (antiperiodic reduction of the Dirichlet interval).
    ``epsilon`` is the formal zeta regulator; it is carried for bookkeeping
    only since casimir_energy returns the 1/epsilon split explicitly.
    """

    geometry: ProductGeometry
    L: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not isinstance(self.geometry, ProductGeometry):
            raise ConfigError("geometry must be a ProductGeometry")
        if self.geometry.B != 0.5:
            raise ConfigError(
                f"piston geometry requires twist B = 1/2, got B = {self.geometry.B}"
            )
        L = float(self.L)
        if not (math.isfinite(L) and 0.0 < self.geometry.beta < L):
            raise ConfigError(
                f"need 0 < beta < L, got beta = {self.geometry.beta}, L = {self.L}"
            )
        object.__setattr__(self, "L", L)
        eps = float(self.epsilon)
        if not math.isfinite(eps):
            raise ConfigError(f"epsilon must be finite, got {self.epsilon}")
        object.__setattr__(self, "epsilon", eps)

    @property
    def D(self) -> int:
        """Euclidean dimension of the piston factor (interval + transverse)."""
        return self.geometry.d + 1


# ---------------------------------------------------------------------------
# Shared gamma/zeta limit plumbing
# ---------------------------------------------------------------------------


def _zeta_nonpos_int(model: ManifoldModel, k: int) -> float:
    """Exact zeta_N(-k) = (-1)^k k! A_{Q/2+k} from the heat coefficients."""
    return ((-1.0) ** k) * math.factorial(k) * model.heat_coeff(Fraction(model.D, 2) + k)


def _first_term_and_invgamma(
    model: ManifoldModel, s: float, shift: Fraction
) -> Tuple[float, float]:
    """Evaluate lim_{sigma->s} Gamma(sigma-shift) zeta_N(sigma-shift) / Gamma(sigma).

    Returns ``(limit_value, inv_gamma_s)`` where ``inv_gamma_s`` is 1/Gamma(s),
    exactly 0.0 when s is a nonpositive integer. All removable singularities
    (gamma pole against an exact zeta_N zero, or either pole against the
    1/Gamma(s) zero) are cancelled analytically; a genuine pole of the product
    raises PoleError.
    """
    s_half = _snap_half(s)
    s_is_nonpos_int = s_half is not None and s_half.denominator == 1 and s_half <= 0
    sp_frac = (s_half - shift) if s_half is not None else None
    sp = (float(s_half) if s_half is not None else float(s)) - float(shift)
    gamma_pole = sp_frac is not None and sp_frac.denominator == 1 and sp_frac <= 0
    zeta_pole = sp_frac is not None and sp_frac in set(model.zeta_poles())

    if not s_is_nonpos_int:
        inv_gs = 1.0 / sf.gamma(float(s))
        if zeta_pole:
            raise PoleError(
                f"zeta_N pole at shifted argument {sp}: the product zeta is singular here"
            )
        if gamma_pole:
            ell = int(-sp_frac)
            if _zeta_nonpos_int(model, ell) != 0.0:
                raise PoleError(
                    f"gamma pole at shifted argument -{ell} with zeta_N(-{ell}) != 0: "
                    "the product zeta is singular here"
                )
            # Gamma residue (-1)^ell/ell! picks up the zeta derivative.
            deriv = model.zeta_deriv(sp)
            return ((-1.0) ** ell / math.factorial(ell)) * deriv * inv_gs, inv_gs
        return sf.gamma(sp) * model.zeta(sp) * inv_gs, inv_gs

    # s = -p exactly: 1/Gamma(s) = 0 kills everything regular and leaves only
    # ratio limits against the poles of the shifted factors.
    p = int(-s_half)
    if zeta_pole:
        res = model.zeta_res(float(sp_frac))
        return sf.gamma(float(sp_frac)) * res * ((-1.0) ** p) * math.factorial(p), 0.0
    if gamma_pole:
        ell = int(-sp_frac)
        z0 = _zeta_nonpos_int(model, ell)
        sign = -1.0 if (ell - p) % 2 else 1.0
        return sign * (math.factorial(p) / math.factorial(ell)) * z0, 0.0
    return 0.0, 0.0


def _prefactor(d: int) -> float:
    return 1.0 / (2.0 ** d * math.pi ** ((d + 1) / 2.0))


# ---------------------------------------------------------------------------
# Product-space spectral zeta
# ---------------------------------------------------------------------------


def product_zeta(geom: ProductGeometry, s: float, tol: Optional[float] = None) -> EvalResult:
    """Analytically continued spectral zeta of the product space at real s.

    Evaluates the boundary gamma/zeta_N term (with all removable pole
    cancellations taken as limits) plus the direct Bessel double series.
    Raises PoleError at genuine poles of the continuation.
    """
    shift = Fraction(geom.d + 1, 2)
    first, inv_gs = _first_term_and_invgamma(geom.model, s, shift)
    pref = geom.beta * _prefactor(geom.d)
    if inv_gs == 0.0:
        # 1/Gamma(s) = 0: the Bessel series contributes nothing.
        return EvalResult(pref * first, 0.0, 0, "product_zeta")
    sp = float(s) - float(shift)
    fres = sum_f(geom.model, sp, geom.beta, geom.B, tol)
    value = pref * (first + 4.0 * fres.value * inv_gs)
    err = pref * 4.0 * fres.error_estimate * abs(inv_gs)
    return EvalResult(value, err, fres.terms_used, "product_zeta")


def product_zeta_expansion(geom: ProductGeometry, s: float, order: float) -> Expansion:
    """Small-beta expansion of the product zeta at fixed s.

    Built from the f-series expansion: the beta^0 entry of the f ladder
    cancels the explicit Gamma(s') zeta_N(s') boundary term exactly, the rest
    is scaled by 4/(2^d pi^{(d+1)/2} Gamma(s)) and shifted one power up by the
    overall beta prefactor. At nonpositive integer s the 1/Gamma(s) zero
    collapses the expansion to the single ratio-limit term. s values where the
    boundary term itself is singular require a regulator and raise PoleError.
    """
    shift = Fraction(geom.d + 1, 2)
    model = geom.model
    s_half = _snap_half(s)
    params = {
        "family": "product_zeta",
        "d": geom.d,
        "model": model.name,
        "Q": model.D,
        "s": float(s),
        "B": geom.B,
    }

    if s_half is not None and s_half.denominator == 1 and s_half <= 0:
        first, _ = _first_term_and_invgamma(model, s, shift)
        terms = []
        if first != 0.0:
            terms.append(ExpansionTerm(1.0, _prefactor(geom.d) * first, 0.0))
        return Expansion(
            family="product_zeta",
            case_tag="nonpos_int_s",
            params=params,
            terms=tuple(terms),
            max_power=1.0,
            remainder_power=math.inf,
        )

    sp_frac = (s_half - shift) if s_half is not None else None
    if sp_frac is not None and (
        (sp_frac.denominator == 1 and sp_frac <= 0)
        or sp_frac in set(model.zeta_poles())
    ):
        raise PoleError(
            f"shifted argument {float(sp_frac)} sits on a gamma/zeta_N pole: "
            "the expansion needs a regulator here"
        )

    sp = float(s) - float(shift)
    sub_order = float(order) - 1.0
    if geom.B == 0.0:
        fx = expand_f0(model, sp, sub_order)
    else:
        fx = expand_f(model, sp, geom.B, sub_order)
    scale = 4.0 * _prefactor(geom.d) / sf.gamma(float(s))
    terms = []
    for t in fx.terms:
        if t.power == 0.0:
            # This is the f ladder's beta^0 entry -Gamma(s')zeta_N(s')/4; it
            # cancels the explicit boundary term, so neither is emitted.
            continue
        terms.append(
            ExpansionTerm(t.power + 1.0, t.const_coeff * scale, t.log_coeff * scale)
        )
    remainder = fx.remainder_power
    if remainder is not None and remainder != math.inf:
        remainder = remainder + 1.0
    return Expansion(
        family="product_zeta",
        case_tag=fx.case_tag,
        params=params,
        terms=tuple(terms),
        max_power=fx.max_power + 1.0,
        remainder_power=remainder,
    )


# ---------------------------------------------------------------------------
# Gaussian (theta) resummation self-test
# ---------------------------------------------------------------------------


def poisson_check(t: float, beta: float, B: float = 0.0) -> Tuple[float, float]:
    """Both sides of the Gaussian resummation identity.

    lhs = sum_{m in Z} exp(-t pi^2 (m+B)^2 / beta^2)
    rhs = beta/sqrt(pi t) * sum_{k in Z} exp(-k^2 beta^2 / t) cos(2 pi k B)

    Returns (lhs, rhs); both are summed to machine precision so the caller can
    assert their agreement.
    """
    t = float(t)
    beta = float(beta)
    B = float(B)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be positive and finite, got {t}")
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive and finite, got {beta}")
    if not (0.0 <= B < 1.0):
        raise DomainError(f"B must lie in [0, 1), got {B}")

    a = t * math.pi ** 2 / beta ** 2
    m_max = int(math.sqrt(745.0 / a)) + 2
    lhs = math.fsum(
        math.exp(-a * (m + B) ** 2) for m in range(-m_max, m_max + 1)
    )

    b = beta ** 2 / t
    k_max = int(math.sqrt(745.0 / b)) + 2
    fac = beta / math.sqrt(math.pi * t)
    rhs = fac * (
        1.0
        + 2.0
        * math.fsum(
            math.exp(-b * k * k) * math.cos(2.0 * math.pi * k * B)
            for k in range(1, k_max + 1)
        )
    )
    return lhs, rhs


# ---------------------------------------------------------------------------
# Casimir piston
# ---------------------------------------------------------------------------


def piston_zeta(cfg: PistonConfig, s: float, tol: Optional[float] = None) -> EvalResult:
    """Piston-chamber zeta function: -2^{D-3} times the B=1/2 product zeta."""
    base = product_zeta(cfg.geometry, s, tol)
    scale = -(2.0 ** (cfg.D - 3))
    return EvalResult(
        scale * base.value,
        abs(scale) * base.error_estimate,
        base.terms_used,
        "piston_zeta",
    )


def _piston_energy_terms(model: ManifoldModel, D: int, order: float) -> list:
    """Expansion terms (in the chamber length a) of the finite part of E_C.

    E_C(a) = (1/2) zeta_piston(eps - 1/2) splits into pole/eps + finite; the
    finite part is a terminating series over the heat coefficients A_j of N
    (l = 2j - Q, powers a^{l-D}):

      l < D or l-D even:  kappa A_j Gamma((D-l+1)/2) (2^{l-D}-1) zeta(D-l+1)
      l = D:              -kappa A_j sqrt(pi) ln 2          (0*inf limit)
      l = D+1:            kappa A_j [ln a + gamma + 3 ln 2 - ln 2pi - 1] * a
      l = D+1+2k, k>=1:   kappa A_j (2^{l-D}-1) * 2(-1)^k zeta'(-2k)/k!
                                                        (gamma-pole limit)
    with kappa = 1/(8 pi^{(D+1)/2}).
    """
    q = model.D
    kappa = 1.0 / (8.0 * math.pi ** ((D + 1) / 2.0))
    ln2 = math.log(2.0)
    j_values = sorted(model.heat_support())
    if not j_values:
        return []
    # Walk the full half-integer grid up to the largest supplied index so a
    # table model with an interior gap fails loudly instead of dropping terms.
    j_max = j_values[-1]
    grid = [Fraction(k, 2) for k in range(0, int(2 * j_max) + 1)]
    terms = []
    for j in grid:
        coeff_a = model.heat_coeff(j)
        if coeff_a == 0.0:
            continue
        ell = int(2 * j - q)
        p = ell - D
        if p > order:
            continue
        if ell == D:
            terms.append(ExpansionTerm(0.0, -kappa * coeff_a * math.sqrt(math.pi) * ln2, 0.0))
        elif ell == D + 1:
            const = kappa * coeff_a * (
                sf.EULER_GAMMA + 3.0 * ln2 - math.log(2.0 * math.pi) - 1.0
            )
            terms.append(ExpansionTerm(1.0, const, kappa * coeff_a))
        elif p > 1 and p % 2 == 1:
            k = (p - 1) // 2
            limit = 2.0 * ((-1.0) ** k) * sf.riemann_zeta_deriv(-2.0 * k) / math.factorial(k)
            const = kappa * coeff_a * (2.0 ** p - 1.0) * limit
            terms.append(ExpansionTerm(float(p), const, 0.0))
        else:
            const = (
                kappa
                * coeff_a
                * sf.gamma((D - ell + 1) / 2.0)
                * (2.0 ** p - 1.0)
                * sf.riemann_zeta(float(D - ell + 1))
            )
            terms.append(ExpansionTerm(float(p), const, 0.0))
    terms.sort(key=lambda t: t.power)
    return terms


def casimir_energy(cfg: PistonConfig) -> Tuple[float, float]:
    """Split the first-chamber Casimir energy into (pole_coeff, finite_part).

    E_C(eps) = pole_coeff/eps + finite_part + O(eps) with
    pole_coeff = beta * A_{(Q+D+1)/2} / (16 pi^{(D+1)/2}). For closed-form
    models the finite series terminates and is exact; a table model must
    supply heat coefficients up to index (Q+D+1)/2 or WindowError is raised.
    """
    geo = cfg.geometry
    model = geo.model
    D = cfg.D
    q = model.D
    pole_a = model.heat_coeff(Fraction(q + D + 1, 2))
    pole_coeff = geo.beta * pole_a / (16.0 * math.pi ** ((D + 1) / 2.0))
    terms = _piston_energy_terms(model, D, math.inf)
    beta = geo.beta
    lb = math.log(beta)
    finite = math.fsum(
        (t.const_coeff + t.log_coeff * lb) * beta ** t.power for t in terms
    )
    return pole_coeff, finite


def casimir_force(cfg: PistonConfig, order: float = 16.0) -> float:
    """Casimir force on the piston from the two-chamber finite energy.

    F(beta) = -d/dbeta [E_fin(beta) + E_fin(L-beta)] assembled term by term
    from the finite-energy expansion; the construction is antisymmetric under
    beta <-> L-beta by inspection. The divergent pole parts of the two
    chambers add up to a length-independent constant and exert no force.
    """
    geo = cfg.geometry
    terms = _piston_energy_terms(geo.model, cfg.D, float(order) + 1.0)
    beta = geo.beta
    other = cfg.L - beta
    pieces = []
    for t in terms:
        p = t.power
        base = t.const_coeff * p + t.log_coeff
        pieces.append(base * (other ** (p - 1.0) - beta ** (p - 1.0)))
        if t.log_coeff != 0.0 and p != 0.0:
            pieces.append(
                t.log_coeff
                * p
                * (other ** (p - 1.0) * math.log(other) - beta ** (p - 1.0) * math.log(beta))
            )
    return math.fsum(pieces)


# ---------------------------------------------------------------------------
# Compactified lambda phi^4 mass series
# ---------------------------------------------------------------------------


def _check_mass_args(m: float, L: float, D: int) -> Tuple[float, float, int]:
    m = float(m)
    L = float(L)
    if not (m > 0.0 and math.isfinite(m)):
        raise DomainError(f"m must be positive and finite, got {m}")
    if not (L > 0.0 and math.isfinite(L)):
        raise DomainError(f"L must be positive and finite, got {L}")
    if D != int(D) or int(D) < 2:
        raise DomainError(f"D must be an integer >= 2, got {D}")
    return m, L, int(D)


def mass_sum(m: float, L: float, D: int, tol: Optional[float] = None) -> EvalResult:
    """Direct evaluation of S(m) = sum_{n>=1} (m/(nL))^{D/2-1} K_{D/2-1}(nLm).

    Independent single loop over n (no reuse of the h0 summation path) so it
    can serve as an oracle for the h0-based identity S(2 beta/L) =
    (2/L^2)^{D/2-1} beta^{D-2} h0(1-D/2, beta).
    """
    m, L, D = _check_mass_args(m, L, D)
    if tol is None:
        tol = DEFAULT_TOL
    tol = float(tol)
    if not (0.0 < tol < 1.0):
        raise DomainError(f"tol must lie in (0, 1), got {tol}")
    nu = 0.5 * D - 1.0
    x = L * m
    rho = math.exp(-x) if x > 1e-300 else 0.0
    pieces = []
    running = 0.0  # all terms are positive, so a plain running sum is a safe gate
    small = 0
    term = 0.0
    n = 0
    while n < 10_000_000:
        n += 1
        term = (m / (n * L)) ** nu * sf.bessel_k(nu, n * x)
        pieces.append(term)
        running += term
        if abs(term) < tol * max(1.0, abs(running)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    err = 2.0 * abs(term) * rho / (1.0 - rho) if rho < 1.0 else abs(term)
    return EvalResult(math.fsum(pieces), err, n, "mass_sum")


def mass_expansion(m: float, L: float, D: int, order: float) -> Expansion:
    """Small-m expansion of S(m), transformed from expand_h0(1 - D/2).

    Each h0 term (c + lam*ln beta) beta^p maps, via beta = mL/2, to
    (2/L^2)^{D/2-1} (L/2)^{p+D-2} [c + lam*ln(L/2) + lam*ln m] m^{p+D-2};
    powers are powers of m and the log channel is ln m.
    """
    m, L, D = _check_mass_args(m, L, D)
    s0 = 1.0 - 0.5 * D
    sub_order = float(order) - (D - 2)
    hx = expand_h0(s0, sub_order)
    pref = (2.0 / L ** 2) ** (0.5 * D - 1.0)
    ln_l2 = math.log(0.5 * L)
    terms = []
    for t in hx.terms:
        power = t.power + (D - 2)
        factor = pref * (0.5 * L) ** power
        const = factor * (t.const_coeff + t.log_coeff * ln_l2)
        logc = factor * t.log_coeff
        terms.append(ExpansionTerm(power, const, logc))
    remainder = hx.remainder_power
    if remainder is not None and remainder != math.inf:
        remainder = remainder + (D - 2)
    return Expansion(
        family="mass_series",
        case_tag=hx.case_tag,
        params={"family": "mass_series", "m": m, "L": L, "D": D},
        terms=tuple(terms),
        max_power=hx.max_power + (D - 2),
        remainder_power=remainder,
    )
