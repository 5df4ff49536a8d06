"""Direct summation of the Bessel-function series (the ground-truth path).

Every series here converges for all real order parameters thanks to the
exponential decay of K_nu at large argument; these routines sum the terms
outright with a conservative stopping rule and report a tail estimate. They
are the oracles against which the small-argument expansions are tested, and
they deliberately do nothing clever: no acceleration, no resummation.

Families (B is the phase in cos(2*pi*m*B)):

* h(s, beta, B)  = sum_{m>=1} cos(2 pi m B) (m beta)^s K_s(2 m beta)
* h0(s, beta)    = h(s, beta, 0)
* g(d, s, beta)  = sum over the punctured Z^d lattice of
                   (beta/|n|)^s K_s(2 |n| beta), grouped into shells |n|^2 = k
* f(model, s, beta, B) = sum_n mult_n sum_m (m beta/alpha_n)^s cos(2 pi m B)
                   K_s(2 alpha_n m beta)

Stopping rule (uniform across families): terminate once three consecutive
term envelopes fall below tol * max(1, |partial|) * (1 - e^{-2 beta}); the
geometric factor converts a term bound into a tail bound via the e^{-2 beta m}
decay envelope. Past the envelope's turnover the term magnitudes must decrease
monotonically; a violation raises ArithmeticError since it signals a numerical
problem rather than a slowly converging sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun as sf
from .errors import DomainError
from .manifolds import ManifoldModel, TableModel

__all__ = [
    "DEFAULT_TOL",
    "SeriesParams",
    "EvalResult",
    "sum_h",
    "sum_h0",
    "sum_g",
    "sum_f",
]

DEFAULT_TOL = 1e-12

_MAX_TERMS = 10_000_000


@dataclass(frozen=True)
class SeriesParams:
    """One series instance: order s, scale beta > 0, phase B in [0, 1).

    d (lattice dimension) applies to the g family; model applies to f.
    """

    s: float
    beta: float
    B: float = 0.0
    d: Optional[int] = None
    model: Optional[ManifoldModel] = None

    def __post_init__(self):
        if not (math.isfinite(self.s)):
            raise DomainError(f"s must be finite, got {self.s}")
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not (0.0 <= self.B < 1.0):
            raise DomainError(f"B must lie in [0, 1), got {self.B}")
        if self.d is not None and (self.d != int(self.d) or int(self.d) < 1):
            raise DomainError(f"lattice dimension d must be a positive integer, got {self.d}")


@dataclass(frozen=True)
class EvalResult:
    """A summed value with a tail estimate and summation diagnostics."""

    value: float
    error_estimate: float
    terms_used: int
    method: str

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "terms_used": self.terms_used,
            "method": self.method,
        }


def _check_tol(tol: Optional[float]) -> float:
    if tol is None:
        return DEFAULT_TOL
    if not (math.isfinite(tol) and tol > 0.0):
        raise DomainError(f"tol must be positive, got {tol}")
    return tol


def _h_core(s: float, beta: float, B: float, tol: float):
    """Raw sum over m of cos(2 pi m B) (m beta)^s K_s(2 m beta).

    Returns (value, error_estimate, terms_used). The envelope
    (m beta)^s K_s(2 m beta) peaks near m ~ s/(2 beta) for s > 0 and decays
    like e^{-2 beta m} afterwards.
    """
    damp = -math.expm1(-2.0 * beta)
    m_star = 1 if s <= 0.0 else int(s / (2.0 * beta)) + 2
    use_cos = B != 0.0
    total = 0.0
    small = 0
    prev_env = math.inf
    terms = 0
    m0 = 1
    block = 64
    while m0 <= _MAX_TERMS:
        ms = np.arange(m0, m0 + block, dtype=float)
        env = (ms * beta) ** s * sf.bessel_k_many(s, 2.0 * beta * ms)
        vals = env * np.cos((2.0 * math.pi * B) * ms) if use_cos else env
        for i in range(block):
            m = m0 + i
            e = float(env[i])
            if not math.isfinite(e):
                raise ArithmeticError(f"non-finite term at m={m} (s={s}, beta={beta})")
            total += float(vals[i])
            terms += 1
            if m > m_star and e > prev_env * (1.0 + 1e-9) and e > 1e-305:
                raise ArithmeticError(
                    f"term envelope failed to decay at m={m} (s={s}, beta={beta})"
                )
            if e < tol * max(1.0, abs(total)) * damp:
                small += 1
                if small >= 3 and m >= m_star:
                    if prev_env > 0.0 and e > 0.0:
                        rho = min(0.999, e / prev_env)
                    else:
                        rho = math.exp(-2.0 * beta)
                    err = 2.0 * e * rho / (1.0 - rho)
                    return total, err, terms
            else:
                small = 0
            prev_env = e
        m0 += block
        block = min(2 * block, 4096)
    raise ArithmeticError(f"series did not converge within {_MAX_TERMS} terms")


def sum_h(params: SeriesParams, tol: Optional[float] = None) -> EvalResult:
    """Phase-weighted Bessel series h(s, beta, B)."""
    tol = _check_tol(tol)
    value, err, terms = _h_core(params.s, params.beta, params.B, tol)
    return EvalResult(value, err, terms, "direct_h")


def sum_h0(s: float, beta: float, tol: Optional[float] = None) -> EvalResult:
    """Phase-free series h0(s, beta) = h(s, beta, 0)."""
    params = SeriesParams(s=s, beta=beta)
    tol = _check_tol(tol)
    value, err, terms = _h_core(params.s, params.beta, 0.0, tol)
    return EvalResult(value, err, terms, "direct_h0")


def sum_g(d: int, s: float, beta: float, tol: Optional[float] = None) -> EvalResult:
    """Punctured-lattice series g(d; s, beta), summed over shells |n|^2 = k."""
    params = SeriesParams(s=s, beta=beta, d=d)
    tol = _check_tol(tol)
    d = int(d)
    damp = -math.expm1(-2.0 * beta)
    # Shell kernel (beta/sqrt(k))^s K_s(2 sqrt(k) beta) decays monotonically in
    # k once sqrt(k) exceeds |s|/(2 beta); the representation counts r_d(k)
    # fluctuate, so the monotone assertion applies to the kernel alone.
    alpha_star = abs(s) / (2.0 * beta) + 1.0
    total = 0.0
    small = 0
    prev_kernel = math.inf
    terms = 0
    k0 = 1
    chunk = 512
    kmax = 512
    shells = sf.lattice_shell_counts(d, kmax)
    while terms < _MAX_TERMS:
        k1 = k0 + chunk
        if k1 - 1 > kmax:
            kmax = max(2 * kmax, k1 - 1)
            shells = sf.lattice_shell_counts(d, kmax)
        ks_all = np.arange(k0, k1)
        rs_all = np.asarray(shells[k0:k1], dtype=float)
        mask = rs_all > 0.0
        ks = ks_all[mask].astype(float)
        rs = rs_all[mask]
        if ks.size:
            alphas = np.sqrt(ks)
            kernels = (beta / alphas) ** s * sf.bessel_k_many(s, 2.0 * beta * alphas)
            for i in range(len(ks)):
                kern = float(kernels[i])
                if not math.isfinite(kern):
                    raise ArithmeticError(
                        f"non-finite shell term at k={int(ks[i])} (s={s}, beta={beta})"
                    )
                term = float(rs[i]) * kern
                total += term
                terms += 1
                if alphas[i] > alpha_star and kern > prev_kernel * (1.0 + 1e-9) and kern > 1e-305:
                    raise ArithmeticError(
                        f"shell kernel failed to decay at k={int(ks[i])} (s={s}, beta={beta})"
                    )
                if term < tol * max(1.0, abs(total)) * damp:
                    small += 1
                    if small >= 3 and alphas[i] >= alpha_star:
                        if prev_kernel > 0.0 and kern > 0.0:
                            rho = min(0.999, kern / prev_kernel)
                        else:
                            rho = math.exp(-2.0 * beta)
                        err = 4.0 * term * rho / (1.0 - rho)
                        return EvalResult(total, err, terms, "direct_g")
                else:
                    small = 0
                prev_kernel = kern
        k0 = k1
        chunk = min(2 * chunk, 32768)
    raise ArithmeticError(f"series did not converge within {_MAX_TERMS} shells")


def sum_f(
    model: ManifoldModel,
    s: float,
    beta: float,
    B: float,
    tol: Optional[float] = None,
) -> EvalResult:
    """Double series f over model eigenvalues alpha_n and integers m.

    Written as sum_n mult_n alpha_n^{-2s} h(s, alpha_n beta, B): the inner
    m-sum reuses the h machinery at scale alpha_n * beta. The outer loop stops
    when the inner sums fall below the e^{-2 alpha_n beta} envelope; for a
    TableModel that exhausts its finite list first, a geometric tail estimate
    for the missing eigenvalues is added to the error.
    """
    params = SeriesParams(s=s, beta=beta, B=B, model=model)
    tol = _check_tol(tol)
    if not isinstance(model, ManifoldModel):
        raise DomainError(f"model must be a ManifoldModel, got {type(model).__name__}")
    damp = -math.expm1(-2.0 * beta)
    alpha_star = (abs(s) + 2.0) / (2.0 * beta)
    total = 0.0
    err = 0.0
    small = 0
    terms = 0
    prev_kernel = math.inf
    prev_alpha = None
    last_gap = None
    last_env = 0.0
    stopped = False
    for alpha, mult in model.eigenvalues():
        b = alpha * beta
        inner_val, inner_err, inner_terms = _h_core(s, b, B, tol)
        total += mult * alpha ** (-2.0 * s) * inner_val
        err += mult * alpha ** (-2.0 * s) * inner_err
        terms += inner_terms
        # Multiplicity-free outer envelope: bounds |inner| by the first inner
        # term over the geometric tail factor.
        kernel = alpha ** (-2.0 * s) * float((b) ** s * sf.bessel_k(s, 2.0 * b)) / max(
            -math.expm1(-2.0 * b), 1e-300
        )
        env = mult * kernel
        if not math.isfinite(env):
            raise ArithmeticError(f"non-finite outer term at alpha={alpha}")
        if (
            prev_alpha is not None
            and alpha > alpha_star
            and kernel > prev_kernel * (1.0 + 1e-9)
            and kernel > 1e-305
        ):
            raise ArithmeticError(
                f"outer envelope failed to decay at alpha={alpha} (s={s}, beta={beta})"
            )
        if env < tol * max(1.0, abs(total)) * damp:
            small += 1
            if small >= 3 and alpha >= alpha_star:
                if prev_kernel > 0.0 and kernel > 0.0 and prev_alpha is not None:
                    rho = min(0.999, kernel / prev_kernel)
                else:
                    rho = math.exp(-2.0 * beta)
                err += 4.0 * env * rho / (1.0 - rho)
                stopped = True
                break
        else:
            small = 0
        if prev_alpha is not None:
            last_gap = alpha - prev_alpha
        prev_kernel = kernel
        prev_alpha = alpha
        last_env = env
        if terms >= _MAX_TERMS:
            raise ArithmeticError(f"series did not converge within {_MAX_TERMS} terms")
    if stopped:
        return EvalResult(total, err, terms, "direct_f")
    # Finite spectrum (TableModel) ran out before the stopping rule fired:
    # estimate the tail from the last eigenvalue gap.
    gap = last_gap if last_gap else (prev_alpha if prev_alpha else 1.0)
    rho = min(math.exp(-2.0 * beta * max(gap, 1e-12)), 0.999)
    err += 4.0 * last_env * rho / (1.0 - rho)
    method = "direct_f_truncated" if isinstance(model, TableModel) else "direct_f"
    return EvalResult(total, err, terms, method)
