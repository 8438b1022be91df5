"""Lower/upper incomplete MGFs of the fading family, with s-derivatives.

Closed forms by canonical kind:

  kappa = 0        gamma law; regularized incomplete gammas.
  m = inf          LOS without shadowing; Marcum Q of real order mu.
  finite m > 0     Humbert Phi2 form, evaluated through the positive-term
                   reduced series in log space.

A generic numerical route through the inverse Laplace transform of
M(s - p) / p is available for arbitrary user-supplied MGFs and doubles as an
independent cross-check of the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sp

from .errors import AccuracyError, DomainError
from . import laplace
from .fading import FadingModel, mgf, pdf, smallest_pole, _canonical_params
from .specfun import (
    AccuracyBudget,
    DEFAULT_ACCURACY,
    marcum_p,
    marcum_q,
    _log_reg_upper_gamma,
    _phi2_unit_first_log,
)

__all__ = [
    "ImgfQuery",
    "imgf_lower",
    "imgf_upper",
    "imgf_deriv_s",
    "imgf_generic",
    "evaluate",
    "MAX_DERIV_ORDER",
]

MAX_DERIV_ORDER = 12


@dataclass(frozen=True)
class ImgfQuery:
    """One IMGF evaluation point: transform argument s (1/SNR units),
    truncation zeta (SNR units), tail selector, derivative order."""

    s: float
    zeta: float
    tail: str = "lower"
    deriv_order: int = 0
    acc: AccuracyBudget = DEFAULT_ACCURACY

    def __post_init__(self):
        if self.zeta < 0:
            raise DomainError("zeta must be nonnegative")
        if self.tail not in ("lower", "upper"):
            raise DomainError(f"tail must be 'lower' or 'upper', got {self.tail!r}")
        if not 0 <= self.deriv_order <= MAX_DERIV_ORDER:
            raise DomainError(f"derivative order must be in [0, {MAX_DERIV_ORDER}]")


def _log_imgf_lower(model: FadingModel, s: float, zeta: float, acc: AccuracyBudget) -> float:
    """log of the lower IMGF; -inf when the mass underflows entirely."""
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if s >= a:
        raise DomainError(
            f"lower IMGF closed form requires s < {a} (LOS-free decay rate); got s={s}"
        )
    if kappa == 0.0:
        p = sp.gammainc(mu, (a - s) * zeta)
        base = -mu * math.log1p(-s / a)
        if p > 0.0:
            return base + math.log(float(p))
        return base + (mu * math.log((a - s) * zeta) - (a - s) * zeta
                       - math.lgamma(mu + 1.0))
    if math.isinf(m):
        p = marcum_p(mu, math.sqrt(2.0 * kappa * mu * a / (a - s)),
                     math.sqrt(2.0 * (a - s) * zeta), acc)
        log_mgf = mu * math.log(a / (a - s)) + kappa * mu * s / (a - s)
        if p > 0.0:
            return log_mgf + math.log(p)
        return -math.inf
    log_amp = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(kappa)
               - mu * math.log(gbar) - m * math.log(mu * kappa + m))
    log_phi2 = _phi2_unit_first_log(m, 1.0 + mu, (a - s) * zeta, (a - b) * zeta, acc)
    return log_amp - math.lgamma(mu + 1.0) + mu * math.log(zeta) + log_phi2


def imgf_lower(model: FadingModel, s: float, zeta: float,
               acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Lower IMGF int_0^zeta exp(s x) f(x) dx.

    At s = 0 this is the CDF.  Defined for any real s < mu(1+kappa)/mean_snr
    (for s at or beyond that rate the closed forms leave their domain and a
    DomainError is raised).
    """
    if zeta < 0:
        raise DomainError("zeta must be nonnegative")
    if zeta == 0.0:
        return 0.0
    if math.isinf(zeta):
        return mgf(model, s)
    return math.exp(_log_imgf_lower(model, s, zeta, acc))


def _upper_tail_quadrature(model: FadingModel, s: float, zeta: float, k: int,
                           tol: float) -> float:
    if k == 0:
        f = lambda x: pdf(model, x) * math.exp(s * x)  # noqa: E731
    else:
        f = lambda x: (x ** k) * pdf(model, x) * math.exp(s * x)  # noqa: E731
    val, err = integrate.quad(f, zeta, np.inf, epsabs=1e-300,
                              epsrel=max(tol, 1e-12), limit=400)
    return val


def imgf_upper(model: FadingModel, s: float, zeta: float,
               acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Upper IMGF int_zeta^inf exp(s x) f(x) dx = M(s) - lower IMGF.

    Requires s strictly below the smallest MGF pole.  When the subtraction
    would cancel catastrophically (result below 1e-6 of the MGF) the tail is
    recomputed by direct quadrature.
    """
    if zeta < 0:
        raise DomainError("zeta must be nonnegative")
    pole = smallest_pole(model)
    if s >= pole:
        raise DomainError(f"upper IMGF requires s < MGF pole {pole}, got s={s}")
    mv = mgf(model, s)
    if zeta == 0.0:
        return mv
    if math.isinf(zeta):
        return 0.0
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if kappa == 0.0:
        return math.exp(-mu * math.log1p(-s / a)) * float(sp.gammaincc(mu, (a - s) * zeta))
    if math.isinf(m):
        return mv * marcum_q(mu, math.sqrt(2.0 * kappa * mu * a / (a - s)),
                             math.sqrt(2.0 * (a - s) * zeta), acc)
    lower = imgf_lower(model, s, zeta, acc)
    diff = mv - lower
    if diff < 1e-6 * mv:
        return _upper_tail_quadrature(model, s, zeta, 0, acc.rel_tol)
    return diff


# ---------------------------------------------------------------------------
# s-derivatives through the gamma-scale mixture
# ---------------------------------------------------------------------------

def _deriv_log_series(model: FadingModel, s: float, zeta: float, k: int,
                      tail: str, acc: AccuracyBudget) -> float:
    """log of exp(-s*zeta) * d^k/ds^k IMGF_tail(s, zeta).

    The canonical density is a gamma-scale mixture
    f = sum_n w_n Gamma(mu + n, 1/a), so the truncated k-th moment transform
    is a positive series of incomplete gamma tails:

        d^k/ds^k M^u(s, z)
          = sum_n w_n (mu+n)_k a^(mu+n) (a-s)^-(mu+n+k) Q(mu+n+k, (a-s) z).

    The exp(-s*zeta) prefolding keeps every factor representable when s*zeta
    is large (the consumer reapplies the exact opposite factor).  Converges
    for s < smallest pole; for the lower tail P replaces Q.
    """
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if not s < b:
        raise DomainError(f"derivative series requires s < {b}, got s={s}")
    x = (a - s) * zeta
    use_upper = tail == "upper"
    shift = -s * zeta

    if kappa == 0.0:
        logt = (sp.gammaln(mu + k) - sp.gammaln(mu) + mu * math.log(a)
                - (mu + k) * math.log(a - s))
        if use_upper:
            if zeta == 0.0:
                return logt + shift
            return logt + shift + _log_reg_upper_gamma(mu + k, x)
        p = sp.gammainc(mu + k, x)
        if p <= 0.0:
            return -math.inf
        return logt + shift + math.log(float(p))

    if math.isinf(m):
        lam = kappa * mu
        def log_w(n):
            return n * math.log(lam) - lam - sp.gammaln(n + 1.0)
        def ratio_w(n):
            return lam / (n + 1.0)
    else:
        theta = mu * kappa / (mu * kappa + m)
        log_theta = math.log(theta)
        def log_w(n):
            return (sp.gammaln(m + n) - math.lgamma(m) - sp.gammaln(n + 1.0)
                    + n * log_theta + m * math.log1p(-theta))
        def ratio_w(n):
            return theta * (m + n) / (n + 1.0)

    block = 256
    total = 0.0
    anchor = -math.inf
    n0 = 0
    while n0 < acc.max_terms:
        n = np.arange(n0, n0 + block, dtype=float)
        logt = (log_w(n) + sp.gammaln(mu + n + k) - sp.gammaln(mu + n)
                + (mu + n) * math.log(a) - (mu + n + k) * math.log(a - s) + shift)
        if zeta > 0.0:
            if use_upper:
                reg = sp.gammaincc(mu + n + k, x)
                if np.all(reg > 0.0):
                    logr = np.log(reg)
                else:
                    logr = np.array([_log_reg_upper_gamma(mu + v + k, x) for v in n])
            else:
                reg = sp.gammainc(mu + n + k, x)
                with np.errstate(divide="ignore"):
                    logr = np.log(reg)
            logt = logt + logr
        m_blk = float(np.max(logt))
        if m_blk > -math.inf:
            if m_blk > anchor:
                if anchor > -math.inf:
                    total *= math.exp(anchor - m_blk)
                anchor = m_blk
            total += float(np.exp(logt - anchor).sum())
        n0 += block
        ratio = ratio_w(float(n0)) * (a / (a - s)) * (mu + n0 + k) / (mu + n0)
        if total > 0.0 and ratio < 1.0:
            last = math.exp(logt[-1] - anchor) if np.isfinite(logt[-1]) else 0.0
            if last / (1.0 - ratio) <= acc.rel_tol * total:
                return anchor + math.log(total)
        if total == 0.0 and m_blk == -math.inf and n0 >= 4 * block:
            return -math.inf
    raise AccuracyError(
        f"derivative series did not converge within {acc.max_terms} terms "
        f"(s={s}, zeta={zeta}, k={k})"
    )


def imgf_deriv_s(model: FadingModel, s: float, zeta: float, k: int,
                 tail: str = "upper", acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """k-th partial s-derivative of the selected IMGF tail.

    Equals the truncated moment transform int x^k exp(s x) f(x) dx over the
    tail interval.  k = 0 returns the plain IMGF.  Orders above
    MAX_DERIV_ORDER are rejected.
    """
    if not 0 <= k <= MAX_DERIV_ORDER:
        raise DomainError(f"derivative order must be in [0, {MAX_DERIV_ORDER}], got {k}")
    if tail not in ("lower", "upper"):
        raise DomainError(f"tail must be 'lower' or 'upper', got {tail!r}")
    if zeta < 0:
        raise DomainError("zeta must be nonnegative")
    if math.isinf(zeta):
        if tail == "upper":
            return 0.0
        # full transform: same as the upper tail truncated at zero
        zeta, tail = 0.0, "upper"
    if k == 0:
        return imgf_lower(model, s, zeta, acc) if tail == "lower" else imgf_upper(model, s, zeta, acc)
    b = smallest_pole(model)
    if tail == "upper" and not s < b:
        raise DomainError(f"upper-tail derivatives require s < MGF pole {b}")
    if tail == "lower":
        if zeta == 0.0:
            return 0.0
        if not s < b:
            # beyond the pole only the finite integral exists; integrate directly
            f = lambda x: (x ** k) * pdf(model, x) * math.exp(s * x)  # noqa: E731
            val, _ = integrate.quad(f, 0.0, zeta, epsabs=1e-300,
                                    epsrel=max(acc.rel_tol, 1e-12), limit=400)
            return val
    log_val = _deriv_log_series(model, s, zeta, k, tail, acc)
    if log_val == -math.inf:
        return 0.0
    return math.exp(log_val + s * zeta)


def _deriv_log_scaled(model: FadingModel, s: float, zeta: float, k: int,
                      acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """log of int_zeta^inf x^k exp(s (x - zeta)) f(x) dx  (upper tail,
    prescaled by exp(-s*zeta)); overflow-free building block for weighted
    sums with exp(+s*zeta)-sized outer factors."""
    return _deriv_log_series(model, s, zeta, k, "upper", acc)


def imgf_generic(mgf_image: laplace.LaplaceImage, s: float, zeta: float,
                 cfg: laplace.InversionConfig = laplace.InversionConfig()) -> float:
    """Model-agnostic lower IMGF for any MGF supplied as a Laplace image.

    Delegates to the numerical inversion of M(s - p) / p at t = zeta; see
    laplace.imgf_lower_numeric for the contract.
    """
    return laplace.imgf_lower_numeric(mgf_image, s, zeta, cfg)


def imgf_lower_eta_mu_direct(eta: float, mu: float, mean_snr: float, s: float,
                             zeta: float, acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Lower IMGF of the eta-mu law (format 1) evaluated from its own closed
    form rather than through canonicalization; retained as an independent
    cross-check of the parameter mapping."""
    if zeta < 0:
        raise DomainError("zeta must be nonnegative")
    if zeta == 0.0:
        return 0.0
    if eta > 1.0:
        eta = 1.0 / eta
    h1 = mu * (1.0 + eta) / (eta * mean_snr)   # faster decay rate
    h2 = mu * (1.0 + eta) / mean_snr
    if s >= h1:
        raise DomainError(f"eta-mu closed form requires s < {h1}")
    log_pref = ((2.0 * mu - 1.0) * math.log(mu) - math.log(2.0) - math.lgamma(2.0 * mu)
                - 2.0 * mu * math.log(mean_snr)
                + mu * math.log((1.0 + eta) ** 2 / eta) + 2.0 * mu * math.log(zeta))
    log_phi2 = _phi2_unit_first_log(mu, 2.0 * mu + 1.0, (h1 - s) * zeta,
                                    (h1 - h2) * zeta, acc)
    return math.exp(log_pref + log_phi2)


def evaluate(model: FadingModel, query: ImgfQuery) -> float:
    """Dispatch a single ImgfQuery."""
    if query.deriv_order == 0:
        if query.tail == "lower":
            return imgf_lower(model, query.s, query.zeta, query.acc)
        return imgf_upper(model, query.s, query.zeta, query.acc)
    return imgf_deriv_s(model, query.s, query.zeta, query.deriv_order,
                        query.tail, query.acc)
