"""IMGF-based performance metrics: secrecy outage, outage under interference,
capacity with transmitter/receiver side information, and adaptive-modulation
average BER.

The secrecy outage (and its interference-outage twin) reduces to the CDF of
the legitimate link plus a finite, mixture-weighted combination of upper-IMGF
s-derivatives; everything else in this module is bracketing, root finding and
quadrature glue around the incomplete-transform layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import AccuracyError, DomainError
from .fading import FadingModel, mgf, mrc_combine, pdf
from .incomplete import _deriv_log_scaled, imgf_lower, imgf_upper
from .mixture import GammaMixture, mixture_from_model
from .specfun import AccuracyBudget, DEFAULT_ACCURACY

__all__ = [
    "SecrecyScenario",
    "AdaptiveModScheme",
    "CapacityScenario",
    "opsc",
    "spsc",
    "eps_outage_capacity",
    "outage_interference",
    "capacity_side_info",
    "capacity_direct",
    "solve_cutoff",
    "aber_adaptive",
]


@dataclass(frozen=True)
class SecrecyScenario:
    """Wiretap setting: legitimate link (any model), eavesdropper link whose
    canonical form has integer (mu, m) or is a gamma law, target secrecy rate
    in bits/s/Hz, and the eavesdropper's MRC antenna count."""

    bob: FadingModel
    eve: FadingModel
    rate_rs: float = 0.0
    n_eve_antennas: int = 1

    def __post_init__(self):
        if self.rate_rs < 0:
            raise DomainError("secrecy rate must be nonnegative")
        if self.n_eve_antennas < 1:
            raise DomainError("need at least one eavesdropper antenna")
        # validate eve eagerly so misconfigurations fail at construction
        mixture_from_model(mrc_combine(self.eve, self.n_eve_antennas))


@dataclass(frozen=True)
class AdaptiveModScheme:
    """Constellation switching plan: ascending SNR thresholds g_0 < g_1 < ...
    (the last region extends to infinity) and bits per symbol per region."""

    thresholds: tuple
    bits_per_region: tuple

    def __post_init__(self):
        th = tuple(float(t) for t in self.thresholds)
        bits = tuple(int(b) for b in self.bits_per_region)
        object.__setattr__(self, "thresholds", th)
        object.__setattr__(self, "bits_per_region", bits)
        if not th:
            raise DomainError("scheme needs at least one region")
        if len(bits) != len(th):
            raise DomainError("one bits-per-symbol entry per region is required")
        if th[0] < 0 or any(b <= a for a, b in zip(th, th[1:])):
            raise DomainError("thresholds must be nonnegative and strictly ascending")
        if any(b < 1 for b in bits):
            raise DomainError("bits per region must be positive integers")


@dataclass(frozen=True)
class CapacityScenario:
    channel: FadingModel
    cutoff_snr: float | None = None  # solved from the power constraint if absent

    def __post_init__(self):
        if self.cutoff_snr is not None and not self.cutoff_snr > 0:
            raise DomainError("cutoff SNR must be positive")


def _clamp_probability(p: float, where: str, tol: float = 1e-8) -> float:
    if p < -tol or p > 1.0 + tol:
        raise AccuracyError(f"{where} produced {p!r}, outside [0,1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def _outage_core(bob: FadingModel, eve_mixture: GammaMixture, alpha: float,
                 scale: float, acc: AccuracyBudget) -> float:
    """Pr{gamma_b <= alpha + scale * gamma_e} for a mixture-form eavesdropper.

    Expanding the eavesdropper CDF termwise turns the probability into

      F_b(alpha) + sum_i C_i sum_{k<m_i} W_ik * int_alpha^inf x^k
                                      exp(-beta_i (x - alpha)) f_b(x) dx,

    with beta_i = 1 / (scale * Omega_i) and polynomial weights
    W_ik = beta_i^k / k! * sum_{d <= m_i-1-k} (-alpha beta_i)^d / d!.
    The integrals are exp(alpha beta_i)-scaled upper-IMGF derivatives, which
    the transform layer provides in that prescaled form directly.
    """
    if alpha < 0:
        raise DomainError("threshold must be nonnegative")
    f_alpha = imgf_lower(bob, 0.0, alpha, acc) if alpha > 0 else 0.0
    total = f_alpha
    cache: dict[tuple[float, int], float] = {}
    for (c_i, omega_i, m_i) in eve_mixture.terms:
        if c_i == 0.0 or m_i <= 0:
            continue
        beta = 1.0 / (scale * omega_i)
        ab = alpha * beta
        # W_k via the partial exponential sums of exp(-alpha*beta)
        term = 1.0
        partial = [1.0]
        for d in range(1, m_i):
            term *= -ab / d
            partial.append(partial[-1] + term)
        bk = 1.0
        contrib = 0.0
        for k in range(m_i):
            w_k = bk * partial[m_i - 1 - k]
            key = (beta, k)
            if key not in cache:
                cache[key] = math.exp(_deriv_log_scaled(bob, -beta, alpha, k, acc))
            contrib += w_k * cache[key]
            bk *= beta / (k + 1.0)
        total += c_i * contrib
    return _clamp_probability(total, "outage probability")


def opsc(scenario: SecrecyScenario, acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Outage probability of the secrecy capacity, Pr{C_S <= R_S}.

    Exact whenever the (MRC-combined) eavesdropper admits the finite gamma
    mixture; the legitimate link may have any real parameters.  Nondecreasing
    in R_S and in the eavesdropper SNR.
    """
    eve = mrc_combine(scenario.eve, scenario.n_eve_antennas)
    mix = mixture_from_model(eve)
    scale = 2.0 ** scenario.rate_rs
    return _outage_core(scenario.bob, mix, scale - 1.0, scale, acc)


def spsc(scenario: SecrecyScenario, acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Outage probability of strictly positive secrecy capacity (R_S = 0)."""
    return opsc(replace(scenario, rate_rs=0.0), acc)


def eps_outage_capacity(scenario: SecrecyScenario, epsilon: float,
                        acc: AccuracyBudget = DEFAULT_ACCURACY,
                        rate_tol: float = 1e-9) -> float:
    """Largest secrecy rate whose outage probability stays within epsilon.

    Monotone bisection on R_S; returns 0 when even a zero rate violates the
    epsilon budget.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    sc0 = replace(scenario, rate_rs=0.0)
    if opsc(sc0, acc) > epsilon:
        return 0.0
    lo, hi = 0.0, 1.0
    while opsc(replace(scenario, rate_rs=hi), acc) <= epsilon:
        lo = hi
        hi *= 2.0
        if hi > 2.0 ** 20:
            raise AccuracyError("secrecy-rate bracket expansion failed")
    for _ in range(200):
        if hi - lo <= rate_tol:
            break
        mid = 0.5 * (lo + hi)
        if opsc(replace(scenario, rate_rs=mid), acc) <= epsilon:
            lo = mid
        else:
            hi = mid
    else:
        raise AccuracyError("epsilon-outage bisection did not converge")
    return lo


def outage_interference(desired: FadingModel, interference: FadingModel,
                        gamma_th: float, acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Outage probability with interference and background noise,
    Pr{gamma_d <= gamma_th + (1 + gamma_th) * gamma_i}.

    Shares its implementation with the secrecy outage: the two problems are
    the same computation under threshold <-> rate substitution
    gamma_th = 2^R_S - 1, so equal inputs give bit-identical outputs.
    """
    if gamma_th < 0:
        raise DomainError("threshold must be nonnegative")
    mix = mixture_from_model(interference)
    return _outage_core(desired, mix, gamma_th, gamma_th + 1.0, acc)


# ---------------------------------------------------------------------------
# capacity with side information at TX and RX
# ---------------------------------------------------------------------------

def solve_cutoff(channel: FadingModel, acc: AccuracyBudget = DEFAULT_ACCURACY,
                 residual_tol: float = 1e-10) -> float:
    """Cutoff SNR of the water-filling power constraint,

        int_g0^inf (1/g0 - 1/g) f(g) dg = 1,

    solved by bisection on (0, 1]; the residual at the returned root is below
    residual_tol."""
    def residual(g0: float) -> float:
        tail = imgf_upper(channel, 0.0, g0, acc)
        inv_mean, _ = integrate.quad(lambda g: pdf(channel, g) / g, g0, np.inf,
                                     epsabs=1e-13, epsrel=1e-11, limit=400)
        return tail / g0 - inv_mean - 1.0

    lo, hi = 1e-9, 1.0
    r_lo = residual(lo)
    if r_lo < 0:
        raise AccuracyError("cutoff bracket failed at the lower end")
    best = None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        best = mid
        if abs(r) <= residual_tol:
            return mid
        if r > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 * max(1.0, hi):
            break
    raise AccuracyError(f"cutoff bisection stalled at {best} without meeting the residual")


def _cutoff(scenario: CapacityScenario, acc: AccuracyBudget) -> float:
    if scenario.cutoff_snr is not None:
        return scenario.cutoff_snr
    return solve_cutoff(scenario.channel, acc)


def capacity_side_info(scenario: CapacityScenario,
                       acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Ergodic capacity (bits/s/Hz, unit bandwidth) with optimal rate and
    power adaptation, through the exponential-integral transform of the
    upper IMGF:

        C = (1/ln 2) int_0^inf Ei(-x) e^x Psi(x, g0) dx,
        Psi = M_u(-x/g0, g0) - (1/g0) dM_u/ds |_(s=-x/g0, z=g0).

    The e^x factor is folded into the prescaled IMGF derivatives, so the
    integrand stays bounded for large x.  Agrees with the direct
    log-quadrature route (capacity_direct) to the quadrature tolerance.
    """
    from scipy.special import expi

    model = scenario.channel
    g0 = _cutoff(scenario, acc)

    def integrand(x: float) -> float:
        if x == 0.0:
            return 0.0
        s = -x / g0
        d0 = math.exp(_deriv_log_scaled(model, s, g0, 0, acc))
        d1 = math.exp(_deriv_log_scaled(model, s, g0, 1, acc))
        return float(expi(-x)) * (d0 - d1 / g0)

    head, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10,
                             limit=300)
    tail, _ = integrate.quad(integrand, 1.0, np.inf, epsabs=1e-13, epsrel=1e-10,
                             limit=300)
    c = (head + tail) / math.log(2.0)
    if c < -1e-9:
        raise AccuracyError(f"capacity integral came out negative: {c}")
    return max(c, 0.0)


def capacity_direct(scenario: CapacityScenario,
                    acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Same capacity by direct quadrature of log2(g / g0) over the tail;
    the independent cross-check route."""
    model = scenario.channel
    g0 = _cutoff(scenario, acc)
    val, _ = integrate.quad(lambda g: math.log(g / g0) * pdf(model, g),
                            g0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)
    return val / math.log(2.0)


# ---------------------------------------------------------------------------
# adaptive modulation
# ---------------------------------------------------------------------------

def aber_adaptive(channel: FadingModel, scheme: AdaptiveModScheme,
                  acc: AccuracyBudget = DEFAULT_ACCURACY) -> float:
    """Average BER of constellation-switching M-QAM under the exponential
    instantaneous-BER approximation 0.2 exp(-1.5 g / (2^k - 1)).

    Each region contributes the increment of the lower IMGF over its SNR
    span; the denominator is the bit-weighted occupation probability (the
    average spectral efficiency).  Result lies in [0, 0.2].
    """
    th = scheme.thresholds
    bits = scheme.bits_per_region
    edges = list(th) + [math.inf]
    num = 0.0
    den = 0.0
    for j, k in enumerate(bits):
        lo, hi = edges[j], edges[j + 1]
        s_j = -1.5 / (2.0 ** k - 1.0)
        upper_l = mgf(channel, s_j) if math.isinf(hi) else imgf_lower(channel, s_j, hi, acc)
        lower_l = imgf_lower(channel, s_j, lo, acc) if lo > 0 else 0.0
        upper_f = 1.0 if math.isinf(hi) else imgf_lower(channel, 0.0, hi, acc)
        lower_f = imgf_lower(channel, 0.0, lo, acc) if lo > 0 else 0.0
        num += k * (upper_l - lower_l)
        den += k * (upper_f - lower_f)
    if den <= 0.0:
        raise DomainError("no probability mass falls in any transmission region")
    val = 0.2 * num / den
    if val < -1e-10 or val > 0.2 + 1e-10:
        raise AccuracyError(f"adaptive-modulation BER left [0, 0.2]: {val}")
    return min(max(val, 0.0), 0.2)
