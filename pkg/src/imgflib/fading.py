"""The kappa-mu shadowed SNR distribution family and its special cases.

Every supported model canonicalizes to a kappa-mu shadowed parameter set
(kappa, mu, m, mean_snr), where m = inf marks the unshadowed limit and
kappa = 0 collapses to a gamma (Nakagami-m power) law.  PDFs, CDFs, MGFs,
pole locations and a reproducible sampler all operate on the canonical form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np
from scipy import special as sp

from .errors import DomainError
from .laplace import LaplaceImage
from .specfun import _log_hyp1f1_pos

__all__ = [
    "Kind",
    "FadingModel",
    "MgfFactorization",
    "canonicalize",
    "mrc_combine",
    "smallest_pole",
    "mgf",
    "mgf_factorization",
    "pdf",
    "cdf",
    "cdf_grid",
    "sample",
    "laplace_image",
    "model_from_json",
    "model_to_json",
    "db_to_linear",
    "linear_to_db",
]


class Kind(str, Enum):
    KAPPA_MU_SHADOWED = "kappa-mu-shadowed"
    RICIAN_SHADOWED = "rician-shadowed"
    KAPPA_MU = "kappa-mu"
    ETA_MU = "eta-mu"
    RICIAN = "rician"
    NAKAGAMI_M = "nakagami-m"
    HOYT = "hoyt"
    RAYLEIGH = "rayleigh"
    ONE_SIDED_GAUSSIAN = "one-sided-gaussian"


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


_REQUIRED_FIELDS = {
    Kind.KAPPA_MU_SHADOWED: ("kappa", "mu", "m"),
    Kind.RICIAN_SHADOWED: ("K", "m"),
    Kind.KAPPA_MU: ("kappa", "mu"),
    Kind.ETA_MU: ("eta", "mu"),
    Kind.RICIAN: ("K",),
    Kind.NAKAGAMI_M: ("m",),
    Kind.HOYT: ("q",),
    Kind.RAYLEIGH: (),
    Kind.ONE_SIDED_GAUSSIAN: (),
}


@dataclass(frozen=True)
class FadingModel:
    """One distribution of the kappa-mu shadowed family with a mean SNR.

    Only the parameters meaningful for ``kind`` may be set.  mean_snr is in
    linear SNR units; dB conversion happens at the interface boundary only.
    """

    kind: Kind
    mean_snr: float
    kappa: float | None = None
    mu: float | None = None
    m: float | None = None
    eta: float | None = None
    K: float | None = None
    q: float | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.mean_snr > 0:
            raise DomainError(f"mean_snr must be positive, got {self.mean_snr}")
        required = _REQUIRED_FIELDS[kind]
        for name in required:
            if getattr(self, name) is None:
                raise DomainError(f"{kind.value} model requires parameter {name!r}")
        for name in ("kappa", "mu", "m", "eta", "K", "q"):
            if name not in required and getattr(self, name) is not None:
                raise DomainError(f"parameter {name!r} is not meaningful for {kind.value}")
        if self.kappa is not None and self.kappa < 0:
            raise DomainError("kappa must be nonnegative")
        if self.K is not None and self.K < 0:
            raise DomainError("K must be nonnegative")
        if self.mu is not None and not self.mu > 0:
            raise DomainError("mu must be positive")
        if self.m is not None and not self.m > 0:
            raise DomainError("m must be positive")
        if self.eta is not None and not self.eta > 0:
            raise DomainError("eta must be positive (format 1)")
        if self.q is not None and not 0 < self.q <= 1:
            raise DomainError("Hoyt q must lie in (0, 1]")

    # convenience constructors -------------------------------------------------
    @classmethod
    def kappa_mu_shadowed(cls, kappa, mu, m, mean_snr):
        return cls(Kind.KAPPA_MU_SHADOWED, mean_snr, kappa=kappa, mu=mu, m=m)

    @classmethod
    def rician_shadowed(cls, K, m, mean_snr):
        return cls(Kind.RICIAN_SHADOWED, mean_snr, K=K, m=m)

    @classmethod
    def kappa_mu(cls, kappa, mu, mean_snr):
        return cls(Kind.KAPPA_MU, mean_snr, kappa=kappa, mu=mu)

    @classmethod
    def eta_mu(cls, eta, mu, mean_snr):
        return cls(Kind.ETA_MU, mean_snr, eta=eta, mu=mu)

    @classmethod
    def rician(cls, K, mean_snr):
        return cls(Kind.RICIAN, mean_snr, K=K)

    @classmethod
    def nakagami(cls, m, mean_snr):
        return cls(Kind.NAKAGAMI_M, mean_snr, m=m)

    @classmethod
    def hoyt(cls, q, mean_snr):
        return cls(Kind.HOYT, mean_snr, q=q)

    @classmethod
    def rayleigh(cls, mean_snr):
        return cls(Kind.RAYLEIGH, mean_snr)

    @classmethod
    def one_sided_gaussian(cls, mean_snr):
        return cls(Kind.ONE_SIDED_GAUSSIAN, mean_snr)


@dataclass(frozen=True)
class MgfFactorization:
    """MGF written as amplitude * (a - s)^(m - mu) * (b - s)^(-m)."""

    amplitude: float
    a: float
    b: float
    exponent_a: float  # m - mu
    exponent_b: float  # -m

    def __post_init__(self):
        if not (0 < self.b <= self.a):
            raise DomainError("pole ordering 0 < b <= a violated")


def canonicalize(model: FadingModel) -> FadingModel:
    """Equivalent kappa-mu shadowed parameterization (m = inf for unshadowed
    LOS; kappa = 0 for the gamma/Nakagami degeneracies).  Idempotent and
    mean-SNR preserving."""
    k = model.kind
    snr = model.mean_snr
    if k is Kind.KAPPA_MU_SHADOWED:
        return model
    if k is Kind.RICIAN_SHADOWED:
        return FadingModel.kappa_mu_shadowed(model.K, 1.0, model.m, snr)
    if k is Kind.KAPPA_MU:
        return FadingModel.kappa_mu_shadowed(model.kappa, model.mu, math.inf, snr)
    if k is Kind.ETA_MU:
        eta = model.eta
        if eta > 1.0:
            # format-1 law is invariant under swapping in-phase/quadrature powers
            eta = 1.0 / eta
        kappa = (1.0 - eta) / (2.0 * eta)
        return FadingModel.kappa_mu_shadowed(kappa, 2.0 * model.mu, model.mu, snr)
    if k is Kind.RICIAN:
        return FadingModel.kappa_mu_shadowed(model.K, 1.0, math.inf, snr)
    if k is Kind.NAKAGAMI_M:
        return FadingModel.kappa_mu_shadowed(0.0, model.m, math.inf, snr)
    if k is Kind.HOYT:
        return canonicalize(FadingModel.eta_mu(model.q ** 2, 0.5, snr))
    if k is Kind.RAYLEIGH:
        return FadingModel.kappa_mu_shadowed(0.0, 1.0, math.inf, snr)
    if k is Kind.ONE_SIDED_GAUSSIAN:
        return FadingModel.kappa_mu_shadowed(0.0, 0.5, math.inf, snr)
    raise DomainError(f"unhandled kind {k}")


def mrc_combine(model: FadingModel, n_branches: int) -> FadingModel:
    """Distribution of the maximal-ratio-combined SNR of n i.i.d. branches.

    The family is closed under summation of i.i.d. members: mu and m scale
    with the branch count, as does the mean SNR.
    """
    if n_branches < 1:
        raise DomainError("need at least one branch")
    if n_branches == 1:
        return model
    c = canonicalize(model)
    m_eq = c.m if math.isinf(c.m) else n_branches * c.m
    return FadingModel.kappa_mu_shadowed(c.kappa, n_branches * c.mu, m_eq,
                                         n_branches * c.mean_snr)


def _canonical_params(model: FadingModel):
    c = canonicalize(model)
    kappa, mu, m, gbar = c.kappa, c.mu, c.m, c.mean_snr
    a = mu * (1.0 + kappa) / gbar
    if math.isinf(m):
        b = a
    else:
        b = a * m / (mu * kappa + m)
    return kappa, mu, m, gbar, a, b


def smallest_pole(model: FadingModel) -> float:
    """Smallest real singularity of the MGF; M(s) is finite for s < pole."""
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if kappa == 0.0 or math.isinf(m):
        return a
    return b


def _is_mp(z) -> bool:
    return type(z).__module__.split(".")[0] == "mpmath"


def mgf(model: FadingModel, s):
    """MGF E[exp(s * gamma)].  Real s must satisfy s < smallest_pole(model);
    complex (or mpmath) arguments are evaluated on the principal branch."""
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if isinstance(s, complex) or _is_mp(s):
        if _is_mp(s):
            from mpmath import mp
            exp_, log_ = mp.exp, mp.log
        else:
            exp_, log_ = cmath.exp, cmath.log
        if kappa == 0.0:
            return exp_(-mu * log_(1.0 - s * gbar / mu))
        if math.isinf(m):
            return exp_(mu * (log_(a) - log_(a - s)) + kappa * mu * s / (a - s))
        return exp_((m - mu) * (log_(a - s) - log_(a)) - m * (log_(b - s) - log_(b)))
    s = float(s)
    pole = a if (kappa == 0.0 or math.isinf(m)) else b
    if s >= pole:
        raise DomainError(f"MGF pole: s={s} >= {pole}")
    if kappa == 0.0:
        return math.exp(-mu * math.log1p(-s * gbar / mu))
    if math.isinf(m):
        return math.exp(mu * math.log(a / (a - s)) + kappa * mu * s / (a - s))
    # amplitude folded in log space; (a-s), (b-s) are positive here
    return math.exp((m - mu) * math.log((a - s) / a) - m * math.log((b - s) / b))


def mgf_factorization(model: FadingModel) -> MgfFactorization:
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if math.isinf(m):
        raise DomainError("no rational MGF factorization in the unshadowed limit")
    log_amp = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(kappa)
               - mu * math.log(gbar) - m * math.log(mu * kappa + m))
    return MgfFactorization(amplitude=math.exp(log_amp), a=a, b=b,
                            exponent_a=m - mu, exponent_b=-m)


def laplace_image(model: FadingModel) -> LaplaceImage:
    """Laplace transform of the SNR density, L(p) = E[exp(-p gamma)],
    packaged with its abscissa of convergence (-smallest pole)."""
    return LaplaceImage(evaluator=lambda p: mgf(model, -p),
                        abscissa=-smallest_pole(model))


# ---------------------------------------------------------------------------
# densities and distribution functions
# ---------------------------------------------------------------------------

def pdf(model: FadingModel, x: float) -> float:
    """SNR density at x >= 0."""
    if x < 0:
        raise DomainError("SNR support is [0, inf)")
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if x == 0.0:
        if mu < 1.0:
            return math.inf
        if mu == 1.0:
            return pdf(model, 1e-300)  # finite positive intercept
        return 0.0
    if kappa == 0.0:
        return math.exp(mu * math.log(a) + (mu - 1.0) * math.log(x) - a * x
                        - math.lgamma(mu))
    if math.isinf(m):
        # noncentral chi-square in disguise; scaled Bessel keeps the tail exact
        w = 2.0 * math.sqrt(kappa * mu * a * x)
        iv = sp.ive(mu - 1.0, w)
        if iv > 0.0:
            log_f = (math.log(a) - kappa * mu - a * x + w
                     + 0.5 * (mu - 1.0) * math.log(a * x / (kappa * mu))
                     + math.log(float(iv)))
            return math.exp(log_f)
        return 0.0
    log_amp = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(kappa)
               - mu * math.log(gbar) - m * math.log(mu * kappa + m))
    log_f = (log_amp - math.lgamma(mu) + (mu - 1.0) * math.log(x) - a * x
             + _log_hyp1f1_pos(m, mu, (a - b) * x))
    return math.exp(log_f)


def cdf(model: FadingModel, x: float) -> float:
    """Distribution function; evaluated as the lower IMGF at s = 0."""
    from .incomplete import imgf_lower

    if x < 0:
        raise DomainError("SNR support is [0, inf)")
    return imgf_lower(model, 0.0, x)


def _series_weights(kappa: float, mu: float, m: float, mass_tol: float = 1e-14,
                    max_terms: int = 200_000) -> np.ndarray:
    """Weights of the gamma-scale mixture underlying the canonical family.

    Negative-binomial weights for finite m, Poisson(kappa*mu) in the
    unshadowed limit, a single unit weight for kappa = 0.  Truncated when the
    remaining probability mass drops below mass_tol.
    """
    if kappa == 0.0:
        return np.array([1.0])
    if math.isinf(m):
        lam = kappa * mu
        hi = int(lam + 12.0 * math.sqrt(lam) + 50.0)
        n = np.arange(hi + 1, dtype=float)
        w = np.exp(n * math.log(lam) - lam - sp.gammaln(n + 1.0))
    else:
        theta = mu * kappa / (mu * kappa + m)
        hi = 64
        while True:
            n = np.arange(hi + 1, dtype=float)
            w = np.exp(sp.gammaln(m + n) - math.lgamma(m) - sp.gammaln(n + 1.0)
                       + n * math.log(theta) + m * math.log1p(-theta))
            if 1.0 - w.sum() <= mass_tol or hi >= max_terms:
                break
            hi *= 4
    if 1.0 - w.sum() > mass_tol * 10.0:
        raise DomainError("mixture weight truncation failed to capture the mass")
    return w


def cdf_grid(model: FadingModel, xs) -> np.ndarray:
    """Vectorized CDF over an array of points (absolute accuracy ~1e-13).

    Uses the gamma-scale mixture representation, which is cheap to broadcast.
    """
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise DomainError("SNR support is [0, inf)")
    w = _series_weights(kappa, mu, m)
    shapes = mu + np.arange(w.size, dtype=float)
    out = np.empty(xs.shape, dtype=float)
    flat = xs.reshape(-1)
    chunk = max(1, int(4e6 / max(w.size, 1)))
    for lo in range(0, flat.size, chunk):
        seg = flat[lo:lo + chunk]
        out.reshape(-1)[lo:lo + chunk] = w @ sp.gammainc(shapes[:, None], a * seg[None, :])
    return out


def sample(model: FadingModel, seed, n: int) -> np.ndarray:
    """n i.i.d. SNR draws; deterministic for a given seed.

    Hierarchical construction mirroring the physical model: a unit-mean gamma
    shadowing factor modulates the LOS power of a noncentral chi-square with
    2*mu degrees of freedom.  `seed` may be an int, a SeedSequence or a
    Generator (callers doing sharded Monte Carlo pass spawned SeedSequences).
    """
    if n < 1:
        raise DomainError("need n >= 1 draws")
    kappa, mu, m, gbar, a, b = _canonical_params(model)
    if isinstance(seed, np.random.Generator):
        gen = seed
    else:
        gen = np.random.Generator(np.random.Philox(seed))
    if kappa == 0.0:
        return gbar * gen.gamma(mu, 1.0, size=n) / mu
    if math.isinf(m):
        nonc = np.full(n, 2.0 * kappa * mu)
    else:
        xi = gen.gamma(m, 1.0 / m, size=n)
        nonc = 2.0 * kappa * mu * xi
    w = gen.noncentral_chisquare(2.0 * mu, nonc, size=n)
    return gbar * w / (2.0 * mu * (1.0 + kappa))


# ---------------------------------------------------------------------------
# JSON boundary
# ---------------------------------------------------------------------------

_JSON_FIELDS = ("kappa", "mu", "m", "eta", "K", "q")


def model_from_json(obj: Mapping) -> FadingModel:
    """Build a model from {"kind": ..., parameter fields..., "mean_snr_db": ...}.

    Mean SNR is given in dB (key ``mean_snr_db``); a linear ``mean_snr`` key is
    also accepted, but not both.
    """
    if "kind" not in obj:
        raise DomainError("model JSON requires a 'kind' field")
    try:
        kind = Kind(str(obj["kind"]).lower())
    except ValueError as exc:
        raise DomainError(f"unknown model kind {obj['kind']!r}") from exc
    if "mean_snr_db" in obj and "mean_snr" in obj:
        raise DomainError("give mean_snr_db or mean_snr, not both")
    if "mean_snr_db" in obj:
        snr = db_to_linear(float(obj["mean_snr_db"]))
    elif "mean_snr" in obj:
        snr = float(obj["mean_snr"])
    else:
        raise DomainError("model JSON requires mean_snr_db (or mean_snr)")
    kwargs = {}
    for name in _JSON_FIELDS:
        if name in obj and obj[name] is not None:
            kwargs[name] = float(obj[name])
    unknown = set(obj) - {"kind", "mean_snr_db", "mean_snr", *_JSON_FIELDS}
    if unknown:
        raise DomainError(f"unknown model fields: {sorted(unknown)}")
    return FadingModel(kind, snr, **kwargs)


def model_to_json(model: FadingModel) -> dict:
    out = {"kind": model.kind.value, "mean_snr_db": linear_to_db(model.mean_snr)}
    for name in _JSON_FIELDS:
        value = getattr(model, name)
        if value is not None:
            out[name] = value
    return out
