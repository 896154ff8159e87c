"""P-Green functions by quadrature with certified tails, and the induced weights.

The central quantity is I(r) = integral of f^(-1/(P-1)) from r to infinity.
Two complementary formulations are used:

* a direct quadrature of the (positive) integrand, scaled by f(r)^(1/(P-1))
  so every intermediate stays of order one, with the tail beyond a far cutoff
  bracketed through the monotonicity of f'/f;
* an excess-integral form for the logarithmic derivative: writing
  L = f'/f and h = lim L, integration by parts gives

      I(r) = (P-1)/h * f(r)^(-1/(P-1)) - J(r),
      J(r) = integral of ((L-h)/h) * f^(-1/(P-1)) from r to infinity >= 0,

  so the ratio rho = h f^(1/(P-1)) I/(P-1) = 1 - h J f^(1/(P-1))/(P-1) is
  computed as one minus a nonnegative quantity.  Since |G'/G| = h/((P-1) rho),
  the weight W = Lambda_P rho^(-P) then satisfies W >= Lambda_P by
  construction, with no cancellation at large radii.

The excess form wins for r >= 1 (where the direct form would subtract nearly
equal exponentials); the direct form wins for small r (where rho itself is
tiny).  Both are exercised against closed forms in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from .calculus import RadialScalar
from .errors import DomainError, PreconditionError, QuadratureError
from .spaces import EUCLIDEAN, DensityModel
from .weights import WeightPair, _check_radius, _constant, _maybe_sample

__all__ = [
    "GreenEvaluation",
    "unit_sphere_volume",
    "green_value",
    "green_log_derivative",
    "green_weight",
    "green_weight_batch",
    "green_gamma0",
    "green_weight_supercritical",
    "AsymptoticPrediction",
    "asymptotic_prediction",
]

#: relative slack of f'/f over its limit h defining the near cutoff
_CUTOFF_EXCESS = 1e-3
#: Gauss-Legendre panel order for the batch engine
_GL_ORDER = 20


def unit_sphere_volume(n: int) -> float:
    """Volume of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    if n < 1:
        raise PreconditionError("dimension must be >= 1")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass
class GreenEvaluation:
    """Certified evaluation of the P-Green function at one radius."""

    P: float
    r: float
    value: float
    error_bound: float
    cutoff: float
    omega_n: float


# ---------------------------------------------------------------------------
# cutoffs and tails
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _near_cutoff(descriptor: str, h: float, kind: str, n: int, p: int, q: int) -> float:
    # reconstructed locally to keep the cache key hashable
    from .spaces import build_density

    model = build_density(descriptor)

    def slack(R):
        return model.excess(R) - _CUTOFF_EXCESS * h

    return float(optimize.brentq(slack, 1e-6, 400.0, xtol=1e-9))


def _cutoff_radius(model: DensityModel) -> float:
    """Smallest radius where f'/f exceeds its limit h by at most 0.1%."""
    if model.kind == EUCLIDEAN:
        raise DomainError("flat space has no exponential tail cutoff")
    spec = model.spec
    return _near_cutoff(
        spec.descriptor(), model.h, model.kind, model.n, spec.p or 0, spec.q or 0
    )

def _far_cutoff(model: DensityModel, P: float, r: float) -> float:
    """Radius beyond which the bracketed tail is negligible at double precision.

    The tail scale decays like exp(-h (t - r)/(P-1)); 46 e-foldings push it
    below 1e-20 of the local value, and the additive 12 absorbs the slower
    decay of the excess factor in the J-form tail.
    """
    base = max(r, _cutoff_radius(model))
    return base + 46.0 * (P - 1.0) / model.h + 12.0


def _tail_bracket_scaled(model: DensityModel, P: float, R: float, log_f_ref: float):
    """Bracket of the integral of f^(-1/(P-1)) beyond R, scaled by f(ref)^(1/(P-1)).

    Monotone decay of f'/f toward h gives
    (P-1)/L(R) <= tail * f(R)^(1/(P-1)) <= (P-1)/h.
    Returns (midpoint, half_width), both scaled by exp(log_f_ref/(P-1)).
    """
    s = 1.0 / (P - 1.0)
    scale = math.exp(-s * (model.log_f(R) - log_f_ref))
    hi = (P - 1.0) / model.h * scale
    lo = (P - 1.0) / model.log_df(R) * scale
    return 0.5 * (hi + lo), 0.5 * (hi - lo)


# ---------------------------------------------------------------------------
# certified scalar quadrature (scipy.quad)
# ---------------------------------------------------------------------------


def _quad_scaled_I(model: DensityModel, P: float, r: float):
    """Scaled integral f(r)^(1/(P-1)) * I(r) with a certified error estimate."""
    s = 1.0 / (P - 1.0)
    log_f_r = model.log_f(r)

    if model.kind == EUCLIDEAN:
        k = (model.n - 1.0) * s
        if k <= 1.0:
            raise DomainError("flat-space Green integral diverges unless P < n")
        R = 1000.0 * r

        def integrand(u):
            t = math.exp(u)
            return math.exp(-s * (model.log_f(t) - log_f_r)) * t

        bulk, err = integrate.quad(integrand, math.log(r), math.log(R), epsabs=1e-300, epsrel=1e-12, limit=200)
        tail = math.exp(-k * math.log(R / r)) * R / (k - 1.0)
        return bulk + tail, err, R

    R = _far_cutoff(model, P, r)

    def integrand(u):
        t = math.exp(u)
        return math.exp(-s * (model.log_f(t) - log_f_r)) * t

    bulk, err = integrate.quad(integrand, math.log(r), math.log(R), epsabs=1e-300, epsrel=1e-12, limit=200)
    tail_mid, tail_half = _tail_bracket_scaled(model, P, R, log_f_r)
    return bulk + tail_mid, err + tail_half, R


def green_value(model: DensityModel, P: float, r: float, tol: float = 1e-10) -> GreenEvaluation:
    """P-Green function value G(r) with a certified absolute error bound.

    G(r) = omega_n^(-1/(P-1)) * integral_r^inf f(t)^(-1/(P-1)) dt.  On flat
    space the integral only converges for P < n; elsewhere the exponential
    volume growth makes it converge for every P > 1.
    """
    P = float(P)
    if P <= 1.0:
        raise PreconditionError("Green function needs P > 1")
    r = float(_check_radius(r))
    s = 1.0 / (P - 1.0)
    omega = unit_sphere_volume(model.n)
    beta = math.exp(-s * math.log(omega))

    scaled, scaled_err, cutoff = _quad_scaled_I(model, P, r)
    outer = beta * math.exp(-s * model.log_f(r))
    value = outer * scaled
    error_bound = outer * scaled_err
    if error_bound > tol:
        raise QuadratureError(
            f"green value at r={r} certified only to {error_bound:.3e} > tol={tol:.3e}"
        )
    return GreenEvaluation(P=P, r=r, value=value, error_bound=error_bound, cutoff=cutoff, omega_n=omega)


def _quad_delta(model: DensityModel, P: float, r: float) -> float:
    """delta(r) = 1 - rho(r) via the nonnegative excess integral (r >= 1 path)."""
    s = 1.0 / (P - 1.0)
    h = model.h
    log_f_r = model.log_f(r)
    R = _far_cutoff(model, P, r)

    def integrand(t):
        return (model.excess(t) / h) * math.exp(-s * (model.log_f(t) - log_f_r))

    bulk, _ = integrate.quad(integrand, r, R, epsabs=1e-300, epsrel=1e-12, limit=200)
    tail_mid, _ = _tail_bracket_scaled(model, P, R, log_f_r)
    tail = (model.excess(R) / h) * tail_mid
    return h * (bulk + 0.5 * tail) / (P - 1.0)


def _scalar_rho_delta(model: DensityModel, P: float, r: float):
    """(rho, delta=1-rho) for one radius, choosing the stable formulation."""
    if r >= 1.0:
        delta = _quad_delta(model, P, r)
        return 1.0 - delta, delta
    scaled, _, _ = _quad_scaled_I(model, P, r)
    rho = model.h * scaled / (P - 1.0)
    return rho, 1.0 - rho


def green_log_derivative(model: DensityModel, P: float, r: float) -> float:
    """G'/G at radius r; always <= -h/(P-1), exactly -(n-P)/((P-1)r) when flat."""
    P = float(P)
    if P <= 1.0:
        raise PreconditionError("Green function needs P > 1")
    r = float(_check_radius(r))
    if model.kind == EUCLIDEAN:
        if P >= model.n:
            raise DomainError("flat-space Green integral diverges unless P < n")
        return -(model.n - P) / ((P - 1.0) * r)
    rho, _ = _scalar_rho_delta(model, P, r)
    return -model.h / ((P - 1.0) * rho)


# ---------------------------------------------------------------------------
# batch engine (deterministic Gauss-Legendre panels)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_integral(fn, a: float, b: float, rate: float) -> float:
    """Integrate fn over [a, b] with GL panels sized against the decay rate."""
    if b <= a:
        return 0.0
    width = min(0.5, 8.0 / max(rate, 1.0))
    count = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, count + 1)
    x, w = _gl_nodes(_GL_ORDER)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    nodes = (mid[:, None] + half * x[None, :]).ravel()
    vals = fn(nodes).reshape(count, _GL_ORDER)
    return float(half * np.sum(vals @ w))


def green_weight_batch(model: DensityModel, P: float, radii) -> dict:
    """Vectorised Green-weight evaluation over a radius grid.

    Returns arrays keyed by "G", "dlogG", "W", "Wtilde", "rho", "delta".  The
    engine accumulates segment integrals between consecutive radii so the
    whole grid costs one sweep; every intermediate is scaled to order one.
    The positivity W >= Lambda_P survives in floating point because delta
    is assembled from nonnegative panel sums.
    """
    P = float(P)
    if P <= 1.0:
        raise PreconditionError("Green function needs P > 1")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii <= 0.0):
        raise DomainError("radius must be positive and finite")
    order = np.argsort(radii)
    rs = radii[order]
    s = 1.0 / (P - 1.0)
    n = model.n
    omega = unit_sphere_volume(n)
    beta = math.exp(-s * math.log(omega))

    if model.kind == EUCLIDEAN:
        if P >= n:
            raise DomainError("flat-space Green integral diverges unless P < n")
        k = (n - 1.0) * s
        G = beta * rs ** (1.0 - k) / (k - 1.0)
        dlog = -(n - P) / ((P - 1.0) * rs)
        W = ((n - P) / P) ** P * rs ** (-P)
        out = {"G": G, "dlogG": dlog, "W": W, "Wtilde": W.copy(), "rho": np.full_like(rs, np.nan), "delta": np.full_like(rs, np.nan)}
        return _unsort(out, order)

    h = model.h
    lam_p = (h / P) ** P
    log_f = lambda t: np.asarray(model.log_f(t))

    # knots at every requested radius >= 1, plus the anchor at 1 when smaller
    # radii are present; the excess integral is accumulated downward from the
    # far cutoff, rescaled to the left knot of each segment.
    hi_mask = rs >= 1.0
    hi_knots = list(np.unique(rs[hi_mask]))
    lo_knots = list(np.unique(rs[~hi_mask]))
    if lo_knots:
        if not hi_knots or hi_knots[0] > 1.0:
            hi_knots.insert(0, 1.0)
    R_far = _far_cutoff(model, P, hi_knots[-1])

    rate_j = s * h + 1.0

    def j_segment(a, b):
        ref = float(log_f(a))

        def fn(t):
            return (np.asarray(model.excess(t)) / h) * np.exp(-s * (log_f(t) - ref))

        return _panel_integral(fn, a, b, rate_j)

    delta_by_knot: dict = {}
    top = hi_knots[-1]
    log_f_top = float(log_f(top))
    tail_mid, _ = _tail_bracket_scaled(model, P, R_far, log_f_top)
    j_hat = j_segment(top, R_far) + 0.5 * (model.excess(R_far) / h) * tail_mid
    delta_by_knot[top] = h * j_hat / (P - 1.0)
    for a, b in zip(reversed(hi_knots[:-1]), reversed(hi_knots[1:])):
        carry = math.exp(-s * (float(log_f(b)) - float(log_f(a))))
        j_hat = j_segment(a, b) + carry * j_hat
        delta_by_knot[a] = h * j_hat / (P - 1.0)

    rho_by_knot = {k: 1.0 - d for k, d in delta_by_knot.items()}

    if lo_knots:
        anchor = hi_knots[0]
        i_hat = (P - 1.0) * rho_by_knot[anchor] / h
        chain = lo_knots + [anchor]
        rate_d = 1.0 + s * (n - 1.0) * 1.2

        def d_segment(a, b):
            ref = float(log_f(a))

            def fn(u):
                t = np.exp(u)
                return np.exp(-s * (log_f(t) - ref)) * t

            return _panel_integral(fn, math.log(a), math.log(b), rate_d)

        for a, b in zip(reversed(chain[:-1]), reversed(chain[1:])):
            carry = math.exp(-s * (float(log_f(b)) - float(log_f(a))))
            i_hat = d_segment(a, b) + carry * i_hat
            rho_by_knot[a] = h * i_hat / (P - 1.0)
            delta_by_knot[a] = 1.0 - rho_by_knot[a]

    rho = np.array([rho_by_knot[r] for r in rs])
    delta = np.array([delta_by_knot[r] for r in rs])
    dlog = -h / ((P - 1.0) * rho)
    W = lam_p * rho ** (-P)
    with np.errstate(invalid="ignore"):
        wtilde = lam_p * np.expm1(-P * np.log1p(-delta))
    G = beta * (P - 1.0) / h * rho * np.exp(-s * np.asarray(log_f(rs), dtype=float))
    out = {"G": G, "dlogG": dlog, "W": W, "Wtilde": wtilde, "rho": rho, "delta": delta}
    return _unsort(out, order)


def _unsort(out: dict, order: np.ndarray) -> dict:
    inverse = np.argsort(order)
    return {k: v[inverse] for k, v in out.items()}


# ---------------------------------------------------------------------------
# the Green weight as a pair
# ---------------------------------------------------------------------------


def green_weight(model: DensityModel, P: float, r=None):
    """Hardy weight of the P-Laplacian built from the Green function.

    W = ((P-1)/P)^P |G'/G|^P with V = 0; the surplus Wtilde = W - Lambda_P is
    nonnegative and available in ``extras`` together with Lambda_P = (h/P)^P.
    With ``r`` given, returns the sample at that radius.
    """
    P = float(P)
    if P <= 1.0:
        raise PreconditionError("Green weight needs P > 1")
    if model.kind == EUCLIDEAN:
        raise PreconditionError("the Green weight construction excludes flat space")

    def w_value(rr):
        arr = np.atleast_1d(np.asarray(rr, dtype=float))
        out = green_weight_batch(model, P, arr)["W"]
        return float(out[0]) if np.ndim(rr) == 0 else out

    def wtilde_value(rr):
        arr = np.atleast_1d(np.asarray(rr, dtype=float))
        out = green_weight_batch(model, P, arr)["Wtilde"]
        return float(out[0]) if np.ndim(rr) == 0 else out

    w_scalar = RadialScalar.from_value_only(w_value)
    terms = (("((P-1)/P)^P |G'/G|^P", w_scalar),)
    pair = WeightPair(
        theorem_id="green_p",
        space=model.spec.descriptor(),
        params={"P": P},
        V=_constant(0.0),
        W=w_scalar,
        terms=terms,
        ground_state=None,
        P=P,
        extras={
            "Lambda_P": (model.h / P) ** P,
            "Wtilde": RadialScalar.from_value_only(wtilde_value),
        },
    )
    return _maybe_sample(pair, r)


# ---------------------------------------------------------------------------
# total integral, supercritical weight, asymptotic regimes
# ---------------------------------------------------------------------------


def _total_integral(model: DensityModel, P: float) -> float:
    """Integral of f^(-1/(P-1)) over (0, inf); finite exactly when P > n."""
    P = float(P)
    s = 1.0 / (P - 1.0)
    n = model.n
    a = 1.0 - (n - 1.0) * s
    if a <= 0.0:
        raise PreconditionError("total Green integral needs P > n")
    # below t0 the integrand is bounded by t^(-(n-1)s) since f >= r^(n-1)
    u_lo = math.log(1e-18 * a) / a
    truncated = math.exp(a * u_lo) / a
    R_far = _far_cutoff(model, P, 1.0)

    def integrand(u):
        t = math.exp(u)
        return math.exp(-s * model.log_f(t)) * t

    bulk, err = integrate.quad(integrand, u_lo, math.log(R_far), epsabs=1e-300, epsrel=1e-12, limit=300)
    tail_mid, tail_half = _tail_bracket_scaled(model, P, R_far, 0.0)
    total = bulk + tail_mid
    bound = err + tail_half + truncated
    if bound > 1e-8 * total:
        raise QuadratureError(f"total Green integral certified only to {bound:.3e}")
    return total


def green_gamma0(model: DensityModel, P: float) -> float:
    """G(0), finite for P > n; the supercritical weight's reference constant."""
    if model.kind == EUCLIDEAN:
        raise PreconditionError("flat-space Green function is unbounded at the pole")
    if P <= model.n:
        raise PreconditionError("G(0) is finite only for P > n")
    omega = unit_sphere_volume(model.n)
    beta = math.exp(-math.log(omega) / (P - 1.0))
    return beta * _total_integral(model, P)


def green_weight_supercritical(model: DensityModel, P: float, r: float) -> float:
    """Hardy weight for P > n built from the bounded Green function.

    With gamma = G(0), returns
    ((P-1)/P)^P |G'/G|^P |gamma - 2G|^(P-2) / |gamma - G|^P
    * (gamma^2 + 2(P-2) G (gamma - G)).
    """
    P = float(P)
    if P <= model.n:
        raise PreconditionError("supercritical weight needs P > n")
    r = float(_check_radius(r))
    gamma = green_gamma0(model, P)
    G = green_value(model, P, r).value
    dlog = green_log_derivative(model, P, r)
    lead = ((P - 1.0) / P) ** P * abs(dlog) ** P
    return (
        lead
        * abs(gamma - 2.0 * G) ** (P - 2.0)
        / abs(gamma - G) ** P
        * (gamma**2 + 2.0 * (P - 2.0) * G * (gamma - G))
    )


@dataclass
class AsymptoticPrediction:
    """Predicted small-radius behaviour of the Green surplus weight."""

    regime: str
    value: float | np.ndarray
    exponent: float
    coefficient: float
    log_corrected: bool = False


def asymptotic_prediction(model: DensityModel, P: float, r) -> AsymptoticPrediction:
    """Predicted Wtilde(r) as r -> 0, by exponent regime.

    P < n:  ((n-P)/P)^P r^(-P)
    P = n:  ((P-1)/P)^P |r ln r|^(-P)
    P > n:  C r^(-P(n-1)/(P-1)) with C = ((P-1)/P)^P (integral of f^(-1/(P-1)))^(-P)
    """
    P = float(P)
    if P <= 1.0:
        raise PreconditionError("Green weight needs P > 1")
    n = model.n
    r = _check_radius(r)
    rr = np.asarray(r, dtype=float)
    if abs(P - n) < 1e-9:
        coef = ((P - 1.0) / P) ** P
        value = coef * np.abs(rr * np.log(rr)) ** (-P)
        pred = AsymptoticPrediction("P=n", value, -P, coef, log_corrected=True)
    elif P < n:
        coef = ((n - P) / P) ** P
        pred = AsymptoticPrediction("P<n", coef * rr ** (-P), -P, coef)
    else:
        coef = ((P - 1.0) / P) ** P * _total_integral(model, P) ** (-P)
        expo = -P * (n - 1.0) / (P - 1.0)
        pred = AsymptoticPrediction("P>n", coef * rr**expo, expo, coef)
    if np.ndim(r) == 0:
        pred.value = float(pred.value)
    return pred
