"""Numerical checks that the shipped weight pairs do what they claim.

Every check reduces an inequality or identity to quadrature against a suite
of compactly supported test functions, or to a pointwise residual on a grid.
Checks return signed gaps (nonnegative means the inequality holds) together
with the raw sides, so a failure report shows the actual numbers instead of
a bare boolean.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from . import green as green_mod
from .calculus import RadialScalar, p_laplacian_radial
from .errors import DomainError, PreconditionError
from .spaces import DEFAULT_CATALOG, DensityModel, build_density, default_grid
from .weights import (
    WeightPair,
    hpw_g,
    weight_dr_poincare,
    weight_gamma_dr,
    weight_gamma_family,
    weight_p_dr,
    weight_theorem_b,
    weight_weighted,
)

__all__ = [
    "QuadratureConfig",
    "SuiteMember",
    "TestFunctionSuite",
    "default_suite",
    "GapResult",
    "rayleigh_gap",
    "p_rayleigh_gap",
    "ode_residual",
    "CriticalityProbe",
    "criticality_probe",
    "NullCriticalityMass",
    "null_criticality_mass",
    "UncertaintyResult",
    "uncertainty_gap",
    "rellich_gap",
    "AsymptoticsFit",
    "asymptotics_fit",
    "VerificationReport",
    "FAMILIES",
    "run_verification",
]


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre settings used by the integral checks."""

    panel_width: float = 0.25
    order: int = 20


_DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=8)
def _gl_rule(order: int):
    x, w = leggauss(order)
    return x, w


def _composite_gl(fn: Callable, a: float, b: float, quad_cfg: QuadratureConfig) -> float:
    """Integrate fn over [a, b] with fixed panels; fn must accept arrays."""
    if not b > a:
        raise DomainError("integration interval is empty")
    x, w = _gl_rule(quad_cfg.order)
    panels = max(8, int(np.ceil((b - a) / quad_cfg.panel_width)))
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    pts = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    vals = np.asarray(fn(pts), dtype=float).reshape(panels, quad_cfg.order)
    return float(np.dot(vals @ w, halfs))


# ---------------------------------------------------------------------------
# test function suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteMember:
    """Compactly supported radial test function with exact derivatives."""

    name: str
    scalar: RadialScalar
    support: tuple[float, float]


@dataclass(frozen=True)
class TestFunctionSuite:
    members: tuple[SuiteMember, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _bump_scalar(lo: float, hi: float) -> RadialScalar:
    """Smooth bump exp(-1/(1-t^2)) on (lo, hi), zero outside."""
    mid = 0.5 * (lo + hi)
    k1 = 2.0 / (hi - lo)

    def _pieces(r):
        t = (np.asarray(r, dtype=float) - mid) * k1
        inside = np.abs(t) < 1.0
        tt = np.where(inside, t, 0.0)
        om = 1.0 - tt * tt
        e = np.exp(-1.0 / om)
        return inside, tt, om, e

    def value(r):
        inside, _, _, e = _pieces(r)
        return np.where(inside, e, 0.0)

    def d1(r):
        inside, tt, om, e = _pieces(r)
        du = -2.0 * tt / om**2
        return np.where(inside, e * du * k1, 0.0)

    def d2(r):
        inside, tt, om, e = _pieces(r)
        du = -2.0 * tt / om**2
        ddu = -(2.0 + 6.0 * tt * tt) / om**3
        return np.where(inside, e * (ddu + du * du) * k1 * k1, 0.0)

    return RadialScalar.from_values(value, d1, d2)


def _gaussian_scalar(center: float, width: float) -> RadialScalar:
    def value(r):
        return np.exp(-(((np.asarray(r, dtype=float) - center) / width) ** 2))

    def d1(r):
        rr = np.asarray(r, dtype=float)
        return value(rr) * (-2.0 * (rr - center) / width**2)

    def d2(r):
        rr = np.asarray(r, dtype=float)
        s = (rr - center) / width
        return value(rr) * (4.0 * s * s - 2.0) / width**2

    return RadialScalar.from_values(value, d1, d2)


def default_suite(support: tuple[float, float] = (0.2, 30.0), count: int = 18) -> TestFunctionSuite:
    """Bumps sliding across the support plus two truncated Gaussians.

    The bumps share a common width and move from the left edge to the right
    edge of the support, so the suite probes both the origin side and the
    far side of each weight.  The Gaussians are multiplied by the full-width
    bump so every member is compactly supported.
    """
    a, b = support
    if not (0.0 < a < b):
        raise PreconditionError("suite support must satisfy 0 < a < b")
    if count < 1:
        raise PreconditionError("need at least one bump")
    members = []
    shift = (b - a) / (2.0 * count)
    for k in range(count):
        lo = a + k * shift
        hi = b - (count - 1 - k) * shift
        members.append(SuiteMember(f"bump_{k:02d}", _bump_scalar(lo, hi), (lo, hi)))
    envelope = _bump_scalar(a, b)
    g1 = _gaussian_scalar(a + 0.3 * (b - a), 0.2 * (b - a)) * envelope
    g2 = _gaussian_scalar(a + 0.7 * (b - a), 0.15 * (b - a)) * envelope
    members.append(SuiteMember("gauss_lo", g1, (a, b)))
    members.append(SuiteMember("gauss_hi", g2, (a, b)))
    return TestFunctionSuite(tuple(members))


# ---------------------------------------------------------------------------
# energy-form gaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapResult:
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    @property
    def scale(self) -> float:
        return abs(self.lhs) + abs(self.rhs)


def _form_gap(
    model: DensityModel,
    pair: WeightPair,
    member: SuiteMember,
    P: float,
    quad_cfg: QuadratureConfig,
) -> GapResult:
    a, b = member.support
    phi = member.scalar
    measure = pair.measure

    def weight_fn(r):
        base = np.asarray(model.f(r)) if measure is None else np.asarray(model.f(r)) * np.asarray(measure.value(r))
        return base

    def lhs_fn(r):
        dphi = phi.jet(r).d1
        return np.abs(dphi) ** P * weight_fn(r)

    def rhs_fn(r):
        net = np.asarray(pair.W.value(r)) - np.asarray(pair.V.value(r))
        return net * np.abs(phi.value(r)) ** P * weight_fn(r)

    lhs = _composite_gl(lhs_fn, a, b, quad_cfg)
    rhs = _composite_gl(rhs_fn, a, b, quad_cfg)
    return GapResult(lhs, rhs)


def rayleigh_gap(
    model: DensityModel,
    pair: WeightPair,
    member: SuiteMember,
    quad_cfg: QuadratureConfig = _DEFAULT_QUAD,
) -> GapResult:
    """Energy minus potential mass for the quadratic form of a pair.

    Returns the two sides of
    integral |phi'|^2 f mu  >=  integral (W - V) phi^2 f mu,
    where mu is the pair's reference measure (1 when absent).  A nonnegative
    gap confirms the inequality on this test function.
    """
    return _form_gap(model, pair, member, 2.0, quad_cfg)


def p_rayleigh_gap(
    model: DensityModel,
    pair: WeightPair,
    member: SuiteMember,
    quad_cfg: QuadratureConfig = _DEFAULT_QUAD,
) -> GapResult:
    """Same as rayleigh_gap but with |phi'|^P against (W - V)|phi|^P."""
    return _form_gap(model, pair, member, pair.P, quad_cfg)


def ode_residual(model: DensityModel, pair: WeightPair, grid=None) -> float:
    """Pointwise residual of the ground state equation on a grid.

    For P = 2 the ground state solves -Phi'' - L Phi' + (V - W) Phi = 0
    exactly, so the return value is the maximum relative residual and should
    sit at rounding level.  For P != 2 the ground state is a supersolution:
    the return value is the signed minimum of the normalized residual
    -Delta_P Phi + (V - W) Phi^(P-1), which must not dip below rounding.
    """
    if pair.ground_state is None:
        raise PreconditionError(f"pair {pair.theorem_id} has no ground state")
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.min(grid) <= 0.0:
        raise DomainError("residual grid must stay strictly inside (0, inf)")

    phi = pair.ground_state
    j = phi.jet(grid)
    net = np.asarray(pair.V.value(grid)) - np.asarray(pair.W.value(grid))
    tiny = np.finfo(float).tiny
    if pair.P == 2.0:
        drift = np.asarray(model.log_df(grid)) * j.d1
        resid = -(j.d2 + drift) + net * j.val
        scale = np.abs(j.d2) + np.abs(drift) + np.abs(net * j.val) + tiny
        return float(np.max(np.abs(resid) / scale))
    plap = p_laplacian_radial(phi, model, pair.P, grid)
    mass = net * j.val ** (pair.P - 1.0)
    resid = -plap + mass
    scale = np.abs(plap) + np.abs(mass) + tiny
    return float(np.min(resid / scale))


# ---------------------------------------------------------------------------
# criticality of the quadratic pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalityProbe:
    """Ratios Phi / (Phi |log r|) at probe radii near 0 and infinity.

    The ground state ceases to be optimal iff some positive supersolution
    grows strictly slower; the standard candidate multiplies Phi by |log r|.
    The ratio must decay to zero on both ends for the pair to be critical.
    """

    at_origin: tuple[tuple[float, float], ...]
    at_infinity: tuple[tuple[float, float], ...]


def criticality_probe(model: DensityModel) -> CriticalityProbe:
    pair = weight_theorem_b(model)
    log_gs = pair.extras["log_ground_state"]

    def ratio(r: float) -> float:
        lu = float(log_gs(r))
        if not np.isfinite(lu):
            raise DomainError(f"ground state log-value not finite at r={r}")
        lv = lu + np.log(abs(np.log(r)))
        return float(np.exp(lu - lv))

    origin = tuple((r, ratio(r)) for r in (1e-3, 1e-6))
    infinity = tuple((r, ratio(r)) for r in (1e3, 1e6))
    return CriticalityProbe(at_origin=origin, at_infinity=infinity)


@dataclass(frozen=True)
class NullCriticalityMass:
    """W-mass of the ground state over [eps, R] plus its log R slope."""

    mass: float
    log_slope: float
    closed_form: float


def _mass_quad(log_gs: Callable, model: DensityModel, weight: RadialScalar, lo: float, hi: float) -> float:
    # substitute r = e^u and compose in logs; Phi^2 f underflows long before
    # the product Phi^2 W f does, so the exponent must be assembled first
    def integrand(u):
        t = float(np.exp(u))
        lw = 2.0 * float(log_gs(t)) + float(model.log_f(t)) + u
        return float(np.exp(lw)) * float(weight.value(t))

    val, err = quad(integrand, np.log(lo), np.log(hi), epsabs=1e-14, epsrel=1e-12, limit=300)
    if not np.isfinite(val):
        raise DomainError("null mass quadrature diverged")
    return float(val)


def null_criticality_mass(model: DensityModel, eps: float, R: float) -> NullCriticalityMass:
    """Integral of Phi^2 W f over [eps, R] for the quadratic pair.

    Criticality shows up as logarithmic divergence at both ends: the mass
    grows like (1/4) log(R/eps), so the slope against log R is 1/4.
    """
    if not (0.0 < eps < R):
        raise PreconditionError("need 0 < eps < R")
    pair = weight_theorem_b(model)
    log_gs = pair.extras["log_ground_state"]
    mass = _mass_quad(log_gs, model, pair.W, eps, R)
    bump = _mass_quad(log_gs, model, pair.W, R, R * np.e)
    return NullCriticalityMass(
        mass=mass,
        log_slope=bump,
        closed_form=float(0.25 * np.log(R / eps)),
    )


# ---------------------------------------------------------------------------
# uncertainty and second-order forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UncertaintyResult:
    energy: float
    weighted_moment: float
    norm: float

    @property
    def ratio(self) -> float:
        if self.norm == 0.0:
            return float("nan")
        return self.energy * self.weighted_moment / (0.25 * self.norm**2)


def uncertainty_gap(
    p: int,
    q: int,
    member: SuiteMember,
    quad_cfg: QuadratureConfig = _DEFAULT_QUAD,
) -> UncertaintyResult:
    """Shifted-energy uncertainty product on a Heisenberg-type space.

    Computes E = integral phi'^2 f - lambda0 integral phi^2 f, the weighted
    moment integral g r^2 phi^2 f, and the norm integral phi^2 f.  The
    product E * moment must dominate (1/4) norm^2; the ratio is returned
    (NaN when phi vanishes identically, reported as a skip upstream).
    """
    model = build_density(f"dr:{p},{q}")
    a, b = member.support
    phi = member.scalar

    def energy_fn(r):
        j = phi.jet(r)
        return (j.d1**2 - model.lambda0 * j.val**2) * np.asarray(model.f(r))

    def moment_fn(r):
        v = phi.value(r)
        return hpw_g(p, q, r) * r**2 * v**2 * np.asarray(model.f(r))

    def norm_fn(r):
        v = phi.value(r)
        return v**2 * np.asarray(model.f(r))

    return UncertaintyResult(
        energy=_composite_gl(energy_fn, a, b, quad_cfg),
        weighted_moment=_composite_gl(moment_fn, a, b, quad_cfg),
        norm=_composite_gl(norm_fn, a, b, quad_cfg),
    )


def rellich_gap(
    p: int,
    q: int,
    member: SuiteMember,
    quad_cfg: QuadratureConfig = _DEFAULT_QUAD,
) -> GapResult:
    """Second-order form against the inverse moment weight.

    Returns the two sides of
    integral g r^2 (Delta phi + lambda0 phi)^2 f
      >= (1/16) integral phi^2 / (g r^2) f
    on a Heisenberg-type space, with g the uncertainty weight.
    """
    model = build_density(f"dr:{p},{q}")
    a, b = member.support
    phi = member.scalar

    def lhs_fn(r):
        j = phi.jet(r)
        lap = j.d2 + np.asarray(model.log_df(r)) * j.d1
        return hpw_g(p, q, r) * r**2 * (lap + model.lambda0 * j.val) ** 2 * np.asarray(model.f(r))

    def rhs_fn(r):
        v = phi.value(r)
        return v**2 / (16.0 * hpw_g(p, q, r) * r**2) * np.asarray(model.f(r))

    return GapResult(
        lhs=_composite_gl(lhs_fn, a, b, quad_cfg),
        rhs=_composite_gl(rhs_fn, a, b, quad_cfg),
    )


# ---------------------------------------------------------------------------
# asymptotic slope fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticsFit:
    slope: float
    intercept: float
    max_residual: float


def asymptotics_fit(radii, values) -> AsymptoticsFit:
    """Least-squares power law through positive samples on a log-log scale.

    Requires at least five samples spanning two decades in radius so a local
    wiggle cannot masquerade as a power law.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.shape != values.shape or radii.size < 5:
        raise PreconditionError("need at least five (radius, value) samples")
    if np.min(radii) <= 0.0 or np.min(values) <= 0.0:
        raise PreconditionError("samples must be strictly positive for a log-log fit")
    if np.max(radii) / np.min(radii) < 100.0:
        raise PreconditionError("samples must span at least two decades in radius")
    lx = np.log(radii)
    ly = np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return AsymptoticsFit(slope=float(slope), intercept=float(intercept), max_residual=float(np.max(np.abs(resid))))


# ---------------------------------------------------------------------------
# report runner
# ---------------------------------------------------------------------------


FAMILIES = ("rayleigh", "ode", "criticality", "uncertainty", "rellich", "asymptotics")

_GAMMA_DEFAULT = 0.25
_WEIGHTED_ALPHAS = (0.0, 0.5, 1.0)
_PDR_ORDERS = (2.0, 3.0, 4.0)


@dataclass
class VerificationReport:
    check_id: str
    space: str
    params: dict = field(default_factory=dict)
    lhs: float = float("nan")
    rhs: float = float("nan")
    gap: float = float("nan")
    tolerance: float = 0.0
    verdict: str = "fail"
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "space": self.space,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "seconds": self.seconds,
        }


def _pairs_for(model: DensityModel) -> list[tuple[str, dict, WeightPair]]:
    """Deterministic list of (label, params, pair) applicable to a space."""
    out: list[tuple[str, dict, WeightPair]] = [("B", {}, weight_theorem_b(model))]
    if model.kind == "dr":
        out.append(("A", {}, weight_dr_poincare(model.p, model.q)))
    out.append(("gamma", {"gamma": _GAMMA_DEFAULT}, weight_gamma_family(model, _GAMMA_DEFAULT)))
    if model.kind == "dr":
        out.append(("gamma_dr", {"gamma": _GAMMA_DEFAULT}, weight_gamma_dr(model.p, model.q, _GAMMA_DEFAULT)))
    for alpha in _WEIGHTED_ALPHAS:
        if model.n >= 2.0 * (1.0 + alpha):
            out.append((f"weighted[{alpha:g}]", {"alpha": alpha}, weight_weighted(model, alpha)))
    if model.kind == "dr":
        for P in _PDR_ORDERS:
            if model.p + model.q >= P * (P - 1.0):
                out.append((f"p_dr[{P:g}]", {"P": P}, weight_p_dr(model.p, model.q, P)))
    if model.kind != "euclidean":
        out.append(("green[2]", {"P": 2.0}, green_mod.green_weight(model, 2.0)))
    return out


def _rayleigh_jobs(space: str, model: DensityModel, suite: TestFunctionSuite):
    for label, params, pair in _pairs_for(model):
        for member in suite:
            def job(pair=pair, member=member):
                res = p_rayleigh_gap(model, pair, member)
                tol = 1e-8 * res.scale
                verdict = "pass" if res.gap >= -tol else "fail"
                return res.lhs, res.rhs, res.gap, tol, verdict

            yield VerificationReport(
                check_id=f"rayleigh.{label}.{member.name}",
                space=space,
                params=dict(params, member=member.name),
            ), job


def _ode_jobs(space: str, model: DensityModel):
    for label, params, pair in _pairs_for(model):
        if pair.ground_state is None:
            continue
        tol = 1e-8 if label.startswith("gamma") else 1e-10
        if pair.P == 2.0:
            def job(pair=pair, tol=tol):
                resid = ode_residual(model, pair)
                verdict = "pass" if resid <= tol else "fail"
                return resid, 0.0, -resid, tol, verdict
        else:
            def job(pair=pair, tol=tol):
                resid = ode_residual(model, pair)
                verdict = "pass" if resid >= -tol else "fail"
                return resid, 0.0, resid, tol, verdict

        yield VerificationReport(
            check_id=f"ode.{label}",
            space=space,
            params=dict(params),
        ), job


def _criticality_jobs(space: str, model: DensityModel):
    def probe_origin():
        probe = criticality_probe(model)
        (r1, v1), (r2, v2) = probe.at_origin
        verdict = "pass" if v2 < v1 < 1.0 else "fail"
        return v2, v1, v1 - v2, 0.0, verdict

    def probe_infinity():
        probe = criticality_probe(model)
        (r1, v1), (r2, v2) = probe.at_infinity
        verdict = "pass" if v2 < v1 < 1.0 else "fail"
        return v2, v1, v1 - v2, 0.0, verdict

    def mass_job():
        res = null_criticality_mass(model, 1e-4, 1e3)
        tol = 1e-10 * abs(res.closed_form)
        gap = res.mass - res.closed_form
        verdict = "pass" if abs(gap) <= tol else "fail"
        return res.mass, res.closed_form, gap, tol, verdict

    def slope_job():
        res = null_criticality_mass(model, 1e-4, 1e3)
        gap = res.log_slope - 0.25
        verdict = "pass" if abs(gap) <= 1e-6 else "fail"
        return res.log_slope, 0.25, gap, 1e-6, verdict

    yield VerificationReport(check_id="criticality.probe_origin", space=space), probe_origin
    yield VerificationReport(check_id="criticality.probe_infinity", space=space), probe_infinity
    yield VerificationReport(check_id="criticality.null_mass", space=space), mass_job
    yield VerificationReport(check_id="criticality.null_mass_slope", space=space), slope_job


def _heisenberg_ok(model: DensityModel) -> bool:
    return model.kind == "dr" and model.q not in (0, 2)


def _uncertainty_jobs(space: str, model: DensityModel, suite: TestFunctionSuite):
    if not _heisenberg_ok(model):
        return
    for member in suite:
        def job(member=member):
            res = uncertainty_gap(model.p, model.q, member)
            ratio = res.ratio
            if not np.isfinite(ratio):
                return float("nan"), 1.0, float("nan"), 1e-8, "skip"
            verdict = "pass" if ratio >= 1.0 - 1e-8 else "fail"
            return ratio, 1.0, ratio - 1.0, 1e-8, verdict

        yield VerificationReport(
            check_id=f"uncertainty.{member.name}",
            space=space,
            params={"member": member.name},
        ), job


def _rellich_jobs(space: str, model: DensityModel, suite: TestFunctionSuite):
    if not _heisenberg_ok(model):
        return
    for member in suite:
        def job(member=member):
            res = rellich_gap(model.p, model.q, member)
            tol = 1e-8 * res.scale
            verdict = "pass" if res.gap >= -tol else "fail"
            return res.lhs, res.rhs, res.gap, tol, verdict

        yield VerificationReport(
            check_id=f"rellich.{member.name}",
            space=space,
            params={"member": member.name},
        ), job


def _asymptotics_jobs(space: str, model: DensityModel):
    if model.kind == "euclidean":
        return

    def job():
        radii = np.geomspace(1e-4, 1e-2, 15)
        w = green_mod.green_weight_batch(model, 2.0, radii)["W"]
        fit = asymptotics_fit(radii, w)
        gap = fit.slope - (-2.0)
        verdict = "pass" if abs(gap) <= 0.02 else "fail"
        return fit.slope, -2.0, gap, 0.02, verdict

    yield VerificationReport(check_id="asymptotics.green[2]", space=space, params={"P": 2.0}), job


def _collect_jobs(spaces, families, suite):
    jobs = []
    for space in spaces:
        model = build_density(space)
        for family in families:
            if family == "rayleigh":
                jobs.extend(_rayleigh_jobs(space, model, suite))
            elif family == "ode":
                jobs.extend(_ode_jobs(space, model))
            elif family == "criticality":
                jobs.extend(_criticality_jobs(space, model))
            elif family == "uncertainty":
                jobs.extend(_uncertainty_jobs(space, model, suite))
            elif family == "rellich":
                jobs.extend(_rellich_jobs(space, model, suite))
            elif family == "asymptotics":
                jobs.extend(_asymptotics_jobs(space, model))
            else:
                raise PreconditionError(f"unknown verification family: {family!r}")
    return jobs


def _worker_count(threads: int | None, n_jobs: int) -> int:
    if threads is None:
        env = os.environ.get("HARDYSCOPE_THREADS", "")
        threads = int(env) if env.strip() else 1
    if threads < 1:
        raise PreconditionError("thread count must be at least 1")
    return max(1, min(threads, n_jobs))


def run_verification(
    spaces=None,
    families=None,
    threads: int | None = None,
    suite: TestFunctionSuite | None = None,
) -> list[VerificationReport]:
    """Run the requested check families and return reports in a fixed order.

    The report order depends only on (spaces, families, suite), never on
    thread scheduling, so repeated runs diff cleanly.
    """
    if spaces is None:
        spaces = DEFAULT_CATALOG
    if families is None:
        families = FAMILIES
    if suite is None:
        suite = default_suite()
    jobs = _collect_jobs(list(spaces), list(families), suite)

    def execute(entry):
        report, job = entry
        start = time.perf_counter()
        report.lhs, report.rhs, report.gap, report.tolerance, report.verdict = job()
        report.seconds = time.perf_counter() - start
        return report

    workers = _worker_count(threads, len(jobs))
    if workers == 1:
        return [execute(entry) for entry in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(execute, jobs))
