"""Translation surfaces x(u,v) = gamma(u) + gamma~(v) and self-translation
surfaces x± = (gamma(u) ± gamma(v))/2, their invariants as generalised framed
surfaces, singular-point detection, and dependence diagnostics.

The singular set is the union of three conditions:
(i) alpha(u) = 0, (ii) alpha~(v) = 0, (iii) t31 = t32 = 0. At a point
satisfying (iii) with |t33| = 1 the two tangent direction fields are
parallel; that is the dependent condition this package classifies.

For self-translation surfaces the half factor is a target dilation, which
preserves every singularity class, so classification routines work on the
unscaled generator pair while geometric quantities keep the half factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import FramedCurve, vec_values
from .framefield import FrameField
from .jets import BiJet, Jet
from .tolerances import DEFAULT, Tolerances

CONDITION_NAMES = ("i", "ii", "iii")


class TranslationSurface:
    """Sum (or half sum/difference) of two framed curves as a surface."""

    def __init__(self, curve_u: FramedCurve, curve_v: FramedCurve,
                 kind: str = "general", base: FramedCurve | None = None,
                 tols: Tolerances = DEFAULT):
        if kind not in ("general", "self_plus", "self_minus"):
            raise ValueError(f"unknown surface kind {kind!r}")
        self.curve_u = curve_u
        self.curve_v = curve_v
        self.kind = kind
        self.base = base
        self.tols = tols
        self.field = FrameField(curve_u, curve_v)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def general(a: FramedCurve, b: FramedCurve,
                tols: Tolerances = DEFAULT) -> "TranslationSurface":
        return TranslationSurface(a, b, "general", tols=tols)

    @staticmethod
    def self_translation(curve: FramedCurve, sign: int,
                         tols: Tolerances = DEFAULT) -> "TranslationSurface":
        """x± = (gamma(u) ± gamma(v)) / 2 with the frame of the first factor."""
        half = curve.scaled(0.5)
        other = half if sign > 0 else half.negated()
        kind = "self_plus" if sign > 0 else "self_minus"
        return TranslationSurface(half, other, kind, base=curve, tols=tols)

    def criteria_surface(self) -> "TranslationSurface":
        """Surface used for classification.

        Self-translation kinds return the unscaled generator pair
        (gamma, ±gamma): the actual surface is its image under w -> w/2,
        a diffeomorphism of the target, so singularity classes agree while
        reported criterion values keep the conventional normalization.
        """
        if self.kind == "general":
            return self
        other = self.base if self.kind == "self_plus" else self.base.negated()
        return TranslationSurface(self.base, other, "general", base=self.base,
                                  tols=self.tols)

    @property
    def domain_u(self) -> tuple[float, float]:
        return self.curve_u.domain

    @property
    def domain_v(self) -> tuple[float, float]:
        return self.curve_v.domain

    # -- evaluation -----------------------------------------------------------

    def x_value(self, p: tuple[float, float]) -> np.ndarray:
        u, v = p
        return self.curve_u.point(u) + self.curve_v.point(v)

    def x_partial_jets(self, p: tuple[float, float], du: int, dv: int,
                       degree: int = 3) -> tuple[BiJet, BiJet, BiJet]:
        """BiJets of d^{du+dv} x / du^du dv^dv, assembled exactly.

        One of du, dv must be zero beyond first order because cross partials
        of x vanish identically; (du, dv) = (0, 0) gives x itself.
        """
        u, v = p
        order = degree + max(du, dv)
        if dv == 0 and du == 0:
            gu = self.curve_u.gamma_jets(u, order)
            gv = self.curve_v.gamma_jets(v, order)
            return tuple(
                BiJet.from_u_jet(gu[c].truncate(degree), v, degree)
                + BiJet.from_v_jet(gv[c].truncate(degree), u, degree)
                for c in range(3))
        if du > 0 and dv > 0:
            return tuple(BiJet.constant(0.0, u, v, degree) for _ in range(3))
        if du > 0:
            g = self.curve_u.gamma_jets(u, order)
            jets_ = [c for c in g]
            for _ in range(du):
                jets_ = [c.differentiate() for c in jets_]
            return tuple(BiJet.from_u_jet(c.truncate(degree), v, degree)
                         for c in jets_)
        g = self.curve_v.gamma_jets(v, order)
        jets_ = [c for c in g]
        for _ in range(dv):
            jets_ = [c.differentiate() for c in jets_]
        return tuple(BiJet.from_v_jet(c.truncate(degree), u, degree)
                     for c in jets_)

    def dx_matrix(self, p: tuple[float, float]) -> np.ndarray:
        """3x2 Jacobian [x_u | x_v] at p."""
        u, v = p
        xu = [c.deriv(1) for c in self.curve_u.gamma_jets(u, 2)]
        xv = [c.deriv(1) for c in self.curve_v.gamma_jets(v, 2)]
        return np.column_stack([xu, xv])

    def alpha_values(self, p: tuple[float, float]) -> tuple[float, float]:
        u, v = p
        return (self.curve_u.curvature(u, 1).alpha.value,
                self.curve_v.curvature(v, 1).alpha.value)

    def singular_residual(self, p: tuple[float, float]) -> float:
        """min(|alpha(u)|, |alpha~(v)|, hypot(t31, t32)) at p."""
        au, av = self.alpha_values(p)
        t31 = self.field.partial_value(3, 1, p[0], p[1])
        t32 = self.field.partial_value(3, 2, p[0], p[1])
        return min(abs(au), abs(av), math.hypot(t31, t32))


# ---------------------------------------------------------------------------
# generalised-framed-surface invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GFSInvariants:
    """Basic invariants (a_i, b_i, c_i, e_i, f_i, g_i, A, B) as BiJets."""

    frame: str                  # "nu_of_A" | "nu_of_B"
    a1: BiJet; b1: BiJet; c1: BiJet
    a2: BiJet; b2: BiJet; c2: BiJet
    e1: BiJet; f1: BiJet; g1: BiJet
    e2: BiJet; f2: BiJet; g2: BiJet
    A: BiJet; B: BiJet


def gfs_invariants(s: TranslationSurface, p: tuple[float, float],
                   frame: str = "nu_of_A", degree: int = 3) -> GFSInvariants:
    """Closed-form invariants of (x, nu1, nu2) or (x, nu1~, nu2~).

    With the first curve's frame: (a1,b1,c1) = (0,0,alpha),
    (a2,b2,c2) = alpha~ (t31,t32,t33), (e1,f1,g1) = (l,m,n), second row zero,
    A = -alpha alpha~ t32 and B = alpha alpha~ t31. The mirrored frame swaps
    the roles. Self-translation surfaces inherit the half factors through
    their generator curves.
    """
    u, v = p
    ff = s.field
    order = degree + 1
    ca = s.curve_u.curvature(u, order)
    cb = s.curve_v.curvature(v, order)
    zero = BiJet.constant(0.0, u, v, degree)

    def emb_u(j: Jet) -> BiJet:
        return BiJet.from_u_jet(j.truncate(degree), v, degree)

    def emb_v(j: Jet) -> BiJet:
        return BiJet.from_v_jet(j.truncate(degree), u, degree)

    al, at = emb_u(ca.alpha), emb_v(cb.alpha)
    if frame == "nu_of_A":
        t31 = ff.t_bijet(3, 1, u, v, degree)
        t32 = ff.t_bijet(3, 2, u, v, degree)
        t33 = ff.t_bijet(3, 3, u, v, degree)
        return GFSInvariants(
            frame=frame,
            a1=zero, b1=zero, c1=al,
            a2=at * t31, b2=at * t32, c2=at * t33,
            e1=emb_u(ca.l), f1=emb_u(ca.m), g1=emb_u(ca.n),
            e2=zero, f2=zero, g2=zero,
            A=-(al * at * t32), B=al * at * t31)
    if frame == "nu_of_B":
        t13 = ff.t_bijet(1, 3, u, v, degree)
        t23 = ff.t_bijet(2, 3, u, v, degree)
        t33 = ff.t_bijet(3, 3, u, v, degree)
        return GFSInvariants(
            frame=frame,
            a1=al * t13, b1=al * t23, c1=al * t33,
            a2=zero, b2=zero, c2=at,
            e1=zero, f1=zero, g1=zero,
            e2=emb_v(cb.l), f2=emb_v(cb.m), g2=emb_v(cb.n),
            A=al * at * t23, B=-(al * at * t13))
    raise ValueError(f"unknown frame choice {frame!r}")


def normal_decomposition_residual(s: TranslationSurface,
                                  p: tuple[float, float]) -> float:
    """| x_u x x_v - (A nu1 + B nu2) | at p; identically zero in theory."""
    u, v = p
    inv = gfs_invariants(s, p, degree=2)
    xu = [c.deriv(1) for c in s.curve_u.gamma_jets(u, 2)]
    xv = [c.deriv(1) for c in s.curve_v.gamma_jets(v, 2)]
    n1 = vec_values(s.curve_u.nu1_jets(u, 2))
    n2 = vec_values(s.curve_u.nu2_jets(u, 2))
    nu = np.cross(xu, xv)
    recon = inv.A.value * n1 + inv.B.value * n2
    return float(np.max(np.abs(nu - recon)))


# ---------------------------------------------------------------------------
# dependence tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DependenceResult:
    dependent: bool
    mu_cross_norm: float        # |mu(u) x mu~(v)|
    t_pair_norm: float          # hypot(t31, t32), equal in exact arithmetic
    t33: float


def dependence_test(s: TranslationSurface, p: tuple[float, float],
                    tol: float | None = None) -> DependenceResult:
    """Pointwise linear dependence of the two tangent directions at p."""
    tol = s.tols.dep_tol if tol is None else tol
    u, v = p
    mu = vec_values(s.curve_u.mu_jets(u, 2))
    mt = vec_values(s.curve_v.mu_jets(v, 2))
    cross = float(np.linalg.norm(np.cross(mu, mt)))
    t31 = s.field.partial_value(3, 1, u, v)
    t32 = s.field.partial_value(3, 2, u, v)
    t33 = s.field.partial_value(3, 3, u, v)
    return DependenceResult(dependent=bool(cross < tol),
                            mu_cross_norm=cross,
                            t_pair_norm=math.hypot(t31, t32),
                            t33=t33)


@dataclass(frozen=True)
class FieldDependenceReport:
    """Field-level (not pointwise) linear dependence over a region."""

    t_fields_dependent: bool
    t_sigma_ratio: float
    ab_fields_dependent: bool
    ab_sigma_ratio: float
    samples: int


def ab_dependence_scan(s: TranslationSurface,
                       window: tuple[float, float, float, float],
                       n: int = 12,
                       ratio_tol: float | None = None) -> FieldDependenceReport:
    """Smallest-singular-value test of the sampled (t31, t32) and (A, B)."""
    ratio_tol = s.tols.ratio_tol if ratio_tol is None else ratio_tol
    u0, u1, v0, v1 = window
    if n * n < 64:
        raise ValueError("need at least 64 sample points")
    rows_t, rows_ab = [], []
    for u in np.linspace(u0, u1, n):
        for v in np.linspace(v0, v1, n):
            u_, v_ = float(u), float(v)
            t31 = s.field.partial_value(3, 1, u_, v_)
            t32 = s.field.partial_value(3, 2, u_, v_)
            au, av = s.alpha_values((u_, v_))
            rows_t.append((t31, t32))
            rows_ab.append((-au * av * t32, au * av * t31))

    def ratio(rows):
        sv = np.linalg.svd(np.asarray(rows), compute_uv=False)
        if sv[0] == 0.0:
            return 0.0
        return float(sv[-1] / sv[0])

    rt, rab = ratio(rows_t), ratio(rows_ab)
    return FieldDependenceReport(
        t_fields_dependent=bool(rt < ratio_tol), t_sigma_ratio=rt,
        ab_fields_dependent=bool(rab < ratio_tol), ab_sigma_ratio=rab,
        samples=n * n)


# ---------------------------------------------------------------------------
# singular point detection
# ---------------------------------------------------------------------------

@dataclass
class SingularPoint:
    u: float
    v: float
    conditions: tuple[str, ...]         # subset of ("i", "ii", "iii")
    dependence: str                     # "dependent" | "independent"
    corank: int                         # 1 or 2
    isolated: bool = True
    residual: float = 0.0

    @property
    def p(self) -> tuple[float, float]:
        return (self.u, self.v)


def _newton_alpha(curve: FramedCurve, t: float, tol: float,
                  max_iter: int = 30) -> float | None:
    for _ in range(max_iter):
        c = curve.curvature(t, 1)
        f, df = c.alpha.value, c.alpha.deriv(1)
        if abs(f) < tol:
            return t
        if df == 0.0:
            return None
        step = -f / df
        while abs(step) > 0.5:
            step *= 0.5
        t = t + step
    return None


def _newton_t3(s: TranslationSurface, u: float, v: float, tol: float,
               max_iter: int = 80) -> tuple[float, float] | None:
    """Newton iteration on (t31, t32) = 0.

    Zeros can be degenerate (the Jacobian drops rank exactly at the points
    of interest), which turns the convergence linear; iterate until the
    step itself collapses rather than stopping at the residual tolerance.
    """
    converged = False
    for _ in range(max_iter):
        b31 = s.field.t_bijet(3, 1, u, v, degree=2)
        b32 = s.field.t_bijet(3, 2, u, v, degree=2)
        r = np.array([b31.value, b32.value])
        rn = math.hypot(*r)
        if rn < tol:
            converged = True
        J = np.array([[b31.part(1, 0), b31.part(0, 1)],
                      [b32.part(1, 0), b32.part(0, 1)]])
        # least-squares step handles the rank-1 Jacobians along singular curves
        step, *_ = np.linalg.lstsq(J, -r, rcond=1e-10)
        nrm = float(np.linalg.norm(step))
        if converged and nrm < 1e-12:
            return u, v
        if nrm > 0.5:
            step *= 0.5 / nrm
        new = (u + step[0], v + step[1])
        if not np.isfinite(new).all():
            return None
        u, v = new
    return (u, v) if converged else None


def find_singular_points(s: TranslationSurface,
                         window: tuple[float, float, float, float],
                         grid_n: int = 48,
                         tol: float | None = None) -> list[SingularPoint]:
    """Grid scan plus damped Newton refinement of the singular set.

    Curve-shaped components come back as strings of samples flagged
    ``isolated=False``; isolated zeros as single points. Results are merged
    within three grid spacings and sorted by (u, v).
    """
    tol = s.tols.sing_tol if tol is None else tol
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    u0, u1, v0, v1 = window
    us = np.linspace(u0, u1, grid_n)
    vs = np.linspace(v0, v1, grid_n)
    du = (u1 - u0) / (grid_n - 1)
    dv = (v1 - v0) / (grid_n - 1)
    spacing = max(du, dv)
    merge_radius = 3.0 * spacing

    alpha_u = np.array([s.curve_u.curvature(float(u), 1).alpha.value for u in us])
    alpha_v = np.array([s.curve_v.curvature(float(v), 1).alpha.value for v in vs])
    t31 = np.empty((grid_n, grid_n))
    t32 = np.empty((grid_n, grid_n))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            t31[i, j] = s.field.partial_value(3, 1, float(u), float(v))
            t32[i, j] = s.field.partial_value(3, 2, float(u), float(v))
    hyp = np.hypot(t31, t32)

    # residual landscape and locally-minimal candidate cells per condition
    cand: list[tuple[float, float, str]] = []
    thresh = 2.0 * spacing  # generous: Newton discards false positives
    for i, u in enumerate(us):
        if abs(alpha_u[i]) < thresh * max(1.0, _slope(alpha_u, i, du)):
            for j in range(0, grid_n, 2):
                cand.append((float(u), float(vs[j]), "i"))
    for j, v in enumerate(vs):
        if abs(alpha_v[j]) < thresh * max(1.0, _slope(alpha_v, j, dv)):
            for i in range(0, grid_n, 2):
                cand.append((float(us[i]), float(v), "ii"))
    for i in range(grid_n):
        for j in range(grid_n):
            if hyp[i, j] < thresh * max(1.0, _grid_slope(hyp, i, j, spacing)):
                cand.append((float(us[i]), float(vs[j]), "iii"))

    refined: list[SingularPoint] = []
    for (cu, cv, cond) in cand:
        if cond == "i":
            root = _newton_alpha(s.curve_u, cu, tol)
            pt = (root, cv) if root is not None else None
        elif cond == "ii":
            root = _newton_alpha(s.curve_v, cv, tol)
            pt = (cu, root) if root is not None else None
        else:
            pt = _newton_t3(s, cu, cv, tol)
        if pt is None:
            continue
        pu, pv = pt
        slack = 1e-7
        if not (u0 - slack <= pu <= u1 + slack and v0 - slack <= pv <= v1 + slack):
            continue
        refined.append(_make_point(s, (pu, pv), tol))

    return _merge_points(refined, merge_radius)


def _slope(arr: np.ndarray, i: int, h: float) -> float:
    lo, hi = max(i - 1, 0), min(i + 1, len(arr) - 1)
    if hi == lo:
        return 1.0
    return abs(arr[hi] - arr[lo]) / ((hi - lo) * h)


def _grid_slope(arr: np.ndarray, i: int, j: int, h: float) -> float:
    n = arr.shape[0]
    gi = abs(arr[min(i + 1, n - 1), j] - arr[max(i - 1, 0), j])
    gj = abs(arr[i, min(j + 1, n - 1)] - arr[i, max(j - 1, 0)])
    return max(gi, gj) / (2 * h)


def _make_point(s: TranslationSurface, p: tuple[float, float],
                tol: float) -> SingularPoint:
    au, av = s.alpha_values(p)
    t31 = s.field.partial_value(3, 1, p[0], p[1])
    t32 = s.field.partial_value(3, 2, p[0], p[1])
    conds = []
    if abs(au) < tol * 10:
        conds.append("i")
    if abs(av) < tol * 10:
        conds.append("ii")
    if math.hypot(t31, t32) < tol * 10:
        conds.append("iii")
    dep = dependence_test(s, p)
    sv = np.linalg.svd(s.dx_matrix(p), compute_uv=False)
    corank = int(np.sum(sv < s.tols.rank_tol * max(1.0, sv[0])))
    return SingularPoint(
        u=p[0], v=p[1], conditions=tuple(conds),
        dependence="dependent" if dep.dependent else "independent",
        corank=min(corank, 2) if corank else 1,
        residual=s.singular_residual(p))


def _merge_points(points: list[SingularPoint],
                  radius: float) -> list[SingularPoint]:
    points = sorted(points, key=lambda q: (q.u, q.v))
    kept: list[SingularPoint] = []
    for q in points:
        dup = None
        for k in kept:
            if math.hypot(k.u - q.u, k.v - q.v) < 0.35 * radius:
                dup = k
                break
        if dup is None:
            kept.append(q)
    # a point on a curve-shaped component has neighbours within the merge radius
    for q in kept:
        neighbours = sum(
            1 for k in kept
            if k is not q and math.hypot(k.u - q.u, k.v - q.v) < radius)
        q.isolated = neighbours < 2
    return kept


def canonical_periodic_points(points: list[SingularPoint], period: float,
                              merge_radius: float = 1e-6) -> list[SingularPoint]:
    """Fold a singular set of a doubly periodic surface into [0, period)^2.

    Boundary duplicates collapse, and points whose curve-shaped component only
    leaves the scan window (e.g. window corners on a shifted diagonal copy)
    regain their non-isolated flag through the periodic distance.
    """
    folded: list[SingularPoint] = []
    for q in points:
        u = q.u % period
        v = q.v % period
        if abs(u - period) < merge_radius:
            u = 0.0
        if abs(v - period) < merge_radius:
            v = 0.0
        folded.append(SingularPoint(u, v, q.conditions, q.dependence,
                                    q.corank, q.isolated, q.residual))

    def pdist(a: SingularPoint, b: SingularPoint) -> float:
        du_ = min(abs(a.u - b.u), period - abs(a.u - b.u))
        dv_ = min(abs(a.v - b.v), period - abs(a.v - b.v))
        return math.hypot(du_, dv_)

    kept: list[SingularPoint] = []
    for q in sorted(folded, key=lambda r: (r.u, r.v)):
        if all(pdist(q, k) > merge_radius for k in kept):
            kept.append(q)
    for q in kept:
        near = [k for k in kept if k is not q and pdist(q, k) < 0.5]
        if len(near) >= 2:
            q.isolated = False
    return kept


def export_singular_csv(points: list[SingularPoint], path: str):
    """CSV rows ``u,v,conditions,dependence,isolated``, sorted by (u, v)."""
    lines = ["u,v,conditions,dependence,isolated"]
    for q in sorted(points, key=lambda r: (r.u, r.v)):
        lines.append("{:.17g},{:.17g},{},{},{}".format(
            q.u, q.v, "|".join(q.conditions), q.dependence,
            "true" if q.isolated else "false"))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
