"""Framed-surface structure on a translation surface: the normal-angle field
theta with t32 cos(theta) + t31 sin(theta) = 0, the framed-surface invariants
and curvature, the signed area density, and the front test.

Away from zeros of (t31, t32) the canonical branch is
theta = atan2(-t32, t31), which makes Lambda = -t32 sin(theta) +
t31 cos(theta) = hypot(t31, t32) > 0 and fixes the orientation of the normal.
At a zero the canonical branch jumps by pi; the smooth continuation through
the zero (the branch every criterion needs) is recovered from one-sided jets
of (t31, t32) along rays: if the directional limits of the angle disagree
there is no continuous normal and the surface is not a framed base surface
at that point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as expr_mod
from . import jets
from .errors import ThetaResidualError, ThetaUnavailable
from .jets import BiJet, Jet
from .surface import TranslationSurface
from .tolerances import DEFAULT, Tolerances

_EXT_RADIUS = 1e-6   # hypot(t31, t32) below this uses the limit extension


def _ray_jet(f: Jet, d: float) -> Jet:
    """Jet in s of t -> f(t0 + s d) at s = 0."""
    return Jet(0.0, f.d * np.power(d, np.arange(f.order + 1)))


def _deflate(d: np.ndarray) -> np.ndarray:
    """Taylor division by s for a jet vanishing at 0 (derivative storage)."""
    return d[1:] / np.arange(1.0, len(d))


@dataclass
class ThetaPoint:
    """Normal angle at one point: value, jet data and provenance."""

    u: float
    v: float
    value: float = 0.0
    bijet: BiJet | None = None
    provenance: str = "atan2_branch"    # | closed_form | limit_extension | unavailable
    residual: float = 0.0
    reason: str = ""

    @property
    def available(self) -> bool:
        return self.provenance != "unavailable"

    def require(self) -> BiJet:
        if not self.available or self.bijet is None:
            raise ThetaUnavailable(self.reason or "no theta data")
        return self.bijet


class ThetaField:
    """Branch-tracked normal-angle field over a region or around a point."""

    def __init__(self, s: TranslationSurface, tols: Tolerances = DEFAULT,
                 user_nodes=None, anchor: tuple[float, float] | None = None):
        self.s = s
        self.tols = tols
        self.user_nodes = user_nodes
        self.grid: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
        self._anchor_value: float | None = None
        if anchor is not None:
            pt = self.at(anchor, ref=None)
            if pt.available:
                self._anchor_value = pt.value

    # -- raw ingredients ------------------------------------------------------

    def _t_pair_bijets(self, p, degree):
        u, v = p
        ff = self.s.field
        return (ff.t_bijet(3, 1, u, v, degree), ff.t_bijet(3, 2, u, v, degree))

    def _t_pair_ray(self, p, d, order=6):
        """Univariate jets of (t31, -t32) along p + s d."""
        u, v = p
        d1, d2 = d
        a = self.s.curve_u
        b = self.s.curve_v
        t31 = Jet.constant(0.0, 0.0, order)
        t32 = Jet.constant(0.0, 0.0, order)
        row_b = b.mu_jets(v, order)
        for c in range(3):
            bj = _ray_jet(row_b[c], d2)
            t31 = t31 + bj * _ray_jet(a.nu1_jets(u, order)[c], d1)
            t32 = t32 + bj * _ray_jet(a.nu2_jets(u, order)[c], d1)
        return t31, -t32

    def _ray_angle_jet(self, p, d, zero_tol=1e-9):
        """One-sided jet of the angle of (t31, -t32) along the ray direction d.

        Common zeros of the pair are factored out first; returns None for a
        ray along which the pair vanishes to high order.
        """
        a, b = self._t_pair_ray(p, d)
        da, db = a.d.copy(), b.d.copy()
        scale = max(np.max(np.abs(da)), np.max(np.abs(db)))
        if scale < 1e-12:
            # the pair vanishes along this ray up to roundoff
            return None
        while (abs(da[0]) < zero_tol * scale and abs(db[0]) < zero_tol * scale
               and len(da) > 3):
            da, db = _deflate(da), _deflate(db)
        r = math.hypot(da[0], db[0])
        if r < zero_tol * scale:
            return None
        # a common positive rescale leaves the angle (and its jet) unchanged
        return jets.atan2(Jet(0.0, db / r), Jet(0.0, da / r))

    # -- limit extension ------------------------------------------------------

    def _extension(self, p, ref) -> ThetaPoint:
        tol = self.tols.theta_dir_tol
        dirs = [k * math.pi / 8 for k in range(16)]
        doubled = []
        for psi in dirs:
            aj = self._ray_angle_jet(p, (math.cos(psi), math.sin(psi)))
            if aj is None:
                continue
            doubled.append(2.0 * aj.value)
        if len(doubled) < 8:
            return ThetaPoint(p[0], p[1], provenance="unavailable",
                              reason="tangent pair vanishes to high order "
                                     "along most directions")
        # mod-pi agreement via the doubled-angle embedding
        zx = np.mean(np.cos(doubled))
        zy = np.mean(np.sin(doubled))
        if math.hypot(zx, zy) < 1e-12:
            return ThetaPoint(p[0], p[1], provenance="unavailable",
                              reason="directional limits of the normal angle "
                                     "are isotropic")
        mean2 = math.atan2(zy, zx)
        spread = max(abs(_wrap_pi(t - mean2)) for t in doubled) / 2.0
        if spread > tol:
            return ThetaPoint(
                p[0], p[1], provenance="unavailable", residual=spread,
                reason=("no continuous normal angle: directional limits "
                        f"spread {spread:.3e}; the surface is not a framed "
                        "base surface here"))

        theta0 = _align_pi(mean2 / 2.0, ref)

        # derivatives from one-sided jets along the axes and diagonals
        def dpair(d):
            plus = self._ray_angle_jet(p, d)
            minus = self._ray_angle_jet(p, (-d[0], -d[1]))
            if plus is None or minus is None:
                return None
            d1p, d1m = plus.deriv(1), -minus.deriv(1)
            d2p, d2m = plus.deriv(2), minus.deriv(2)
            if (abs(d1p - d1m) > max(1.0, abs(d1p)) * 1e2 * tol
                    or abs(d2p - d2m) > max(1.0, abs(d2p)) * 1e3 * tol):
                return None
            return (0.5 * (d1p + d1m), 0.5 * (d2p + d2m))

        def fd_pair(d):
            # along a direction inside the singular set the rays carry no
            # signal; difference the extended values of neighbours instead
            def f(step):
                q = (p[0] + step * d[0], p[1] + step * d[1])
                return self._smooth_value(q, theta0)

            try:
                samples = {s: f(s) for s in
                           (1e-3, -1e-3, 5e-4, -5e-4)}
            except Exception:
                return None
            if any(val is None for val in samples.values()):
                return None
            d1a = (samples[1e-3] - samples[-1e-3]) / 2e-3
            d1b = (samples[5e-4] - samples[-5e-4]) / 1e-3
            d2a = (samples[1e-3] - 2 * theta0 + samples[-1e-3]) / 1e-6
            d2b = (samples[5e-4] - 2 * theta0 + samples[-5e-4]) / 2.5e-7
            return ((4 * d1b - d1a) / 3.0, (4 * d2b - d2a) / 3.0)

        axes = {}
        for name, d in (("u", (1.0, 0.0)), ("v", (0.0, 1.0)),
                        ("diag", (math.sqrt(0.5), math.sqrt(0.5))),
                        ("anti", (math.sqrt(0.5), -math.sqrt(0.5)))):
            axes[name] = dpair(d) or fd_pair(d)
        if any(val is None for val in axes.values()):
            return ThetaPoint(
                p[0], p[1], value=theta0, provenance="unavailable",
                reason="one-sided angle derivatives disagree across the point")
        tu, tuu = axes["u"]
        tv, tvv = axes["v"]
        _, tdg = axes["diag"]
        _, tag = axes["anti"]
        tuv = tdg - 0.5 * (tuu + tvv)
        tuv_check = 0.5 * (tuu + tvv) - tag
        resid = abs(tuv - tuv_check)
        c = np.zeros((3, 3))
        c[0, 0] = theta0
        c[1, 0], c[0, 1] = tu, tv
        c[2, 0], c[1, 1], c[0, 2] = tuu, 0.5 * (tuv + tuv_check), tvv
        return ThetaPoint(p[0], p[1], value=theta0,
                          bijet=BiJet(p[0], p[1], c),
                          provenance="limit_extension",
                          residual=max(spread, resid))

    def _smooth_value(self, q, ref) -> float | None:
        """Branch-aligned angle value at q (extension where needed)."""
        t31 = self.s.field.partial_value(3, 1, q[0], q[1])
        t32 = self.s.field.partial_value(3, 2, q[0], q[1])
        if math.hypot(t31, t32) >= _EXT_RADIUS:
            return _align_pi(math.atan2(-t32, t31), ref)
        dirs = [k * math.pi / 8 for k in range(16)]
        doubled = []
        for psi in dirs:
            aj = self._ray_angle_jet(q, (math.cos(psi), math.sin(psi)))
            if aj is not None:
                doubled.append(2.0 * aj.value)
        if len(doubled) < 8:
            return None
        zx, zy = np.mean(np.cos(doubled)), np.mean(np.sin(doubled))
        if math.hypot(zx, zy) < 1e-12:
            return None
        mean2 = math.atan2(zy, zx)
        if max(abs(_wrap_pi(t - mean2)) for t in doubled) / 2 > self.tols.theta_dir_tol:
            return None
        return _align_pi(mean2 / 2.0, ref)

    # -- public evaluation ----------------------------------------------------

    def at(self, p: tuple[float, float], degree: int = 3,
           ref="auto") -> ThetaPoint:
        """Normal angle with derivatives at p, branch-aligned to the field.

        ``ref`` is a reference angle for mod-pi branch selection; the default
        pulls it from the tracked grid or the anchor point, None keeps the
        canonical atan2 branch.
        """
        u, v = p
        if ref == "auto":
            ref = self.reference(p)
        if self.user_nodes is not None:
            env = {"u": BiJet.variable_u(u, v, degree),
                   "v": BiJet.variable_v(u, v, degree)}
            th = expr_mod.evaluate(self.user_nodes, env)
            if isinstance(th, (int, float)):
                th = BiJet.constant(float(th), u, v, degree)
            resid = self._defining_residual(p, th.value)
            if resid > self.tols.theta_tol:
                raise ThetaResidualError(
                    f"user theta violates its defining equation at {p} "
                    f"(residual {resid:.3e})")
            return ThetaPoint(u, v, value=th.value, bijet=th,
                              provenance="closed_form", residual=resid)

        t31 = self.s.field.partial_value(3, 1, u, v)
        t32 = self.s.field.partial_value(3, 2, u, v)
        if math.hypot(t31, t32) < _EXT_RADIUS:
            return self._extension(p, ref)
        b31, b32 = self._t_pair_bijets(p, degree)
        th = jets.atan2(-b32, b31)
        value = _align_pi(th.value, ref)
        if value != th.value:
            c = th.c.copy()
            c[0, 0] = value
            th = BiJet(u, v, c)
        return ThetaPoint(u, v, value=value, bijet=th,
                          provenance="atan2_branch",
                          residual=self._defining_residual(p, value))

    def _defining_residual(self, p, theta: float) -> float:
        u, v = p
        t31 = self.s.field.partial_value(3, 1, u, v)
        t32 = self.s.field.partial_value(3, 2, u, v)
        return abs(t32 * math.cos(theta) + t31 * math.sin(theta))

    # -- region tracking ------------------------------------------------------

    def track_region(self, window: tuple[float, float, float, float],
                     grid_n: int = 33):
        """Serpentine branch tracking over a grid; fills the reference field."""
        u0, u1, v0, v1 = window
        us = np.linspace(u0, u1, grid_n)
        vs = np.linspace(v0, v1, grid_n)
        vals = np.zeros((grid_n, grid_n))
        prev = self._anchor_value
        for i in range(grid_n):
            js = range(grid_n) if i % 2 == 0 else range(grid_n - 1, -1, -1)
            for j in js:
                pt = self.at((float(us[i]), float(vs[j])), degree=2, ref=prev)
                if pt.available:
                    vals[i, j] = pt.value
                    prev = pt.value
                else:
                    vals[i, j] = np.nan
        self.grid = (us, vs, vals)
        return self

    def reference(self, p) -> float | None:
        if self.grid is None:
            return self._anchor_value
        us, vs, vals = self.grid
        i = int(np.clip(np.searchsorted(us, p[0]) - 1, 0, len(us) - 2))
        j = int(np.clip(np.searchsorted(vs, p[1]) - 1, 0, len(vs) - 2))
        block = vals[i:i + 2, j:j + 2]
        good = block[np.isfinite(block)]
        if len(good):
            return float(good[0])
        return self._anchor_value

    def branch_continuity_violation(self) -> float:
        """Largest jump between consecutive samples of the tracked path.

        Around a point with no continuous normal angle (a cross cap) the
        field carries a genuine branch cut, so only continuity along the
        tracking path itself is meaningful there; transverse adjacencies can
        jump by pi no matter how branches are chosen.
        """
        if self.grid is None:
            raise ValueError("track_region first")
        vals = self.grid[2]
        n = vals.shape[0]
        seq = []
        for i in range(n):
            js = range(n) if i % 2 == 0 else range(n - 1, -1, -1)
            seq.extend(vals[i, j] for j in js)
        arr = np.array([x for x in seq if np.isfinite(x)])
        if len(arr) < 2:
            return 0.0
        return float(np.max(np.abs(np.diff(arr))))

    def export_csv(self, path: str):
        """Grid dump ``u,v,theta,residual`` for debugging."""
        if self.grid is None:
            raise ValueError("track_region first")
        us, vs, vals = self.grid
        lines = ["u,v,theta,residual"]
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                th = vals[i, j]
                resid = (self._defining_residual((float(u), float(v)), th)
                         if np.isfinite(th) else float("nan"))
                lines.append("{:.17g},{:.17g},{:.17g},{:.17g}".format(
                    u, v, th, resid))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _wrap_pi(x: float) -> float:
    return (x + math.pi) % (2 * math.pi) - math.pi


def _align_pi(theta: float, ref: float | None) -> float:
    """Shift theta by a multiple of pi to land nearest the reference."""
    if ref is None:
        return theta
    k = round((ref - theta) / math.pi)
    return theta + k * math.pi


def construct_theta(s: TranslationSurface,
                    p0: tuple[float, float] | None = None,
                    region: tuple[float, float, float, float] | None = None,
                    grid_n: int = 33,
                    user_expr: str | None = None,
                    tols: Tolerances = DEFAULT) -> ThetaField:
    """Build the normal-angle field for a surface.

    ``p0`` anchors the branch at a point (the classification entry point);
    ``region`` additionally tracks a grid for branch references and dumps.
    ``user_expr`` supplies a closed-form angle in (u, v), residual-checked.
    """
    nodes = expr_mod.parse_expression(user_expr) if user_expr else None
    fieldv = ThetaField(s, tols=tols, user_nodes=nodes, anchor=p0)
    if region is not None:
        fieldv.track_region(region, grid_n)
    return fieldv


# ---------------------------------------------------------------------------
# framed-surface invariants and curvature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FSInvariants:
    a1: BiJet; b1: BiJet; a2: BiJet; b2: BiJet
    e1: BiJet; f1: BiJet; g1: BiJet
    e2: BiJet; f2: BiJet; g2: BiJet
    JF: BiJet; KF: BiJet; HF: BiJet
    bn: tuple[BiJet, BiJet, BiJet]


def _embed_curvature(s: TranslationSurface, p, degree):
    u, v = p
    ca = s.curve_u.curvature(u, degree + 1)
    cb = s.curve_v.curvature(v, degree + 1)

    def eu(j):
        return BiJet.from_u_jet(j.truncate(degree), v, degree)

    def ev(j):
        return BiJet.from_v_jet(j.truncate(degree), u, degree)

    return (eu(ca.l), eu(ca.m), eu(ca.n), eu(ca.alpha),
            ev(cb.l), ev(cb.m), ev(cb.n), ev(cb.alpha))


def fs_invariants(s: TranslationSurface, theta: ThetaField | ThetaPoint,
                  p: tuple[float, float], degree: int = 3) -> FSInvariants:
    """Invariants of (x, bn, mu) where bn = sin(theta) nu1 + cos(theta) nu2."""
    pt = theta if isinstance(theta, ThetaPoint) else theta.at(p, degree)
    th = pt.require()
    degree = min(degree, th.degree)
    th = th.truncate(degree)
    u, v = p
    l, m, n, al, lt, mt, nt, at = _embed_curvature(s, p, degree)
    ff = s.field
    t31 = ff.t_bijet(3, 1, u, v, degree)
    t32 = ff.t_bijet(3, 2, u, v, degree)
    t33 = ff.t_bijet(3, 3, u, v, degree)
    sth, cth = jets.sin(th), jets.cos(th)
    zero = BiJet.constant(0.0, u, v, degree)
    Lam = -t32 * sth + t31 * cth

    a1, b1 = al, zero
    a2, b2 = at * t33, at * Lam
    e1 = m * sth + n * cth
    f1 = th.du() - l.truncate(degree - 1)
    g1 = n * sth - m * cth
    e2 = zero
    f2 = th.dv()
    g2 = zero
    JF = a1 * b2 - a2 * b1
    KF = f2 * e1.truncate(degree - 1)
    HF = -0.5 * ((a1.truncate(degree - 1) * f2 - a2.truncate(degree - 1) * f1)
                 - (b1.truncate(degree - 1) * e2.truncate(degree - 1)
                    - b2.truncate(degree - 1) * e1.truncate(degree - 1)))

    nu1 = [BiJet.from_u_jet(c.truncate(degree), v, degree)
           for c in s.curve_u.nu1_jets(u, degree + 1)]
    nu2 = [BiJet.from_u_jet(c.truncate(degree), v, degree)
           for c in s.curve_u.nu2_jets(u, degree + 1)]
    bn = tuple(sth * nu1[c] + cth * nu2[c] for c in range(3))
    return FSInvariants(a1=a1, b1=b1, a2=a2, b2=b2,
                        e1=e1, f1=f1, g1=g1, e2=e2, f2=f2, g2=g2,
                        JF=JF, KF=KF, HF=HF, bn=bn)


# ---------------------------------------------------------------------------
# discriminant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Discriminant:
    lam: BiJet                 # alpha alpha~ Lambda = det(x_u, x_v, bn)
    Lambda: BiJet              # normalized density -t32 sin(theta) + t31 cos(theta)
    eta: tuple[BiJet, BiJet]   # null field coefficients (-alpha~ t33, alpha)
    xi: tuple[float, float]    # transverse direction


def discriminant(s: TranslationSurface, theta: ThetaField | ThetaPoint,
                 p: tuple[float, float], degree: int = 3) -> Discriminant:
    pt = theta if isinstance(theta, ThetaPoint) else theta.at(p, degree)
    th = pt.require()
    degree = min(degree, th.degree)
    th = th.truncate(degree)
    u, v = p
    _, _, _, al, _, _, _, at = _embed_curvature(s, p, degree)
    ff = s.field
    t31 = ff.t_bijet(3, 1, u, v, degree)
    t32 = ff.t_bijet(3, 2, u, v, degree)
    t33 = ff.t_bijet(3, 3, u, v, degree)
    sth, cth = jets.sin(th), jets.cos(th)
    Lam = -t32 * sth + t31 * cth
    lam = al * at * Lam
    eta = (-(at * t33), al)
    xi = (1.0, 0.0) if abs(al.value) > s.tols.hyp_tol else (0.0, 1.0)
    return Discriminant(lam=lam, Lambda=Lam, eta=eta, xi=xi)


def lambda_direct_value(s: TranslationSurface, theta_value: float,
                        p: tuple[float, float]) -> float:
    """det(x_u, x_v, bn) evaluated directly; cross-check for the closed form."""
    u, v = p
    xu = np.array([c.deriv(1) for c in s.curve_u.gamma_jets(u, 2)])
    xv = np.array([c.deriv(1) for c in s.curve_v.gamma_jets(v, 2)])
    n1 = np.array([c.value for c in s.curve_u.nu1_jets(u, 2)])
    n2 = np.array([c.value for c in s.curve_u.nu2_jets(u, 2)])
    bn = math.sin(theta_value) * n1 + math.cos(theta_value) * n2
    return float(np.linalg.det(np.column_stack([xu, xv, bn])))


def directional_derivative(f: BiJet, direction: tuple[BiJet, BiJet]) -> BiJet:
    """BiJet of (w . grad f) for a vector field w with BiJet coefficients."""
    d = f.degree - 1
    return (direction[0].truncate(d) * f.du()
            + direction[1].truncate(d) * f.dv())


def closed_form_density_partials(s: TranslationSurface, pt: ThetaPoint,
                                 p: tuple[float, float]) -> dict[str, float]:
    """First/second partials of the normalized density at a dependent
    singular point, in closed form (the jet route is the cross-check)."""
    u, v = p
    th = pt.value
    sthv, cthv = math.sin(th), math.cos(th)
    ca = s.curve_u.curvature(u, 2)
    cb = s.curve_v.curvature(v, 2)
    l, m, n = ca.l.value, ca.m.value, ca.n.value
    m_u, n_u = ca.m.deriv(1), ca.n.deriv(1)
    lt, mt, nt = cb.l.value, cb.m.value, cb.n.value
    mt_v, nt_v = cb.m.deriv(1), cb.n.deriv(1)
    ff = s.field
    t = {(i, j): ff.partial_value(i, j, u, v) for i in (1, 2, 3) for j in (1, 2, 3)}
    return {
        "Lambda_u": t[3, 3] * (-n * sthv + m * cthv),
        "Lambda_v": ((mt * t[1, 2] + nt * t[2, 2]) * sthv
                     - (mt * t[1, 1] + nt * t[2, 1]) * cthv),
        "Lambda_uu": t[3, 3] * (-n_u * sthv + m_u * cthv),
        "Lambda_uv": 0.0,
        "Lambda_vv": (((mt_v - lt * nt) * t[1, 2] + (nt_v + lt * mt) * t[2, 2]) * sthv
                      - ((mt_v - lt * nt) * t[1, 1] + (nt_v + lt * mt) * t[2, 1]) * cthv),
    }


# ---------------------------------------------------------------------------
# front test
# ---------------------------------------------------------------------------

def front_decision(rank: int, HF: float, KF: float, tol: float) -> tuple[str, float]:
    """Front vs frontal-only from the framed-surface curvature."""
    if rank == 1:
        return ("front" if abs(HF) > tol else "frontal_only", HF)
    if rank == 0:
        return ("front" if abs(KF) > tol else "frontal_only", KF)
    raise ValueError("front test applies to singular points only")


def front_test(s: TranslationSurface, theta: ThetaField | ThetaPoint,
               p: tuple[float, float]) -> tuple[str, float, int]:
    """Classify p as front or frontal-only; returns (verdict, witness, rank)."""
    sv = np.linalg.svd(s.dx_matrix(p), compute_uv=False)
    rank = int(np.sum(sv > s.tols.rank_tol * max(1.0, sv[0])))
    inv = fs_invariants(s, theta, p, degree=2)
    verdict, witness = front_decision(rank, inv.HF.value, inv.KF.value,
                                      s.tols.front_tol)
    return verdict, witness, rank


# ---------------------------------------------------------------------------
# relational-equation oracles (test support, not production logic)
# ---------------------------------------------------------------------------

def lemma_oracle(s: TranslationSurface, theta: ThetaField | ThetaPoint,
                 p0: tuple[float, float]) -> dict[int, float]:
    """Residuals of the nine relations obtained by differentiating the
    defining equation of theta up to third order, evaluated at a dependent
    singular point."""
    pt = theta if isinstance(theta, ThetaPoint) else theta.at(p0)
    th = pt.require()
    u, v = p0
    sth, cth = math.sin(pt.value), math.cos(pt.value)
    tu, tv = th.part(1, 0), th.part(0, 1)
    tuu, tuv, tvv = th.part(2, 0), th.part(1, 1), th.part(0, 2)
    ca = s.curve_u.curvature(u, 3)
    cb = s.curve_v.curvature(v, 3)
    l, m, n = ca.l.value, ca.m.value, ca.n.value
    l_u, m_u, n_u = ca.l.deriv(1), ca.m.deriv(1), ca.n.deriv(1)
    m_uu, n_uu = ca.m.deriv(2), ca.n.deriv(2)
    lt, mt, nt = cb.l.value, cb.m.value, cb.n.value
    lt_v, mt_v, nt_v = cb.l.deriv(1), cb.m.deriv(1), cb.n.deriv(1)
    mt_vv, nt_vv = cb.m.deriv(2), cb.n.deriv(2)
    ff = s.field
    t = {(i, j): ff.partial_value(i, j, u, v) for i in (1, 2) for j in (1, 2, 3)}
    t[3, 3] = ff.partial_value(3, 3, u, v)

    r = {}
    r[1] = m * sth + n * cth
    r[2] = (-(mt * t[1, 2] + nt * t[2, 2]) * cth
            - (mt * t[1, 1] + nt * t[2, 1]) * sth)
    r[3] = ((l * n + m_u - 2 * n * tu) * sth
            + (-l * m + n_u + 2 * m * tu) * cth)
    r[4] = (((l - tu) * (mt * t[1, 1] + nt * t[2, 1]) + tv * m * t[3, 3]) * cth
            - ((l - tu) * (mt * t[1, 2] + nt * t[2, 2]) + tv * n * t[3, 3]) * sth)
    r[5] = (((-mt_v + lt * nt) * t[1, 2] - (lt * mt + nt_v) * t[2, 2]
             - 2 * (mt * t[1, 1] + nt * t[2, 1]) * tv) * cth
            + ((-mt_v + lt * nt) * t[1, 1] - (lt * mt + nt_v) * t[2, 1]
               + 2 * (mt * t[1, 2] + nt * t[2, 2]) * tv) * sth)
    r[6] = ((3 * (tuu * m + tu * m_u) - l * m_u + n_uu - 2 * l_u * m) * cth
            - (3 * (tuu * n + tu * n_u) - l * n_u - m_uu - 2 * l_u * n) * sth)
    r[7] = (((l_u + m * n - tuu) * (mt * t[1, 1] + nt * t[2, 1])
             + (tv * (l * n + m_u) + 2 * tuv * m) * t[3, 3]) * cth
            - ((l_u - m * n - tuu) * (mt * t[1, 2] + nt * t[2, 2])
               + (tv * (-l * m + n_u) + 2 * tuv * n) * t[3, 3]) * sth)
    # the (t11, t21) group carries cos(theta) here: the other pairing fails
    # its own unit-speed specialization (and the numerics)
    r[8] = (((2 * tuv * mt - (lt * nt - mt_v) * (tu - l)) * t[1, 1]
             + (2 * tuv * nt + (lt * mt + nt_v) * (tu - l)) * t[2, 1]
             - tvv * m * t[3, 3]) * cth
            - ((2 * tuv * mt - (lt * nt - mt_v) * (tu - l)) * t[1, 2]
               + (2 * tuv * nt + (lt * mt + nt_v) * (tu - l)) * t[2, 2]
               - tvv * n * t[3, 3]) * sth)
    r[9] = ((3 * (tv * (lt * nt - mt_v) - tvv * mt) * t[1, 1]
             + (lt_v * nt - mt_vv + 2 * lt * nt_v) * t[1, 2]
             - 3 * (tv * (lt * mt + nt_v) + tvv * nt) * t[2, 1]
             - (lt_v * mt + nt_vv + 2 * lt * mt_v) * t[2, 2]) * cth
            + ((lt_v * nt - mt_vv + 2 * lt * nt_v) * t[1, 1]
               - 3 * (tv * (lt * nt - mt_v) - tvv * mt) * t[1, 2]
               - (lt_v * mt + nt_vv + 2 * lt * mt_v) * t[2, 1]
               + 3 * (tv * (lt * mt + nt_v) + tvv * nt) * t[2, 2]) * sth)
    return {k: float(val) for k, val in r.items()}


def unit_speed_oracle(s: TranslationSurface, theta: ThetaField | ThetaPoint,
                      p0: tuple[float, float]) -> dict[int, float]:
    """The same relations specialized to a pair of non-degenerate unit-speed
    curves, expressed through curvature and torsion."""
    pt = theta if isinstance(theta, ThetaPoint) else theta.at(p0)
    th = pt.require()
    u, v = p0
    if s.curve_u.frenet is None or s.curve_v.frenet is None:
        raise ValueError("both curves need curvature/torsion data")
    tu, tv = th.part(1, 0), th.part(0, 1)
    tuu, tuv, tvv = th.part(2, 0), th.part(1, 1), th.part(0, 2)
    ka = s.curve_u.frenet.kappa(u, 2)
    ta = s.curve_u.frenet.tau(u, 2)
    kb = s.curve_v.frenet.kappa(v, 2)
    tb = s.curve_v.frenet.tau(v, 2)
    kappa, kappa_u = ka.value, ka.deriv(1)
    tau, tau_u = ta.value, ta.deriv(1)
    kappat, kappat_v = kb.value, kb.deriv(1)
    taut, taut_v = tb.value, tb.deriv(1)
    ff = s.field
    t11 = ff.partial_value(1, 1, u, v)
    t12 = ff.partial_value(1, 2, u, v)
    t22 = ff.partial_value(2, 2, u, v)
    t33 = ff.partial_value(3, 3, u, v)

    return {
        1: math.sin(pt.value),
        2: t12,
        3: tu - tau / 2.0,
        4: kappat * (tau - tu) * t11 + tv * kappa * t33,
        5: taut * t22 + 2 * t11 * tv,
        6: 3 * tuu * kappa + 0.5 * tau * kappa_u - 2 * tau_u * kappa,
        7: (kappat * t11 * (tuu - tau_u)
            - (tv * kappa_u + 2 * tuv * kappa) * t33),
        8: ((2 * tuv * kappat + kappat_v * (tu - tau)) * t11
            - tvv * kappa * t33),
        9: (3 * (tv * kappat_v + tvv * kappat) * t11
            + (taut_v * kappat + 2 * taut * kappat_v) * t22),
    }
