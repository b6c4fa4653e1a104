"""The frame matrix T(u, v) between two framed curves, its differential
identities, and reconstruction of framed curves from curvature data.

Row/column conventions are load-bearing: T maps the frame of curve A at u to
the frame of curve B at v, with rows ordered (nu1, nu2, mu), so

    t_ij(u, v) = (frame of B at v)_i . (frame of A at u)_j.

Every entry (and any of its partials) is assembled exactly from tensor
products of univariate jets of the two curves; nothing is ever obtained by
differencing a truncated field, so derivative entries carry full accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import FramedCurve, FramedCurvature, VecJets, shift3
from .errors import NotIntegrable
from .jets import BiJet, Jet
from .tolerances import DEFAULT, Tolerances


def _shift_n(v: VecJets, k: int) -> VecJets:
    for _ in range(k):
        v = shift3(v)
    return v


class FrameField:
    """Evaluator for the frame matrix of a pair of framed curves."""

    def __init__(self, curve_a: FramedCurve, curve_b: FramedCurve):
        self.curve_a = curve_a
        self.curve_b = curve_b

    def t_bijet(self, i: int, j: int, u: float, v: float,
                degree: int = 3, du: int = 0, dv: int = 0) -> BiJet:
        """BiJet of (d/du)^du (d/dv)^dv t_ij at (u, v).

        Differentiated entries are assembled from shifted univariate frame
        jets, so they have full degree (no truncation loss).
        """
        order = degree + max(du, dv)
        row_b = _shift_n(self.curve_b.frame_row(i, v, order), dv)
        row_a = _shift_n(self.curve_a.frame_row(j, u, order), du)
        out = BiJet.constant(0.0, u, v, degree)
        for c in range(3):
            out = out + (BiJet.from_u_jet(row_a[c].truncate(degree), v, degree)
                         * BiJet.from_v_jet(row_b[c].truncate(degree), u, degree))
        return out

    def value(self, u: float, v: float) -> np.ndarray:
        a_rows = [self.curve_a.frame_row(i, u, 2) for i in (1, 2, 3)]
        b_rows = [self.curve_b.frame_row(i, v, 2) for i in (1, 2, 3)]
        av = np.array([[c.value for c in row] for row in a_rows])
        bv = np.array([[c.value for c in row] for row in b_rows])
        return bv @ av.T

    def matrix_bijets(self, u: float, v: float, degree: int = 3) -> list[list[BiJet]]:
        return [[self.t_bijet(i, j, u, v, degree) for j in (1, 2, 3)]
                for i in (1, 2, 3)]

    def partial_value(self, i: int, j: int, u: float, v: float,
                      du: int = 0, dv: int = 0) -> float:
        order = max(2, du + dv)
        row_b = _shift_n(self.curve_b.frame_row(i, v, order), dv)
        row_a = _shift_n(self.curve_a.frame_row(j, u, order), du)
        return math.fsum(row_b[c].value * row_a[c].value for c in range(3))


# ---------------------------------------------------------------------------
# compatibility identities
# ---------------------------------------------------------------------------

def _curvature_matrix(c: FramedCurvature) -> np.ndarray:
    l, m, n = c.l.value, c.m.value, c.n.value
    return np.array([[0.0, l, m], [-l, 0.0, n], [-m, -n, 0.0]])


@dataclass
class CompatibilityReport:
    """Max-norm residuals of the frame-matrix identities over a grid."""

    so3_orth: float = 0.0          # || T^t T - I ||_max
    so3_det: float = 0.0           # | det T - 1 |
    du_identity: float = 0.0       # T_u + T F(u)
    dv_identity: float = 0.0       # T_v - F~(v) T
    scalar_recursions: float = 0.0
    second_order: float = 0.0      # T_uv - T_v T^t T_u
    grid_shape: tuple[int, int] = (0, 0)
    worst_point: tuple[float, float] = (0.0, 0.0)

    def max_residual(self) -> float:
        return max(self.so3_orth, self.so3_det, self.du_identity,
                   self.dv_identity, self.scalar_recursions, self.second_order)

    def rows(self) -> list[tuple[str, float]]:
        return [("so3_orthogonality", self.so3_orth),
                ("so3_determinant", self.so3_det),
                ("first_order_u", self.du_identity),
                ("first_order_v", self.dv_identity),
                ("scalar_recursions", self.scalar_recursions),
                ("second_order_mixed", self.second_order)]


def check_compatibility(ff: FrameField, us: np.ndarray, vs: np.ndarray) -> CompatibilityReport:
    """Evaluate every frame-matrix identity on the grid us x vs."""
    rep = CompatibilityReport(grid_shape=(len(us), len(vs)))
    for u in us:
        u = float(u)
        ca = ff.curve_a.curvature(u, 2)
        Fu = _curvature_matrix(ca)
        for v in vs:
            v = float(v)
            cb = ff.curve_b.curvature(v, 2)
            Fv = _curvature_matrix(cb)
            M = [[ff.t_bijet(i, j, u, v, degree=2) for j in (1, 2, 3)]
                 for i in (1, 2, 3)]
            T = np.array([[M[i][j].value for j in range(3)] for i in range(3)])
            Tu = np.array([[M[i][j].part(1, 0) for j in range(3)] for i in range(3)])
            Tv = np.array([[M[i][j].part(0, 1) for j in range(3)] for i in range(3)])
            Tuv = np.array([[M[i][j].part(1, 1) for j in range(3)] for i in range(3)])

            so3 = float(np.max(np.abs(T.T @ T - np.eye(3))))
            det = abs(float(np.linalg.det(T)) - 1.0)
            r1 = float(np.max(np.abs(Tu + T @ Fu)))
            r2 = float(np.max(np.abs(Tv - Fv @ T)))
            r4 = float(np.max(np.abs(Tuv - Tv @ T.T @ Tu)))

            l, m, n = ca.l.value, ca.m.value, ca.n.value
            lt, mt, nt = cb.l.value, cb.m.value, cb.n.value
            rec = 0.0
            for i in range(3):
                rec = max(rec,
                          abs(Tu[i, 0] - (l * T[i, 1] + m * T[i, 2])),
                          abs(Tu[i, 1] - (-l * T[i, 0] + n * T[i, 2])),
                          abs(Tu[i, 2] - (-m * T[i, 0] - n * T[i, 1])))
            for j in range(3):
                rec = max(rec,
                          abs(Tv[0, j] - (lt * T[1, j] + mt * T[2, j])),
                          abs(Tv[1, j] - (-lt * T[0, j] + nt * T[2, j])),
                          abs(Tv[2, j] - (-mt * T[0, j] - nt * T[1, j])))

            worst = max(so3, det, r1, r2, rec, r4)
            if worst > rep.max_residual():
                rep.worst_point = (u, v)
            rep.so3_orth = max(rep.so3_orth, so3)
            rep.so3_det = max(rep.so3_det, det)
            rep.du_identity = max(rep.du_identity, r1)
            rep.dv_identity = max(rep.dv_identity, r2)
            rep.scalar_recursions = max(rep.scalar_recursions, rec)
            rep.second_order = max(rep.second_order, r4)
    return rep


# ---------------------------------------------------------------------------
# reconstruction from curvature data
# ---------------------------------------------------------------------------

def polar_rotation(M: np.ndarray) -> np.ndarray:
    """Nearest rotation matrix (polar factor, det +1).

    For near-orthogonal input the Newton iteration R <- (R + R^-T)/2
    converges quadratically; fall back to an SVD otherwise.
    """
    R = np.asarray(M, dtype=float)
    for _ in range(3):
        err = float(np.max(np.abs(R.T @ R - np.eye(3))))
        if err < 1e-15:
            return R
        if err > 0.5 or abs(np.linalg.det(R)) < 0.5:
            break
        R = 0.5 * (R + np.linalg.inv(R).T)
    U, _, Vt = np.linalg.svd(M)
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U = U.copy()
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return R


class OdeFramedCurve(FramedCurve):
    """Framed curve defined by its curvature functions and an initial frame.

    The frame R(t) (rows nu1, nu2, mu) solves R' = F(t) R from R(t0) = R0 and
    gamma' = alpha(t) mu(t) from gamma(t0) = 0, integrated with fixed-step
    RK4 and a polar re-orthonormalization after every step. Jets at any t
    come from the ODE recursion, so only the values depend on the integrator.
    """

    def __init__(self, curvature_fn, t0: float, R0: np.ndarray,
                 domain: tuple[float, float], step: float = 1e-3,
                 name: str = "reconstructed", tols: Tolerances = DEFAULT):
        if not step > 1e-12:
            raise ValueError("integration step underflow")
        self.curvature_fn = curvature_fn   # (t, order) -> FramedCurvature
        self.t0 = float(t0)
        self.step = float(step)
        self._dense: dict[int, tuple[np.ndarray, np.ndarray]] = {
            0: (np.asarray(R0, dtype=float), np.zeros(3))}
        self._far = {+1: 0, -1: 0}         # furthest integrated node per side

        fcache: dict[float, tuple[np.ndarray, float]] = {}

        def fmat(t: float) -> tuple[np.ndarray, float]:
            hit = fcache.get(t)
            if hit is None:
                c = curvature_fn(t, 1)
                hit = (_curvature_matrix(c), c.alpha.value)
                if len(fcache) > 300000:
                    fcache.clear()
                fcache[t] = hit
            return hit

        self._fmat = fmat
        super().__init__(self._gamma_jets_impl, self._nu_jets_impl(1),
                         self._nu_jets_impl(2), domain, name=name,
                         validate=False, tols=tols)

    # -- integration ---------------------------------------------------------

    def _advance_to(self, k: int):
        sign = 1 if k >= 0 else -1
        while sign * self._far[sign] < sign * k:
            j = self._far[sign]
            R, g = self._dense[j]
            h = sign * self.step
            t = self.t0 + j * self.step
            R, g = self._rk4_step(t, R, g, h)
            self._dense[j + sign] = (polar_rotation(R), g)
            self._far[sign] = j + sign

    def _rk4_step(self, t, R, g, h):
        def rhs(tt, Rc, _gc):
            F, a = self._fmat(tt)
            return F @ Rc, a * Rc[2]

        k1R, k1g = rhs(t, R, g)
        k2R, k2g = rhs(t + h / 2, R + h / 2 * k1R, g + h / 2 * k1g)
        k3R, k3g = rhs(t + h / 2, R + h / 2 * k2R, g + h / 2 * k2g)
        k4R, k4g = rhs(t + h, R + h * k3R, g + h * k3g)
        Rn = R + h / 6 * (k1R + 2 * k2R + 2 * k3R + k4R)
        gn = g + h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g)
        return Rn, gn

    def state_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        x = (t - self.t0) / self.step
        k = int(round(x))
        self._advance_to(k)
        R, g = self._dense[k]
        dt = t - (self.t0 + k * self.step)
        if dt != 0.0:
            R, g = self._rk4_step(self.t0 + k * self.step, R, g, dt)
            R = polar_rotation(R)
        return R, g

    # -- jet assembly from the ODE -------------------------------------------

    def _frame_derivative_stack(self, t: float, order: int) -> list[np.ndarray]:
        """Matrices d^k R / dt^k for k = 0..order via R' = F R."""
        c = self.curvature_fn(t, order)
        l, m, n = c.l, c.m, c.n
        zero = np.zeros(order + 1)
        Fj = [[None] * 3 for _ in range(3)]
        entries = {(0, 1): l.d, (0, 2): m.d, (1, 0): -l.d, (1, 2): n.d,
                   (2, 0): -m.d, (2, 1): -n.d}
        for i in range(3):
            for j in range(3):
                Fj[i][j] = entries.get((i, j), zero)

        R0, _ = self.state_at(t)
        stack = [R0]
        for k in range(order):
            # d^{k+1} R = d^k (F R) by Leibniz over the stored stacks
            M = np.zeros((3, 3))
            for i in range(k + 1):
                Fi = np.array([[Fj[r][s][i] if i < len(Fj[r][s]) else 0.0
                                for s in range(3)] for r in range(3)])
                M += math.comb(k, i) * Fi @ stack[k - i]
            stack.append(M)
        return stack

    def _nu_jets_impl(self, row: int):
        def fn(t: float, order: int) -> VecJets:
            stack = self._frame_derivative_stack(t, order)
            return tuple(
                Jet(t, np.array([stack[k][row - 1, c] for k in range(order + 1)]))
                for c in range(3))
        return fn

    def _gamma_jets_impl(self, t: float, order: int) -> VecJets:
        stack = self._frame_derivative_stack(t, max(order - 1, 2))
        _, g = self.state_at(t)
        alpha = self.curvature_fn(t, max(order - 1, 2)).alpha
        mu = tuple(
            Jet(t, np.array([stack[k][2, c] for k in range(len(stack))]))
            for c in range(3))
        out = []
        for c in range(3):
            dj = (alpha * mu[c]).d[: order]
            out.append(Jet(t, np.concatenate(([g[c]], dj))))
        return tuple(out)


def curvature_provider(fc: FramedCurve):
    """Adapter: framed curve -> curvature function usable for reconstruction."""
    def fn(t: float, order: int) -> FramedCurvature:
        return fc.curvature(t, order)
    return fn


def reconstruct_framed_curves(curv_a, curv_b, T0: np.ndarray,
                              p0: tuple[float, float],
                              domain_a: tuple[float, float],
                              domain_b: tuple[float, float],
                              step: float = 1e-3,
                              tols: Tolerances = DEFAULT,
                              ) -> tuple[OdeFramedCurve, OdeFramedCurve]:
    """Build two framed curves whose frame matrix is the one generated by the
    curvature data and the initial matrix T0 at p0.

    The first curve starts from the identity frame at u0 and the second from
    T0 (both gammas start at the origin; the data only fixes them up to
    translation).
    """
    u0, v0 = p0
    a = OdeFramedCurve(curv_a, u0, np.eye(3), domain_a, step=step,
                       name="reconstructed-a", tols=tols)
    b = OdeFramedCurve(curv_b, v0, np.asarray(T0, dtype=float), domain_b,
                       step=step, name="reconstructed-b", tols=tols)
    return a, b


def reconstruct_from_field(field_fn, p0: tuple[float, float],
                           domain_a: tuple[float, float],
                           domain_b: tuple[float, float],
                           alpha_a, alpha_b,
                           step: float = 1e-3,
                           check_points: int = 9,
                           tols: Tolerances = DEFAULT,
                           ) -> tuple[OdeFramedCurve, OdeFramedCurve]:
    """Reconstruct from a closed-form matrix field T(u, v).

    The field must satisfy the mixed-derivative identity
    T_uv = T_v T^t T_u (checked by finite differences on a sample grid);
    otherwise NotIntegrable is raised. The curvature matrices are recovered
    as F(u) = -T^t T_u and F~(v) = T_v T^t.
    """
    u0, v0 = p0
    h = 1e-5

    def Tm(u, v):
        return np.asarray(field_fn(u, v), dtype=float)

    worst = 0.0
    for u in np.linspace(domain_a[0] + h, domain_a[1] - h, check_points):
        for v in np.linspace(domain_b[0] + h, domain_b[1] - h, check_points):
            T = Tm(u, v)
            Tu = (Tm(u + h, v) - Tm(u - h, v)) / (2 * h)
            Tv = (Tm(u, v + h) - Tm(u, v - h)) / (2 * h)
            Tuv = (Tm(u + h, v + h) - Tm(u - h, v + h)
                   - Tm(u + h, v - h) + Tm(u - h, v - h)) / (4 * h * h)
            worst = max(worst, float(np.max(np.abs(Tuv - Tv @ T.T @ Tu))))
            worst = max(worst, float(np.max(np.abs(T.T @ T - np.eye(3)))))
    # finite differences limit what can be certified here
    if worst > max(tols.pde_tol, 1e-5):
        raise NotIntegrable(
            f"field fails the mixed-derivative identity (residual {worst:.3e})")

    def curv_from_F(extract, alpha_fn):
        # curvature entries (and two derivative orders) by central differences
        def fn(t: float, order: int) -> FramedCurvature:
            hh, ht = 1e-5, 1e-4
            stencil = [extract(t + s * ht, hh) for s in (-1, 0, 1)]

            def entry_jet(i, j):
                vals = [m[i, j] for m in stencil]
                d = np.zeros(order + 1)
                d[0] = vals[1]
                if order >= 1:
                    d[1] = (vals[2] - vals[0]) / (2 * ht)
                if order >= 2:
                    d[2] = (vals[2] - 2 * vals[1] + vals[0]) / ht**2
                return Jet(t, d)

            return FramedCurvature(l=entry_jet(0, 1), m=entry_jet(0, 2),
                                   n=entry_jet(1, 2), alpha=alpha_fn(t, order))
        return fn

    def extract_a(u, hh):
        T = Tm(u, v0)
        Tu = (Tm(u + hh, v0) - Tm(u - hh, v0)) / (2 * hh)
        return -T.T @ Tu

    def extract_b(v, hh):
        T = Tm(u0, v)
        Tv = (Tm(u0, v + hh) - Tm(u0, v - hh)) / (2 * hh)
        return Tv @ T.T

    return reconstruct_framed_curves(
        curv_from_F(extract_a, alpha_a), curv_from_F(extract_b, alpha_b),
        Tm(u0, v0), p0, domain_a, domain_b, step=step, tols=tols)
