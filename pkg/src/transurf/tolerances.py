"""Numeric tolerances, all user-overridable from the CLI.

Every strict inequality in a classification criterion becomes a threshold
test against ``crit_tol`` and every equality hypothesis against ``hyp_tol``;
the raw values are always reported next to the thresholds.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    div_eps: float = 1e-12        # |denominator| floor for jet division
    frame_tol: float = 1e-9       # frame orthonormality / tangency residual
    nondeg_tol: float = 1e-9      # |gamma' x gamma''| floor for Frenet lifts
    arc_tol: float = 1e-9         # sup | |gamma'| - 1 | for the arc-length flag
    so3_tol: float = 1e-9         # orthogonality / det residual of frame matrices
    pde_tol: float = 1e-8         # frame-matrix differential identity residual
    recon_tol: float = 1e-6       # frame-matrix reproduction after reconstruction
    sing_tol: float = 1e-8        # singular-point residual after Newton
    dep_tol: float = 1e-8         # |mu x mu~| threshold for the dependent condition
    ratio_tol: float = 1e-6       # sigma_min/sigma_max for field-dependence scans
    theta_tol: float = 1e-8       # defining-equation residual of a theta field
    theta_dir_tol: float = 1e-6   # directional-limit agreement for theta extension
    front_tol: float = 1e-8       # |H^F| (or |K^F|) threshold for the front test
    lemma_tol: float = 1e-6       # residual bound for the relational-equation oracle
    ker_tol: float = 1e-8         # |dx(eta)| bound at singular points
    rank_tol: float = 1e-8        # singular-value threshold for numerical rank
    hess_tol: float = 1e-6        # closed-form vs jet Hessian agreement
    crit_tol: float = 1e-7        # |value| > crit_tol realizes "!= 0"
    hyp_tol: float = 1e-7         # |value| < hyp_tol realizes "= 0"

    def replace(self, **overrides: float) -> "Tolerances":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))


DEFAULT = Tolerances()
