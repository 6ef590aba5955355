"""Switching-angle search by particle swarm optimization.

The swarm minimizes

    w * |m - V1/(N v_dc)| + sum_h |V_h|/(N v_dc)

over the box [0, 90]^K with the angles kept sorted. With ``w = 1`` this
is the plain SHE cost. Any ``w > 3`` turns the fundamental term into an
exact penalty (|d cos(3x)/3| <= 3 |d cos x| pointwise), so whenever the
demanded fundamental is reachable the minimizer hits it exactly and
spends the remaining freedom on the eliminated harmonics. That is the
behavior needed at low modulation index, where the unweighted optimum
trades fundamental accuracy for a smaller 3rd harmonic.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .core import (
    AngleSet,
    InverterConfig,
    SheError,
    SolveResult,
    SolverFailure,
    as_modulation_index,
    validate_angles,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoParams:
    swarm_size: int = 50
    max_iters: int = 500
    inertia: float = 0.9
    inertia_final: float = 0.4
    cognitive: float = 2.0
    social: float = 2.0
    tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 3
    fundamental_weight: float = 5.0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise SheError("swarm_size must be >= 2")
        if self.max_iters < 1:
            raise SheError("max_iters must be >= 1")
        if not (self.inertia >= self.inertia_final >= 0):
            raise SheError("need inertia >= inertia_final >= 0")
        if self.cognitive <= 0 or self.social <= 0:
            raise SheError("cognitive and social coefficients must be > 0")
        if self.tolerance < 0:
            raise SheError("tolerance must be >= 0")
        if self.restarts < 1:
            raise SheError("restarts must be >= 1")
        if self.fundamental_weight <= 0:
            raise SheError("fundamental_weight must be > 0")


def eliminated_orders(k: int) -> tuple[int, ...]:
    """Harmonics targeted for elimination with K angles: 3, 5, ..., 2K-1."""
    return tuple(range(3, 2 * k, 2))


def _normalized_harmonics(theta_rad: np.ndarray, orders: Sequence[int], n_sources: int) -> np.ndarray:
    """|V_n| / (N v_dc) for each row of ``theta_rad`` (shape (P, K)) and each order."""
    n = np.asarray(orders, dtype=float)
    c = np.cos(theta_rad[:, None, :] * n[None, :, None]).sum(axis=2) / n
    return 4.0 / math.pi * c / n_sources


def _batch_objective(theta_deg: np.ndarray, m: float, n_sources: int, weight: float) -> np.ndarray:
    """Weighted cost per row; rows with coincident angles below 90 get +inf."""
    k = theta_deg.shape[1]
    orders = (1,) + eliminated_orders(k)
    h = _normalized_harmonics(np.radians(theta_deg), orders, n_sources)
    f = weight * np.abs(m - np.abs(h[:, 0])) + np.abs(h[:, 1:]).sum(axis=1)
    if k > 1:
        dup = ((np.diff(theta_deg, axis=1) == 0) & (theta_deg[:, 1:] < 90.0)).any(axis=1)
        f = np.where(dup, np.inf, f)
    return f


def cost(angles: AngleSet, m, config: InverterConfig) -> float:
    """Unweighted SHE cost |m - V1/(N v_dc)| + sum of normalized |V_h|."""
    config.check_pairing(angles)
    mv = float(as_modulation_index(m))
    theta = np.asarray(angles.angles, dtype=float)[None, :]
    return float(_batch_objective(theta, mv, config.n_sources, 1.0)[0])


def objective(angles: AngleSet, m, config: InverterConfig, fundamental_weight: float) -> float:
    """The quantity the swarm actually minimizes."""
    config.check_pairing(angles)
    theta = np.asarray(angles.angles, dtype=float)[None, :]
    mv = float(as_modulation_index(m))
    return float(_batch_objective(theta, mv, config.n_sources, fundamental_weight)[0])


def _result(theta: np.ndarray, m: float, config: InverterConfig, weight: float, **diag) -> SolveResult:
    angles = validate_angles(theta.tolist())
    orders = (1,) + eliminated_orders(len(angles))
    h = _normalized_harmonics(angles.radians[None, :], orders, config.n_sources)[0]
    achieved = float(abs(h[0]))
    residuals = {n: float(abs(v)) for n, v in zip(orders[1:], h[1:])}
    return SolveResult(
        angles=angles,
        target_m=m,
        achieved_pu=achieved,
        residuals=residuals,
        cost=abs(m - achieved) + sum(residuals.values()),
        objective=weight * abs(m - achieved) + sum(residuals.values()),
        **diag,
    )


def _swarm_run(m: float, k: int, n_sources: int, params: PsoParams, rng: np.random.Generator):
    s = params.swarm_size
    lo, hi = 0.0, 90.0
    vmax = hi - lo
    w_obj = params.fundamental_weight

    x = np.sort(rng.uniform(lo, hi, size=(s, k)), axis=1)
    v = rng.uniform(-vmax, vmax, size=(s, k)) * 0.1
    fx = _batch_objective(x, m, n_sources, w_obj)
    p, fp = x.copy(), fx.copy()
    g_idx = int(np.argmin(fp))
    g, fg = p[g_idx].copy(), float(fp[g_idx])
    history = [fg]

    it = 0
    for it in range(1, params.max_iters + 1):
        if fg <= params.tolerance:
            it -= 1
            break
        frac = (it - 1) / max(params.max_iters - 1, 1)
        inertia = params.inertia - (params.inertia - params.inertia_final) * frac
        r1 = rng.random((s, k))
        r2 = rng.random((s, k))
        v = inertia * v + params.cognitive * r1 * (p - x) + params.social * r2 * (g - x)
        np.clip(v, -vmax, vmax, out=v)
        x = np.clip(x + v, lo, hi)
        # keep the angle order; velocities follow their coordinates
        order = np.argsort(x, axis=1, kind="stable")
        x = np.take_along_axis(x, order, axis=1)
        v = np.take_along_axis(v, order, axis=1)

        fx = _batch_objective(x, m, n_sources, w_obj)
        improved = fx < fp
        p[improved] = x[improved]
        fp[improved] = fx[improved]
        i = int(np.argmin(fp))
        if fp[i] < fg:
            g, fg = p[i].copy(), float(fp[i])
        history.append(fg)

    return g, fg, it, history


def solve(m, config: InverterConfig, params: Optional[PsoParams] = None) -> SolveResult:
    """Find switching angles for modulation index ``m`` (per unit of N v_dc).

    Deterministic for a given ``params.seed``. Restarts draw from
    generators keyed on ``(seed, restart)`` and the best run is kept.
    """
    params = params or PsoParams()
    mv = float(as_modulation_index(m))
    k = config.n_sources

    best = None
    for r in range(params.restarts):
        rng = np.random.default_rng([params.seed, r])
        g, fg, iters, history = _swarm_run(mv, k, config.n_sources, params, rng)
        if best is None or fg < best[1]:
            best = (g, fg, iters, history)
        if fg <= params.tolerance:
            break

    g, fg, iters, history = best
    if not np.isfinite(fg):
        raise SolverFailure(
            f"no finite-cost particle found for m = {mv:g}",
            {"m": mv, "seed": params.seed, "restarts": params.restarts},
        )
    log.debug("solve m=%g seed=%d -> %s objective=%.3g", mv, params.seed, g, fg)
    return _result(
        g, mv, config, params.fundamental_weight,
        iterations=iters, seed=params.seed, history=tuple(history),
    )


def solve_sweep(
    m_values: Sequence, config: InverterConfig, params: Optional[PsoParams] = None,
    workers: int = 1,
) -> list:
    """Solve each m with seed ``params.seed + index``.

    Returns one entry per m, in input order. A failed solve yields its
    :class:`SolverFailure` in place of a result rather than aborting.
    """
    params = params or PsoParams()
    ms = [float(as_modulation_index(m)) for m in m_values]

    def one(i):
        try:
            return solve(ms[i], config, replace(params, seed=params.seed + i))
        except SolverFailure as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(len(ms))))
    return [one(i) for i in range(len(ms))]


def grid_oracle(
    m, config: InverterConfig, resolution_deg: float = 0.05,
    fundamental_weight: float = PsoParams.fundamental_weight,
) -> SolveResult:
    """Exhaustive argmin over the grid 0 <= t1 < t2 <= 90 (two angles only).

    Ties go to the smaller t1, then the smaller t2. The default weight
    matches :class:`PsoParams` so both searches minimize the same function.
    """
    if resolution_deg <= 0:
        raise SheError("resolution_deg must be > 0")
    if config.n_sources != 2:
        raise SheError("grid_oracle enumerates two angles only")
    mv = float(as_modulation_index(m))
    steps = int(math.floor(90.0 / resolution_deg + 1e-9))
    grid = np.arange(steps + 1) * resolution_deg
    if 90.0 - grid[-1] > 1e-9:
        grid = np.append(grid, 90.0)
    c1 = np.cos(np.radians(grid))
    c3 = np.cos(3.0 * np.radians(grid)) / 3.0
    scale = 4.0 / math.pi / config.n_sources

    best_val, best_ij = np.inf, None
    chunk = max(1, 4_000_000 // len(grid))
    for start in range(0, len(grid) - 1, chunk):
        rows = np.arange(start, min(start + chunk, len(grid) - 1))
        f = (
            fundamental_weight * np.abs(mv - scale * np.abs(c1[rows, None] + c1[None, :]))
            + scale * np.abs(c3[rows, None] + c3[None, :])
        )
        f[np.arange(len(grid))[None, :] <= rows[:, None]] = np.inf
        idx = int(np.argmin(f))
        val = f.flat[idx]
        if val < best_val:
            best_val = val
            best_ij = (rows[idx // len(grid)], idx % len(grid))

    theta = np.array([grid[best_ij[0]], grid[best_ij[1]]])
    return _result(theta, mv, config, fundamental_weight, iterations=0, seed=0)
