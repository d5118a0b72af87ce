"""Position fix from satellite pseudoranges via Gauss-Newton least squares.

Observation model: rho_i = ||x - s_i|| + b, with b the receiver clock
bias expressed in meters.  Three satellites pin down a position when the
clock is known; the bias adds a fourth unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InsufficientSatellites(ValueError):
    pass

class SingularGeometry(ValueError):
    """Normal matrix is numerically singular (e.g. collinear satellites)."""

class DegenerateGeometry(ValueError):
    pass


MAX_ITERATIONS = 50
STEP_TOLERANCE_M = 1e-9
CONDITION_LIMIT = 1e12
MAX_STEP_HALVINGS = 8


@dataclass(frozen=True)
class SatelliteObs:
    position: tuple[float, float, float]
    pseudorange: float

    def __post_init__(self):
        if not self.pseudorange > 0:
            raise ValueError("pseudorange must be positive")
        if not np.all(np.isfinite(self.position)):
            raise ValueError("satellite position must be finite")


@dataclass(frozen=True)
class FixSolution:
    position: tuple[float, float, float]
    clock_bias_m: float
    residual_norm: float
    iterations: int
    converged: bool


def synthesize_obs(truth_position, truth_bias_m: float, sat_positions,
                   noise_sigma_m: float = 0.0,
                   seed: int | None = None) -> list[SatelliteObs]:
    """Pseudoranges a receiver at truth_position would measure."""
    truth = np.asarray(truth_position, dtype=float)
    sats = np.asarray(sat_positions, dtype=float)
    if sats.ndim != 2 or sats.shape[1] != 3:
        raise ValueError("sat_positions must be Nx3")
    if sats.shape[0] < 1:
        raise ValueError("need at least one satellite")
    ranges = np.linalg.norm(sats - truth, axis=1)
    if np.any(ranges < 1e-12):
        raise DegenerateGeometry("satellite coincides with the receiver")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_sigma_m, size=len(ranges)) if noise_sigma_m > 0 else 0.0
    rho = ranges + truth_bias_m + noise
    return [SatelliteObs(tuple(s), float(p)) for s, p in zip(sats, rho)]


def trilaterate(obs: list[SatelliteObs], solve_bias: bool = True) -> FixSolution:
    """Gauss-Newton fit with step halving; start at the satellite centroid.

    Requires three observations with a known (zero) clock, four when the
    bias is estimated.  Raises SingularGeometry when the normal equations
    are ill-conditioned; a stalled line search returns converged=False
    with the best iterate found.
    """
    needed = 4 if solve_bias else 3
    if len(obs) < needed:
        raise InsufficientSatellites(f"need >= {needed} observations, got {len(obs)}")
    sats = np.array([o.position for o in obs], dtype=float)
    rho = np.array([o.pseudorange for o in obs], dtype=float)

    x = sats.mean(axis=0)
    b = 0.0

    def residuals(pos, bias):
        return np.linalg.norm(pos - sats, axis=1) + bias - rho

    def normal_cond(pos):
        diff = pos - sats
        dist = np.linalg.norm(diff, axis=1)
        if np.any(dist < 1e-12):
            return np.inf
        jac = diff / dist[:, None]
        if solve_bias:
            jac = np.hstack([jac, np.ones((len(obs), 1))])
        return np.linalg.cond(jac.T @ jac)

    # symmetric constellations make the centroid itself a singular point;
    # restart from offset points if so (collinear satellites stay singular
    # everywhere, so they still fail below)
    scale = float(np.linalg.norm(sats - x, axis=1).mean()) or 1.0
    for fraction in (0.0, 0.3, 0.7, 1.5):
        x = sats.mean(axis=0) + fraction * scale * np.array([0.29, 0.41, -0.53])
        if normal_cond(x) <= CONDITION_LIMIT:
            break

    r = residuals(x, b)
    norm = float(np.linalg.norm(r))
    converged = False
    iterations = 0
    for iterations in range(1, MAX_ITERATIONS + 1):
        diff = x - sats
        dist = np.linalg.norm(diff, axis=1)
        if np.any(dist < 1e-12):
            raise SingularGeometry("iterate collided with a satellite position")
        jac = diff / dist[:, None]
        if solve_bias:
            jac = np.hstack([jac, np.ones((len(obs), 1))])
        normal = jac.T @ jac
        if np.linalg.cond(normal) > CONDITION_LIMIT:
            raise SingularGeometry("normal matrix condition number exceeds limit")
        step = np.linalg.solve(normal, -jac.T @ r)

        alpha = 1.0
        for _ in range(MAX_STEP_HALVINGS + 1):
            x_new = x + alpha * step[:3]
            b_new = b + alpha * step[3] if solve_bias else 0.0
            r_new = residuals(x_new, b_new)
            norm_new = float(np.linalg.norm(r_new))
            if norm_new <= norm:
                break
            alpha *= 0.5
        else:
            break  # no descent direction left; report best iterate

        x, b, r, norm = x_new, b_new, r_new, norm_new
        if float(np.linalg.norm(alpha * step)) < STEP_TOLERANCE_M:
            converged = True
            break

    return FixSolution(
        position=tuple(float(v) for v in x),
        clock_bias_m=float(b),
        residual_norm=norm,
        iterations=iterations,
        converged=converged,
    )
