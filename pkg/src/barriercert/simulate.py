"""Trajectory simulation and level-set grid emission for plotting.

Discrete classes iterate the map exactly with per-step noise draws;
continuous classes use Euler (deterministic) or Euler-Maruyama with Poisson
jump increments. Runs are seeded and bit-reproducible on one platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .moments import NoiseSpec
from .poly import Polynomial
from .systems import Box, CtSs, DtDs, DtSs, SystemSpec


@dataclass
class Trajectory:
    times: np.ndarray          # (steps + 1,)
    states: np.ndarray         # (steps + 1, n)
    left_space: np.ndarray     # (steps + 1,) bool: outside the state box

    def to_dict(self) -> dict:
        return {
            "times": self.times.tolist(),
            "states": self.states.tolist(),
            "left_space": self.left_space.tolist(),
        }


def _draw_noise(spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "normal":
        return rng.normal([float(m) for m in spec.mean],
                          [float(s) for s in spec.sigma])
    if spec.kind == "uniform":
        lo = np.array([float(a) for a in spec.a])
        hi = np.array([float(b) for b in spec.b])
        return np.where(lo == hi, lo, rng.uniform(lo, hi))
    return rng.exponential([1.0 / float(r) for r in spec.rate])


def simulate_trajectory(system: SystemSpec, x0, horizon: float, *,
                        dt_step: float | None = None, seed: int = 0,
                        space: Box | None = None) -> Trajectory:
    """Simulate from x0. Discrete classes take `horizon` steps; continuous
    classes integrate to time `horizon` with Euler(-Maruyama) steps of
    `dt_step`. Leaving the state box is recorded, not fatal."""
    x0 = np.asarray(x0, dtype=float)
    n = system.dim
    if x0.shape != (n,):
        raise DimensionMismatchError(f"x0 must have shape ({n},), got {x0.shape}")
    rng = np.random.default_rng(seed)

    if isinstance(system, (DtSs, DtDs)):
        steps = int(horizon)
        if steps < 0:
            raise ValueError("horizon must be >= 0")
        states = np.empty((steps + 1, n))
        states[0] = x0
        point = np.zeros(system.table.size)
        for k in range(steps):
            point[:n] = states[k]
            if isinstance(system, DtSs):
                point[n:] = _draw_noise(system.noise, rng)
            states[k + 1] = [f.evaluate(point) for f in system.f]
        times = np.arange(steps + 1, dtype=float)
    else:
        if dt_step is None or dt_step <= 0:
            raise ValueError("dt_step > 0 required for continuous-time classes")
        steps = max(1, int(round(horizon / dt_step)))
        states = np.empty((steps + 1, n))
        states[0] = x0
        sqrt_dt = np.sqrt(dt_step)
        for k in range(steps):
            x = states[k]
            drift_fields = system.drift if isinstance(system, CtSs) else system.f
            drift = np.array([f.evaluate(x) for f in drift_fields])
            step = drift * dt_step
            if isinstance(system, CtSs):
                if system.b:
                    delta = np.array([[e.evaluate(x) for e in row]
                                      for row in system.diffusion])
                    step = step + sqrt_dt * delta @ rng.standard_normal(system.b)
                if system.r:
                    rho = np.array([[e.evaluate(x) for e in row]
                                    for row in system.reset])
                    jumps = rng.poisson([float(w) * dt_step for w in system.rates])
                    step = step + rho @ jumps
            states[k + 1] = x + step
        times = np.arange(steps + 1) * dt_step

    if space is not None:
        lo = np.array([float(v) for v in space.lower])
        hi = np.array([float(v) for v in space.upper])
        left = np.any((states < lo) | (states > hi), axis=1)
    else:
        left = np.zeros(len(states), dtype=bool)
    return Trajectory(times, states, left)


@dataclass
class LevelSetGrid:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray  # values[i, j] = B(xs[j], ys[i])
    gamma: float | None
    lam: float | None

    def to_dict(self) -> dict:
        return {
            "xs": self.xs.tolist(),
            "ys": self.ys.tolist(),
            "values": self.values.tolist(),
            "gamma": self.gamma,
            "lambda": self.lam,
        }


def level_set_grid(barrier: Polynomial, gamma: float | None, lam: float | None,
                   box: Box, resolution: int = 101) -> LevelSetGrid:
    """Evaluation grid of the barrier over a 2-D box, with the two level
    values echoed for contouring. resolution=1 samples the lower corner."""
    if barrier.table.n != 2 or box.dim != 2:
        raise DimensionMismatchError("level-set grids require a 2-dimensional state space")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    (lo, hi) = box.float_bounds()
    xs = np.linspace(lo[0], hi[0], resolution)
    ys = np.linspace(lo[1], hi[1], resolution)
    grid_x, grid_y = np.meshgrid(xs, ys)
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    values = barrier.evaluate_batch(points).reshape(resolution, resolution)
    return LevelSetGrid(xs, ys, values, gamma, lam)
