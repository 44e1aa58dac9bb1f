"""Coupled two-level dipoles and the avalanche that completes a transaction.

An emitter and an absorber in superposed states both carry an oscillating
dipole at the shared beat frequency omega = (e1 - e0) * q_e / hbar.  Their
mutual coupling transfers excitation at a rate proportional to the product
of the two dipole moments sqrt(x(1-x)), which for a lossless pair reduces
to logistic growth: tiny transfers self-amplify, saturate, and leave the
emitter empty and the absorber full.  Competing absorbers share the one
emitter; whoever dominates when the quantum has fully drained wins the
event.

Units: energies in eV, time in units of 1/k unless k has physical units,
field grids in meters.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .rng import uniform_block

ELEMENTARY_CHARGE = 1.602176634e-19  # C
HBAR = 1.054571817e-34  # J s
LIGHT_SPEED = 299792458.0  # m/s

COMPLETION_LEVEL = 0.99


def beat_frequency(e1_ev: float, e0_ev: float) -> float:
    """Angular beat frequency (rad/s) between levels at e1 and e0 in eV.

    Both superposed partners oscillate at this same difference frequency,
    which is what lets an emitter and a distant absorber phase-lock.
    """
    if e1_ev < e0_ev:
        raise ValueError("e1 must be at or above e0")
    return (e1_ev - e0_ev) * ELEMENTARY_CHARGE / HBAR


def dipole_amplitude(x: float) -> float:
    """Dipole moment factor sqrt(x(1-x)) of a level with excited fraction x.

    Vanishes for pure states; peaks at 1/2 for an even superposition.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("excited fraction must lie in [0, 1]")
    return math.sqrt(x * (1.0 - x))


@dataclass(frozen=True)
class TwoLevelAtom:
    """Ground/excited energies in eV and the excited-state fraction."""

    e0: float
    e1: float
    x: float = 0.0

    def __post_init__(self):
        if self.e1 < self.e0:
            raise ValueError("e1 must be at or above e0")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError("excited fraction must lie in [0, 1]")

    @property
    def omega(self) -> float:
        return beat_frequency(self.e1, self.e0)

    @property
    def dipole(self) -> float:
        return dipole_amplitude(self.x)


@dataclass(frozen=True)
class AtomPairState:
    t: float
    x_emitter: float
    x_absorber: float


@dataclass(frozen=True)
class AvalancheConfig:
    """Fixed-step RK4 setup for one emitter-absorber pair.

    dt must respect both the coupling scale (0.02/k) and, when a beat
    frequency is supplied for signal reconstruction, 1/40 of its period.
    noise_amplitude is kept for symmetry-breaking draws of the initial
    transfer; the trajectory itself is deterministic.
    """

    k: float
    x0: float
    t_end: float
    dt: float
    noise_amplitude: float = 0.0
    seed: int = 0
    omega: float | None = None

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        if not 0.0 < self.x0 < 0.5:
            raise ValueError("x0 must lie in (0, 0.5)")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        bound = self.stability_bound
        if not 0.0 < self.dt <= bound * (1.0 + 1e-12):
            raise ValueError(f"dt must lie in (0, {bound:.6g}] for stability")

    @property
    def stability_bound(self) -> float:
        bound = 0.02 / self.k
        if self.omega is not None:
            bound = min(bound, (2.0 * math.pi / self.omega) / 40.0)
        return bound


def default_config(k: float = 1.0, x0: float = 0.01, t_end: float | None = None) -> AvalancheConfig:
    if t_end is None:
        t_end = 20.0 / k
    return AvalancheConfig(k=k, x0=x0, t_end=t_end, dt=0.005 / k)


def _pair_rhs(k: float, x_e: float, x_a: float) -> tuple[float, float]:
    # transfer rate follows the product of the two dipole moments
    # (for x_e = 1 - x_a this is exactly logistic growth of x_a)
    rate = k * dipole_amplitude(_clip(x_e)) * dipole_amplitude(_clip(x_a))
    return -rate, rate


def _clip(x: float) -> float:
    return min(1.0, max(0.0, x))


def integrate_pair(config: AvalancheConfig) -> list[AtomPairState]:
    """Fixed-step RK4 trajectory of (x_emitter, x_absorber).

    The pair shares a single quantum, so x_emitter + x_absorber stays at 1
    to rounding; both components are integrated independently and the sum
    is a real conservation check, not an identity.
    """
    steps = int(round(config.t_end / config.dt))
    x_e, x_a = 1.0 - config.x0, config.x0
    h = config.dt
    out = [AtomPairState(0.0, x_e, x_a)]
    for i in range(steps):
        k1e, k1a = _pair_rhs(config.k, x_e, x_a)
        k2e, k2a = _pair_rhs(config.k, x_e + 0.5 * h * k1e, x_a + 0.5 * h * k1a)
        k3e, k3a = _pair_rhs(config.k, x_e + 0.5 * h * k2e, x_a + 0.5 * h * k2a)
        k4e, k4a = _pair_rhs(config.k, x_e + h * k3e, x_a + h * k3a)
        x_e += (h / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
        x_a += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        out.append(AtomPairState((i + 1) * h, x_e, x_a))
    return out


def logistic_exact(t, k: float, x0: float):
    """Closed-form logistic x(t) = x0 / (x0 + (1 - x0) exp(-k t))."""
    t = np.asarray(t, dtype=float)
    return x0 / (x0 + (1.0 - x0) * np.exp(-k * t))


def dipole_signal(states, omega: float, which: str = "absorber") -> tuple[np.ndarray, np.ndarray]:
    """Oscillating dipole time series dipole(x(t)) * cos(omega t).

    The level populations only set the envelope; the carrier at the beat
    frequency omega is what a field probe would see.  Returns (t, signal).
    """
    if which not in ("emitter", "absorber"):
        raise ValueError("which must be 'emitter' or 'absorber'")
    t = np.array([s.t for s in states])
    x = np.array([s.x_emitter if which == "emitter" else s.x_absorber for s in states])
    x = np.clip(x, 0.0, 1.0)
    return t, np.sqrt(x * (1.0 - x)) * np.cos(omega * t)


def time_to_level(k: float, x0: float, level: float) -> float:
    """When the logistic reaches the given level (ln 99 / k for 0.01 -> 0.5)."""
    if not 0.0 < x0 < level < 1.0:
        raise ValueError("need 0 < x0 < level < 1")
    return math.log(level * (1.0 - x0) / (x0 * (1.0 - level))) / k


def compete(k_list, x0_max: float, trials: int, seed: int, dt: float | None = None) -> dict:
    """Race several absorbers for one emitter's quantum.

    Each trial draws every absorber's initial transfer uniformly from
    (0, x0_max] (stream keyed by seed, trial, absorber) and integrates
    dx_i/dt = k_i x_i (1 - sum_j x_j) with fixed-step RK4 until the
    emitter has drained (total transfer reaches 0.99).  The leading
    absorber at that step wins; an exact tie goes to the lowest index and
    is flagged in the trial log.
    """
    k = np.asarray(list(k_list), dtype=float)
    if k.ndim != 1 or len(k) < 2:
        raise ValueError("need at least two competing absorbers")
    if np.any(k <= 0):
        raise ValueError("couplings must be positive")
    if not 0.0 < x0_max < 0.5:
        raise ValueError("x0_max must lie in (0, 0.5)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if dt is None:
        dt = 0.02 / float(k.max())
    elif not 0.0 < dt <= 0.02 / float(k.max()) * (1.0 + 1e-12):
        raise ValueError("dt violates the stability bound")

    n_abs = len(k)
    # x0 in (0, x0_max]: flip the half-open uniform so zero is excluded
    x = np.empty((trials, n_abs))
    for j in range(n_abs):
        u = uniform_block(seed, np.arange(trials, dtype=np.uint64), draw_index=j)
        x[:, j] = (1.0 - u) * x0_max

    winners = np.full(trials, -1, dtype=np.int64)
    win_time = np.zeros(trials)
    ties = np.zeros(trials, dtype=bool)
    active = np.ones(trials, dtype=bool)
    t = 0.0
    max_steps = int(math.ceil(60.0 / (float(k.min()) * dt)))

    def rhs(state):
        total = state.sum(axis=1, keepdims=True)
        return k * state * (1.0 - total)

    for step in range(max_steps):
        if not active.any():
            break
        xa = x[active]
        k1 = rhs(xa)
        k2 = rhs(xa + 0.5 * dt * k1)
        k3 = rhs(xa + 0.5 * dt * k2)
        k4 = rhs(xa + dt * k3)
        xa = xa + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[active] = xa
        t += dt
        done = xa.sum(axis=1) >= COMPLETION_LEVEL
        if done.any():
            idx_active = np.flatnonzero(active)
            finished = idx_active[done]
            lead = np.argmax(x[finished], axis=1)
            best = x[finished, lead]
            # a tie means some other absorber matches the leader exactly
            tie = (x[finished] == best[:, None]).sum(axis=1) > 1
            winners[finished] = lead
            win_time[finished] = t
            ties[finished] = tie
            active[finished] = False
    if active.any():
        raise RuntimeError("competition failed to complete; raise t cap")

    win_counts = np.bincount(winners, minlength=n_abs)
    log = [
        {"trial": i, "winner": int(winners[i]), "t": float(win_time[i]), "tie": bool(ties[i])}
        for i in range(trials)
    ]
    return {
        "win_counts": [int(c) for c in win_counts],
        "win_fractions": [float(c) / trials for c in win_counts],
        "k_list": [float(v) for v in k],
        "trials": trials,
        "log": log,
    }


@dataclass(frozen=True)
class FieldGrid:
    """Square sampling grid: nx x ny points over [-extent, extent]^2."""

    nx: int
    ny: int
    extent: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.extent <= 0:
            raise ValueError("extent must be positive")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.ny)

    @property
    def cell(self) -> float:
        return 2.0 * self.extent / (max(self.nx, self.ny) - 1)


def field_snapshot(
    state: AtomPairState,
    omega: float,
    t: float,
    grid: FieldGrid,
    positions=((-1.0, 0.0), (1.0, 0.0)),
) -> np.ndarray:
    """Superposed retarded dipole waves of the pair on a 2-D grid.

    Each atom radiates dipole(x) * cos(omega (t - r/c)) / r; r clamps at
    half a grid cell so grid points on top of an atom stay finite.
    Positions are (x, y) in meters and must sit at least 4 cells apart.
    """
    (xe, ye), (xa, ya) = positions
    if math.hypot(xa - xe, ya - ye) < 4.0 * grid.cell:
        raise ValueError("atom positions must be at least 4 grid cells apart")
    r_min = 0.5 * grid.cell
    gx, gy = np.meshgrid(grid.xs, grid.ys, indexing="xy")
    out = np.zeros_like(gx)
    for (px, py), x_level in (((xe, ye), state.x_emitter), ((xa, ya), state.x_absorber)):
        r = np.hypot(gx - px, gy - py)
        r = np.maximum(r, r_min)
        out += dipole_amplitude(x_level) * np.cos(omega * (t - r / LIGHT_SPEED)) / r
    return out


def write_trajectory_csv(path, states) -> None:
    """Columns: t, x_emitter, x_absorber, dipole_emitter, dipole_absorber."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x_emitter", "x_absorber", "dipole_emitter", "dipole_absorber"])
        for s in states:
            writer.writerow(
                [
                    repr(s.t),
                    repr(s.x_emitter),
                    repr(s.x_absorber),
                    repr(dipole_amplitude(_clip(s.x_emitter))),
                    repr(dipole_amplitude(_clip(s.x_absorber))),
                ]
            )


def write_field_csv(path, field_matrix: np.ndarray, grid: FieldGrid) -> None:
    """One header line (nx, ny, extent), then the field matrix row by row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([grid.nx, grid.ny, repr(grid.extent)])
        for row in np.asarray(field_matrix):
            writer.writerow([repr(float(v)) for v in row])
