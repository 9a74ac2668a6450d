"""Adaptive contrast enhancement solve on the saturation and intensity planes.

The solve minimizes, by explicit descent steps, an objective with two
competing parts: a quadratic data term anchoring each plane to the guide,
and negative contrast terms that reward large distance-weighted pairwise
spread. Two per-pixel fields steer the contrast terms:

  * a Gaussian bell G of the sample value, centered at 0.5, damping the
    push on samples already near the extremes;
  * a binary gate H marking samples whose predicted enhancement moves
    them away from 0.5; the complementary set is enhanced at full
    strength, the gated set through G.

Hue is never enhanced: it relaxes geometrically toward the guide hue.
Saturation and intensity receive the descent updates, scaled by alpha
and beta respectively, and are clamped to [0, 1] after every step. The
gate fields are recomputed from the current state at each iteration and
held fixed within it.

Iteration stops when the relative energy change falls to tau, when the
previous energy is so close to zero the relative change is meaningless,
or at the iteration cap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .imagecore import HsiImage, clamp_unit
from .nonlocal_ops import KernelSpec, NonlocalSums, multi_sums, pyramid_multi

__all__ = [
    "SolverParams",
    "SolverState",
    "gaussian_weight",
    "heaviside_field",
    "do_operator",
    "di_operator",
    "channel_energy",
    "channel_direction",
    "energy",
    "step",
    "solve",
    "solve_state",
]

_ZERO_ENERGY = 1e-12

TraceCallback = Callable[[int, float, "float | None"], None]


@dataclass(frozen=True)
class SolverParams:
    """Descent settings.

    alpha and beta scale the contrast push on saturation and intensity,
    sigma shapes the value-domain bell G, dt is the step size, tau the
    relative-energy stopping tolerance, and max_iters the iteration cap.
    exact_mode replaces the pyramid-accelerated pairwise sums with the
    quadratic-cost global evaluation (for tests and diagnostics).
    """

    alpha: float = 0.25
    beta: float = 0.3
    sigma: float = 0.03
    dt: float = 0.7
    tau: float = 0.05
    max_iters: int = 200
    kernel: KernelSpec = KernelSpec()
    exact_mode: bool = False

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not 0.0 < self.dt <= 1.0:
            raise ValueError("dt must lie in (0, 1]")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class SolverState:
    """One point of the iteration: current image, guide, and energy trail."""

    current: HsiImage
    guide: HsiImage
    iteration: int
    energy_history: tuple[float, ...]
    stop_reason: str | None = None

    def __post_init__(self) -> None:
        if self.current.planes()[0].shape != self.guide.planes()[0].shape:
            raise ValueError("current and guide dimensions differ")
        if len(self.energy_history) != self.iteration + 1:
            raise ValueError("energy history must hold one entry per state")


def gaussian_weight(ic: np.ndarray, sigma: float) -> np.ndarray:
    """Value-domain bell G = exp(-(v - 0.5)^2 / (2 sigma)), peak 1 at 0.5."""
    v = np.asarray(ic, dtype=np.float64)
    return np.exp(-((v - 0.5) ** 2) / (2.0 * sigma))


def heaviside_field(ic: np.ndarray, s1: np.ndarray) -> np.ndarray:
    """Binary gate: 1 where (v - 0.5) * s1 > 0, else 0 (including ties)."""
    v = np.asarray(ic, dtype=np.float64)
    return ((v - 0.5) * np.asarray(s1, dtype=np.float64) > 0.0).astype(np.float64)


def do_operator(
    ic: np.ndarray,
    g: np.ndarray,
    h_field: np.ndarray,
    sums: NonlocalSums,
    sigma: float,
) -> np.ndarray:
    """Descent contribution of the gated contrast term.

    sums.sc must be evaluated with coefficient field c = g * h_field.
    """
    gh = g * h_field
    bell_slope = (np.asarray(ic, dtype=np.float64) - 0.5) / (2.0 * sigma)
    return sums.sc + gh * sums.s1 - bell_slope * gh * sums.s2


def di_operator(h_field: np.ndarray, sums: NonlocalSums) -> np.ndarray:
    """Descent contribution of the complementary (ungated) contrast term.

    sums.sc must be evaluated with coefficient field c = h_field.
    """
    return (2.0 - h_field) * sums.s1 - sums.sc


def _sums(plane: np.ndarray, cs: Sequence[np.ndarray], params: SolverParams) -> list[np.ndarray]:
    if params.exact_mode:
        return multi_sums(plane, cs, params.kernel, scope="global")
    return pyramid_multi(plane, cs, params.kernel)


def _channel_pieces(plane: np.ndarray, params: SolverParams):
    s1, s2 = _sums(plane, (), params)
    g = gaussian_weight(plane, params.sigma)
    h_field = heaviside_field(plane, s1)
    return s1, s2, g, h_field


def _pieces(image: HsiImage, params: SolverParams) -> dict:
    return {
        "s": _channel_pieces(image.s, params),
        "i": _channel_pieces(image.i, params),
    }


def _energy_from_pieces(image: HsiImage, guide: HsiImage, pieces: dict, params: SolverParams) -> float:
    total = 0.0
    for cur_p, guide_p in zip(image.planes(), guide.planes()):
        total += 0.5 * float(np.sum((guide_p - cur_p) ** 2))
    for chan, kappa in (("s", params.alpha), ("i", params.beta)):
        _, s2, g, h_field = pieces[chan]
        gate = g * h_field + (1.0 - h_field)
        total -= 0.5 * kappa * float(np.sum(gate * s2))
    return total


def _apply_update(image: HsiImage, guide: HsiImage, pieces: dict, params: SolverParams) -> HsiImage:
    dt = params.dt
    new_h = (1.0 - dt) * image.h + dt * guide.h
    updated = {}
    for chan, kappa, cur_p, guide_p in (
        ("s", params.alpha, image.s, guide.s),
        ("i", params.beta, image.i, guide.i),
    ):
        s1, s2, g, h_field = pieces[chan]
        _, _, sc_gated, sc_plain = _sums(cur_p, (g * h_field, h_field), params)
        do = do_operator(cur_p, g, h_field, NonlocalSums(s1, s2, sc_gated), params.sigma)
        di = di_operator(h_field, NonlocalSums(s1, s2, sc_plain))
        stepped = (1.0 - dt) * cur_p + dt * guide_p + kappa * dt * (do + di)
        updated[chan] = clamp_unit(stepped)
    return HsiImage(h=new_h, s=updated["s"], i=updated["i"])


def energy(state: SolverState, params: SolverParams) -> float:
    """Objective value at the state's current image.

    Data misfit against the guide over all three planes, minus the
    gate-weighted pairwise spread of saturation and intensity.
    """
    pieces = _pieces(state.current, params)
    return _energy_from_pieces(state.current, state.guide, pieces, params)


def channel_energy(
    plane: np.ndarray,
    guide_plane: np.ndarray,
    h_field: np.ndarray,
    kappa: float,
    sigma: float,
    kernel: KernelSpec,
    exact_mode: bool = True,
) -> float:
    """Single-plane objective with an externally supplied (frozen) gate.

    Used to validate the analytic descent direction against numeric
    differentiation; the bell G still tracks the plane values.
    """
    params = SolverParams(sigma=sigma, kernel=kernel, exact_mode=exact_mode)
    plane = np.asarray(plane, dtype=np.float64)
    _, s2 = _sums(plane, (), params)
    g = gaussian_weight(plane, sigma)
    gate = g * h_field + (1.0 - h_field)
    data = 0.5 * float(np.sum((guide_plane - plane) ** 2))
    return data - 0.5 * kappa * float(np.sum(gate * s2))


def channel_direction(
    plane: np.ndarray,
    guide_plane: np.ndarray,
    h_field: np.ndarray,
    kappa: float,
    sigma: float,
    kernel: KernelSpec,
    exact_mode: bool = True,
) -> np.ndarray:
    """Analytic update direction (guide - plane) + kappa * (do + di).

    The gate field is frozen, matching channel_energy, so this is the
    exact negative gradient of that objective.
    """
    params = SolverParams(sigma=sigma, kernel=kernel, exact_mode=exact_mode)
    plane = np.asarray(plane, dtype=np.float64)
    g = gaussian_weight(plane, sigma)
    s1, s2, sc_gated, sc_plain = _sums(plane, (g * h_field, h_field), params)
    do = do_operator(plane, g, h_field, NonlocalSums(s1, s2, sc_gated), sigma)
    di = di_operator(h_field, NonlocalSums(s1, s2, sc_plain))
    return (guide_plane - plane) + kappa * (do + di)


def step(state: SolverState, params: SolverParams) -> SolverState:
    """Advance one descent iteration and append the new state's energy.

    All right-hand sides read the incoming state, so plane updates within
    an iteration do not see each other.
    """
    pieces = _pieces(state.current, params)
    new_image = _apply_update(state.current, state.guide, pieces, params)
    new_energy = _energy_from_pieces(new_image, state.guide, _pieces(new_image, params), params)
    return SolverState(
        current=new_image,
        guide=state.guide,
        iteration=state.iteration + 1,
        energy_history=state.energy_history + (new_energy,),
    )


def solve_state(
    guide: HsiImage,
    init: HsiImage,
    params: SolverParams,
    on_iteration: TraceCallback | None = None,
) -> SolverState:
    """Run descent from init until the stopping rule fires; return the state.

    The returned state's stop_reason is "tolerance" (relative energy
    change at most tau), "zero_energy" (previous energy within 1e-12 of
    zero), or "max_iters".
    """
    pieces = _pieces(init, params)
    first = _energy_from_pieces(init, guide, pieces, params)
    state = SolverState(current=init, guide=guide, iteration=0, energy_history=(first,))
    if on_iteration is not None:
        on_iteration(0, first, None)

    reason = "max_iters"
    for _ in range(params.max_iters):
        previous = state.energy_history[-1]
        new_image = _apply_update(state.current, guide, pieces, params)
        pieces = _pieces(new_image, params)
        current = _energy_from_pieces(new_image, guide, pieces, params)
        state = SolverState(
            current=new_image,
            guide=guide,
            iteration=state.iteration + 1,
            energy_history=state.energy_history + (current,),
        )
        stationary = abs(previous) < _ZERO_ENERGY
        delta = None if stationary else abs(current - previous) / abs(previous)
        if on_iteration is not None:
            on_iteration(state.iteration, current, delta)
        if stationary:
            reason = "zero_energy"
            break
        if delta <= params.tau:
            reason = "tolerance"
            break
    return replace(state, stop_reason=reason)


def solve(guide: HsiImage, init: HsiImage, params: SolverParams) -> HsiImage:
    """Convenience wrapper returning only the final image."""
    return solve_state(guide, init, params).current
