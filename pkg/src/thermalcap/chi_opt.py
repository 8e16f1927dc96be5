"""Ascent search for the Holevo quantity over small input ensembles.

The interval in `bounds` brackets the constrained capacity analytically;
this module probes the inside of that interval numerically.  It
maximizes

    chi = S(sum_k w_k E(rho_k)) - sum_k w_k S(E(rho_k))

over ensembles of at most 16 Fock-truncated states under the mean
photon-number constraint, using the channel and entropy machinery of
`fock_oracle`.

The search alternates two kinds of steps.  The weight step is a
Blahut-Arimoto style exponentiated reweighting toward members with a
larger relative-entropy contribution, with a bisected Lagrange
multiplier holding the photon budget; on fixed states this is the
classical capacity iteration and is monotone, but we still guard every
step by re-evaluating chi and rejecting regressions.  The state step
perturbs individual members (small displacements and diagonal Fock
mixing) and keeps only improvements.  Step sizes shrink geometrically
when a full sweep stalls.

Everything is deterministic under a fixed seed, and the result is
numerical evidence only: no claim of a global optimum is made, and a
value above the certified upper bound signals a truncation or budget
problem, not a capacity violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .gaussian_core import ChannelParams
from .fock_oracle import (
    DEFAULT_MAX_JOINT_DIM,
    DEFAULT_TAIL_TOL,
    FockDensityMatrix,
    apply_channel,
    coherent_state,
    mean_photon_number,
    von_neumann_entropy,
)

__all__ = [
    "Ensemble",
    "OptimizerConfig",
    "OptimizationResult",
    "chi",
    "optimize",
    "MAX_MEMBERS",
    "MAX_DIM",
    "WEIGHT_SUM_TOL",
    "CONSTRAINT_SLACK",
    "ASCENT_SLACK",
]

MAX_MEMBERS = 16
MAX_DIM = 32
WEIGHT_SUM_TOL = 1e-12
CONSTRAINT_SLACK = 1e-9
ASCENT_SLACK = 1e-9

_LN2 = math.log(2.0)
_LOG_FLOOR = 1e-18


@dataclass(frozen=True)
class Ensemble:
    """A finite ensemble of Fock-truncated states with probability weights."""

    members: tuple[tuple[FockDensityMatrix, float], ...]

    def __post_init__(self) -> None:
        members = tuple((state, float(weight)) for state, weight in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        for state, weight in members:
            if not isinstance(state, FockDensityMatrix):
                raise ValueError(f"ensemble member is not a density matrix: {state!r}")
            if not (math.isfinite(weight) and weight >= 0.0):
                raise ValueError(f"ensemble weight must be nonnegative, got {weight}")
        total = math.fsum(w for _, w in members)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"ensemble weights sum to {total!r}, not 1")
        object.__setattr__(self, "members", members)

    @property
    def mean_photons(self) -> float:
        return math.fsum(w * mean_photon_number(s) for s, w in self.members if w > 0.0)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OptimizerConfig:
    """Search-space size, perturbation schedule, and termination settings."""

    ensemble_size: int = 8
    dim: int = 24
    max_iterations: int = 1000
    tolerance: float = 1e-7
    seed: int = 0
    initial_step: float = 0.5
    step_decay: float = 0.5
    step_floor: float = 1e-4
    initial: Ensemble | None = None

    def __post_init__(self) -> None:
        if not (1 <= self.ensemble_size <= MAX_MEMBERS):
            raise ValueError(
                f"ensemble_size must be in [1, {MAX_MEMBERS}], got {self.ensemble_size}"
            )
        if not (2 <= self.dim <= MAX_DIM):
            raise ValueError(f"dim must be in [2, {MAX_DIM}], got {self.dim}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (math.isfinite(self.tolerance) and self.tolerance > 0.0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if not (0.0 < self.step_floor <= self.initial_step):
            raise ValueError("need 0 < step_floor <= initial_step")
        if not (0.0 < self.step_decay < 1.0):
            raise ValueError(f"step_decay must be in (0, 1), got {self.step_decay}")
        if self.initial is not None:
            if len(self.initial) > MAX_MEMBERS:
                raise ValueError(
                    f"initial ensemble has {len(self.initial)} members, cap is {MAX_MEMBERS}"
                )
            for state, _ in self.initial.members:
                if state.dim > MAX_DIM:
                    raise ValueError(
                        f"initial member dimension {state.dim} exceeds cap {MAX_DIM}"
                    )


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of one ascent run.

    `history` records (iteration, chi_bits) after every sweep, starting
    from the initial ensemble at iteration 0, and is nondecreasing.
    `converged` means the schedule finished: a full sweep at the minimum
    step size improved chi by less than the tolerance.
    """

    best_chi_bits: float
    ensemble: Ensemble
    iterations: int
    converged: bool
    history: tuple[tuple[int, float], ...] = field(repr=False)


def chi(
    params: ChannelParams,
    ensemble: Ensemble,
    *,
    env_tail_tol: float = DEFAULT_TAIL_TOL,
    max_joint_dim: int = DEFAULT_MAX_JOINT_DIM,
) -> float:
    """Holevo quantity of the ensemble through the channel, in bits.

    Single-member ensembles give exactly 0.  Member outputs are embedded
    into the largest common output dimension before mixing, which is
    lossless; truncation error is bounded by the members' own deficits
    as propagated by `apply_channel`.
    """
    if not isinstance(ensemble, Ensemble):
        raise ValueError(f"expected an Ensemble, got {ensemble!r}")
    if len(ensemble) == 1:
        return 0.0
    outs = []
    for state, weight in ensemble.members:
        out = apply_channel(
            params, state, env_tail_tol=env_tail_tol, max_joint_dim=max_joint_dim
        )
        outs.append((out, weight))
    dim_out = max(out.dim for out, _ in outs)
    average = np.zeros((dim_out, dim_out), dtype=complex)
    deficit = 0.0
    entropy_sum = 0.0
    for out, weight in outs:
        d = out.dim
        average[:d, :d] += weight * out.matrix
        deficit += weight * out.deficit
        if weight > 0.0:
            entropy_sum += weight * von_neumann_entropy(out)
    average_entropy = von_neumann_entropy(FockDensityMatrix(average, deficit=deficit))
    return max((average_entropy - entropy_sum) / _LN2, 0.0)


def _displacement_unitary(delta: complex, dim: int) -> np.ndarray:
    """exp(delta a^dag - conj(delta) a) on the truncated Fock space."""
    ladder = np.sqrt(np.arange(1.0, dim))
    gen = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim - 1)
    gen[rows + 1, rows] = delta * ladder
    gen[rows, rows + 1] = -np.conj(delta) * ladder
    herm = 1j * gen
    vals, vecs = np.linalg.eigh(herm)
    return (vecs * np.exp(-1j * vals)) @ vecs.conj().T


def _tilted_weights(raw: np.ndarray, photons: np.ndarray, budget: float) -> np.ndarray:
    """Renormalize exp-weights, tilting by the photon cost when needed.

    Returns weights proportional to raw * exp(-mu * photons) with the
    smallest mu >= 0 whose ensemble mean is within the budget.  Assumes
    min(photons) <= budget, which holds whenever the current ensemble is
    feasible.
    """

    logr = np.log(np.maximum(raw, 1e-300))
    excess = photons - budget

    def overdrawn(mu: float) -> bool:
        logw = logr - mu * photons
        return float(np.exp(logw - logw.max()) @ excess) > 0.0

    def weights_at(mu: float) -> np.ndarray:
        logw = logr - mu * photons
        logw -= logw.max()
        w = np.exp(logw)
        return w / w.sum()

    if not overdrawn(0.0):
        return weights_at(0.0)
    hi = 1.0
    while overdrawn(hi):
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("photon constraint cannot be met by reweighting")
    lo = 0.0
    # 60 halvings take the bracket below float resolution for any tilt
    # the doubling phase can return.
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if overdrawn(mid):
            lo = mid
        else:
            hi = mid
    return weights_at(hi)


class _Run:
    """Mutable state of one optimization: members, weights, channel outputs."""

    def __init__(
        self,
        params: ChannelParams,
        budget: float,
        states: list[FockDensityMatrix],
        weights: np.ndarray,
    ):
        self.params = params
        self.budget = budget
        self.states = states
        self.weights = weights.copy()
        self.outs = [apply_channel(params, s) for s in states]
        self.entropies = np.array([von_neumann_entropy(o) for o in self.outs])
        self.photons = np.array([mean_photon_number(s) for s in states])
        self.dim_out = max(o.dim for o in self.outs)
        self.current_chi = self.chi_bits()

    def average_output(self, weights: np.ndarray) -> np.ndarray:
        avg = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for out, w in zip(self.outs, weights):
            if w > 0.0:
                avg[: out.dim, : out.dim] += w * out.matrix
        return avg

    def chi_bits(self, weights: np.ndarray | None = None) -> float:
        w = self.weights if weights is None else weights
        avg = self.average_output(w)
        vals = np.linalg.eigvalsh(avg)
        vals = vals[vals > 1e-15]
        average_entropy = float(-(vals @ np.log(vals)))
        return max((average_entropy - float(w @ self.entropies)) / _LN2, 0.0)

    def _decompose_average(
        self, weights: np.ndarray
    ) -> tuple[float, np.ndarray]:
        """Chi (bits) and matrix log of the average output, from one eigh."""
        vals, vecs = np.linalg.eigh(self.average_output(weights))
        pos = vals[vals > 1e-15]
        average_entropy = float(-(pos @ np.log(pos)))
        chi = max(
            (average_entropy - float(weights @ self.entropies)) / _LN2, 0.0
        )
        ln_avg = (vecs * np.log(np.maximum(vals, _LOG_FLOOR))) @ vecs.conj().T
        return chi, ln_avg

    def _reweight_candidate(
        self, weights: np.ndarray, ln_avg: np.ndarray
    ) -> np.ndarray:
        """One multiplicative reweighting step from `weights`, tilted feasible.

        Each weight is scaled by exp of the member's relative-entropy score
        against the current average output; the photon tilt then restores
        the budget.  Fixed points of this map with mu > 0 saturate the
        constraint at stationary weights.
        """
        scores = np.array(
            [
                -s - float(np.einsum(
                    "ij,ji->", out.matrix, ln_avg[: out.dim, : out.dim]).real)
                for out, s in zip(self.outs, self.entropies)
            ]
        )
        raw = weights * np.exp(scores - scores.max())
        return _tilted_weights(raw, self.photons, self.budget)

    def weight_step(self) -> None:
        chi_now, ln_avg = self._decompose_average(self.weights)
        candidate = self._reweight_candidate(self.weights, ln_avg)
        chi_candidate = self.chi_bits(candidate)
        if chi_candidate >= chi_now - 1e-15:
            self.weights = candidate
            self.current_chi = chi_candidate
        else:
            self.current_chi = chi_now

    def try_member(self, k: int, state: FockDensityMatrix) -> bool:
        """Install a replacement state for member k if it improves chi.

        The move is judged jointly with the weight response.  A move that
        overdraws the photon budget gets its weights re-tilted back into
        feasibility, and a reweighting step is evaluated alongside the
        unchanged weights, so moves that only pay off after the weights
        adapt stay reachable even when the constraint is active.
        """
        before = self.current_chi
        out = apply_channel(self.params, state)
        old = (self.states[k], self.outs[k], self.entropies[k], self.photons[k])
        self.states[k] = state
        self.outs[k] = out
        self.entropies[k] = von_neumann_entropy(out)
        self.photons[k] = mean_photon_number(state)
        self.dim_out = max(self.dim_out, out.dim)
        weights = self.weights
        if float(weights @ self.photons) > self.budget:
            if float(self.photons.min()) > self.budget:
                # No reweighting can restore feasibility; reject outright.
                self.states[k], self.outs[k] = old[0], old[1]
                self.entropies[k], self.photons[k] = old[2], old[3]
                self.dim_out = max(o.dim for o in self.outs)
                return False
            weights = _tilted_weights(weights, self.photons, self.budget)
        best, ln_avg = self._decompose_average(weights)
        best_weights = weights
        reweighted = self._reweight_candidate(weights, ln_avg)
        chi_reweighted = self.chi_bits(reweighted)
        if chi_reweighted > best:
            best_weights, best = reweighted, chi_reweighted
        if best > before:
            self.weights = best_weights
            self.current_chi = best
            return True
        self.states[k], self.outs[k], self.entropies[k], self.photons[k] = old
        self.dim_out = max(o.dim for o in self.outs)
        return False

    def ensemble(self) -> Ensemble:
        total = self.weights.sum()
        return Ensemble(
            tuple((s, w / total) for s, w in zip(self.states, self.weights))
        )


def _initial_states(
    n_signal: float, size: int, dim: int
) -> tuple[list[FockDensityMatrix], np.ndarray]:
    """Vacuum plus up to two rings of coherent states, feasibly weighted.

    Ring radii are fractions of sqrt(N) that work well for the pure-loss
    channel at small N, clamped so every amplitude meets the coherent
    truncation precondition |alpha|^2 <= dim/4; the optimizer refines
    them anyway.  Weights are tilted toward the vacuum just enough to
    respect the photon budget.
    """
    scale = math.sqrt(n_signal)
    radius_cap = 0.98 * math.sqrt(dim / 4.0)
    alphas: list[complex] = [0.0]
    if size == 2:
        alphas.append(min(scale, radius_cap))
    elif size > 2:
        n_inner = (size - 1) // 2
        n_outer = size - 1 - n_inner
        r_inner = min(0.9 * scale, 0.7 * radius_cap)
        r_outer = min(1.8 * scale, radius_cap)
        for j in range(n_inner):
            angle = 2.0 * math.pi * j / n_inner
            alphas.append(r_inner * complex(math.cos(angle), math.sin(angle)))
        for j in range(n_outer):
            angle = 2.0 * math.pi * (j + 0.5) / n_outer
            alphas.append(r_outer * complex(math.cos(angle), math.sin(angle)))
    states = [coherent_state(a, dim) for a in alphas]
    photons = np.array([abs(a) ** 2 for a in alphas])
    raw = np.exp(-photons / max(n_signal, 1e-12))
    weights = _tilted_weights(raw, photons, 0.95 * n_signal)
    return states, weights


def optimize(
    params: ChannelParams,
    n_signal: float,
    config: OptimizerConfig | None = None,
) -> OptimizationResult:
    """Maximize chi over ensembles with mean photon number <= n_signal.

    Alternates guarded reweighting with greedy state perturbations,
    shrinking the perturbation scale geometrically whenever a full sweep
    improves chi by less than the tolerance.  `converged` is True only
    when a sweep at the minimum scale stalls; hitting the iteration cap
    first reports converged=False.
    """
    if config is None:
        config = OptimizerConfig()
    if not isinstance(params, ChannelParams):
        raise ValueError(f"expected ChannelParams, got {params!r}")
    n = float(n_signal)
    if not (math.isfinite(n) and n >= 0.0):
        raise ValueError(f"photon-number constraint must be >= 0, got {n_signal}")

    if n == 0.0:
        vacuum = Ensemble(((coherent_state(0.0, 2), 1.0),))
        return OptimizationResult(
            best_chi_bits=0.0,
            ensemble=vacuum,
            iterations=0,
            converged=True,
            history=((0, 0.0),),
        )

    if config.initial is not None:
        if config.initial.mean_photons > n + CONSTRAINT_SLACK:
            raise ValueError(
                f"initial ensemble mean photons {config.initial.mean_photons:.6g} "
                f"exceeds constraint {n}"
            )
        states = [s for s, _ in config.initial.members]
        weights = np.array([w for _, w in config.initial.members])
    else:
        states, weights = _initial_states(n, config.ensemble_size, config.dim)

    rng = np.random.default_rng(config.seed)
    run = _Run(params, n, states, weights)

    current = run.current_chi
    history = [(0, current)]
    step = config.initial_step
    scale = math.sqrt(n)
    converged = False
    iterations = 0

    for iteration in range(1, config.max_iterations + 1):
        iterations = iteration
        before = current
        run.weight_step()
        for k in range(len(run.states)):
            axis = step * scale
            gauss = rng.standard_normal(4)
            deltas = (
                complex(axis, 0.0),
                complex(-axis, 0.0),
                complex(0.0, axis),
                complex(0.0, -axis),
                0.35 * axis * complex(gauss[0], gauss[1]) / math.sqrt(2.0),
                0.12 * axis * complex(gauss[2], gauss[3]) / math.sqrt(2.0),
            )
            for delta in deltas:
                base = run.states[k]
                unitary = _displacement_unitary(delta, base.dim)
                moved = unitary @ base.matrix @ unitary.conj().T
                moved = (moved + moved.conj().T) / 2.0
                trace = float(moved.trace().real)
                if trace > 0.0:
                    run.try_member(k, FockDensityMatrix(moved / trace, deficit=0.0))
            level = int(rng.integers(0, run.states[k].dim))
            eps = min(0.9, 0.3 * step)
            mixed = (1.0 - eps) * run.states[k].matrix.copy()
            mixed[level, level] += eps
            run.try_member(
                k,
                FockDensityMatrix(mixed, deficit=(1.0 - eps) * run.states[k].deficit),
            )
        run.weight_step()
        current = run.current_chi
        history.append((iteration, current))
        if current - before < config.tolerance:
            if step <= config.step_floor * (1.0 + 1e-12):
                converged = True
                break
            step = max(step * config.step_decay, config.step_floor)

    return OptimizationResult(
        best_chi_bits=current,
        ensemble=run.ensemble(),
        iterations=iterations,
        converged=converged,
        history=tuple(history),
    )
