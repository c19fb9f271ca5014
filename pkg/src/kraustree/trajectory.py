"""Stochastic quantum-trajectory engine and the headline experiments.

Channels are unravelled into single-shot trajectories by sampling one Kraus
branch per application; averaging trajectories reproduces the deterministic
channel composition, which is also available directly as an oracle.  On top
of the engine sit the odd-parity stabilization lifetime experiment, the
repetition-interval sweep, and the quantum Zeno blockade experiment.

Rate conventions: user-facing rates are inverse lifetimes (the population of
|1⟩ under single-photon loss at rate κ decays as e^{−κt}).  The Lindblad
generator used by `lindblad_rk4` and `kraus_step_from_lindblad` carries the
factor-2 convention dρ/dt = Σ κ(2oρo† − o†oρ − ρo†o), under which the same
population decays as e^{−2κt}; convert lifetimes as κ = 1/(2·T) there.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .channels import KrausChannel, apply, channel, check_density
from .errors import (
    BadParameter,
    DegenerateState,
    DimensionMismatch,
    FitFailed,
    IncompleteChannel,
    InvalidProtocol,
    StepTooLarge,
    TruncationTooSmall,
)
from .library import depolarize, odd_parity_stabilizer, two_photon_dissipation
from .linalg import expm, hermitianize, spectral_norm
from .tomography import (
    chi_identity_fidelity,
    default_process_inputs,
    process_tomography,
)
from .bases import build_basis
from .tree import TreePlan, recompose

CAVITY_LIFETIME_US = 143.0
MIN_BRANCH_PROB = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Error model: intrinsic cavity loss plus a depolarizing kick after
    every ancilla-assisted (channel or tree) operation."""

    kappa_s: float = 1.0 / CAVITY_LIFETIME_US
    depol_p: float = 0.036
    apply_loss_during_interval: bool = True

    def __post_init__(self) -> None:
        if self.kappa_s < 0:
            raise BadParameter(f"loss rate must be nonnegative, got {self.kappa_s}")
        if not 0.0 <= self.depol_p <= 1.0:
            raise BadParameter(f"depol_p must lie in [0, 1], got {self.depol_p}")


NOISELESS = NoiseModel(kappa_s=0.0, depol_p=0.0)


@dataclass(frozen=True)
class TrajectoryConfig:
    """Simulation parameters: space truncation, repetition interval (µs),
    step count, RNG seed, ensemble size, and optional drive amplitude."""

    dim: int = 4
    t_int: float = 12.5
    n_steps: int = 12
    seed: int = 0
    ensemble: int = 1
    drive_alpha: complex | None = None

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise BadParameter(f"dim must be at least 2, got {self.dim}")
        if self.t_int <= 0:
            raise BadParameter(f"t_int must be positive, got {self.t_int}")
        if self.n_steps < 1:
            raise BadParameter(f"n_steps must be at least 1, got {self.n_steps}")
        if self.ensemble < 1:
            raise BadParameter(f"ensemble must be at least 1, got {self.ensemble}")


@dataclass(frozen=True)
class Step:
    """One protocol item: a channel application, an adaptive tree, a
    displacement drive, or an idle wait."""

    kind: str
    channel: KrausChannel | None = None
    plan: TreePlan | None = None
    alpha: complex = 0j


def channel_step(ch: KrausChannel) -> Step:
    return Step("channel", channel=ch)


def tree_step(plan: TreePlan) -> Step:
    return Step("tree", plan=plan)


def displace_step(alpha: complex) -> Step:
    return Step("displace", alpha=complex(alpha))


def idle_step() -> Step:
    return Step("idle")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled trajectory: the stream index it was derived from, the
    branch outcome per step (−1 for deterministic steps), per-step Fock
    populations, and optional state snapshots."""

    seed: int
    outcomes: tuple[int, ...]
    populations: np.ndarray
    states: tuple[np.ndarray, ...] | None = None


@dataclass(frozen=True)
class EnsembleResult:
    """Ensemble averages: per-step mean populations, mean density matrix,
    and the standard error of each population entry."""

    mean_populations: np.ndarray
    mean_state: np.ndarray
    stderr: np.ndarray
    records: tuple[TrajectoryRecord, ...]


def loss_channel(dim: int, kappa_t: float) -> KrausChannel:
    """Exact finite-time amplitude damping: operator k removes k photons,
    with per-photon survival η = e^{−κt}."""
    if kappa_t < 0:
        raise BadParameter(f"loss exponent must be nonnegative, got {kappa_t}")
    eta = math.exp(-kappa_t)
    ops = []
    for k in range(dim):
        op = np.zeros((dim, dim), dtype=complex)
        for n in range(k, dim):
            op[n - k, n] = math.sqrt(
                math.comb(n, k) * eta ** (n - k) * (1.0 - eta) ** k
            )
        ops.append(op)
    return channel(ops, label=f"loss_{kappa_t:g}")


def _embed(ch: KrausChannel, dim: int) -> KrausChannel:
    """Extend a channel to a larger space, acting as the identity on the
    extra levels (identity block on the first operator, zero on the rest)."""
    if ch.dim == dim:
        return ch
    if ch.dim > dim:
        raise DimensionMismatch(f"cannot embed dim {ch.dim} into dim {dim}")
    ops = []
    for j, op in enumerate(ch.ops):
        big = np.zeros((dim, dim), dtype=complex)
        big[: ch.dim, : ch.dim] = op
        if j == 0:
            big[ch.dim :, ch.dim :] = np.eye(dim - ch.dim)
        ops.append(big)
    return channel(ops, label=ch.label, strict=ch.strict)


def _depol_channel(p: float, dim: int) -> KrausChannel:
    """Depolarizing Kraus set at any dimension: the named operator-basis
    construction where a basis exists, a shift/clock (Weyl) basis otherwise."""
    if dim in (2, 3, 4):
        return depolarize(p, dim)
    omega = np.exp(2j * np.pi / dim)
    shift = np.zeros((dim, dim), dtype=complex)
    for n in range(dim):
        shift[(n + 1) % dim, n] = 1.0
    clock = np.diag(omega ** np.arange(dim))
    d2 = dim * dim
    ops = [np.sqrt(1.0 - p * (d2 - 1) / d2) * np.eye(dim, dtype=complex)]
    power_a = np.eye(dim, dtype=complex)
    for a in range(dim):
        word = power_a.copy()
        for b in range(dim):
            if a or b:
                ops.append(np.sqrt(p) / dim * word)
            word = word @ clock
        power_a = shift @ power_a
    return channel(ops, label=f"depolarize_{p:g}")


def sample_jump(
    ch: KrausChannel, rho: np.ndarray, r: float
) -> tuple[int, np.ndarray]:
    """Pick one Kraus branch by the cumulative rule on p_j = Tr(E_j ρ E_j†)
    and return its renormalized post-state.  Branch probabilities below
    1e-12 are excluded and the rest renormalized to exactly 1, so a
    pathological r can never land on a dead branch."""
    if not ch.strict:
        raise IncompleteChannel("sampling requires a trace-preserving channel")
    if not 0.0 <= r < 1.0:
        raise BadParameter(f"r must lie in [0, 1), got {r}")
    rho = np.asarray(rho, dtype=complex)
    probs = np.array(
        [np.trace(op @ rho @ op.conj().T).real for op in ch.ops]
    )
    alive = probs >= MIN_BRANCH_PROB
    total = probs[alive].sum()
    if total < MIN_BRANCH_PROB:
        raise DegenerateState("state has vanishing weight on every branch")
    cumulative = 0.0
    last = int(np.nonzero(alive)[0][-1])
    for j, p in enumerate(probs):
        if not alive[j]:
            continue
        cumulative += p / total
        if r < cumulative or j == last:
            op = ch.ops[j]
            post = hermitianize(op @ rho @ op.conj().T) / p
            return j, post
    raise DegenerateState("cumulative selection fell through")  # pragma: no cover


def _sample_tree(
    plan: TreePlan, rho: np.ndarray, rng: np.random.Generator
) -> tuple[int, np.ndarray]:
    """Walk the adaptive tree, sampling one branch bit per layer; returns
    the leaf index (most significant outcome first) and the post-state."""
    prefix = ""
    for _ in range(plan.layers):
        op0, op1 = plan.nodes[prefix]
        p0 = np.trace(op0 @ rho @ op0.conj().T).real
        p1 = np.trace(op1 @ rho @ op1.conj().T).real
        total = p0 + p1
        if total < MIN_BRANCH_PROB:
            raise DegenerateState(f"no branch weight at node '{prefix}'")
        bit = 0 if rng.random() < p0 / total else 1
        if p0 < MIN_BRANCH_PROB:
            bit = 1
        elif p1 < MIN_BRANCH_PROB:
            bit = 0
        op, p = (op0, p0) if bit == 0 else (op1, p1)
        rho = hermitianize(op @ rho @ op.conj().T) / p
        prefix += "01"[bit]
    return int(prefix, 2), rho


@dataclass(frozen=True)
class _ExecStep:
    kind: str
    sampled: KrausChannel | None  # channel to sample (channel steps)
    plan: TreePlan | None  # tree to walk (tree steps)
    exact: KrausChannel | None  # deterministic equivalent (channel/tree)
    unitary: np.ndarray | None  # displacement steps
    depol: KrausChannel | None  # post-operation noise kick


def _compile(
    protocol: Sequence[Step], cfg: TrajectoryConfig, noise: NoiseModel
) -> tuple[KrausChannel | None, list[_ExecStep]]:
    loss = None
    if noise.apply_loss_during_interval and noise.kappa_s > 0:
        loss = loss_channel(cfg.dim, noise.kappa_s * cfg.t_int)
    depol = None
    if noise.depol_p > 0:
        depol = _depol_channel(noise.depol_p, cfg.dim)
    compiled = []
    recomposed: dict[int, KrausChannel] = {}
    for step in protocol:
        if step.kind == "channel":
            if step.channel is None:
                raise InvalidProtocol("channel step carries no channel")
            ch = _embed(step.channel, cfg.dim)
            compiled.append(_ExecStep("channel", ch, None, ch, None, depol))
        elif step.kind == "tree":
            if step.plan is None:
                raise InvalidProtocol("tree step carries no plan")
            if step.plan.dim != cfg.dim:
                raise DimensionMismatch(
                    f"tree plan dim {step.plan.dim} does not match config dim {cfg.dim}"
                )
            key = id(step.plan)
            if key not in recomposed:
                recomposed[key] = recompose(step.plan)
            compiled.append(
                _ExecStep("tree", None, step.plan, recomposed[key], None, depol)
            )
        elif step.kind == "displace":
            u = displacement_truncated(step.alpha, cfg.dim)
            compiled.append(_ExecStep("displace", None, None, None, u, None))
        elif step.kind == "idle":
            compiled.append(_ExecStep("idle", None, None, None, None, None))
        else:
            raise InvalidProtocol(f"unknown step kind {step.kind!r}")
    return loss, compiled


def _default_rho0(dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _run_trajectory(
    loss: KrausChannel | None,
    compiled: list[_ExecStep],
    cfg: TrajectoryConfig,
    rho0: np.ndarray,
    index: int,
    record_states: bool,
) -> TrajectoryRecord:
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, index)))
    rho = rho0.copy()
    outcomes: list[int] = []
    pops = np.empty((len(compiled), cfg.dim))
    states: list[np.ndarray] = []
    for i, step in enumerate(compiled):
        if loss is not None:
            _, rho = sample_jump(loss, rho, rng.random())
        if step.kind == "channel":
            j, rho = sample_jump(step.sampled, rho, rng.random())
            outcomes.append(j)
        elif step.kind == "tree":
            j, rho = _sample_tree(step.plan, rho, rng)
            outcomes.append(j)
        elif step.kind == "displace":
            rho = step.unitary @ rho @ step.unitary.conj().T
            outcomes.append(-1)
        else:
            outcomes.append(-1)
        if step.depol is not None:
            _, rho = sample_jump(step.depol, rho, rng.random())
        pops[i] = np.diag(rho).real
        if record_states:
            states.append(rho.copy())
    return TrajectoryRecord(
        seed=index,
        outcomes=tuple(outcomes),
        populations=pops,
        states=tuple(states) if record_states else None,
    )


def run_ensemble(
    protocol: Sequence[Step],
    cfg: TrajectoryConfig,
    noise: NoiseModel,
    rho0: np.ndarray | None = None,
    record_states: bool = False,
    workers: int = 1,
) -> EnsembleResult:
    """Sample cfg.ensemble independent trajectories of the protocol.

    Each trajectory draws from its own RNG stream derived deterministically
    from (cfg.seed, trajectory index), so results are reproducible and
    independent of execution order.  Chunks of trajectories may run on a
    thread pool; partial sums are merged in fixed chunk order, keeping the
    result identical for any worker count.
    """
    rho0 = _default_rho0(cfg.dim) if rho0 is None else np.asarray(rho0, complex)
    if rho0.shape != (cfg.dim, cfg.dim):
        raise DimensionMismatch(
            f"initial state has shape {rho0.shape}, expected {(cfg.dim, cfg.dim)}"
        )
    check_density(rho0)
    loss, compiled = _compile(protocol, cfg, noise)
    n = len(compiled)

    chunk_size = 64
    chunks = [
        range(start, min(start + chunk_size, cfg.ensemble))
        for start in range(0, cfg.ensemble, chunk_size)
    ]

    def run_chunk(indices: range):
        records = [
            _run_trajectory(loss, compiled, cfg, rho0, i, record_states)
            for i in indices
        ]
        pop_sum = np.zeros((n, cfg.dim))
        pop_sq = np.zeros((n, cfg.dim))
        state_sum = np.zeros((n, cfg.dim, cfg.dim), dtype=complex)
        for rec in records:
            pop_sum += rec.populations
            pop_sq += rec.populations**2
            if rec.states is not None:
                state_sum += np.array(rec.states)
        return records, pop_sum, pop_sq, state_sum

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, chunks))
    else:
        parts = [run_chunk(c) for c in chunks]

    records: list[TrajectoryRecord] = []
    pop_sum = np.zeros((n, cfg.dim))
    pop_sq = np.zeros((n, cfg.dim))
    state_sum = np.zeros((n, cfg.dim, cfg.dim), dtype=complex)
    for recs, ps, pq, ss in parts:
        records.extend(recs)
        pop_sum += ps
        pop_sq += pq
        state_sum += ss

    m = cfg.ensemble
    mean_pop = pop_sum / m
    if m > 1:
        var = np.maximum(pop_sq - m * mean_pop**2, 0.0) / (m - 1)
        stderr = np.sqrt(var / m)
    else:
        stderr = np.zeros_like(mean_pop)
    if record_states:
        mean_state = state_sum / m
    else:
        mean_state = np.array(
            [np.full((cfg.dim, cfg.dim), np.nan, dtype=complex)] * n
        )
        # states were not recorded; recompute the mean from a deterministic
        # pass so the field is always usable
        mean_state = np.array(evolve_exact(protocol, cfg, noise, rho0))
    return EnsembleResult(mean_pop, mean_state, stderr, tuple(records))


def evolve_exact(
    protocol: Sequence[Step],
    cfg: TrajectoryConfig,
    noise: NoiseModel,
    rho0: np.ndarray | None = None,
) -> list[np.ndarray]:
    """Deterministic channel-composition oracle: the exact per-step density
    matrices that trajectory averaging converges to."""
    rho = _default_rho0(cfg.dim) if rho0 is None else np.asarray(rho0, complex)
    loss, compiled = _compile(protocol, cfg, noise)
    out = []
    for step in compiled:
        if loss is not None:
            rho = apply(loss, rho)
        if step.kind in ("channel", "tree"):
            rho = apply(step.exact, rho)
        elif step.kind == "displace":
            rho = step.unitary @ rho @ step.unitary.conj().T
        if step.depol is not None:
            rho = apply(step.depol, rho)
        out.append(rho.copy())
    return out


def displacement_truncated(alpha: complex, trunc: int) -> np.ndarray:
    """Displacement unitary e^{αa† − α*a} on the truncated Fock space."""
    if abs(alpha) ** 2 >= trunc / 4.0:
        raise TruncationTooSmall(
            f"|alpha|^2 = {abs(alpha) ** 2:.3f} too large for truncation {trunc}"
        )
    lower = np.diag(np.sqrt(np.arange(1, trunc, dtype=float)), 1).astype(complex)
    return expm(alpha * lower.conj().T - np.conj(alpha) * lower)


LindbladTerm = tuple[float, np.ndarray]


def lindblad_rk4(
    terms: Sequence[LindbladTerm], rho0: np.ndarray, t: float, dt: float
) -> np.ndarray:
    """Classic RK4 integration of dρ/dt = Σ κ(2oρo† − o†oρ − ρo†o); the
    ground-truth oracle for trajectory averages."""
    rho = check_density(rho0)
    if t == 0:
        return rho
    if t < 0 or dt <= 0:
        raise BadParameter(f"need t >= 0 and dt > 0, got t={t}, dt={dt}")
    scale = max(
        (kappa * spectral_norm(op.conj().T @ op) for kappa, op in terms if kappa > 0),
        default=0.0,
    )
    limit = t if scale == 0 else min(1e-3 / scale, t)
    if dt > limit * (1 + 1e-9):
        raise StepTooLarge(f"dt = {dt:g} exceeds stability limit {limit:g}")
    n = round(t / dt)
    if abs(n * dt - t) > 1e-9 * t:
        raise BadParameter(f"dt = {dt:g} does not divide t = {t:g}")

    pairs = [
        (2.0 * kappa, np.asarray(op, dtype=complex)) for kappa, op in terms if kappa > 0
    ]
    grams = [(w, op, op.conj().T @ op) for w, op in pairs]

    def deriv(r: np.ndarray) -> np.ndarray:
        out = np.zeros_like(r)
        for w, op, gram in grams:
            out += w * (op @ r @ op.conj().T) - 0.5 * w * (gram @ r + r @ gram)
        return out

    for _ in range(n):
        k1 = deriv(rho)
        k2 = deriv(rho + 0.5 * dt * k1)
        k3 = deriv(rho + 0.5 * dt * k2)
        k4 = deriv(rho + dt * k3)
        rho = hermitianize(rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
    return rho


def fit_exp_decay(
    times: np.ndarray, values: np.ndarray, floor: float
) -> tuple[float, float]:
    """Log-linear least-squares fit of A·e^{−t/T1} + floor; returns (A, T1)
    with T1 = inf for non-decaying data."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size < 4 or values.shape != times.shape:
        raise BadParameter("need at least 4 matching (time, value) points")
    if np.any(values < floor - 0.05 - 1e-12) or np.any(values > 1.05 + 1e-12):
        raise BadParameter("values outside the fittable range")
    residuals = values - floor
    if np.any(residuals <= 0):
        raise FitFailed("values touch the decay floor; no exponential to fit")
    slope, intercept = np.polyfit(times, np.log(residuals), 1)
    amplitude = float(np.exp(intercept))
    t1 = math.inf if slope >= 0 else -1.0 / float(slope)
    return amplitude, t1


@dataclass(frozen=True)
class DecayCurve:
    """Process-fidelity decay curve with its fitted amplitude and lifetime."""

    times: np.ndarray
    fidelities: np.ndarray
    amplitude: float
    t1: float


def _lookup_box(
    inputs: list[np.ndarray], outputs: list[np.ndarray]
) -> Callable[[np.ndarray], np.ndarray]:
    def box(rho: np.ndarray) -> np.ndarray:
        for r, out in zip(inputs, outputs):
            if np.allclose(r, rho, atol=1e-12):
                return out
        raise InvalidProtocol("probe state is not one of the fiducial inputs")

    return box


def stabilization_experiment(
    cfg: TrajectoryConfig, noise: NoiseModel, stabilize: bool = True
) -> DecayCurve:
    """Lifetime of quantum information in the span{|1⟩,|3⟩} subspace.

    Every t_int the odd-parity channel (when stabilizing) pumps even-state
    leakage back into the odd subspace, followed by its depolarizing error
    kick; idle evolution has cavity loss only.  The encoded process is read
    out by exact process tomography against the identity map and the
    fidelity curve is fitted to A·e^{−t/T1} + 1/4.
    """
    if cfg.dim < 4:
        raise BadParameter("stabilization needs at least 4 levels")
    basis2 = build_basis(2)
    inputs2 = default_process_inputs(2)
    lift = np.zeros((cfg.dim, 2), dtype=complex)
    lift[1, 0] = 1.0
    lift[3, 1] = 1.0

    protocol = [channel_step(odd_parity_stabilizer())] if stabilize else [idle_step()]
    loss, compiled = _compile(protocol, cfg, noise)
    step = compiled[0]

    evolved = [lift @ rho @ lift.conj().T for rho in inputs2]
    times = [0.0]
    fidelities = [_probe_fidelity(evolved, lift, basis2, inputs2)]
    for k in range(1, cfg.n_steps + 1):
        for i, rho in enumerate(evolved):
            if loss is not None:
                rho = apply(loss, rho)
            if step.exact is not None:
                rho = apply(step.exact, rho)
            if step.depol is not None:
                rho = apply(step.depol, rho)
            evolved[i] = rho
        times.append(k * cfg.t_int)
        fidelities.append(_probe_fidelity(evolved, lift, basis2, inputs2))
    amplitude, t1 = fit_exp_decay(np.array(times), np.array(fidelities), 0.25)
    return DecayCurve(np.array(times), np.array(fidelities), amplitude, t1)


def _probe_fidelity(evolved, lift, basis2, inputs2) -> float:
    blocks = [lift.conj().T @ rho @ lift for rho in evolved]
    chi = process_tomography(_lookup_box(inputs2, blocks), basis2, inputs2)
    return chi_identity_fidelity(chi)


def interval_sweep(
    intervals: Sequence[float],
    noise: NoiseModel,
    t_max: float = 150.0,
    dim: int = 4,
) -> list[tuple[float, float]]:
    """Stabilized lifetime per repetition interval (µs)."""
    out = []
    for t_int in intervals:
        if t_int <= 0:
            raise BadParameter(f"intervals must be positive, got {t_int}")
        n_steps = max(4, round(t_max / t_int))
        cfg = TrajectoryConfig(dim=dim, t_int=float(t_int), n_steps=n_steps)
        curve = stabilization_experiment(cfg, noise)
        out.append((float(t_int), curve.t1))
    return out


@dataclass(frozen=True)
class ZenoResult:
    """Per-step populations of |0⟩..|5⟩ and density-matrix snapshots."""

    times: np.ndarray
    populations: np.ndarray
    snapshots: dict[float, np.ndarray]


def zeno_experiment(
    kappa: float,
    cfg: TrajectoryConfig,
    noise: NoiseModel | None = None,
    snapshot_times: Sequence[float] = (16.0, 44.0, 100.0),
) -> ZenoResult:
    """Quantum Zeno blockade of a weak displacement drive.

    Each t_int cycle applies cavity loss (when a noise model is given), the
    displacement D(α), then one integrated window of two-photon dissipation
    at strength κ·t_int acting on the lowest four levels.  Strong κ pins the
    state to span{|0⟩,|1⟩}.
    """
    if cfg.dim < 10:
        raise BadParameter("Zeno runs need a truncation of at least 10 levels")
    if kappa < 0:
        raise BadParameter(f"kappa must be nonnegative, got {kappa}")
    alpha = -0.1j if cfg.drive_alpha is None else cfg.drive_alpha
    drive = displacement_truncated(alpha, cfg.dim)
    tpd = None
    if kappa > 0:
        tpd = _embed(two_photon_dissipation(kappa * cfg.t_int), cfg.dim)
    loss = None
    if noise is not None and noise.apply_loss_during_interval and noise.kappa_s > 0:
        loss = loss_channel(cfg.dim, noise.kappa_s * cfg.t_int)

    rho = _default_rho0(cfg.dim)
    times = [0.0]
    populations = [np.diag(rho).real[:6].copy()]
    snapshots: dict[float, np.ndarray] = {}
    wanted = {
        round(ts / cfg.t_int): float(ts)
        for ts in snapshot_times
        if 0 <= round(ts / cfg.t_int) <= cfg.n_steps
    }
    if 0 in wanted:
        snapshots[wanted[0]] = rho.copy()
    for k in range(1, cfg.n_steps + 1):
        if loss is not None:
            rho = apply(loss, rho)
        rho = drive @ rho @ drive.conj().T
        if tpd is not None:
            rho = apply(tpd, rho)
        times.append(k * cfg.t_int)
        populations.append(np.diag(rho).real[:6].copy())
        if k in wanted:
            snapshots[wanted[k]] = rho.copy()
    return ZenoResult(np.array(times), np.array(populations), snapshots)
