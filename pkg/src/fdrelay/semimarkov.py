"""Three-state semi-Markov model of relayed delivery and its renewal-reward throughput.

States are indexed 0, 1, 2 for transmit (s1), relay (s2) and retransmit (s3).
A message counts as delivered on every transition back into s1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fdrelay.contention import TruncatedPgf, sample_pgf

TRANSMIT, RELAY, RETRANSMIT = 0, 1, 2
STRATEGIES = ("fixed", "reactive")
DUPLEX_MODES = ("HD", "FD")

# transitions whose holding time includes the relay-selection interval
SELECTION_MASK = np.array(
    [[False, True, True], [False, False, False], [False, True, True]]
)


@dataclass(frozen=True, eq=False)
class SemiMarkovModel:
    P: np.ndarray
    H: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        P, H, R = (np.array(a, dtype=float) for a in (self.P, self.H, self.R))
        for name, a in (("P", P), ("H", H), ("R", R)):
            if a.shape != (3, 3):
                raise ValueError(f"{name} must be 3x3, got shape {a.shape}")
        if np.any(P < 0) or np.any(P > 1) or not np.allclose(P.sum(axis=1), 1.0, atol=1e-12, rtol=0):
            raise ValueError("P must be row-stochastic")
        if np.any(H < 1):
            raise ValueError("holding times must be >= 1 slot")
        if np.any(R < 0):
            raise ValueError("rewards must be >= 0")
        for a in (P, H, R):
            a.flags.writeable = False
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "R", R)

    @property
    def mean_reward(self) -> np.ndarray:
        return (self.P * self.R).sum(axis=1)

    @property
    def mean_holding(self) -> np.ndarray:
        return (self.P * self.H).sum(axis=1)


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    pi: np.ndarray

    def __post_init__(self):
        pi = np.array(self.pi, dtype=float)
        if np.any(pi < 0) or abs(pi.sum() - 1.0) > 1e-12:
            raise ValueError(f"not a probability vector: {pi}")
        pi.flags.writeable = False
        object.__setattr__(self, "pi", pi)


def _check_prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


def build_transition(p_sd: float, p_sr: float) -> np.ndarray:
    _check_prob("p_sd", p_sd)
    _check_prob("p_sr", p_sr)
    attempt = [p_sd, (1 - p_sd) * p_sr, (1 - p_sd) * (1 - p_sr)]
    return np.array([attempt, [1.0, 0.0, 0.0], attempt])


def build_holding(
    mean_selection: float, strategy: str = "reactive", fixed_overhead: float = 0.0
) -> np.ndarray:
    """Mean holding times in slots.

    A reactive relay pays ``mean_selection`` extra slots on every attempt
    that goes beyond the direct link; a fixed relay pays ``fixed_overhead``
    (0 by default: the relay is preassigned).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if mean_selection < 0 or fixed_overhead < 0:
        raise ValueError("selection costs must be >= 0")
    sel = mean_selection if strategy == "reactive" else fixed_overhead
    H = np.ones((3, 3))
    H[SELECTION_MASK] += sel
    return H


def build_reward(duplex: str) -> np.ndarray:
    """Direct deliveries earn 1; a relayed delivery earns 2 in full duplex."""
    if duplex not in DUPLEX_MODES:
        raise ValueError(f"duplex must be one of {DUPLEX_MODES}, got {duplex!r}")
    R = np.zeros((3, 3))
    R[TRANSMIT, TRANSMIT] = R[RETRANSMIT, TRANSMIT] = 1.0
    R[RELAY, TRANSMIT] = 2.0 if duplex == "FD" else 1.0
    return R


def stationary_distribution(P) -> StationaryDistribution:
    """Solve ``pi = pi P`` with ``sum(pi) = 1`` by least squares on the stacked system."""
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return StationaryDistribution(pi / pi.sum())


def throughput(model: SemiMarkovModel, pi: StationaryDistribution | None = None) -> float:
    """Long-run reward per slot, ``sum pi_i Rbar_i / sum pi_i Hbar_i``."""
    if pi is None:
        pi = stationary_distribution(model.P)
    return float(pi.pi @ model.mean_reward / (pi.pi @ model.mean_holding))


# -- simulation ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SamplePath:
    """One simulated trajectory: ``states[k] -> states[k+1]`` earned
    ``rewards[k]`` and took ``times[k]`` slots."""

    states: np.ndarray
    rewards: np.ndarray
    times: np.ndarray

    @property
    def eta(self) -> float:
        return float(self.rewards.sum() / self.times.sum())

    def cycle_eta(self, reference: int) -> float:
        """Throughput over complete cycles between visits to ``reference``.

        Returns nan when fewer than two visits occur.
        """
        visits = np.flatnonzero(self.states[:-1] == reference)
        if visits.size < 2:
            return float("nan")
        a, b = visits[0], visits[-1]
        return float(self.rewards[a:b].sum() / self.times[a:b].sum())


def sample_path(
    model: SemiMarkovModel,
    selection_pgf: TruncatedPgf | None,
    steps: int,
    rng: np.random.Generator,
    start: int = TRANSMIT,
) -> SamplePath:
    """Walk the embedded chain for ``steps`` transitions.

    With ``selection_pgf`` the selection transitions hold for ``1 + L``
    slots with ``L`` drawn from the PGF; otherwise the mean holding time in
    ``H`` is used as is.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    cdf = np.cumsum(model.P, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random(steps)
    states = np.empty(steps + 1, dtype=np.int64)
    states[0] = s = start
    rows = cdf.tolist()
    for k in range(steps):
        row = rows[s]
        x = u[k]
        s = 0 if x < row[0] else (1 if x < row[1] else 2)
        states[k + 1] = s
    i, j = states[:-1], states[1:]
    rewards = model.R[i, j]
    times = model.H[i, j].copy()
    if selection_pgf is not None:
        sel = SELECTION_MASK[i, j]
        times[sel] = 1 + sample_pgf(selection_pgf, int(sel.sum()), rng)
    return SamplePath(states, rewards, times)


def simulate_chain(
    model: SemiMarkovModel,
    selection_pgf: TruncatedPgf | None,
    steps: int,
    rng: np.random.Generator,
) -> float:
    """Empirical reward per slot over ``steps`` transitions."""
    return sample_path(model, selection_pgf, steps, rng).eta
