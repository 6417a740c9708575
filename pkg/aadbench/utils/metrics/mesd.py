""" Minimal expected switch duration of an accuracy curve.

A gain-control system is modelled as a walk on K gain states 0 .. K-1, state K-1 giving
full gain to the newly attended speaker. After every decision window of tau seconds the
walk steps up with probability p (the decoder accuracy) and down with 1 - p, holding at
both ends. A target state c defines the comfort region {c, .., K-1}; the design is robust
when the stationary mass of that region is at least the comfort threshold and c lies in
the upper half. After a switch of attention the walk starts at K-1-c, the mirror of the
comfort boundary of the previous speaker, and the switch duration is tau times the
expected number of steps to reach c. The metric is the smallest such duration over the
curve points and the admissible designs.

Sources:
    [1] https://github.com/markovmodel/PyEMMA (mean_first_passage_time.py), absorbing-set linear system
"""

import logging

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from scipy import linalg

from aadbench.configs.base import Config
from aadbench.utils.exceptions import ParameterError
from aadbench.utils.metrics.curve import PerformanceCurve

console = logging.getLogger(__name__)

FINITE = 'finite'
UNBOUNDED = 'unbounded'


class MesdOptions(Config):

    def __init__(
        self,
        min_states: int = 2,
        max_states: int = 10,
        comfort: float = 0.9,
        bound: float = 50.0,
        num_states: Optional[int] = None,
        target_state: Optional[int] = None,
    ):
        super().__init__()
        self.min_states = min_states
        self.max_states = max_states
        self.comfort = comfort
        self.bound = bound
        self.num_states = num_states
        self.target_state = target_state
        self._post_init()

    def _post_init(self):
        self._require(2 <= self.min_states <= self.max_states, 'min_states',
                      f"need 2 <= min_states <= max_states, got {self.min_states} and {self.max_states}")
        self._require(0 < self.comfort < 1, 'comfort', f"must lie in (0, 1), got {self.comfort}")
        self._require(self.bound > 0, 'bound', f"must be positive, got {self.bound}")
        if self.num_states is not None:
            self._require(self.num_states >= 2, 'num_states', f"must be at least 2, got {self.num_states}")
        if self.target_state is not None:
            self._require(self.num_states is not None, 'target_state', "requires num_states")
            self._require(0 < self.target_state < self.num_states, 'target_state',
                          f"must lie in [1, {self.num_states - 1}], got {self.target_state}")


@dataclass(frozen=True)
class MesdResult:
    mesd_seconds: float
    tau: Optional[float]
    accuracy: Optional[float]
    num_states: Optional[int]
    target_state: Optional[int]
    status: str
    bound: float = 50.0

    @property
    def is_finite(self) -> bool:
        return self.status == FINITE

    def display(self) -> str:
        """ The value with ten significant digits, or '>bound' when unbounded. """
        if self.status == UNBOUNDED:
            return f">{self.bound:.1f}"
        return f"{self.mesd_seconds:.10g}"


def stationary(p: float, K: int) -> np.ndarray:
    """ Stationary distribution pi_i proportional to (p / (1 - p))^i of the holding walk. """
    if not 0 <= p <= 1:
        raise ParameterError(f"Step probability must lie in [0, 1], got {p}")
    if p == 1:
        return np.eye(K)[K - 1]
    if p == 0:
        return np.eye(K)[0]
    log_weights = np.arange(K) * (np.log(p) - np.log1p(-p))
    weights = np.exp(log_weights - log_weights.max())
    return weights / weights.sum()


def transition_matrix(p: float, K: int) -> np.ndarray:
    P = np.zeros((K, K))
    for i in range(K):
        P[i, min(i + 1, K - 1)] += p
        P[i, max(i - 1, 0)] += 1 - p
    return P


def expected_hitting_time(p: float, K: int, start: int, target: int) -> float:
    """ Expected number of steps from `start` until the walk first reaches `target` or above.

    Solves (I - Q) t = 1 on the transient states 0 .. target-1.
    """
    if not 0 < target <= K - 1:
        raise ParameterError(f"Target state must lie in [1, {K - 1}], got {target}")
    if not 0 <= start <= K - 1:
        raise ParameterError(f"Start state must lie in [0, {K - 1}], got {start}")
    if start >= target:
        return 0.0
    if p == 1:
        return float(target - start)
    if p == 0:
        return float('inf')
    Q = transition_matrix(p, K)[:target, :target]
    t = linalg.solve(np.eye(target) - Q, np.ones(target))
    return float(t[start])


def feasible_target(p: float, K: int, comfort: float) -> Optional[int]:
    """ Lowest target state whose comfort region is in the upper half and holds `comfort` stationary mass. """
    tail = np.cumsum(stationary(p, K)[::-1])[::-1]
    for c in range(1, K):
        if c > K - 1 - c and tail[c] >= comfort:
            return c
    return None


def _designs(options: MesdOptions, p: float) -> Iterable[Tuple[int, int]]:
    if options.num_states is not None:
        K = options.num_states
        if options.target_state is not None:
            c = options.target_state
            tail = float(np.sum(stationary(p, K)[c:]))
            if c > K - 1 - c and tail >= options.comfort:
                yield K, c
            return
        c = feasible_target(p, K, options.comfort)
        if c is not None:
            yield K, c
        return
    for K in range(options.min_states, options.max_states + 1):
        c = feasible_target(p, K, options.comfort)
        if c is not None:
            yield K, c


def mesd(curve, options: Optional[MesdOptions] = None) -> MesdResult:
    """ Minimal expected switch duration of a curve (a PerformanceCurve or (tau, accuracy %) pairs). """
    options = options if options is not None else MesdOptions()
    points: List[Tuple[float, float]]
    if isinstance(curve, PerformanceCurve):
        points = [(point.tau, point.accuracy) for point in curve.points]
    else:
        points = [(float(tau), float(acc)) for tau, acc in curve]

    best = None
    for tau, acc in points:
        if acc <= 50.0:
            continue
        p = acc / 100.0
        for K, c in _designs(options, p):
            seconds = tau * expected_hitting_time(p, K, K - 1 - c, c)
            if best is None or seconds < best[0]:
                best = (seconds, tau, acc, K, c)

    if best is None:
        return MesdResult(float('inf'), None, None, None, None, UNBOUNDED, options.bound)
    seconds, tau, acc, K, c = best
    status = FINITE if seconds <= options.bound else UNBOUNDED
    console.debug(f"Best design K={K}, c={c} at tau={tau:g} s ({acc:.1f}%): {seconds:.3f} s")
    return MesdResult(seconds if status == FINITE else float('inf'), tau, acc, K, c, status, options.bound)
