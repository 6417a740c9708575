""" Reference deciders used to check the evaluation harness itself. """

import hashlib

from typing import Optional, Sequence

import numpy as np

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.models.base import BaseDecoder, Decision
from aadbench.utils.signals.base import Trial


class OracleDecoder(BaseDecoder):
    """ Always returns the attended speaker. """

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'OracleDecoder':
        return self

    def decide(self, window: Trial) -> Decision:
        return Decision(speaker=window.attended)

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'OracleDecoder':
        return cls()


class AntiOracleDecoder(BaseDecoder):
    """ Always returns a speaker that is not attended. """

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'AntiOracleDecoder':
        return self

    def decide(self, window: Trial) -> Decision:
        return Decision(speaker=(window.attended + 1) % window.n_speakers)

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'AntiOracleDecoder':
        return cls()


def window_seed(seed: int, key: tuple) -> np.random.SeedSequence:
    """ Seed sequence derived from a run seed and a window identity, independent of evaluation order. """
    digest = hashlib.sha256(repr(key).encode()).digest()
    return np.random.SeedSequence([seed] + [int.from_bytes(digest[i:i + 4], 'little') for i in range(0, 16, 4)])


class CoinFlipDecoder(BaseDecoder):
    """ Picks a speaker uniformly at random, seeded per window. """

    def __init__(self, seed: int = 1337):
        self.seed = seed

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'CoinFlipDecoder':
        return self

    def decide(self, window: Trial) -> Decision:
        rng = np.random.default_rng(window_seed(self.seed, window.key))
        return Decision(speaker=int(rng.integers(window.n_speakers)))

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'CoinFlipDecoder':
        return cls(seed=config.seed)
