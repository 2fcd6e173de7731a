"""Reproducible, independently seeded random streams.

An :class:`RngStream` is a value: (seed, stream path, counter).  The stream
path is a tuple of nonnegative integers used as a ``SeedSequence`` spawn key,
so distinct paths give statistically independent PCG64 generators and the
same triple always replays the same draws.  Work units in the harness derive
their own path from their identity, never from the worker that runs them.
"""

from __future__ import annotations

import os
import zlib
from dataclasses import dataclass

import numpy as np

ENV_SEED = "HEAVYTAIL_SEED"


def default_seed() -> int:
    """Seed from ``HEAVYTAIL_SEED`` or 0."""
    raw = os.environ.get(ENV_SEED)
    if raw is None or raw.strip() == "":
        return 0
    return int(raw)


def name_key(name: str) -> int:
    """Stable 32-bit integer for a string label."""
    return zlib.crc32(name.encode("utf-8"))


@dataclass(frozen=True)
class RngStream:
    """Seed, stream path and draw counter.

    Parameters
    ----------
    seed : int
        64-bit global seed.
    stream : int or tuple of int
        Stream index (or path of indices).
    counter : int
        Number of 64-bit outputs already consumed.
    """

    seed: int = 0
    stream: tuple = (0,)
    counter: int = 0

    def __post_init__(self):
        s = self.stream
        if isinstance(s, (int, np.integer)):
            s = (int(s),)
        s = tuple(int(v) for v in s)
        if any(v < 0 for v in s):
            raise ValueError("stream indices must be nonnegative")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.counter < 0:
            raise ValueError("counter must be nonnegative")
        object.__setattr__(self, "stream", s)
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self) -> np.random.Generator:
        bitgen = np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.stream))
        if self.counter:
            bitgen.advance(self.counter)
        return np.random.Generator(bitgen)

    def child(self, *keys) -> "RngStream":
        """Sub-stream with the given keys appended to the path."""
        ks = tuple(name_key(k) if isinstance(k, str) else int(k) for k in keys)
        return RngStream(self.seed, self.stream + ks, 0)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "stream": list(self.stream), "counter": self.counter}


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot make a generator from {type(rng).__name__}")
