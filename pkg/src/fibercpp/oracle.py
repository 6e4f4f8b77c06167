"""Ground truth by exhaustion: is a map on F_q a bijection?

Images are recorded in an occupancy bitset indexed by element rank. The
first collision is reported in increasing rank order, paired with the
smallest earlier preimage, so diagnostics are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ff_core import FieldSpec
from .polyshape import CycloTrinomial


class Bitset:
    """Fixed-size bit array over a bytearray."""

    __slots__ = ("size", "_bits")

    def __init__(self, size: int):
        self.size = size
        self._bits = bytearray((size + 7) // 8)

    def __contains__(self, i: int) -> bool:
        return bool(self._bits[i >> 3] & (1 << (i & 7)))

    def add(self, i: int) -> None:
        self._bits[i >> 3] |= 1 << (i & 7)


@dataclass(frozen=True)
class BijectionVerdict:
    is_bijection: bool
    collision: tuple[int, int] | None = None
    image: int | None = None
    preimages: tuple[int, ...] = ()
    missed: int | None = None

    def to_json(self, spec: FieldSpec | None = None) -> dict:
        fmt = spec.format if spec is not None else (lambda v: v)
        out = {"is_bijection": self.is_bijection}
        if self.collision is not None:
            out["collision"] = [fmt(x) for x in self.collision]
            out["image"] = fmt(self.image)
            out["preimages"] = [fmt(x) for x in self.preimages]
        if self.missed is not None:
            out["missed"] = fmt(self.missed)
        return out


def check_permutation(spec: FieldSpec, evaluate: Callable[[int], int]) -> BijectionVerdict:
    """Evaluate ``evaluate`` on every rank and decide bijectivity.

    The scan stops at the first repeated image; a second pass then finds the
    smallest earlier preimage and every preimage of the repeated value.
    """
    q = spec.q
    seen = Bitset(q)
    for x in range(q):
        y = evaluate(x)
        if not 0 <= y < q:
            raise ValueError(f"image {y} of {x} is not a rank in [0, {q})")
        if y in seen:
            return _collision_verdict(q, [evaluate(z) for z in range(q)], x, y)
        seen.add(y)
    return BijectionVerdict(True)


def check_image_table(spec: FieldSpec, images) -> BijectionVerdict:
    """Same decision as :func:`check_permutation` on a precomputed image array."""
    images = np.asarray(images, dtype=np.int64)
    q = spec.q
    if images.shape != (q,):
        raise ValueError(f"expected {q} images, got shape {images.shape}")
    counts = np.bincount(images, minlength=q)
    if counts.max(initial=0) <= 1:
        return BijectionVerdict(True)
    first_seen = np.full(q, q, dtype=np.int64)
    np.minimum.at(first_seen, images, np.arange(q, dtype=np.int64))
    repeated = first_seen[images] < np.arange(q)
    x2 = int(np.argmax(repeated))
    return _collision_verdict(q, images, x2, int(images[x2]))


def _collision_verdict(q, images, x2, y) -> BijectionVerdict:
    images = np.asarray(images, dtype=np.int64)
    pre = np.flatnonzero(images == y)
    attained = np.zeros(q, dtype=bool)
    attained[images] = True
    missed = int(np.argmin(attained))
    return BijectionVerdict(
        False,
        collision=(int(pre[0]), x2),
        image=y,
        preimages=tuple(int(v) for v in pre),
        missed=missed,
    )


@dataclass(frozen=True)
class PPVerdict:
    f: BijectionVerdict
    F: BijectionVerdict

    @property
    def f_is_pp(self) -> bool:
        return self.f.is_bijection

    @property
    def F_is_pp(self) -> bool:
        return self.F.is_bijection

    @property
    def is_cpp(self) -> bool:
        return self.f_is_pp and self.F_is_pp

    def to_json(self, spec: FieldSpec | None = None) -> dict:
        return {
            "f_is_pp": self.f_is_pp,
            "F_is_pp": self.F_is_pp,
            "is_cpp": self.is_cpp,
            "f": self.f.to_json(spec),
            "F": self.F.to_json(spec),
        }


def check_pp(t: CycloTrinomial) -> BijectionVerdict:
    return check_image_table(t.field, t.f_table())


def check_pp_cpp(t: CycloTrinomial) -> PPVerdict:
    """Oracle verdicts for f and for F = f + X; each carries its own witnesses."""
    return PPVerdict(check_pp(t), check_image_table(t.field, t.F_table()))


def is_permutation_reference(images) -> bool:
    """Sort-and-compare reference used to cross-check the bitset path."""
    images = sorted(int(v) for v in images)
    return images == list(range(len(images)))
