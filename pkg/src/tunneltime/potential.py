"""Piecewise-constant unit cells and their builders.

Energies and lengths follow 2m = hbar = 1, so a free wave at energy E has
wavevector k = sqrt(E).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidArgumentError

Segment = tuple[float, float]  # (width, height)


@dataclass(frozen=True)
class PiecewiseConstantPotential:
    """Ordered (width, height) segments covering [0, b]."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        if len(self.segments) == 0:
            raise InvalidArgumentError("segments: empty potential")
        for i, (w, h) in enumerate(self.segments):
            if not (math.isfinite(w) and w > 0):
                raise InvalidArgumentError(f"segments[{i}]: width must be positive and finite, got {w!r}")
            if not math.isfinite(h):
                raise InvalidArgumentError(f"segments[{i}]: height must be finite, got {h!r}")

    @property
    def b(self) -> float:
        return math.fsum(w for w, _ in self.segments)

    @property
    def widths(self) -> list[float]:
        return [w for w, _ in self.segments]

    @property
    def heights(self) -> list[float]:
        return [h for _, h in self.segments]

    def barrier_width(self) -> float:
        """Total width of the segments with nonzero height."""
        return math.fsum(w for w, h in self.segments if h != 0.0)

    def scaled(self, factor: float) -> "PiecewiseConstantPotential":
        """Same shape stretched by `factor` in x (heights unchanged)."""
        if not factor > 0:
            raise InvalidArgumentError(f"factor must be positive, got {factor!r}")
        return PiecewiseConstantPotential(tuple((w * factor, h) for w, h in self.segments))

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)


def make_rectangular(V: float, b: float) -> PiecewiseConstantPotential:
    if not (math.isfinite(b) and b > 0):
        raise InvalidArgumentError(f"b: must be positive, got {b!r}")
    if not math.isfinite(V):
        raise InvalidArgumentError(f"V: must be finite, got {V!r}")
    return PiecewiseConstantPotential(((float(b), float(V)),))


def make_segments(segments: Iterable[Sequence[float]]) -> PiecewiseConstantPotential:
    segs = []
    for item in segments:
        if len(item) != 2:
            raise InvalidArgumentError(f"segments: expected (width, height) pairs, got {item!r}")
        segs.append((float(item[0]), float(item[1])))
    return PiecewiseConstantPotential(tuple(segs))


def _split_middle(width: float, removed: float) -> tuple[float, float, float]:
    side = (width - removed) / 2.0
    # the right side absorbs rounding so the three pieces sum back to `width`
    return side, removed, width - side - removed


def make_cantor(variant: str, level: int, V: float, total_width: float,
                ratio: float = 1.0 / 3.0) -> PiecewiseConstantPotential:
    """Cantor-type barrier arrangement on [0, total_width].

    ``variant="standard"`` removes the middle ``ratio`` of every barrier
    segment at each step. ``variant="svc"`` (Smith-Volterra-Cantor) removes
    the middle ``1/4**j`` of every barrier segment at step j = 1, 2, ...
    Removed pieces become zero-height segments. Level 0 is a plain barrier.
    """
    if variant not in ("standard", "svc"):
        raise InvalidArgumentError(f"variant: expected 'standard' or 'svc', got {variant!r}")
    if isinstance(level, bool) or int(level) != level or level < 0:
        raise InvalidArgumentError(f"level: must be a non-negative integer, got {level!r}")
    if variant == "standard" and not (0.0 < ratio < 1.0):
        raise InvalidArgumentError(f"ratio: must lie in (0, 1), got {ratio!r}")
    if not (math.isfinite(total_width) and total_width > 0):
        raise InvalidArgumentError(f"width: must be positive, got {total_width!r}")
    if not math.isfinite(V):
        raise InvalidArgumentError(f"V: must be finite, got {V!r}")

    V = float(V)
    # (width, is_barrier)
    pieces: list[tuple[float, bool]] = [(float(total_width), True)]
    for step in range(1, int(level) + 1):
        frac = ratio if variant == "standard" else 0.25 ** step
        nxt = []
        for w, barrier in pieces:
            if not barrier:
                nxt.append((w, False))
                continue
            left, mid, right = _split_middle(w, w * frac)
            nxt.extend([(left, True), (mid, False), (right, True)])
        pieces = nxt
    return PiecewiseConstantPotential(tuple((w, V if barrier else 0.0) for w, barrier in pieces))


def from_config(spec: dict) -> PiecewiseConstantPotential:
    """Build a potential from its JSON-shaped description.

    Accepted shapes::

        {"type": "rectangular", "V": 2, "b": 5}
        {"type": "segments", "segments": [[w, V], ...]}
        {"type": "cantor", "variant": "standard"|"svc", "ratio": r, "level": g, "V": 2, "width": 9}
    """
    if not isinstance(spec, dict):
        raise InvalidArgumentError("potential: expected an object")
    kind = spec.get("type")
    try:
        if kind == "rectangular":
            return make_rectangular(float(spec["V"]), float(spec["b"]))
        if kind == "segments":
            return make_segments(spec["segments"])
        if kind == "cantor":
            return make_cantor(spec.get("variant", "standard"), spec["level"], float(spec["V"]),
                               float(spec["width"]), float(spec.get("ratio", 1.0 / 3.0)))
    except KeyError as exc:
        raise InvalidArgumentError(f"potential.{exc.args[0]}: missing field") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise InvalidArgumentError(f"potential.{exc}") from None
        raise InvalidArgumentError(f"potential: {exc}") from None
    raise InvalidArgumentError(f"potential.type: unknown type {kind!r}")
