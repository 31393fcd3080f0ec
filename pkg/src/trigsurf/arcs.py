"""Parametrized paths in the z-plane."""

from dataclasses import dataclass
import cmath
import math

from .kernels import CIRCLE, LINE

_OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class CircleArc:
    """``z(t) = center + radius * exp(i * direction * t)`` for ``t`` in ``[t0, t1]``."""

    direction: int
    t0: float
    t1: float
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        if not self.t1 > self.t0:
            raise ValueError("t_range must be increasing")

    @property
    def packed(self):
        return CIRCLE, complex(self.center), complex(self.radius), float(self.direction)

    @property
    def t_range(self):
        return self.t0, self.t1

    def z(self, t):
        return self.center + self.radius * cmath.exp(1j * self.direction * t)

    def dz(self, t):
        return 1j * self.direction * self.radius * cmath.exp(1j * self.direction * t)

    def rotated(self, k=1):
        """Image under ``z -> omega**k z``; only arcs centred at 0 are supported."""
        if self.center != 0:
            raise ValueError("rotation of off-centre arcs is not supported")
        shift = self.direction * 2.0 * math.pi * k / 3.0
        return CircleArc(self.direction, self.t0 + shift, self.t1 + shift)

    def rotate_parameter(self, t, k=1):
        return t + self.direction * 2.0 * math.pi * k / 3.0

    def to_json(self):
        out = {"kind": "circle_arc", "direction": self.direction,
               "t_range": [self.t0, self.t1]}
        if self.center != 0 or self.radius != 1.0:
            out["center"] = [self.center.real, self.center.imag]
            out["radius"] = self.radius
        return out


@dataclass(frozen=True)
class LineArc:
    """Straight segment ``z(t) = start + (end - start) * t`` for ``t`` in ``[0, 1]``."""

    start: complex
    end: complex

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("degenerate line segment")

    @property
    def packed(self):
        return LINE, complex(self.start), complex(self.end - self.start), 0.0

    @property
    def t0(self):
        return 0.0

    @property
    def t1(self):
        return 1.0

    @property
    def t_range(self):
        return 0.0, 1.0

    def z(self, t):
        return self.start + (self.end - self.start) * t

    def dz(self, t):
        return self.end - self.start

    def rotated(self, k=1):
        f = _OMEGA ** k
        return LineArc(self.start * f, self.end * f)

    def rotate_parameter(self, t, k=1):
        return t

    def to_json(self):
        return {"kind": "line", "start": [self.start.real, self.start.imag],
                "end": [self.end.real, self.end.imag]}


def arc_from_json(obj):
    kind = obj.get("kind", "circle_arc")
    if kind == "circle_arc":
        t0, t1 = obj["t_range"]
        center = complex(*obj.get("center", (0.0, 0.0)))
        return CircleArc(int(obj["direction"]), float(t0), float(t1),
                         center, float(obj.get("radius", 1.0)))
    if kind == "line":
        return LineArc(complex(*obj["start"]), complex(*obj["end"]))
    raise ValueError(f"unknown arc kind {kind!r}")
