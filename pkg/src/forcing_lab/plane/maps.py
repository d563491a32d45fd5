"""Orientation-preserving plane homeomorphisms built from closed-form pieces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError


def _bump(t):
    # C^1 bump supported on [-1, 1] with peak 1 at 0
    t = np.asarray(t, dtype=float)
    return np.where(np.abs(t) < 1, np.cos(0.5 * np.pi * t) ** 2, 0.0)


PROFILES = {
    "sine": lambda t: np.sin(2 * np.pi * t),
    "raised-cosine": lambda t: 0.5 * (1 - np.cos(2 * np.pi * t)),
    "bump": _bump,
    "tanh": np.tanh,
}


@dataclass(frozen=True)
class Translation:
    vector: tuple[float, float]

    def apply(self, Z, inverse=False):
        v = np.asarray(self.vector, dtype=float)
        return Z - v if inverse else Z + v

    def to_dict(self):
        return {"type": "translation", "vector": list(self.vector)}


@dataclass(frozen=True)
class Linear:
    matrix: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.shape != (2, 2) or np.linalg.det(M) <= 0:
            raise InputError("linear primitives need a 2x2 matrix with positive determinant")

    def apply(self, Z, inverse=False):
        M = np.asarray(self.matrix, dtype=float)
        if inverse:
            M = np.linalg.inv(M)
        return Z @ M.T

    def to_dict(self):
        return {"type": "linear", "matrix": [list(r) for r in self.matrix]}


@dataclass(frozen=True)
class Shear:
    """Horizontal (x += s sigma((y - c)/w)) or vertical (y += s sigma((x - c)/w)) shear."""

    axis: str
    profile: str
    amplitude: float
    scale: float = 1.0
    center: float = 0.0

    def __post_init__(self):
        if self.axis not in ("h", "v"):
            raise InputError("shear axis must be 'h' or 'v'")
        if self.profile not in PROFILES:
            raise InputError(f"unknown profile {self.profile!r}; have {sorted(PROFILES)}")
        if not self.scale > 0:
            raise InputError("shear scale must be positive")

    def apply(self, Z, inverse=False):
        Z = np.array(Z, dtype=float)
        src, dst = (1, 0) if self.axis == "h" else (0, 1)
        push = self.amplitude * PROFILES[self.profile]((Z[:, src] - self.center) / self.scale)
        Z[:, dst] += -push if inverse else push
        return Z

    def to_dict(self):
        d = {"type": "hshear" if self.axis == "h" else "vshear", "profile": self.profile, "amplitude": self.amplitude}
        if self.scale != 1.0:
            d["scale"] = self.scale
        if self.center != 0.0:
            d["center"] = self.center
        return d


def primitive_from_dict(d: dict):
    kind = d.get("type")
    if kind == "translation":
        v = d["vector"]
        return Translation((float(v[0]), float(v[1])))
    if kind == "linear":
        return Linear(tuple(tuple(float(x) for x in r) for r in d["matrix"]))
    if kind in ("hshear", "vshear"):
        return Shear("h" if kind == "hshear" else "v", d.get("profile", "sine"), float(d["amplitude"]),
                     float(d.get("scale", 1.0)), float(d.get("center", 0.0)))
    raise InputError(f"unknown planar primitive {kind!r}")


class PlanarMap:
    """Composition of primitives, applied first to last."""

    def __init__(self, composition=()):
        self.composition = tuple(composition)

    @classmethod
    def from_dict(cls, d) -> "PlanarMap":
        items = d.get("composition", []) if isinstance(d, dict) else d
        return cls(primitive_from_dict(p) for p in items)

    def to_dict(self) -> dict:
        return {"composition": [p.to_dict() for p in self.composition]}

    @classmethod
    def translation(cls, v) -> "PlanarMap":
        return cls([Translation((float(v[0]), float(v[1])))])

    @classmethod
    def identity(cls) -> "PlanarMap":
        return cls([])

    def then(self, other: "PlanarMap") -> "PlanarMap":
        return PlanarMap(self.composition + other.composition)

    def __call__(self, Z, n: int = 1) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        W = np.atleast_2d(Z).copy()
        for _ in range(n):
            for p in self.composition:
                W = p.apply(W)
        return W.reshape(Z.shape)

    def inverse(self, Z, n: int = 1) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        W = np.atleast_2d(Z).copy()
        for _ in range(n):
            for p in reversed(self.composition):
                W = p.apply(W, inverse=True)
        return W.reshape(Z.shape)

    def __repr__(self):
        return f"PlanarMap({[p.to_dict() for p in self.composition]})"
