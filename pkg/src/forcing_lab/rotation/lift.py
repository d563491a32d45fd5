"""Z^2-equivariant lifts of torus homeomorphisms built from shears and translations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from . import backend
from ._kernel_py import P_RAISED_COSINE, P_SINE, T_HSHEAR, T_TRANSLATE, T_VSHEAR

PROFILES = {"sine": P_SINE, "raised-cosine": P_RAISED_COSINE}


def profile_value(name: str, t):
    """sigma(t): "sine" is sin(2 pi t), "raised-cosine" is (1 - cos 2 pi t)/2."""
    t = np.asarray(t, dtype=float)
    if name == "sine":
        return np.sin(2 * np.pi * t)
    if name == "raised-cosine":
        return 0.5 * (1 - np.cos(2 * np.pi * t))
    raise InputError(f"unknown profile {name!r}")


@dataclass(frozen=True)
class Translation:
    vector: tuple[float, float]

    def to_dict(self):
        return {"type": "translation", "vector": list(self.vector)}


@dataclass(frozen=True)
class HShear:
    """x <- x + amplitude * sigma(y)."""

    profile: str
    amplitude: float

    def to_dict(self):
        return {"type": "hshear", "profile": self.profile, "amplitude": self.amplitude}


@dataclass(frozen=True)
class VShear:
    """y <- y + amplitude * sigma(x)."""

    profile: str
    amplitude: float

    def to_dict(self):
        return {"type": "vshear", "profile": self.profile, "amplitude": self.amplitude}


def primitive_from_dict(d: dict):
    kind = d.get("type")
    if kind == "translation":
        v = d.get("vector")
        if not isinstance(v, (list, tuple)) or len(v) != 2:
            raise InputError("translation needs a 2-vector")
        return Translation((float(v[0]), float(v[1])))
    if kind in ("hshear", "vshear"):
        prof = d.get("profile", "sine")
        if prof not in PROFILES:
            raise InputError(f"unknown profile {prof!r}")
        cls = HShear if kind == "hshear" else VShear
        return cls(prof, float(d["amplitude"]))
    raise InputError(f"unknown primitive type {kind!r}")


def _split(v: float) -> tuple[float, float]:
    i = math.floor(v)
    return v - i, float(i)


@dataclass(frozen=True)
class TorusLift:
    """Composition of primitives, applied first to last.

    ``frame`` is an integer matrix M with det +-1; the lift evaluated is
    z -> M g(M^-1 z), i.e. ``g`` seen in the coordinates changed by M.
    """

    composition: tuple = ()
    frame: tuple = ((1, 0), (0, 1))
    _codes: np.ndarray = field(init=False, repr=False, compare=False)
    _params: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "composition", tuple(self.composition))
        M = tuple(tuple(int(v) for v in r) for r in self.frame)
        if abs(M[0][0] * M[1][1] - M[0][1] * M[1][0]) != 1:
            raise InputError("frame must be an integer matrix with determinant +-1")
        object.__setattr__(self, "frame", M)
        codes, params = [], []
        for prim in self.composition:
            if isinstance(prim, Translation):
                fx, ix = _split(prim.vector[0])
                fy, iy = _split(prim.vector[1])
                codes.append(T_TRANSLATE)
                params.append((fx, fy, ix, iy))
            elif isinstance(prim, (HShear, VShear)):
                codes.append(T_HSHEAR if isinstance(prim, HShear) else T_VSHEAR)
                params.append((prim.amplitude, float(PROFILES[prim.profile]), 0.0, 0.0))
            else:
                raise InputError(f"not a lift primitive: {prim!r}")
        object.__setattr__(self, "_codes", np.array(codes, dtype=np.int64))
        object.__setattr__(self, "_params", np.array(params, dtype=float).reshape(-1, 4))

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "TorusLift":
        comp = [primitive_from_dict(p) for p in d.get("composition", [])]
        return cls(tuple(comp), tuple(map(tuple, d.get("frame", ((1, 0), (0, 1))))))

    def to_dict(self) -> dict:
        out = {"composition": [p.to_dict() for p in self.composition]}
        if self.frame != ((1, 0), (0, 1)):
            out["frame"] = [list(r) for r in self.frame]
        return out

    @classmethod
    def translation(cls, v) -> "TorusLift":
        return cls((Translation((float(v[0]), float(v[1]))),))

    @classmethod
    def identity(cls) -> "TorusLift":
        return cls(())

    def then(self, other: "TorusLift") -> "TorusLift":
        """``other`` after ``self``."""
        if self.frame != other.frame:
            raise InputError("cannot compose lifts expressed in different frames")
        return TorusLift(self.composition + other.composition, self.frame)

    def power(self, k: int) -> "TorusLift":
        if k < 1:
            raise InputError("power must be >= 1")
        return TorusLift(self.composition * k, self.frame)

    def conjugate(self, M) -> "TorusLift":
        """The lift h g h^-1 for the linear torus automorphism h = M."""
        M = np.array(M, dtype=np.int64)
        F = np.array(self.frame, dtype=np.int64)
        return TorusLift(self.composition, tuple(map(tuple, (M @ F).tolist())))

    # -- evaluation ---------------------------------------------------------
    @property
    def _M(self):
        return np.array(self.frame, dtype=float)

    @property
    def _Minv(self):
        (a, b), (c, d) = self.frame
        det = a * d - b * c
        return np.array([[d, -b], [-c, a]], dtype=float) * det

    def state(self, z):
        """Split points (in the frame of ``g``) into fractional part and counts."""
        w = np.atleast_2d(np.asarray(z, dtype=float)) @ self._Minv.T
        k = np.floor(w)
        f = w - k
        return [np.ascontiguousarray(a) for a in (f[:, 0], f[:, 1], k[:, 0], k[:, 1])]

    def advance(self, state, nsteps: int, kernel=None) -> None:
        kern = backend.get(kernel) if isinstance(kernel, (str, type(None))) else kernel
        fx, fy, kx, ky = state
        kern.iterate(fx, fy, kx, ky, self._codes, self._params, int(nsteps))

    def displacement_of(self, state, start) -> np.ndarray:
        """Total displacement g^n(z) - z of ``state`` relative to its ``start``."""
        fx, fy, kx, ky = state
        fx0, fy0, kx0, ky0 = start
        d = np.stack([(kx - kx0) + (fx - fx0), (ky - ky0) + (fy - fy0)], axis=1)
        return d @ self._M.T

    def __call__(self, z, n: int = 1, kernel=None) -> np.ndarray:
        """g^n(z) for an array of plane points (shape (N, 2) or (2,))."""
        z = np.asarray(z, dtype=float)
        st = self.state(z)
        self.advance(st, n, kernel)
        fx, fy, kx, ky = st
        w = np.stack([kx + fx, ky + fy], axis=1) @ self._M.T
        return w.reshape(z.shape)

    def total_displacement(self, z, n: int, kernel=None) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        st = self.state(z)
        start = [a.copy() for a in st]
        self.advance(st, n, kernel)
        return self.displacement_of(st, start).reshape(z.shape)
