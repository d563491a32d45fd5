"""Finitely many materialised leaves of an oriented foliation, and paths across them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError, PreconditionError
from .geometry import ON_TOL, ProperLine, Rect, Side

_VERTICAL = re.compile(r"^x=(-?[0-9.eE+-]+)$")
_PATH_TOL = 1e-9


def translated_label(label: str, T) -> str:
    return f"{label}+({int(T[0])},{int(T[1])})"


class FoliationChart:
    """Labelled, pairwise disjoint proper lines.

    With ``model="vertical"`` any label ``"x=c"`` names the upward vertical
    leaf through (c, 0); such leaves are created on first use.
    """

    def __init__(self, leaves=(), model: str | None = None, box: Rect | None = None):
        if model not in (None, "vertical"):
            raise InputError(f"unknown leaf model {model!r}")
        self.model = model
        self._leaves: dict[str, ProperLine] = {}
        self._box = box
        self.above_cache: dict = {}  # leaves never change once added, so "above" results can be reused
        for leaf in leaves:
            self.add_leaf(leaf)

    # -- access -------------------------------------------------------------------
    def __contains__(self, label) -> bool:
        return label in self._leaves or (self.model == "vertical" and bool(_VERTICAL.match(str(label))))

    def __getitem__(self, label: str) -> ProperLine:
        if label in self._leaves:
            return self._leaves[label]
        m = _VERTICAL.match(str(label)) if self.model == "vertical" else None
        if m:
            c = float(m.group(1))
            return self.add_leaf(ProperLine([(c, -1.0), (c, 1.0)], label))
        raise InputError(f"leaf {label!r} is not materialised in the chart")

    @property
    def labels(self) -> list[str]:
        return list(self._leaves)

    @property
    def leaves(self) -> list[ProperLine]:
        return list(self._leaves.values())

    @property
    def box(self) -> Rect:
        if self._box is not None:
            return self._box
        if not self._leaves:
            return Rect(-1, 1, -1, 1)
        return Rect.bounding(np.vstack([leaf.vertices for leaf in self._leaves.values()]))

    # -- construction -----------------------------------------------------------------
    def add_leaf(self, leaf: ProperLine) -> ProperLine:
        if leaf.label is None:
            raise InputError("chart leaves need a label")
        if leaf.label in self._leaves:
            raise InputError(f"duplicate leaf label {leaf.label!r}")
        if not leaf.is_simple():
            raise PreconditionError("simple", f"leaf {leaf.label!r} intersects itself")
        for other in self._leaves.values():
            if leaf.intersects(other):
                raise PreconditionError("disjoint", f"leaves {leaf.label!r} and {other.label!r} intersect")
        self._leaves[leaf.label] = leaf
        return leaf

    def translated_leaf(self, label: str, T) -> ProperLine:
        """The deck translate T(leaf), materialised on demand."""
        T = (int(T[0]), int(T[1]))
        if T == (0, 0):
            return self[label]
        name = translated_label(label, T)
        if name in self._leaves:
            return self._leaves[name]
        return self.add_leaf(self[label].translated(T, name))

    def to_dict(self) -> dict:
        d = {"leaves": [leaf.to_dict() for leaf in self._leaves.values() if not _VERTICAL.match(leaf.label)]}
        if self.model:
            d["model"] = self.model
        if self._box is not None:
            d["box"] = list(self._box.as_tuple())
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FoliationChart":
        box = Rect(*d["box"]) if d.get("box") else None
        leaves = [ProperLine(item["vertices"], item["label"]) for item in d.get("leaves", [])]
        return cls(leaves, d.get("model"), box)

    # -- path validation ------------------------------------------------------------
    def validate_path(self, gamma: "TransversePath") -> "TransversePath":
        """Check endpoints and that every recorded crossing goes from L to R."""
        L = gamma.length
        start, end = self[gamma.start_leaf], self[gamma.end_leaf]
        if start.distance(gamma.point_at(0.0))[0] > _PATH_TOL:
            raise InputError(f"path does not start on its start leaf {gamma.start_leaf!r}")
        if end.distance(gamma.point_at(L))[0] > _PATH_TOL:
            raise InputError(f"path does not end on its end leaf {gamma.end_leaf!r}")
        ts = [0.0] + [t for _, t in gamma.crossings] + [L]
        gaps = np.diff(ts)
        if np.any(gaps <= 0):
            raise InputError("crossing parameters must increase strictly inside (a, b)")
        delta = min(1e-6 * max(L, 1.0), 0.25 * float(gaps.min()))
        if start.side_of(gamma.point_at(delta))[0] != Side.RIGHT:
            raise InputError(f"path does not leave {gamma.start_leaf!r} into its right side")
        if end.side_of(gamma.point_at(L - delta))[0] != Side.LEFT:
            raise InputError(f"path does not reach {gamma.end_leaf!r} from its left side")
        for label, t in gamma.crossings:
            leaf = self[label]
            if leaf.distance(gamma.point_at(t))[0] > _PATH_TOL:
                raise InputError(f"recorded crossing of {label!r} at t={t} is not on the leaf")
            before = leaf.side_of(gamma.point_at(t - delta))[0]
            after = leaf.side_of(gamma.point_at(t + delta))[0]
            if (before, after) != (Side.LEFT, Side.RIGHT):
                raise InputError(f"path does not cross {label!r} from left to right at t={t}")
        return gamma


@dataclass(frozen=True)
class TransversePath:
    """PL path parametrised by arc length on [0, length].

    ``crossings`` lists the interior crossings ``(leaf label, t)``; the
    leaves through the two endpoints are ``start_leaf`` and ``end_leaf``.
    """

    vertices: np.ndarray
    crossings: tuple = ()
    start_leaf: str = ""
    end_leaf: str = ""
    name: str = ""
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 2:
            raise InputError("a path needs at least 2 vertices")
        seg = np.hypot(*np.diff(V, axis=0).T)
        if np.any(seg == 0):
            raise InputError("consecutive path vertices must be distinct")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "crossings", tuple((str(l), float(t)) for l, t in self.crossings))
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(seg)]))
        if not self.start_leaf or not self.end_leaf:
            raise InputError("a transverse path names its start and end leaves")

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    @property
    def leaf_sequence(self) -> tuple[str, ...]:
        """Start leaf, crossed leaves, end leaf: the record compared for path equivalence."""
        return (self.start_leaf,) + tuple(l for l, _ in self.crossings) + (self.end_leaf,)

    def point_at(self, t: float) -> np.ndarray:
        cum, V = self._cum, self.vertices
        t = min(max(float(t), 0.0), cum[-1])
        i = int(min(np.searchsorted(cum, t, side="right") - 1, len(V) - 2))
        return V[i] + (t - cum[i]) / (cum[i + 1] - cum[i]) * (V[i + 1] - V[i])

    def _cut(self, a: float, b: float) -> np.ndarray:
        cum, V = self._cum, self.vertices
        inner = [V[i] for i in range(len(V)) if a < cum[i] < b]
        pts = [self.point_at(a)] + inner + [self.point_at(b)]
        out = [pts[0]]
        for p in pts[1:]:
            if np.hypot(*(p - out[-1])) > 1e-15:
                out.append(p)
        return np.array(out)

    def parameter_of(self, z, tol: float = _PATH_TOL) -> float:
        """Arc-length parameter of a point lying on the path."""
        z = np.asarray(z, dtype=float)
        V, cum = self.vertices, self._cum
        for i in range(len(V) - 1):
            a, b = V[i], V[i + 1]
            ab = b - a
            s = float(np.clip((z - a) @ ab / (ab @ ab), 0.0, 1.0))
            if np.hypot(*(a + s * ab - z)) <= tol:
                return float(cum[i] + s * (cum[i + 1] - cum[i]))
        raise InputError(f"point {z.tolist()} is not on the path")

    def through(self, t: float, z) -> tuple["TransversePath", float]:
        """Reroute so the point at parameter ``t`` moves to ``z``; returns (path, new t).

        The neighbouring vertices are kept, so only the two path pieces
        touching ``t`` move. Other crossings must not lie on those pieces.
        """
        z = np.asarray(z, dtype=float)
        if np.hypot(*(self.point_at(t) - z)) <= ON_TOL:
            return self, t
        cum, V = self._cum, self.vertices
        before = [V[i] for i in range(len(V)) if cum[i] < t]
        after = [V[i] for i in range(len(V)) if cum[i] > t]
        path = TransversePath(np.array(before + [z] + after), (), self.start_leaf, self.end_leaf, self.name)
        t_new = float(path._cum[len(before)])
        cross = []
        for label, s in self.crossings:
            cross.append((label, t_new if s == t else path.parameter_of(self.point_at(s))))
        return TransversePath(path.vertices, tuple(cross), self.start_leaf, self.end_leaf, self.name), t_new

    def translated(self, T, relabel) -> "TransversePath":
        return TransversePath(self.vertices + np.asarray(T, dtype=float),
                              tuple((relabel(l), t) for l, t in self.crossings),
                              relabel(self.start_leaf), relabel(self.end_leaf),
                              f"{self.name}+({int(T[0])},{int(T[1])})" if self.name else "")

    def to_dict(self) -> dict:
        d = {"vertices": self.vertices.tolist(), "start_leaf": self.start_leaf, "end_leaf": self.end_leaf,
             "crossings": [{"leaf": l, "t": t} for l, t in self.crossings]}
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TransversePath":
        return cls(np.asarray(d["vertices"], dtype=float),
                   tuple((c["leaf"], c["t"]) for c in d.get("crossings", [])),
                   d["start_leaf"], d["end_leaf"], d.get("name", ""))


def splice(g1: TransversePath, t1: float, g2: TransversePath, t2: float, via: str, name: str = "") -> TransversePath:
    """g1 on [0, t1] followed by g2 on [t2, b2]; requires g1(t1) == g2(t2).

    The junction is recorded as a crossing of the common leaf ``via``.
    """
    p, q = g1.point_at(t1), g2.point_at(t2)
    if np.hypot(*(p - q)) > _PATH_TOL:
        raise InputError("paths do not meet at the splice parameters")
    head = g1._cut(0.0, t1)
    tail = g2._cut(t2, g2.length)
    V = np.vstack([head, tail[1:]])
    cross = [(l, t) for l, t in g1.crossings if t < t1]
    cross.append((via, t1))
    cross.extend((l, t - t2 + t1) for l, t in g2.crossings if t > t2)
    return TransversePath(V, tuple(cross), g1.start_leaf, g2.end_leaf, name)
