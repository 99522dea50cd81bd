"""Compact sets with connected complement (discs and rectangles) and their node grids."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InvariantError
from .special_functions import StripRegion

MIN_BOUNDARY_NODES = 16


@dataclass(frozen=True)
class CompactSetSpec:
    """A closed disc or axis-parallel rectangle in the complex plane.

    For a disc, ``center`` and ``radius`` are used; for a rectangle,
    ``lower_left`` and ``upper_right``.  ``host_strip``, when given, must
    contain the set with a positive margin.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    lower_left: complex = 0j
    upper_right: complex = 0j
    boundary_nodes: int = 128
    interior_nodes: int = 25
    host_strip: Optional[StripRegion] = None

    def __post_init__(self):
        if self.kind not in ("disc", "rectangle"):
            raise DomainError(f"unknown compact set kind {self.kind!r}")
        if self.boundary_nodes < MIN_BOUNDARY_NODES:
            raise DomainError(f"need at least {MIN_BOUNDARY_NODES} boundary nodes")
        if self.interior_nodes < 0:
            raise DomainError("interior_nodes must be non-negative")
        if self.kind == "disc" and not self.radius > 0:
            raise DomainError("disc radius must be positive")
        if self.kind == "rectangle":
            ll, ur = complex(self.lower_left), complex(self.upper_right)
            if not (ll.real < ur.real and ll.imag < ur.imag):
                raise DomainError("rectangle corners must be lower-left and upper-right")
        if self.host_strip is not None:
            lo, hi = self.sigma_range
            tlo, thi = self.t_range
            strip = self.host_strip
            if not (
                lo > strip.sigma_min and hi < strip.sigma_max and tlo > strip.t_min and thi < strip.t_max
            ):
                raise InvariantError("compact set is not strictly inside its host strip")

    @classmethod
    def disc(cls, center, radius, **kw):
        return cls("disc", center=complex(center), radius=float(radius), **kw)

    @classmethod
    def rectangle(cls, lower_left, upper_right, **kw):
        return cls("rectangle", lower_left=complex(lower_left), upper_right=complex(upper_right), **kw)

    @property
    def sigma_range(self):
        if self.kind == "disc":
            return self.center.real - self.radius, self.center.real + self.radius
        return self.lower_left.real, self.upper_right.real

    @property
    def t_range(self):
        if self.kind == "disc":
            return self.center.imag - self.radius, self.center.imag + self.radius
        return self.lower_left.imag, self.upper_right.imag

    @property
    def anchor(self):
        """A reference point inside the set (center of the disc or rectangle)."""
        if self.kind == "disc":
            return self.center
        return (self.lower_left + self.upper_right) / 2

    @property
    def size(self):
        if self.kind == "disc":
            return self.radius
        return abs(self.upper_right - self.lower_left) / 2

    def inside_strip(self, a, b):
        """Whether the set lies in the open strip ``a < Re s < b``."""
        lo, hi = self.sigma_range
        return a < lo and hi < b

    def contains(self, s, tol=0.0):
        s = np.asarray(s, dtype=complex)
        if self.kind == "disc":
            return np.abs(s - self.center) <= self.radius + tol
        ll, ur = self.lower_left, self.upper_right
        return (
            (s.real >= ll.real - tol)
            & (s.real <= ur.real + tol)
            & (s.imag >= ll.imag - tol)
            & (s.imag <= ur.imag + tol)
        )

    @classmethod
    def from_json(cls, doc):
        kw = {
            "boundary_nodes": int(doc.get("boundary_nodes", 128)),
            "interior_nodes": int(doc.get("interior_nodes", 25)),
        }
        if "host_strip" in doc and doc["host_strip"] is not None:
            kw["host_strip"] = StripRegion(**doc["host_strip"])
        if doc["kind"] == "disc":
            c = doc["center"]
            return cls.disc(complex(c[0], c[1]), doc["radius"], **kw)
        if doc["kind"] == "rectangle":
            ll, ur = doc["lower_left"], doc["upper_right"]
            return cls.rectangle(complex(ll[0], ll[1]), complex(ur[0], ur[1]), **kw)
        raise DomainError(f"unknown compact set kind {doc['kind']!r}")

    def to_json(self):
        doc = {
            "kind": self.kind,
            "boundary_nodes": self.boundary_nodes,
            "interior_nodes": self.interior_nodes,
        }
        if self.kind == "disc":
            doc.update(center=[self.center.real, self.center.imag], radius=self.radius)
        else:
            doc.update(
                lower_left=[self.lower_left.real, self.lower_left.imag],
                upper_right=[self.upper_right.real, self.upper_right.imag],
            )
        if self.host_strip is not None:
            h = self.host_strip
            doc["host_strip"] = {
                "sigma_min": h.sigma_min,
                "sigma_max": h.sigma_max,
                "t_min": h.t_min,
                "t_max": h.t_max,
            }
        return doc


def boundary_points(spec, count=None):
    """Equally spaced nodes on the boundary.

    Node ``j`` sits at arc parameter ``j/count`` of a full turn (disc) or of
    the perimeter starting at the lower-left corner (rectangle), so for
    power-of-two counts every coarse node reappears bit-identically in the
    refined grid.
    """
    B = spec.boundary_nodes if count is None else int(count)
    j = np.arange(B)
    if spec.kind == "disc":
        angles = 2 * math.pi * j / B
        return spec.center + spec.radius * np.exp(1j * angles)
    ll, ur = spec.lower_left, spec.upper_right
    w, h = ur.real - ll.real, ur.imag - ll.imag
    perimeter = 2 * (w + h)
    t = perimeter * j / B
    pts = np.empty(B, dtype=complex)
    for i, x in enumerate(t):
        if x < w:
            pts[i] = complex(ll.real + x, ll.imag)
        elif x < w + h:
            pts[i] = complex(ur.real, ll.imag + (x - w))
        elif x < 2 * w + h:
            pts[i] = complex(ur.real - (x - w - h), ur.imag)
        else:
            pts[i] = complex(ll.real, ur.imag - (x - 2 * w - h))
    return pts


def interior_points(spec):
    """A centered square lattice of ``interior_nodes`` points strictly inside the set."""
    n = spec.interior_nodes
    if n == 0:
        return np.zeros(0, dtype=complex)
    g = math.isqrt(n - 1) + 1
    u = (2 * (np.arange(g) + 0.5) / g) - 1  # cell centers in (-1, 1)
    if spec.kind == "disc":
        half_w = half_h = 0.7 * spec.radius / math.sqrt(2)
    else:
        half_w = (spec.upper_right.real - spec.lower_left.real) / 2
        half_h = (spec.upper_right.imag - spec.lower_left.imag) / 2
    c = spec.anchor
    pts = [c + complex(half_w * x, half_h * y) for y in u for x in u]
    return np.array(pts[:n], dtype=complex)


def grid_points(spec, include_interior=True):
    """Boundary nodes followed (optionally) by interior nodes."""
    b = boundary_points(spec)
    if not include_interior:
        return b
    return np.concatenate([b, interior_points(spec)])
