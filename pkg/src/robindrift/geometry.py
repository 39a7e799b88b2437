"""
Analytic domains with their triangulations, plus piecewise-constant drift fields.

Supported domain kinds (all centered at the origin):

    * ``interval(R)``           the 1D interval (-R, R)
    * ``disk(R)``               the disk of radius R
    * ``ellipse(a, b)``         semi-axes a (along x) and b (along y)
    * ``annulus(r_in, r_out)``  the ring r_in < |x| < r_out
    * ``stadium(L, r)``         points within distance r of the segment [-L/2, L/2] x {0}

Disks and annuli are meshed with concentric node rings; ellipses and stadia
with a clipped equilateral lattice, Delaunay triangulation and Laplacian
smoothing. In both cases boundary nodes are placed exactly on the analytic
boundary curve.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import Delaunay, cKDTree
from scipy.special import ellipe, gamma

MIN_ANGLE_DEG = 20.0

_KINDS = {
    "interval": ("R",),
    "disk": ("R",),
    "ellipse": ("a", "b"),
    "annulus": ("r_in", "r_out"),
    "stadium": ("L", "r"),
}


class MeshTooCoarseError(ValueError):
    """Raised when the requested mesh size cannot resolve the geometry."""


def unit_ball_measure(d: int) -> float:
    """Lebesgue measure of the unit ball in R^d."""
    return math.pi ** (d / 2) / gamma(d / 2 + 1)


@dataclass(frozen=True)
class DomainSpec:
    """Analytic description of a bounded domain centered at the origin."""

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        names = _KINDS[self.kind]
        if len(self.params) != len(names):
            raise ValueError(f"{self.kind} expects parameters {names}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if any(not (p > 0 and math.isfinite(p)) for p in self.params):
            raise ValueError(f"{self.kind} parameters must be positive, got {self.params}")
        if self.kind == "annulus" and not self.params[0] < self.params[1]:
            raise ValueError("annulus requires 0 < r_in < r_out")

    # constructors -----------------------------------------------------
    @classmethod
    def interval(cls, R: float) -> "DomainSpec":
        return cls("interval", (R,))

    @classmethod
    def disk(cls, R: float) -> "DomainSpec":
        return cls("disk", (R,))

    @classmethod
    def ellipse(cls, a: float, b: float) -> "DomainSpec":
        return cls("ellipse", (a, b))

    @classmethod
    def annulus(cls, r_in: float, r_out: float) -> "DomainSpec":
        return cls("annulus", (r_in, r_out))

    @classmethod
    def stadium(cls, L: float, r: float) -> "DomainSpec":
        return cls("stadium", (L, r))

    @classmethod
    def parse(cls, text: str) -> "DomainSpec":
        """Parse strings such as ``"disk(1)"`` or ``"ellipse(2, 0.5)"``."""
        text = text.strip().replace(" ", "")
        if "(" not in text or not text.endswith(")"):
            raise ValueError(f"cannot parse domain {text!r}; expected kind(p1,...)")
        kind, args = text[:-1].split("(", 1)
        return cls(kind, tuple(float(a) for a in args.split(",") if a))

    def __str__(self):
        return f"{self.kind}({', '.join(f'{p:g}' for p in self.params)})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}

    # analytic quantities ------------------------------------------------
    @property
    def dim(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def is_ball(self) -> bool:
        return self.kind in ("interval", "disk")

    @property
    def area(self) -> float:
        """Lebesgue measure |Omega| (length in 1D)."""
        p = self.params
        if self.kind == "interval":
            return 2 * p[0]
        if self.kind == "disk":
            return math.pi * p[0] ** 2
        if self.kind == "ellipse":
            return math.pi * p[0] * p[1]
        if self.kind == "annulus":
            return math.pi * (p[1] ** 2 - p[0] ** 2)
        L, r = p
        return 2 * r * L + math.pi * r**2

    @property
    def perimeter(self) -> float:
        """Measure of the boundary (number of endpoints in 1D)."""
        p = self.params
        if self.kind == "interval":
            return 2.0
        if self.kind == "disk":
            return 2 * math.pi * p[0]
        if self.kind == "ellipse":
            a, b = max(p), min(p)
            return 4 * a * float(ellipe(1 - (b / a) ** 2))
        if self.kind == "annulus":
            return 2 * math.pi * (p[0] + p[1])
        L, r = p
        return 2 * L + 2 * math.pi * r

    @property
    def min_feature(self) -> float:
        """Smallest geometric length scale; meshes need h below it."""
        p = self.params
        if self.kind in ("interval", "disk"):
            return p[0]
        if self.kind == "ellipse":
            return min(p) ** 2 / max(p)
        if self.kind == "annulus":
            return p[1] - p[0]
        return p[1]

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Open-set membership test for points of shape (n, dim)."""
        pts = np.atleast_2d(pts)
        x = pts[:, 0]
        p = self.params
        if self.kind == "interval":
            return np.abs(x) < p[0]
        y = pts[:, 1]
        if self.kind == "disk":
            return x**2 + y**2 < p[0] ** 2
        if self.kind == "ellipse":
            return (x / p[0]) ** 2 + (y / p[1]) ** 2 < 1
        if self.kind == "annulus":
            r2 = x**2 + y**2
            return (r2 > p[0] ** 2) & (r2 < p[1] ** 2)
        L, r = p
        dx = np.maximum(np.abs(x) - L / 2, 0.0)
        return dx**2 + y**2 < r**2

    def boundary_curves(self, spacing: float) -> list[np.ndarray]:
        """Closed boundary curves sampled at (at most) the given arc-length spacing.

        Each curve is returned counter-clockwise without repeating the first point.
        """
        p = self.params
        if self.kind in ("disk", "annulus"):
            radii = [p[0]] if self.kind == "disk" else [p[1], p[0]]
            curves = []
            for R in radii:
                m = max(6, math.ceil(2 * math.pi * R / spacing))
                t = 2 * math.pi * np.arange(m) / m
                curves.append(np.column_stack([R * np.cos(t), R * np.sin(t)]))
            return curves
        if self.kind == "ellipse":
            a, b = p
            t = np.linspace(0.0, 2 * math.pi, 20001)
            speed = np.hypot(a * np.sin(t), b * np.cos(t))
            s = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(t))])
            m = max(8, math.ceil(s[-1] / spacing))
            ts = np.interp(s[-1] * np.arange(m) / m, s, t)
            return [np.column_stack([a * np.cos(ts), b * np.sin(ts)])]
        if self.kind == "stadium":
            L, r = p
            total = 2 * L + 2 * math.pi * r
            m = max(8, math.ceil(total / spacing))
            s = total * np.arange(m) / m
            return [_stadium_point(L, r, s)]
        raise ValueError("interval has no boundary curve")

    def equimeasurable_ball(self) -> "DomainSpec":
        return equimeasurable_ball(self)


def _stadium_point(L: float, r: float, s: np.ndarray) -> np.ndarray:
    """Counter-clockwise arc-length parametrization of the stadium boundary from (L/2, -r)."""
    arc = math.pi * r
    out = np.empty((len(s), 2))
    # right cap: angle from -pi/2 to pi/2 around (L/2, 0)
    seg = s < arc
    th = -math.pi / 2 + s[seg] / r
    out[seg] = np.column_stack([L / 2 + r * np.cos(th), r * np.sin(th)])
    # top edge, right to left
    seg2 = (s >= arc) & (s < arc + L)
    out[seg2] = np.column_stack([L / 2 - (s[seg2] - arc), np.full(seg2.sum(), r)])
    # left cap: angle from pi/2 to 3pi/2 around (-L/2, 0)
    seg3 = (s >= arc + L) & (s < 2 * arc + L)
    th = math.pi / 2 + (s[seg3] - arc - L) / r
    out[seg3] = np.column_stack([-L / 2 + r * np.cos(th), r * np.sin(th)])
    # bottom edge, left to right
    seg4 = s >= 2 * arc + L
    out[seg4] = np.column_stack([-L / 2 + (s[seg4] - 2 * arc - L), np.full(seg4.sum(), -r)])
    return out


def equimeasurable_ball(domain: DomainSpec) -> DomainSpec:
    """Origin-centered ball (interval in 1D) with the same measure as ``domain``."""
    if domain.is_ball:
        return domain
    d = domain.dim
    R = (domain.area / unit_ball_measure(d)) ** (1.0 / d)
    return DomainSpec.interval(R) if d == 1 else DomainSpec.disk(R)


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Mesh:
    """Simplicial mesh (triangles in 2D, cells in 1D).

    Attributes
    ----------
    nodes : (N, d) float array
    elements : (E, d+1) int array, triangles oriented counter-clockwise
    boundary_edges : (B, d) int array of boundary facets (edges in 2D, single nodes in 1D)
    boundary_normals : (B, d) outward unit normals
    domain : the DomainSpec the mesh discretizes, or None for imported meshes
    """

    nodes: np.ndarray
    elements: np.ndarray
    boundary_edges: np.ndarray
    boundary_normals: np.ndarray
    domain: DomainSpec | None = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        object.__setattr__(self, "nodes", _readonly(nodes))
        object.__setattr__(self, "elements", _readonly(np.asarray(self.elements, dtype=np.int64)))
        be = np.asarray(self.boundary_edges, dtype=np.int64).reshape(-1, self.dim)
        object.__setattr__(self, "boundary_edges", _readonly(be))
        bn = np.asarray(self.boundary_normals, dtype=float).reshape(-1, self.dim)
        object.__setattr__(self, "boundary_normals", _readonly(bn))
        if self.elements.shape[1] != self.dim + 1:
            raise ValueError("element arity does not match the node dimension")

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @cached_property
    def element_measures(self) -> np.ndarray:
        """Element areas (lengths in 1D); signed, positive for valid meshes."""
        p = self.nodes[self.elements]
        if self.dim == 1:
            return _readonly(p[:, 1, 0] - p[:, 0, 0])
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return _readonly(0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]))

    @cached_property
    def basis_gradients(self) -> np.ndarray:
        """Gradients of the P1 hat functions, shape (E, d+1, d)."""
        p = self.nodes[self.elements]
        if self.dim == 1:
            inv = 1.0 / (p[:, 1, 0] - p[:, 0, 0])
            return _readonly(np.stack([-inv, inv], axis=1)[:, :, None])
        jac = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]], axis=2)  # columns are edges
        ginv = np.linalg.inv(jac)  # rows are grad(lambda_1), grad(lambda_2)
        g0 = -ginv.sum(axis=1)
        return _readonly(np.concatenate([g0[:, None, :], ginv], axis=1))

    @cached_property
    def centroids(self) -> np.ndarray:
        return _readonly(self.nodes[self.elements].mean(axis=1))

    @cached_property
    def boundary_lengths(self) -> np.ndarray:
        """Edge lengths of boundary facets (unit point mass in 1D)."""
        if self.dim == 1:
            return _readonly(np.ones(len(self.boundary_edges)))
        p = self.nodes[self.boundary_edges]
        return _readonly(np.linalg.norm(p[:, 1] - p[:, 0], axis=1))

    @cached_property
    def boundary_flag(self) -> np.ndarray:
        flag = np.zeros(self.n_nodes, dtype=bool)
        flag[self.boundary_edges.ravel()] = True
        return _readonly(flag)

    @cached_property
    def h(self) -> float:
        """Mesh size: maximum element diameter."""
        p = self.nodes[self.elements]
        if self.dim == 1:
            return float(np.max(np.abs(p[:, 1, 0] - p[:, 0, 0])))
        lengths = [np.linalg.norm(p[:, i] - p[:, j], axis=1) for i, j in ((0, 1), (1, 2), (2, 0))]
        return float(np.max(lengths))

    @property
    def total_measure(self) -> float:
        return float(self.element_measures.sum())

    def min_angle(self) -> float:
        """Smallest interior angle over all triangles, in degrees (180 in 1D)."""
        if self.dim == 1:
            return 180.0
        return float(np.degrees(_triangle_angles(self.nodes[self.elements]).min()))

    def is_connected(self) -> bool:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        e = self.elements
        k = e.shape[1]
        rows = np.repeat(e, k, axis=1).ravel()
        cols = np.tile(e, (1, k)).ravel()
        graph = coo_matrix((np.ones_like(rows), (rows, cols)), shape=(self.n_nodes,) * 2)
        return connected_components(graph, directed=False)[0] == 1

    def check(self) -> None:
        """Raise AssertionError if a structural mesh invariant fails."""
        assert np.all(self.element_measures > 0), "non-positive element measure"
        nn = np.linalg.norm(self.boundary_normals, axis=1)
        assert np.allclose(nn, 1.0, atol=1e-12, rtol=0), "boundary normals are not unit"
        assert self.is_connected(), "mesh graph is not connected"
        mid = self.nodes[self.boundary_edges].mean(axis=1)
        dots = np.einsum("ij,ij->i", mid, self.boundary_normals)
        if self.domain is not None and self.domain.kind == "annulus":
            r_in, r_out = self.domain.params
            inner = np.linalg.norm(mid, axis=1) < 0.5 * (r_in + r_out)
            assert np.all(dots[inner] < 0) and np.all(dots[~inner] > 0), "normals not outward"
        else:
            assert np.all(dots > 0), "normals not outward"

    # serialization ----------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "nodes": self.nodes.tolist(),
            "elements": self.elements.tolist(),
            "boundary_edges": [
                {"n": e.tolist(), "normal": nrm.tolist()}
                for e, nrm in zip(self.boundary_edges, self.boundary_normals)
            ],
        }
        if self.domain is not None:
            doc["domain"] = self.domain.to_dict()
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Mesh":
        doc = json.loads(text)
        dom = doc.get("domain")
        domain = DomainSpec(dom["kind"], tuple(dom["params"])) if dom else None
        edges = doc["boundary_edges"]
        return cls(
            nodes=np.array(doc["nodes"], dtype=float),
            elements=np.array(doc["elements"], dtype=np.int64),
            boundary_edges=np.array([e["n"] for e in edges], dtype=np.int64),
            boundary_normals=np.array([e["normal"] for e in edges], dtype=float),
            domain=domain,
        )


def _triangle_angles(p: np.ndarray) -> np.ndarray:
    """Interior angles (radians) of triangles p with shape (E, 3, 2)."""
    out = []
    for i in range(3):
        a = p[:, (i + 1) % 3] - p[:, i]
        b = p[:, (i + 2) % 3] - p[:, i]
        cos = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        out.append(np.arccos(np.clip(cos, -1.0, 1.0)))
    return np.stack(out, axis=1)


# ---------------------------------------------------------------------------
# mesh generation
# ---------------------------------------------------------------------------
def triangulate(domain: DomainSpec, h: float) -> Mesh:
    """Generate a mesh of ``domain`` with target element size ``h``.

    Raises
    ------
    MeshTooCoarseError
        If ``h`` exceeds the smallest geometric feature, or the generated
        triangulation would violate the minimum-angle bound.
    """
    if not h > 0:
        raise ValueError("mesh size h must be positive")
    if h > domain.min_feature:
        raise MeshTooCoarseError(
            f"mesh too coarse: h={h:g} exceeds the smallest feature "
            f"{domain.min_feature:g} of {domain}"
        )
    if domain.kind == "interval":
        return _interval_mesh(domain, h)
    if domain.kind in ("disk", "annulus"):
        mesh = _ring_mesh(domain, h)
    else:
        mesh = _lattice_mesh(domain, h)
    if mesh.min_angle() < MIN_ANGLE_DEG:
        raise MeshTooCoarseError(
            f"mesh too coarse: minimum angle {mesh.min_angle():.1f} deg below "
            f"{MIN_ANGLE_DEG} deg for {domain} at h={h:g}"
        )
    return mesh


def _interval_mesh(domain: DomainSpec, h: float) -> Mesh:
    R = domain.params[0]
    n = max(2, round(2 * R / h))
    x = np.linspace(-R, R, n + 1)
    elements = np.column_stack([np.arange(n), np.arange(1, n + 1)])
    return Mesh(x[:, None], elements, [[0], [n]], [[-1.0], [1.0]], domain)


def _ring_mesh(domain: DomainSpec, h: float) -> Mesh:
    if domain.kind == "disk":
        R = domain.params[0]
        n = math.ceil(R / h - 1e-9)
        radii = R * np.arange(n + 1) / n
        counts = [1] + [6 * k for k in range(1, n + 1)]
    else:
        r_in, r_out = domain.params
        n = math.ceil((r_out - r_in) / h - 1e-9)
        radii = np.linspace(r_in, r_out, n + 1)
        dr = (r_out - r_in) / n
        counts = [max(6, math.ceil(2 * math.pi * r / dr - 1e-9)) for r in radii]

    nodes, rings = [], []
    start = 0
    for r, m in zip(radii, counts):
        t = 2 * math.pi * np.arange(m) / m
        pts = np.column_stack([r * np.cos(t), r * np.sin(t)]) if m > 1 else np.zeros((1, 2))
        nodes.append(pts)
        rings.append((start + np.arange(m), t))
        start += m
    nodes = np.vstack(nodes)

    tris = []
    for (inner, ti), (outer, to) in zip(rings[:-1], rings[1:]):
        tris.extend(_stitch_rings(inner, ti, outer, to))
    tris = _orient_ccw(nodes, np.array(tris, dtype=np.int64))

    outer_idx = rings[-1][0]
    edges = [np.column_stack([outer_idx, np.roll(outer_idx, -1)])]
    if domain.kind == "annulus":
        inner_idx = rings[0][0]
        # clockwise traversal keeps the domain on the left
        edges.append(np.column_stack([np.roll(inner_idx, -1), inner_idx]))
    edges = np.vstack(edges)
    return Mesh(nodes, tris, edges, _edge_normals(nodes, edges), domain)


def _stitch_rings(inner, ti, outer, to):
    """Triangulate the strip between two closed node rings by an angular merge walk."""
    if len(inner) == 1:
        c = inner[0]
        return [(c, outer[j], outer[(j + 1) % len(outer)]) for j in range(len(outer))]
    mi, mo = len(inner), len(outer)
    ti_ext = np.append(ti, 2 * math.pi)
    to_ext = np.append(to, 2 * math.pi)
    i = j = 0
    tris = []
    while i < mi or j < mo:
        if j == mo or (i < mi and ti_ext[i + 1] <= to_ext[j + 1]):
            tris.append((inner[i % mi], inner[(i + 1) % mi], outer[j % mo]))
            i += 1
        else:
            tris.append((inner[i % mi], outer[(j + 1) % mo], outer[j % mo]))
            j += 1
    return tris


def _lattice_mesh(domain: DomainSpec, h: float) -> Mesh:
    (curve,) = domain.boundary_curves(h)
    lo = curve.min(axis=0) - h
    hi = curve.max(axis=0) + h
    dy = h * math.sqrt(3) / 2
    ys = np.arange(lo[1], hi[1] + dy, dy)
    # center the lattice so that it is symmetric about the origin
    ys -= ys[np.argmin(np.abs(ys))]
    rows = []
    for k, y in enumerate(ys):
        shift = 0.5 * h if round(y / dy) % 2 else 0.0
        xs = np.arange(math.floor(lo[0] / h) * h, hi[0] + h, h) + shift
        rows.append(np.column_stack([xs, np.full_like(xs, y)]))
    lattice = np.vstack(rows)

    dense = domain.boundary_curves(h / 20)[0]
    tree = cKDTree(dense)
    dist = tree.query(lattice)[0]
    keep = domain.contains(lattice) & (dist > 0.55 * h)
    interior = lattice[keep]

    nb = len(curve)
    pts = np.vstack([curve, interior])
    pts, tris = _smooth_delaunay(pts, nb, domain, iterations=8)
    tris = _orient_ccw(pts, tris)
    edges = np.column_stack([np.arange(nb), np.roll(np.arange(nb), -1)])
    return Mesh(pts, tris, edges, _edge_normals(pts, edges), domain)


def _smooth_delaunay(pts, nb, domain, iterations):
    """Delaunay triangulation with Laplacian smoothing of the interior nodes.

    The first ``nb`` points are boundary nodes and stay fixed.
    """
    pts = pts.copy()
    for it in range(iterations + 1):
        tri = Delaunay(pts)
        tris = tri.simplices
        cent = pts[tris].mean(axis=1)
        tris = tris[domain.contains(cent)]
        if it == iterations:
            break
        e = np.vstack([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
        e = np.unique(np.sort(e, axis=1), axis=0)
        acc = np.zeros_like(pts)
        deg = np.zeros(len(pts))
        np.add.at(acc, e[:, 0], pts[e[:, 1]])
        np.add.at(acc, e[:, 1], pts[e[:, 0]])
        np.add.at(deg, e[:, 0], 1)
        np.add.at(deg, e[:, 1], 1)
        new = acc[nb:] / np.maximum(deg[nb:, None], 1)
        inside = domain.contains(new)
        pts[nb:][inside] = new[inside]
    return pts, tris


def _orient_ccw(nodes, tris):
    p = nodes[tris]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    neg = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    tris = tris.copy()
    tris[neg] = tris[neg][:, [0, 2, 1]]
    return tris


def _edge_normals(nodes, edges):
    """Outward normals of boundary edges traversed with the domain on their left."""
    t = nodes[edges[:, 1]] - nodes[edges[:, 0]]
    n = np.column_stack([t[:, 1], -t[:, 0]])
    return n / np.linalg.norm(n, axis=1)[:, None]


# ---------------------------------------------------------------------------
# drift fields
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DriftField:
    """Piecewise-constant vector field with sup-norm budget ``tau``."""

    values: np.ndarray
    tau: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "tau", float(self.tau))
        if self.tau < 0:
            raise ValueError("drift budget tau must be nonnegative")
        if v.size and np.max(np.linalg.norm(v, axis=1)) > self.tau + 1e-12:
            raise ValueError("drift violates the sup-norm budget |v| <= tau")

    @property
    def magnitudes(self) -> np.ndarray:
        return np.linalg.norm(self.values, axis=1)

    def to_csv(self, mesh: Mesh) -> str:
        """Rows of (element_centroid_x, y, vx, vy)."""
        c = np.zeros((mesh.n_elements, 2))
        v = np.zeros((mesh.n_elements, 2))
        c[:, : mesh.dim] = mesh.centroids
        v[:, : mesh.dim] = self.values
        lines = ["element_centroid_x,y,vx,vy"]
        lines += [",".join(map(repr, row)) for row in np.hstack([c, v]).tolist()]
        return "\n".join(lines) + "\n"


def zero_drift(mesh: Mesh) -> DriftField:
    return DriftField(np.zeros((mesh.n_elements, mesh.dim)), 0.0)


def radial_drift(mesh: Mesh, tau: float, sign: int = 1) -> DriftField:
    """The field ``sign * tau * x/|x|`` evaluated at element centroids."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = mesh.centroids
    r = np.linalg.norm(c, axis=1)
    v = np.zeros_like(c)
    away = r > 1e-12
    v[away] = sign * tau * c[away] / r[away, None]
    return DriftField(v, tau)


def random_drift(mesh: Mesh, tau: float, seed: int) -> DriftField:
    """Admissible drift of magnitude ``tau`` with per-element uniform random direction."""
    rng = np.random.default_rng(seed)
    if mesh.dim == 1:
        v = tau * rng.choice([-1.0, 1.0], size=(mesh.n_elements, 1))
    else:
        theta = rng.uniform(0.0, 2 * math.pi, size=mesh.n_elements)
        v = tau * np.column_stack([np.cos(theta), np.sin(theta)])
    return DriftField(v, tau)
