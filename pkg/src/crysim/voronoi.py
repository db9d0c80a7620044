"""Periodic Voronoi analysis of a single site.

For a chosen central atom, the cell is the intersection of the half-spaces
bounded by the perpendicular bisector planes toward every nearby atom
(periodic images included).  Each surviving face contributes one neighbor
record carrying the face's solid angle at the central atom and the
center-to-neighbor distance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.spatial import HalfspaceIntersection, QhullError

from .errors import DegenerateGeometryError, OpenCellError
from .structures import CrystalStructure, cartesian_coords, periodic_images

FULL_SPHERE = 4.0 * np.pi

INITIAL_CUTOFF = 12.0  # angstrom; doubled until the cell closes
MAX_CUTOFF = 48.0
MIN_ATOM_SEPARATION = 1e-6  # angstrom
MIN_FACE_SOLID_ANGLE = 1e-8  # steradian; sliver faces below this are dropped
PLANE_MERGE_TOL = 1e-6  # in (normal, offset) space
SPHERE_COVERAGE_RTOL = 1e-6
_FACE_RESIDUAL_TOL = 1e-7


@dataclass(frozen=True)
class NeighborRecord:
    """One Voronoi face: the neighbor behind it and the face's solid angle."""

    neighbor_element: str
    neighbor_site_index: int
    image_offset: tuple[int, int, int]
    distance: float  # angstrom, center to neighbor
    solid_angle: float  # steradian subtended by the face at the center


@dataclass(frozen=True)
class NeighborShell:
    """All Voronoi faces of one central site."""

    central_site_index: int
    records: tuple[NeighborRecord, ...]

    @property
    def max_solid_angle(self) -> float:
        if not self.records:
            return 0.0
        return max(r.solid_angle for r in self.records)

    def weights(self) -> np.ndarray:
        """Per-neighbor weights: solid angle over the largest solid angle."""
        theta_max = self.max_solid_angle
        return np.array([r.solid_angle / theta_max for r in self.records])

    def total_solid_angle(self) -> float:
        return float(sum(r.solid_angle for r in self.records))


def _candidate_atoms(structure, cart, center_index, cutoff):
    """Atoms (home cell + images) within ``cutoff`` of the central atom.

    Returns parallel arrays (site indices, integer offsets, positions,
    distances) sorted by distance, then site index, then offset.
    """
    center = cart[center_index]
    home = [j for j in range(structure.n_sites) if j != center_index]
    sites = [np.array(home, dtype=int)]
    offsets = [np.zeros((len(home), 3), dtype=int)]
    positions = [cart[home]] if home else [np.zeros((0, 3))]
    # inflate so the image box certainly covers the cutoff ball around any
    # home-cell atom (the box rule counts whole plane spacings)
    inflate = 2.0 * float(np.max(np.linalg.norm(structure.lattice, axis=1)))
    images = periodic_images(structure, cutoff + inflate)
    if images:
        sites.append(np.array([im.site_index for im in images], dtype=int))
        offsets.append(np.array([im.offset for im in images], dtype=int))
        positions.append(np.array([im.position for im in images]))
    sites = np.concatenate(sites)
    offsets = np.vstack(offsets)
    positions = np.vstack(positions)
    dists = np.linalg.norm(positions - center, axis=1)
    if np.any(dists < MIN_ATOM_SEPARATION):
        j = int(np.argmin(dists))
        raise DegenerateGeometryError(
            f"site {center_index} and site {sites[j]} offset {tuple(offsets[j])} "
            f"are {dists[j]:.2e} A apart"
        )
    keep = dists <= cutoff
    sites, offsets, positions, dists = sites[keep], offsets[keep], positions[keep], dists[keep]
    order = np.lexsort((offsets[:, 2], offsets[:, 1], offsets[:, 0], sites, dists))
    return sites[order], offsets[order], positions[order], dists[order]


def _merge_planes(sites, offsets, positions, dists, center):
    """Drop candidates whose bisector plane duplicates a nearer one."""
    if len(sites) == 0:
        return sites, offsets, positions, dists
    normals = (positions - center) / dists[:, None]
    keys = np.round(np.column_stack([normals, dists / 2.0]) / PLANE_MERGE_TOL)
    _, first = np.unique(keys, axis=0, return_index=True)
    keep = np.zeros(len(sites), dtype=bool)
    keep[first] = True  # candidates are distance-sorted: the nearest survives
    return sites[keep], offsets[keep], positions[keep], dists[keep]


def _triangle_solid_angle(r1, r2, r3):
    """Solid angle of the triangle spanned by three rays from the origin."""
    n1, n2, n3 = np.linalg.norm(r1), np.linalg.norm(r2), np.linalg.norm(r3)
    numer = abs(np.dot(r1, np.cross(r2, r3)))
    denom = (
        n1 * n2 * n3
        + np.dot(r1, r2) * n3
        + np.dot(r1, r3) * n2
        + np.dot(r2, r3) * n1
    )
    return 2.0 * np.arctan2(numer, denom)


def face_solid_angle(vertices, center) -> float:
    """Solid angle subtended at ``center`` by a planar convex polygon.

    The polygon is fanned from its centroid and the oriented triangle
    contributions are summed; exact for planar convex faces.
    """
    verts = np.asarray(vertices, dtype=float)
    centroid = verts.mean(axis=0)
    rel = verts - centroid
    # orthonormal basis of the face plane for angular ordering
    u = rel[0] / np.linalg.norm(rel[0])
    normal = np.cross(rel[0], rel[1])
    for k in range(2, len(rel)):
        if np.linalg.norm(normal) > 1e-12:
            break
        normal = np.cross(rel[0], rel[k])
    normal /= np.linalg.norm(normal)
    v = np.cross(normal, u)
    order = np.argsort(np.arctan2(rel @ v, rel @ u))
    verts = verts[order]
    total = 0.0
    m = len(verts)
    for i in range(m):
        total += _triangle_solid_angle(
            centroid - center, verts[i] - center, verts[(i + 1) % m] - center
        )
    return float(total)


def _build_cell(center, candidates, cutoff):
    """Half-space intersection; returns per-candidate faces or None if open."""
    sites, offsets, positions, dists = candidates
    normals = (positions - center) / dists[:, None]
    midpoints = (positions + center) / 2.0
    plane_offsets = -np.einsum("ij,ij->i", normals, midpoints)
    halfspaces = [np.column_stack([normals, plane_offsets])]
    # bounding cube (side 4 x cutoff) keeps the intersection bounded for qhull
    for axis in range(3):
        for sign in (1.0, -1.0):
            n = np.zeros(3)
            n[axis] = sign
            halfspaces.append(np.concatenate([n, [-(n @ center) - 2.0 * cutoff]])[None, :])
    halfspaces = np.vstack(halfspaces)
    try:
        intersection = HalfspaceIntersection(halfspaces, np.array(center, dtype=float))
    except QhullError as exc:
        raise OpenCellError(f"half-space intersection failed: {exc}") from exc
    vertices = intersection.intersections
    # the cell is certainly complete only if no atom beyond the cutoff could
    # still cut it: every vertex must lie within cutoff/2 of the center
    max_vertex_dist = float(np.max(np.linalg.norm(vertices - center, axis=1)))
    if max_vertex_dist > cutoff / 2.0:
        return None
    residuals = np.abs(vertices @ normals.T + plane_offsets)
    faces = []
    for i in range(len(sites)):
        face_vertices = vertices[residuals[:, i] < _FACE_RESIDUAL_TOL]
        if len(face_vertices) < 3:
            continue
        theta = face_solid_angle(face_vertices, center)
        if theta < MIN_FACE_SOLID_ANGLE:
            continue
        faces.append((int(sites[i]), tuple(int(o) for o in offsets[i]), float(dists[i]), theta))
    return faces


def neighbor_shell(
    structure: CrystalStructure,
    site_index: int,
    initial_cutoff: float = INITIAL_CUTOFF,
    max_cutoff: float = MAX_CUTOFF,
) -> NeighborShell:
    """Voronoi faces of one site against all periodic neighbors.

    The candidate cutoff starts at ``initial_cutoff`` and doubles until the
    cell is provably closed; OpenCellError if that never happens within
    ``max_cutoff``.  The face solid angles of the returned shell tile the
    full sphere to within 1e-6 relative.
    """
    if not 0 <= site_index < structure.n_sites:
        raise IndexError(f"site index {site_index} out of range")
    cart = cartesian_coords(structure)
    center = cart[site_index]
    cutoff = float(initial_cutoff)
    while True:
        candidates = _merge_planes(
            *_candidate_atoms(structure, cart, site_index, cutoff), center
        )
        faces = _build_cell(center, candidates, cutoff) if len(candidates[0]) else None
        if faces is not None:
            break
        if cutoff >= max_cutoff:
            raise OpenCellError(
                f"{structure.id}: site {site_index} cell still open at cutoff {cutoff} A"
            )
        cutoff = min(2.0 * cutoff, max_cutoff)
    records = tuple(
        NeighborRecord(
            neighbor_element=structure.sites[s].element,
            neighbor_site_index=s,
            image_offset=offset,
            distance=d,
            solid_angle=theta,
        )
        for s, offset, d, theta in faces
    )
    shell = NeighborShell(site_index, records)
    coverage = shell.total_solid_angle()
    if abs(coverage - FULL_SPHERE) > SPHERE_COVERAGE_RTOL * FULL_SPHERE:
        raise OpenCellError(
            f"{structure.id}: site {site_index} faces cover {coverage:.9f} sr, "
            f"expected {FULL_SPHERE:.9f}"
        )
    return shell


def write_debug_csv(shell: NeighborShell, path) -> None:
    """Per-face dump: neighbor_index,element,r_k,theta_k,w_k."""
    theta_max = shell.max_solid_angle
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["neighbor_index", "element", "r_k", "theta_k", "w_k"])
        for rec in shell.records:
            writer.writerow(
                [
                    rec.neighbor_site_index,
                    rec.neighbor_element,
                    format(rec.distance, ".17g"),
                    format(rec.solid_angle, ".17g"),
                    format(rec.solid_angle / theta_max, ".17g"),
                ]
            )
