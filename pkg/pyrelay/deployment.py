"""
Deployment class
----------------

The scene a relay planner operates on: network node positions, candidate
relay sites and the disk model radius.
"""

import numpy as np

from .kernels.graph import find_neighbours


class Deployment:
    """
    Immutable set of node positions and candidate relay sites

    Attributes
    ----------
    node_positions : ndarray (float)
        Network node coordinates, shape (n_nodes, 2)

    candidate_sites : ndarray (float)
        Candidate relay site coordinates, shape (n_sites, 2)

    disk_radius : float
        Two points are connected if their distance is strictly less than
        the disk radius

    area : tuple (float)
        (width, height) of the deployment area

    n_nodes : int

    n_sites : int

    positions : ndarray (float)
        Node positions followed by site positions, shape (n_nodes + n_sites,
        2). Row i is the position of graph vertex i.

    Notes
    -----
    * Vertex indexing convention used everywhere: vertices 0..n-1 are network
      nodes, vertices n..n+Z-1 are candidate sites (site z is vertex n+z)
    """

    def __init__(
        self, node_positions, candidate_sites, disk_radius, area=(6.0, 6.0), validate=True
    ):
        """
        Deployment class constructor

        Parameters
        ----------
        node_positions : array_like (float)

        candidate_sites : array_like (float)

        disk_radius : float

        area : tuple (float)

        validate : bool
            Check the invariants (n >= 2, R > 0, every point inside the
            area). Regional sub-deployments are built without validation
            since a region may hold fewer than two nodes.
        """
        self.node_positions = _as_points(node_positions)
        self.candidate_sites = _as_points(candidate_sites)
        self.disk_radius = float(disk_radius)
        self.area = (float(area[0]), float(area[1]))

        self.n_nodes = len(self.node_positions)
        self.n_sites = len(self.candidate_sites)
        self.positions = np.vstack([self.node_positions, self.candidate_sites])
        self.positions.flags.writeable = False

        if validate:
            self._validate()

    def _validate(self):
        if self.n_nodes < 2:
            raise ValueError(f"A deployment needs at least 2 nodes, got {self.n_nodes}")

        if self.disk_radius <= 0:
            raise ValueError(f"Disk radius must be positive, got {self.disk_radius}")

        width, height = self.area
        outside = (
            (self.positions[:, 0] < 0)
            | (self.positions[:, 0] > width)
            | (self.positions[:, 1] < 0)
            | (self.positions[:, 1] > height)
        )
        if np.any(outside):
            index = int(np.flatnonzero(outside)[0])
            raise ValueError(
                f"Point {index} at {tuple(self.positions[index])} lies outside the "
                f"{width} x {height} area"
            )

    @property
    def n_vertices(self):
        return self.n_nodes + self.n_sites

    def site_vertex(self, site):
        """Graph vertex index of candidate site `site`"""
        return self.n_nodes + site

    @classmethod
    def sample(
        cls,
        rng,
        n_nodes=20,
        n_sites=16,
        disk_radius=2.0,
        area=(6.0, 6.0),
        site_layout="grid",
    ):
        """
        Sample a deployment with nodes i.i.d. uniform over the area

        Parameters
        ----------
        rng : numpy.random.Generator

        site_layout : str
            "grid" places the candidate sites on a regular grid of cell
            centres, "uniform" samples them uniformly like the nodes

        Returns
        -------
        deployment : Deployment
        """
        width, height = area
        nodes = rng.uniform((0.0, 0.0), (width, height), size=(n_nodes, 2))

        if site_layout == "grid":
            sites = grid_sites(n_sites, area)
        elif site_layout == "uniform":
            sites = rng.uniform((0.0, 0.0), (width, height), size=(n_sites, 2))
        else:
            raise ValueError(f"Unsupported site layout '{site_layout}'. Use 'grid' or 'uniform'.")

        return cls(nodes, sites, disk_radius, area)

    def region(self, bounds, reach=False):
        """
        Extract the nodes and candidate sites lying in a rectangular region

        Parameters
        ----------
        bounds : tuple (float)
            (x_min, x_max, y_min, y_max). The lower edges are inclusive, the
            upper edges exclusive unless they coincide with the area border.

        reach : bool
            Also keep the nodes outside the region that lie strictly within
            the disk radius of a regional site (default = False)

        Returns
        -------
        deployment : Deployment
            Regional deployment (not validated)

        node_index : ndarray (int)
            Global index of every regional node

        site_index : ndarray (int)
            Global index of every regional site
        """
        inside = self._in_region(self.node_positions, bounds)
        site_index = np.flatnonzero(self._in_region(self.candidate_sites, bounds))

        if reach:
            neighbour_list = find_neighbours(
                self.node_positions, self.candidate_sites[site_index], self.disk_radius
            )
            for neighbours in neighbour_list:
                inside[neighbours] = True

        node_index = np.flatnonzero(inside)
        deployment = Deployment(
            self.node_positions[node_index],
            self.candidate_sites[site_index],
            self.disk_radius,
            self.area,
            validate=False,
        )
        return deployment, node_index, site_index

    def _in_region(self, points, bounds):
        x_min, x_max, y_min, y_max = bounds
        width, height = self.area
        in_x = (points[:, 0] >= x_min) & (
            (points[:, 0] < x_max) | ((x_max >= width) & (points[:, 0] <= x_max))
        )
        in_y = (points[:, 1] >= y_min) & (
            (points[:, 1] < y_max) | ((y_max >= height) & (points[:, 1] <= y_max))
        )
        return in_x & in_y

    def save(self, path):
        """
        Write the deployment as text: a header line `n Z R width height`,
        then one `x y` line per node, then one per candidate site
        """
        with open(path, "w", newline="\n") as f:
            f.write(self.to_text())

    def to_text(self):
        lines = [
            f"{self.n_nodes} {self.n_sites} {self.disk_radius!r} "
            f"{self.area[0]!r} {self.area[1]!r}"
        ]
        lines += [f"{x!r} {y!r}" for x, y in self.positions.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, path):
        """Read a deployment written by Deployment.save"""
        with open(path) as f:
            return cls.from_text(f.read())

    @classmethod
    def from_text(cls, text):
        lines = [line.split() for line in text.splitlines() if line.strip()]
        if not lines or len(lines[0]) != 5:
            raise ValueError("Deployment header must read 'n Z R width height'")

        n_nodes, n_sites = int(lines[0][0]), int(lines[0][1])
        disk_radius, width, height = (float(v) for v in lines[0][2:])

        points = np.array(lines[1:], dtype=float).reshape(-1, 2)
        if len(points) != n_nodes + n_sites:
            raise ValueError(
                f"Expected {n_nodes + n_sites} points after the header, found {len(points)}"
            )

        return cls(points[:n_nodes], points[n_nodes:], disk_radius, (width, height))

    def __repr__(self):
        return (
            f"Deployment(n_nodes={self.n_nodes}, n_sites={self.n_sites}, "
            f"disk_radius={self.disk_radius}, area={self.area})"
        )


def grid_sites(n_sites, area):
    """
    Candidate sites on a regular grid of cell centres spanning the area,
    filled row by row (16 sites on a 6 x 6 area gives a 4 x 4 grid at 0.75,
    2.25, 3.75, 5.25)
    """
    width, height = area
    n_cols = int(np.ceil(np.sqrt(n_sites)))
    n_rows = int(np.ceil(n_sites / n_cols)) if n_sites else 0

    xs = (np.arange(n_cols) + 0.5) * width / n_cols
    ys = (np.arange(n_rows) + 0.5) * height / max(n_rows, 1)
    grid = np.array([(x, y) for y in ys for x in xs]).reshape(-1, 2)

    return grid[:n_sites]


def _as_points(points):
    points = np.array(points, dtype=float).reshape(-1, 2)
    points.flags.writeable = False
    return points
