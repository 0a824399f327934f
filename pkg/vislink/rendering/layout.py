from collections import namedtuple
import numpy as np
from scipy import linalg

LayoutResult = namedtuple('LayoutResult', ['positions'])

# lower bound on the distance used by the repulsive force
EPS_MIN = 0.01
MARGIN = 0.05


def normalize(positions):
    """Fits positions into `[0.05, 0.95]^2`, preserving the aspect ratio.

    The longer side spans the whole range and the shorter side is centered.
    Coincident positions are all placed at `(0.5, 0.5)`.

    Parameters
    ----------
    positions : ndarray
        Array of shape `n x 2`.

    Returns
    -------
    ndarray
        Normalized positions.
    """
    low = positions.min(axis=0)
    spans = positions.max(axis=0) - low
    extent = spans.max()
    if extent <= 0:
        return np.full_like(positions, 0.5)
    scale = (1 - 2*MARGIN) / extent
    offset = MARGIN + (1 - 2*MARGIN - spans*scale) / 2
    return (positions - low) * scale + offset


def force_directed(n, edges, iterations, rng):
    """Fruchterman-Reingold placement in the unit square.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : ndarray
        Local edges of shape `m x 2`.
    iterations : int
        Number of iterations.
    rng : numpy.random.Generator
        Generator for the initial positions.

    Returns
    -------
    ndarray
        Positions of shape `n x 2`.
    """
    positions = rng.random((n, 2))
    if n == 1:
        return positions

    k = np.sqrt(1 / n)
    temperature = 0.1
    dt = temperature / (iterations + 1)
    for _ in range(iterations):
        delta = positions[:, None, :] - positions[None, :, :]
        distance = np.maximum(np.linalg.norm(delta, axis=-1), EPS_MIN)
        np.fill_diagonal(distance, np.inf)
        forces = np.sum(delta * (k*k / distance**2)[:, :, None], axis=1)

        if edges.size:
            delta = positions[edges[:, 0]] - positions[edges[:, 1]]
            distance = np.maximum(np.linalg.norm(delta, axis=-1), EPS_MIN)
            pull = delta * (distance / k)[:, None]
            np.subtract.at(forces, edges[:, 0], pull)
            np.add.at(forces, edges[:, 1], pull)

        magnitude = np.linalg.norm(forces, axis=-1)
        step = np.where(magnitude > 0,
                        np.minimum(magnitude, temperature) /
                        np.maximum(magnitude, 1e-12), 0)
        positions = np.clip(positions + forces * step[:, None], 0, 1)
        temperature = max(temperature - dt, 0)
    return positions


def circular(n, edges, rng):
    """Places nodes on a circle in local order, starting from the center."""
    angles = 2*np.pi*np.arange(n) / max(n, 1)
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def spectral(n, edges, rng):
    """Places nodes by the two smallest nontrivial Laplacian eigenvectors.

    Falls back to the circular placement when those are degenerate.
    """
    if n < 3 or not edges.size:
        return circular(n, edges, rng)
    adjacency = np.zeros((n, n))
    adjacency[edges[:, 0], edges[:, 1]] = 1
    adjacency[edges[:, 1], edges[:, 0]] = 1
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    _, vectors = linalg.eigh(laplacian)
    positions = vectors[:, 1:3]
    if np.ptp(positions, axis=0).max() < 1e-9:
        return circular(n, edges, rng)
    return positions


layout_functions = {
    'force_directed': force_directed,
    'circular': circular,
    'spectral': spectral,
}


def place(n, edges, kind, iterations, seed):
    """Computes normalized positions of `n` local nodes.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : ndarray
        Local edges.
    kind : {'force_directed', 'circular', 'spectral'}
        Layout variant.
    iterations : int
        Number of force-directed iterations.
    seed : int
        Seed of the initial positions.

    Returns
    -------
    named tuple
        Layout with `positions` of shape `n x 2` in `[0.05, 0.95]^2`.
    """
    if n == 1:
        return LayoutResult(np.full((1, 2), 0.5))
    rng = np.random.default_rng(seed)
    function = layout_functions[kind]
    if kind == 'force_directed':
        positions = function(n, edges, iterations, rng)
    else:
        positions = function(n, edges, rng)
    return LayoutResult(normalize(positions))
