"""
Heuristic structural features (SFs), node positional encodings (PEs),
synthetic graph generators and substructure counters.
"""
import numpy as np
from scipy import linalg, special
from scipy.sparse import csgraph, identity, diags
from scipy.sparse.linalg import eigsh
from vislink import check, graph, utils

SF_KINDS = ('CN', 'AA', 'RA', 'SPD', 'DRNL', 'DE')
PAIR_SF_KINDS = ('CN', 'AA', 'RA', 'SPD')
INTEGER_SF_KINDS = ('CN', 'SPD', 'DRNL')
PE_KINDS = ('image_coords', 'laplacian', 'distance', 'degree')
SUBSTRUCTURE_KINDS = ('triangle', 'three_star')
RANDOM_REGULAR_CHOICES = ((10, 6), (15, 6), (20, 5), (30, 5))

# graphs up to this size are diagonalized densely
DENSE_EIGEN_LIMIT = 1000
ZERO_EIGENVALUE = 1e-8


def common_neighbors(g, u, v):
    """Returns the sorted common neighbors of `u` and `v`."""
    return np.intersect1d(graph.neighbors(g, u), graph.neighbors(g, v),
                          assume_unique=True)


def _cn(g, u, v):
    return int(common_neighbors(g, u, v).size)


def _aa(g, u, v):
    deg = graph.degrees(g)[common_neighbors(g, u, v)]
    # ln(1) = 0
    deg = deg[deg > 1]
    return float(np.sum(1 / np.log(deg)))


def _ra(g, u, v):
    deg = graph.degrees(g)[common_neighbors(g, u, v)]
    return float(np.sum(1 / deg))


def _spd(g, u, v):
    return int(graph.bfs_distances(g, [u])[v])


pair_sf_functions = {'CN': _cn, 'AA': _aa, 'RA': _ra, 'SPD': _spd}


def pair_sf(g, kind, u, v):
    """Computes a pairwise structural feature.

    Parameters
    ----------
    g : named tuple
        Graph.
    kind : str
        One of `'CN'`, `'AA'`, `'RA'` and `'SPD'`.
    u, v : int
        Distinct node ids.

    Returns
    -------
    int or float
        Feature value. SPD is `graph.UNREACHABLE` for disconnected pairs.
    """
    check.one_of(kind, PAIR_SF_KINDS, 'structural feature')
    check.node_id(u, g.n, 'u')
    check.node_id(v, g.n, 'v')
    check.distinct_pair(u, v)
    return pair_sf_functions[kind](g, u, v)


def drnl_label(du, dv):
    """Double-radius label of a node at distances `du` and `dv` from the
    two targets. Unreachable nodes get 0."""
    if du == graph.UNREACHABLE or dv == graph.UNREACHABLE:
        return 0
    d = du + dv
    return int(1 + min(du, dv) + (d // 2) * (d // 2 + d % 2 - 1))


def drnl_labels(g, u, v, view):
    """Labels the nodes of an enclosing subgraph with DRNL.

    `du` is the distance to `u` in the graph with `v` removed, and `dv` the
    distance to `v` with `u` removed.

    Parameters
    ----------
    g : named tuple
        Graph.
    u, v : int
        Target nodes.
    view : named tuple
        Enclosing subgraph view of `(u, v)`.

    Returns
    -------
    ndarray
        Integer label of every node in `view.local_nodes`.
    """
    check.distinct_pair(u, v)
    to_u = graph.bfs_distances(g, [u], removed=v)
    to_v = graph.bfs_distances(g, [v], removed=u)
    labels = np.array([drnl_label(to_u[x], to_v[x])
                       for x in view.local_nodes], dtype=np.int64)
    labels[(view.local_nodes == u) | (view.local_nodes == v)] = 1
    return labels


def _degree_pe(g, dim, **kwargs):
    deg = graph.degrees(g).astype(np.float64)
    return np.repeat(deg[:, None], dim, axis=1)


def normalized_laplacian(g):
    """Returns the symmetric normalized Laplacian `I - D^-1/2 A D^-1/2`.

    Isolated nodes keep a unit diagonal.
    """
    deg = graph.degrees(g).astype(np.float64)
    inv_sqrt = np.zeros_like(deg)
    inv_sqrt[deg > 0] = deg[deg > 0] ** -0.5
    d = diags(inv_sqrt)
    return (identity(g.n, format='csr') - d @ g.adjacency @ d).tocsr()


def _laplacian_pe(g, dim, **kwargs):
    if dim >= g.n:
        raise ValueError(
            'Laplacian positional encoding needs \'dim\' < n! Received '
            'dim={} for n={}.'.format(dim, g.n))
    laplacian = normalized_laplacian(g)
    if g.n <= DENSE_EIGEN_LIMIT:
        values, vectors = linalg.eigh(laplacian.toarray())
    else:
        n_components = csgraph.connected_components(g.adjacency)[0]
        values, vectors = eigsh(laplacian, k=min(g.n - 1, dim + n_components),
                                which='SA')
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]

    vectors = vectors[:, values > ZERO_EIGENVALUE][:, :dim]
    # largest-magnitude entry positive
    peaks = vectors[np.abs(vectors).argmax(axis=0), np.arange(vectors.shape[1])]
    vectors = vectors * np.where(peaks < 0, -1, 1)

    if vectors.shape[1] < dim:
        utils.warning(
            'Graph has only {} nonzero Laplacian eigenvalues; padding the '
            'positional encoding with {} zero columns.'.format(
                vectors.shape[1], dim - vectors.shape[1]), **kwargs)
        vectors = np.hstack([vectors, np.zeros((g.n, dim - vectors.shape[1]))])
    return vectors


def degree_anchors(g, count):
    """Returns the `count` highest-degree nodes, ties broken by id."""
    deg = graph.degrees(g)
    return np.lexsort((np.arange(g.n), -deg))[:count]


def _distance_pe(g, dim, max_distance=7, **kwargs):
    if dim > g.n:
        raise ValueError(
            'Distance positional encoding needs \'dim\' <= n! Received '
            'dim={} for n={}.'.format(dim, g.n))
    anchors = degree_anchors(g, dim)
    dist = csgraph.shortest_path(g.adjacency, unweighted=True,
                                 indices=anchors)
    dist = np.minimum(np.nan_to_num(dist, posinf=max_distance), max_distance)
    return dist.T.astype(np.float64)


def _image_coords_pe(g, dim, aux=None, **kwargs):
    if aux is None:
        raise ValueError(
            'Image coordinate encoding needs node coordinates from a layout '
            'passed as \'aux\'!')
    aux = np.asarray(aux, dtype=np.float64)
    if aux.shape != (g.n, 2) or dim != 2:
        raise ValueError(
            'Image coordinate encoding is 2-dimensional! Received dim={} and '
            'coordinates of shape {}.'.format(dim, aux.shape))
    return aux


pe_functions = {
    'image_coords': _image_coords_pe,
    'laplacian': _laplacian_pe,
    'distance': _distance_pe,
    'degree': _degree_pe,
}


def node_pe(g, kind, dim, aux=None, **kwargs):
    """Computes node positional encodings.

    Parameters
    ----------
    g : named tuple
        Graph.
    kind : str
        One of `'image_coords'`, `'laplacian'`, `'distance'` and `'degree'`.
    dim : int
        Encoding dimension.
    aux : ndarray, optional
        `n x 2` node coordinates, required by `'image_coords'`.
    **kwargs
        max_distance : int, optional
            Truncation distance of `'distance'` encodings.
        verbose : int, optional
            Warnings are shown unless verbose is 0.

    Returns
    -------
    ndarray
        Matrix of shape `n x dim`.
    """
    check.one_of(kind, PE_KINDS, 'positional encoding')
    check.integer(dim, 'dim')
    check.positive_number(dim, 'dim')
    return pe_functions[kind](g, dim, aux=aux, **kwargs)


def gen_erdos_renyi(n, p, seed=0):
    """Samples an Erdos-Renyi graph where each edge exists with probability
    `p`."""
    check.integer(n, 'n')
    check.non_negative_number(n, 'n')
    check.probability(p, 'p')
    rng = np.random.default_rng(seed)
    u, v = np.triu_indices(n, k=1)
    keep = rng.random(u.size) < p
    return graph.from_edges(n, np.stack([u[keep], v[keep]], axis=1))


def _pairing_attempt(m, d, rng, max_rejections):
    stubs = list(np.repeat(np.arange(m), d))
    edges = set()
    while stubs:
        for _ in range(max_rejections):
            i, j = rng.choice(len(stubs), size=2, replace=False)
            a, b = sorted((int(stubs[i]), int(stubs[j])))
            if a != b and (a, b) not in edges:
                break
        else:
            return None
        edges.add((a, b))
        for index in sorted((i, j), reverse=True):
            del stubs[index]
    return np.array(sorted(edges), dtype=np.int64)


def gen_random_regular(m, d, seed=0, max_restarts=1000, max_rejections=100):
    """Samples a `d`-regular graph on `m` nodes with the pairing model.

    Stubs are paired at random; a pairing that would create a self-loop or
    a multi-edge is redrawn, and the whole construction restarts when no
    valid pairing is found.

    Parameters
    ----------
    m : int
        Number of nodes.
    d : int
        Degree of every node.
    seed : int, optional
        Random seed.
    max_restarts : int, optional
        Maximum number of restarts.
    max_rejections : int, optional
        Maximum number of redraws for a single pairing.

    Returns
    -------
    named tuple
        Graph.

    Raises
    -------
    ValueError
        If `m*d` is odd or `d >= m`.
    """
    check.integer(m, 'm')
    check.integer(d, 'd')
    check.non_negative_number(d, 'd')
    if (m * d) % 2 or d >= m:
        raise ValueError(
            'A {}-regular graph on {} nodes does not exist! \'m*d\' should '
            'be even and \'d\' < \'m\'.'.format(d, m))
    if d == 0:
        return graph.from_edges(m, np.empty((0, 2), dtype=np.int64))

    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        edges = _pairing_attempt(m, d, rng, max_rejections)
        if edges is not None:
            return graph.from_edges(m, edges)
    raise RuntimeError(
        'Failed to sample a {}-regular graph on {} nodes after {} '
        'restarts.'.format(d, m, max_restarts))


def count_substructure(g, kind):
    """Counts triangles (3-cliques) or 3-stars (`sum_v C(deg v, 3)`)."""
    check.one_of(kind, SUBSTRUCTURE_KINDS, 'substructure')
    if kind == 'triangle':
        a = g.adjacency
        return int(round((a @ a).multiply(a).sum() / 6))
    return int(round(special.comb(graph.degrees(g), 3).sum()))


def _max_drnl(g, u, v, k):
    view = graph.k_hop_link_subgraph(g, u, v, k, mask=True)
    return int(drnl_labels(g, u, v, view).max())


def pair_targets(g, kind, pairs, k=2, de_dim=4, **kwargs):
    """Computes probe targets of one SF kind for a list of pairs.

    Parameters
    ----------
    g : named tuple
        Graph.
    kind : str
        Any of `SF_KINDS`.
    pairs : array_like
        Node pairs of shape `m x 2`.
    k : int, optional
        Visual perception scope. SPD is clamped to `2k+2` and DRNL is the
        largest label in the k-hop enclosing subgraph.
    de_dim : int, optional
        Number of anchors of the distance encoding.

    Returns
    -------
    ndarray
        Targets of shape `m` (or `m x 2*de_dim` for `'DE'`).
    """
    check.one_of(kind, SF_KINDS, 'structural feature')
    # rows keep their order; each pair is oriented u < v
    pairs = np.sort(check.pair_array(pairs, g.n), axis=1)
    if kind == 'DE':
        rows = _distance_pe(g, min(de_dim, g.n), **kwargs)
        return np.hstack([rows[pairs[:, 0]], rows[pairs[:, 1]]])
    if kind == 'DRNL':
        values = [_max_drnl(g, int(u), int(v), k) for u, v in pairs]
    else:
        values = [pair_sf(g, kind, int(u), int(v)) for u, v in pairs]
    values = np.array(values, dtype=np.float64)
    if kind == 'SPD':
        values = np.minimum(values, 2 * k + 2)
    return values
