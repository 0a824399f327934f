"""
Graph data model, ingestion, splits, negative sampling and k-hop subgraph
extraction around links (GVN) and nodes (E-GVN).

Graphs are undirected and simple. Edges are stored once as canonical pairs
`u < v` and mirrored into a symmetric sparse adjacency matrix whose rows are
the sorted neighbor lists.
"""
import os
from collections import deque, namedtuple
import numpy as np
from scipy import sparse
from vislink import check, utils

Graph = namedtuple('Graph', ['n', 'edges', 'adjacency', 'features'])
Link = namedtuple('Link', ['u', 'v'])
Node = namedtuple('Node', ['v'])
SubgraphView = namedtuple('SubgraphView', [
    'center', 'k', 'local_nodes', 'local_edges', 'mask_center_link'])
SplitSet = namedtuple('SplitSet', [
    'train_pos', 'valid_pos', 'test_pos', 'valid_neg', 'test_neg',
    'use_valid_as_message_paths'])

UNREACHABLE = np.iinfo(np.int64).max
SPLIT_FILES = ('train_pos', 'valid_pos', 'valid_neg', 'test_pos', 'test_neg')
# above this many candidate pairs, negatives are drawn by rejection
ENUMERATION_LIMIT = 2_000_000


def canonical_pairs(pairs):
    """Orders each pair as `u < v`, then sorts and deduplicates the rows.

    Parameters
    ----------
    pairs : ndarray
        Array of shape `m x 2`.

    Returns
    -------
    ndarray
        Canonical pairs.
    """
    pairs = np.sort(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=1)
    if pairs.shape[0] == 0:
        return pairs
    return np.unique(pairs, axis=0)


def from_edges(n, pairs, features=None):
    """Builds a graph from node pairs.

    Parameters
    ----------
    n : int
        Number of nodes.
    pairs : array_like
        Undirected edges of shape `m x 2`, in any orientation and possibly
        repeated.
    features : array_like, optional
        Node feature matrix of shape `n x F`.

    Returns
    -------
    named tuple
        Graph with fields `n`, `edges`, `adjacency` and `features`.

    Raises
    -------
    ValueError
        If an endpoint is out of range or an edge is a self-loop.
    """
    check.integer(n, 'n')
    check.non_negative_number(n, 'n')
    pairs = check.pair_array(pairs, n, 'edges')
    loops = pairs[pairs[:, 0] == pairs[:, 1]]
    if loops.shape[0]:
        check.distinct_pair(*loops[0])
    edges = canonical_pairs(pairs)

    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    adjacency = sparse.csr_matrix(
        (np.ones(rows.size, dtype=np.float64), (rows, cols)), shape=(n, n))
    adjacency.sort_indices()

    if features is not None:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(n, -1)
        check.n_dimensional(features, [2], 'features')
        check.numeric_array(features, 'features')
        check.finite_array(features, 'features')
        if features.shape[0] != n:
            raise ValueError(
                '\'features\' should have {} rows! Instead received '
                '{}.'.format(n, features.shape[0]))

    return Graph(n, edges, adjacency, features)


def feature_dim(g):
    """Returns the node feature dimension `F` (0 for featureless graphs)."""
    return 0 if g.features is None else g.features.shape[1]


def neighbors(g, v):
    """Returns the sorted neighbor list of node `v`."""
    return g.adjacency.indices[g.adjacency.indptr[v]:g.adjacency.indptr[v + 1]]


def degrees(g):
    """Returns the degree of every node."""
    return np.diff(g.adjacency.indptr)


def has_edge(g, u, v):
    """Checks whether the undirected edge `(u, v)` is in the graph."""
    row = neighbors(g, u)
    i = np.searchsorted(row, v)
    return bool(i < row.size and row[i] == v)


def message_graph(g, pairs):
    """Returns a graph over the same nodes and features with other edges.

    Used to build the message-passing adjacency from the training links
    (and, optionally, the validation links).
    """
    return from_edges(g.n, pairs, g.features)


def graph_digest(g):
    """Returns a digest of the node count and canonical edge set."""
    return utils.digest(str(g.n), g.edges)


def read_pairs(path):
    """Parses an edge-list file into raw pairs.

    Parameters
    ----------
    path : str
        Path to a UTF-8 text file with one `u<ws>v` pair per line. Lines
        starting with '#' and blank lines are ignored.

    Returns
    -------
    ndarray
        Pairs of shape `m x 2`, in file order.

    Raises
    -------
    EdgeListError
        If a line does not hold exactly two non-negative integers or holds
        a self-loop.
    """
    pairs = []
    with open(path, encoding='utf-8') as handle:
        for line_number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            tokens = stripped.split()
            if len(tokens) != 2 or not all(
                    t.isascii() and t.isdigit() for t in tokens):
                raise check.EdgeListError(
                    '{}:{}: expected two non-negative integers, got '
                    '\'{}\'.'.format(path, line_number, stripped))
            u, v = int(tokens[0]), int(tokens[1])
            if u == v:
                raise check.EdgeListError(
                    '{}:{}: self-loop ({}, {}) is not allowed.'.format(
                        path, line_number, u, v))
            pairs.append((u, v))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def load_edge_list(path, n_hint=None):
    """Loads an undirected graph from an edge-list file.

    Parameters
    ----------
    path : str
        Path to the edge-list file.
    n_hint : int, optional
        Number of nodes. Used if larger than the largest id plus one.

    Returns
    -------
    named tuple
        Graph with symmetric-closed, deduplicated edges.
    """
    pairs = read_pairs(path)
    n = int(pairs.max()) + 1 if pairs.size else 0
    if n_hint is not None:
        n = max(n, int(n_hint))
    return from_edges(n, pairs)


def load_features(path, n):
    """Loads an `n x F` node feature matrix from a whitespace-separated file."""
    features = np.loadtxt(path, dtype=np.float64, ndmin=2)
    if features.shape[0] != n:
        raise check.ConfigurationError(
            'Feature file \'{}\' has {} rows but the graph has {} '
            'nodes.'.format(path, features.shape[0], n))
    return features


def bfs_distances(g, sources, removed=None, cutoff=None):
    """Computes unweighted multi-source BFS distances.

    Parameters
    ----------
    g : named tuple
        Graph.
    sources : iterable of int
        Source nodes (distance 0).
    removed : int, optional
        Node treated as absent from the graph.
    cutoff : int, optional
        Nodes farther than `cutoff` are left unreached.

    Returns
    -------
    ndarray
        Distances with `UNREACHABLE` for nodes that are not reached.
    """
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    queue = deque()
    for s in sources:
        if s != removed and dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    indptr, indices = g.adjacency.indptr, g.adjacency.indices
    while queue:
        x = queue.popleft()
        if cutoff is not None and dist[x] >= cutoff:
            continue
        for y in indices[indptr[x]:indptr[x + 1]]:
            if y != removed and dist[y] == UNREACHABLE:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _view(g, center, centers, k, mask):
    dist = bfs_distances(g, centers, cutoff=k)
    others = np.flatnonzero(dist <= k)
    others = others[~np.isin(others, centers)]
    local_nodes = np.concatenate(
        [np.asarray(centers, dtype=np.int64), np.sort(others)])
    local_ids = np.full(g.n, -1, dtype=np.int64)
    local_ids[local_nodes] = np.arange(local_nodes.size)

    # an edge is walked within k hops iff its nearer endpoint is within k - 1
    edges = g.edges
    nearer = np.minimum(dist[edges[:, 0]], dist[edges[:, 1]])
    edges = edges[nearer <= k - 1]
    if mask and isinstance(center, Link):
        u, v = sorted(center)
        edges = edges[~((edges[:, 0] == u) & (edges[:, 1] == v))]

    local_edges = canonical_pairs(local_ids[edges])
    return SubgraphView(center, k, local_nodes, local_edges, bool(mask))


def k_hop_link_subgraph(g, u, v, k, mask=True):
    """Extracts the k-hop subgraph enclosing the link `(u, v)`.

    Parameters
    ----------
    g : named tuple
        Graph.
    u, v : int
        Endpoints of the queried link.
    k : int
        Visual perception scope, between 1 and 3.
    mask : bool, optional
        If True, the link `(u, v)` itself is left out of the view.

    Returns
    -------
    named tuple
        View with local nodes ordered `u`, `v`, then by ascending global id.
    """
    check.hop_count(k)
    check.node_id(u, g.n, 'u')
    check.node_id(v, g.n, 'v')
    check.distinct_pair(u, v)
    return _view(g, Link(int(u), int(v)), [int(u), int(v)], k, mask)


def k_hop_node_subgraph(g, v, k):
    """Extracts the k-hop subgraph centered at node `v`.

    Parameters
    ----------
    g : named tuple
        Graph.
    v : int
        Center node.
    k : int
        Visual perception scope, between 1 and 3.

    Returns
    -------
    named tuple
        View with `v` first, then the other nodes by ascending global id.
    """
    check.hop_count(k)
    check.node_id(v, g.n, 'v')
    return _view(g, Node(int(v)), [int(v)], k, False)


def center_count(view):
    """Returns the number of center nodes of a view (2 for links, 1 for nodes)."""
    return 2 if isinstance(view.center, Link) else 1


def truncate_view(view, max_nodes):
    """Keeps the first `max_nodes` local nodes in BFS order from the center.

    Parameters
    ----------
    view : named tuple
        Subgraph view.
    max_nodes : int
        Maximum number of nodes to keep.

    Returns
    -------
    named tuple
        The same view if it is small enough, otherwise a down-sampled view
        whose local ids follow the original order.
    """
    size = view.local_nodes.size
    if size <= max_nodes:
        return view

    local = from_edges(size, view.local_edges)
    order = []
    seen = np.zeros(size, dtype=bool)
    queue = deque(range(center_count(view)))
    seen[list(queue)] = True
    while queue and len(order) < max_nodes:
        x = queue.popleft()
        order.append(x)
        for y in neighbors(local, x):
            if not seen[y]:
                seen[y] = True
                queue.append(y)

    keep = np.sort(np.array(order, dtype=np.int64))
    new_ids = np.full(size, -1, dtype=np.int64)
    new_ids[keep] = np.arange(keep.size)
    edges = view.local_edges
    edges = edges[(new_ids[edges[:, 0]] >= 0) & (new_ids[edges[:, 1]] >= 0)]
    return view._replace(local_nodes=view.local_nodes[keep],
                         local_edges=canonical_pairs(new_ids[edges]))


def _pair_codes(pairs, n):
    pairs = np.sort(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=1)
    return pairs[:, 0] * n + pairs[:, 1]


def sample_negatives(g, count, exclude=None, seed=0):
    """Samples distinct node pairs that are neither edges nor excluded.

    Parameters
    ----------
    g : named tuple
        Graph.
    count : int
        Number of pairs.
    exclude : array_like, optional
        Additional pairs (either orientation) that must not be sampled.
    seed : int, optional
        Random seed.

    Returns
    -------
    ndarray
        Canonical pairs of shape `count x 2`.

    Raises
    -------
    CapacityError
        If fewer than `count` eligible pairs exist.
    """
    check.integer(count, 'count')
    check.non_negative_number(count, 'count')
    n = g.n
    forbidden = set(_pair_codes(g.edges, n).tolist())
    if exclude is not None and np.size(exclude):
        exclude = check.pair_array(exclude, n, 'exclude')
        exclude = exclude[exclude[:, 0] != exclude[:, 1]]
        forbidden.update(_pair_codes(exclude, n).tolist())

    total = n * (n - 1) // 2
    available = total - len(forbidden)
    if count > available:
        raise check.CapacityError(
            'Requested {} negative pairs but only {} non-edges are '
            'available!'.format(count, available))

    rng = np.random.default_rng(seed)
    if total <= ENUMERATION_LIMIT:
        u, v = np.triu_indices(n, k=1)
        codes = u * n + v
        eligible = ~np.isin(codes, np.fromiter(forbidden, dtype=np.int64,
                                               count=len(forbidden)))
        chosen = rng.choice(np.flatnonzero(eligible), size=count,
                            replace=False)
        return np.stack([u[chosen], v[chosen]], axis=1).astype(np.int64)

    sampled = []
    taken = set()
    while len(sampled) < count:
        draw = rng.integers(0, n, size=(2 * (count - len(sampled)) + 16, 2))
        draw = draw[draw[:, 0] != draw[:, 1]]
        for code in _pair_codes(draw, n).tolist():
            if code in forbidden or code in taken:
                continue
            taken.add(code)
            sampled.append(code)
            if len(sampled) == count:
                break
    sampled = np.array(sampled, dtype=np.int64)
    return np.stack([sampled // n, sampled % n], axis=1)


def split_sizes(m, ratios):
    """Returns `(train, valid, test)` sizes: floors for valid and test, the
    remainder for train."""
    valid = int(np.floor(ratios[1] * m + 1e-9))
    test = int(np.floor(ratios[2] * m + 1e-9))
    return m - valid - test, valid, test


def make_splits(g, ratios=(0.7, 0.1, 0.2), seed=0, neg_per_pos=100,
                use_valid_as_message_paths=False):
    """Randomly splits the edges into training, validation and test links.

    Parameters
    ----------
    g : named tuple
        Graph.
    ratios : tuple of float, optional
        Training, validation and test ratios.
    seed : int, optional
        Random seed. Identical seeds give identical splits.
    neg_per_pos : int, optional
        Evaluation negatives per positive link, capped by the number of
        available non-edges.
    use_valid_as_message_paths : bool, optional
        If True, validation links also act as message-passing paths.

    Returns
    -------
    named tuple
        Split set. Negatives are canonical non-edges; validation and test
        negatives are disjoint.

    Raises
    -------
    ConfigurationError
        If the graph has fewer than 10 edges.
    """
    check.ratios(ratios)
    m = g.edges.shape[0]
    if m < 10:
        raise check.ConfigurationError(
            'Splitting needs at least 10 edges but the graph has '
            '{}.'.format(m))

    n_train, n_valid, n_test = split_sizes(m, ratios)
    rng = np.random.default_rng(utils.derive_seed(seed, 'splits'))
    perm = rng.permutation(m)
    valid_pos = g.edges[np.sort(perm[:n_valid])]
    test_pos = g.edges[np.sort(perm[n_valid:n_valid + n_test])]
    train_pos = g.edges[np.sort(perm[n_valid + n_test:])]

    available = g.n * (g.n - 1) // 2 - m
    n_valid_neg = min(neg_per_pos * n_valid, available)
    valid_neg = sample_negatives(
        g, n_valid_neg, seed=utils.derive_seed(seed, 'valid-negatives'))
    n_test_neg = min(neg_per_pos * n_test, available - n_valid_neg)
    test_neg = sample_negatives(
        g, n_test_neg, exclude=valid_neg,
        seed=utils.derive_seed(seed, 'test-negatives'))

    return SplitSet(train_pos, valid_pos, test_pos, valid_neg, test_neg,
                    bool(use_valid_as_message_paths))


def load_splits(directory, g, use_valid_as_message_paths=False):
    """Loads user-provided splits from `<role>.txt` edge-list files.

    Parameters
    ----------
    directory : str
        Directory containing `train_pos.txt`, `valid_pos.txt`,
        `valid_neg.txt`, `test_pos.txt` and `test_neg.txt`.
    g : named tuple
        Graph the splits refer to.
    use_valid_as_message_paths : bool, optional
        If True, validation links also act as message-passing paths.

    Returns
    -------
    named tuple
        Split set.
    """
    roles = {}
    for role in SPLIT_FILES:
        path = os.path.join(directory, role + '.txt')
        if not os.path.exists(path):
            raise check.ConfigurationError(
                'Split file \'{}\' does not exist.'.format(path))
        roles[role] = check.pair_array(read_pairs(path), g.n, role)
    splits = SplitSet(use_valid_as_message_paths=bool(
        use_valid_as_message_paths), **roles)
    split_requirements(g, splits)
    return splits


def message_pairs(splits):
    """Returns the links used as message-passing paths during training."""
    if splits.use_valid_as_message_paths:
        return np.concatenate([splits.train_pos, splits.valid_pos])
    return splits.train_pos


def split_requirements(g, splits):
    """Checks that positive splits are disjoint and negatives are non-edges.

    Raises
    -------
    ValueError
        If any requirement is violated.
    """
    positives = [set(_pair_codes(p, g.n).tolist())
                 for p in (splits.train_pos, splits.valid_pos, splits.test_pos)]
    for i in range(3):
        for j in range(i + 1, 3):
            if positives[i] & positives[j]:
                raise ValueError(
                    'Positive splits \'{}\' and \'{}\' overlap!'.format(
                        SPLIT_FILES[[0, 1, 3][i]], SPLIT_FILES[[0, 1, 3][j]]))
    edges = set(_pair_codes(g.edges, g.n).tolist())
    for name in ('valid_neg', 'test_neg'):
        if set(_pair_codes(getattr(splits, name), g.n).tolist()) & edges:
            raise ValueError(
                '\'{}\' contains pairs that are edges of the graph!'.format(
                    name))
