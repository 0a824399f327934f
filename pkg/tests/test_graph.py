from vislink import check, graph
import networkx as nx
import numpy as np
import pytest

t1 = graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
c6 = graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
k4 = graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
isolated = graph.from_edges(5, [(0, 1)])

# k_hop_link_subgraph()
link_subgraph_graphs = [c6, t1, isolated, isolated]
link_subgraph_pairs = [(0, 3), (0, 2), (2, 3), (3, 4)]
link_subgraph_k = [1, 1, 1, 3]
link_subgraph_nodes = [{0, 1, 2, 3, 4, 5},
                       {0, 1, 2, 3},
                       {2, 3},
                       {3, 4}]
link_subgraph_edges = [{(0, 5), (0, 1), (2, 3), (3, 4)},
                       {(0, 1), (1, 2), (2, 3)},
                       set(),
                       set()]
link_subgraph_arguments = zip(
    link_subgraph_graphs, link_subgraph_pairs, link_subgraph_k,
    link_subgraph_nodes, link_subgraph_edges)

# k_hop_node_subgraph()
node_subgraph_graphs = [isolated, t1, t1]
node_subgraph_centers = [4, 0, 0]
node_subgraph_k = [1, 1, 2]
node_subgraph_nodes = [{4},
                       {0, 1},
                       {0, 1, 2, 3}]
node_subgraph_edges = [set(),
                       {(0, 1)},
                       {(0, 1), (1, 2), (1, 3)}]
node_subgraph_arguments = zip(
    node_subgraph_graphs, node_subgraph_centers, node_subgraph_k,
    node_subgraph_nodes, node_subgraph_edges)

# read_pairs()
edge_file_texts = ['0 1\n1 2\n',
                   '# comment\n\n2 0\n0 2\n',
                   '0 1\n1 1\n',
                   '0 1\n1 x\n',
                   '0 1 2\n',
                   '0 1\n2 \u00b2\n']
edge_file_error = [None,
                   None,
                   'self-loop',
                   ':2:',
                   ':1:',
                   ':2:']
edge_file_edges = [[(0, 1), (1, 2)],
                   [(0, 2)],
                   None,
                   None,
                   None,
                   None]
edge_file_arguments = zip(edge_file_texts, edge_file_error, edge_file_edges)


def global_edges(view):
    """Maps the local edges of a view to a set of canonical global pairs."""
    return {tuple(sorted(int(x) for x in view.local_nodes[edge]))
            for edge in view.local_edges}


def random_graph(seed, n_max=30, p=0.2):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max + 1))
    g = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
    return graph.from_edges(n, list(g.edges)), g


@pytest.mark.parametrize('g,pair,k,nodes,edges', link_subgraph_arguments)
def test_k_hop_link_subgraph(g, pair, k, nodes, edges):
    """Tests `vislink.graph.k_hop_link_subgraph()`.

    Parameters
    ----------
    g : named tuple
        Graph.
    pair : tuple of int
        Queried link.
    k : int
        Number of hops.
    nodes : set of int
        Expected global nodes.
    edges : set of tuple of int
        Expected global edges.
    """
    view = graph.k_hop_link_subgraph(g, *pair, k, mask=True)
    assert set(view.local_nodes.tolist()) == nodes
    assert global_edges(view) == edges
    assert view.local_nodes[0] == pair[0] and view.local_nodes[1] == pair[1]
    assert np.all(np.diff(view.local_nodes[2:]) > 0)


@pytest.mark.parametrize('g,v,k,nodes,edges', node_subgraph_arguments)
def test_k_hop_node_subgraph(g, v, k, nodes, edges):
    """Tests `vislink.graph.k_hop_node_subgraph()`."""
    view = graph.k_hop_node_subgraph(g, v, k)
    assert set(view.local_nodes.tolist()) == nodes
    assert global_edges(view) == edges
    assert view.local_nodes[0] == v


def test_mask_removes_existing_link():
    """The queried link is left out only if the view is masked."""
    masked = graph.k_hop_link_subgraph(t1, 1, 2, 1, mask=True)
    unmasked = graph.k_hop_link_subgraph(t1, 1, 2, 1, mask=False)
    assert (1, 2) not in global_edges(masked)
    assert (1, 2) in global_edges(unmasked)


@pytest.mark.parametrize('seed', range(200))
def test_link_subgraph_oracle(seed):
    """Link subgraphs of random graphs match a networkx BFS oracle.

    Parameters
    ----------
    seed : int
        Seed of the random graph and query.
    """
    g, nx_graph = random_graph(seed)
    rng = np.random.default_rng(seed + 1000)
    u, v = (int(x) for x in rng.choice(g.n, size=2, replace=False))
    k = int(rng.integers(1, 4))
    view = graph.k_hop_link_subgraph(g, u, v, k, mask=False)

    dist = {}
    for source in (u, v):
        lengths = nx.single_source_shortest_path_length(nx_graph, source)
        for node, d in lengths.items():
            dist[node] = min(dist.get(node, d), d)
    expected_nodes = {node for node, d in dist.items() if d <= k}
    expected_edges = {tuple(sorted(e)) for e in nx_graph.edges
                      if min(dist.get(e[0], np.inf),
                             dist.get(e[1], np.inf)) <= k - 1}
    assert set(view.local_nodes.tolist()) == expected_nodes
    assert global_edges(view) == expected_edges
    assert len(set(view.local_nodes.tolist())) == view.local_nodes.size


def test_subgraph_ignores_input_order():
    """Edge order and orientation do not change extracted views."""
    edges = [(0, 1), (1, 2), (2, 3), (1, 3)]
    shuffled = graph.from_edges(4, [(3, 1), (3, 2), (1, 0), (2, 1), (0, 1)])
    for k in (1, 2, 3):
        a = graph.k_hop_link_subgraph(graph.from_edges(4, edges), 0, 2, k)
        b = graph.k_hop_link_subgraph(shuffled, 0, 2, k)
        np.testing.assert_array_equal(a.local_nodes, b.local_nodes)
        np.testing.assert_array_equal(a.local_edges, b.local_edges)


@pytest.mark.parametrize('k', [0, 4])
def test_scope_out_of_range(k):
    """Scopes outside of [1, 3] are rejected."""
    with pytest.raises(ValueError):
        graph.k_hop_link_subgraph(t1, 0, 2, k)
    with pytest.raises(ValueError):
        graph.k_hop_node_subgraph(t1, 0, k)


def test_from_edges():
    """Edges are deduplicated, oriented and mirrored into the adjacency."""
    g = graph.from_edges(3, [(1, 0), (0, 1), (2, 1)])
    np.testing.assert_array_equal(g.edges, [[0, 1], [1, 2]])
    np.testing.assert_array_equal(g.adjacency.toarray(),
                                  [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    np.testing.assert_array_equal(graph.neighbors(g, 1), [0, 2])
    np.testing.assert_array_equal(graph.degrees(g), [1, 2, 1])
    assert graph.has_edge(g, 1, 0) and not graph.has_edge(g, 0, 2)
    with pytest.raises(ValueError):
        graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        graph.from_edges(3, [(0, 3)])


@pytest.mark.parametrize('text,error,edges', edge_file_arguments)
def test_load_edge_list(tmp_path, text, error, edges):
    """Tests `vislink.graph.load_edge_list()`.

    Parameters
    ----------
    tmp_path : pathlib.Path
        Temporary directory.
    text : str
        Contents of the edge-list file.
    error : str or None
        Fragment of the expected error message, if any.
    edges : list of tuple of int
        Expected canonical edges.
    """
    path = tmp_path / 'edges.txt'
    path.write_text(text, encoding='utf-8')
    if error is not None:
        with pytest.raises(check.EdgeListError, match=error):
            graph.load_edge_list(str(path))
    else:
        g = graph.load_edge_list(str(path))
        assert g.n == max(max(edge) for edge in edges) + 1
        assert [tuple(edge) for edge in g.edges.tolist()] == edges


def test_bfs_distances():
    """Distances honor removed nodes and report unreachable nodes."""
    dist = graph.bfs_distances(t1, [0])
    np.testing.assert_array_equal(dist, [0, 1, 2, 2])
    dist = graph.bfs_distances(t1, [0], removed=1)
    assert dist[0] == 0
    assert np.all(dist[1:] == graph.UNREACHABLE)


def test_make_splits_sizes():
    """A 10-edge graph splits into 7, 1 and 2 links."""
    g = graph.from_edges(12, [(i, i + 1) for i in range(10)])
    splits = graph.make_splits(g, seed=3, neg_per_pos=2)
    assert splits.train_pos.shape[0] == 7
    assert splits.valid_pos.shape[0] == 1
    assert splits.test_pos.shape[0] == 2
    assert splits.valid_neg.shape[0] == 2
    assert splits.test_neg.shape[0] == 4


def test_split_sizes_cora():
    """Cora's 5278 edges split by the floor/remainder rule."""
    assert graph.split_sizes(5278, (0.7, 0.1, 0.2)) == (3696, 527, 1055)


@pytest.mark.parametrize('seed', range(5))
def test_make_splits_invariants(seed):
    """Positive splits partition the edges; negatives are disjoint
    non-edges; equal seeds give equal splits.

    Parameters
    ----------
    seed : int
        Random seed.
    """
    g, _ = random_graph(seed, n_max=40, p=0.3)
    if g.edges.shape[0] < 10:
        g = graph.from_edges(12, [(i, i + 1) for i in range(11)])
    splits = graph.make_splits(g, seed=seed, neg_per_pos=3)
    union = np.concatenate([splits.train_pos, splits.valid_pos,
                            splits.test_pos])
    assert union.shape[0] == g.edges.shape[0]
    np.testing.assert_array_equal(graph.canonical_pairs(union), g.edges)
    graph.split_requirements(g, splits)
    valid = {tuple(p) for p in splits.valid_neg.tolist()}
    test = {tuple(p) for p in splits.test_neg.tolist()}
    assert not valid & test

    again = graph.make_splits(g, seed=seed, neg_per_pos=3)
    for a, b in zip(splits, again):
        np.testing.assert_array_equal(a, b)


def test_make_splits_too_few_edges():
    """Graphs with fewer than 10 edges cannot be split."""
    with pytest.raises(check.ConfigurationError):
        graph.make_splits(t1)


def test_sample_negatives():
    """Negatives come from the non-edges and the draw is reproducible."""
    with pytest.raises(check.CapacityError):
        graph.sample_negatives(k4, 1)
    pairs = graph.sample_negatives(t1, 2, seed=5)
    assert {tuple(p) for p in pairs.tolist()} == {(0, 2), (0, 3)}
    np.testing.assert_array_equal(pairs, graph.sample_negatives(t1, 2, seed=5))

    g, _ = random_graph(11, n_max=30, p=0.3)
    count = min(20, g.n * (g.n - 1) // 2 - g.edges.shape[0])
    pairs = graph.sample_negatives(g, count, seed=1)
    assert len({tuple(p) for p in pairs.tolist()}) == count
    assert not any(graph.has_edge(g, u, v) for u, v in pairs)
    assert np.all(pairs[:, 0] < pairs[:, 1])


def test_sample_negatives_exclude():
    """Excluded pairs are never drawn, in either orientation."""
    pairs = graph.sample_negatives(t1, 1, exclude=[(2, 0)], seed=0)
    np.testing.assert_array_equal(pairs, [[0, 3]])


def test_load_splits(tmp_path):
    """User-provided split files are read and checked."""
    g = graph.from_edges(12, [(i, i + 1) for i in range(11)])
    contents = {'train_pos': '0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n',
                'valid_pos': '7 8\n8 9\n',
                'test_pos': '9 10\n10 11\n',
                'valid_neg': '0 5\n',
                'test_neg': '0 6\n0 7\n'}
    for role, text in contents.items():
        (tmp_path / (role + '.txt')).write_text(text)
    splits = graph.load_splits(str(tmp_path), g,
                               use_valid_as_message_paths=True)
    assert splits.train_pos.shape == (7, 2)
    assert graph.message_pairs(splits).shape == (9, 2)

    (tmp_path / 'test_neg.txt').write_text('0 1\n')
    with pytest.raises(ValueError):
        graph.load_splits(str(tmp_path), g)


def test_truncate_view():
    """Large views keep the nodes closest to the center."""
    star = graph.from_edges(10, [(0, i) for i in range(1, 10)] + [(1, 2)])
    view = graph.k_hop_node_subgraph(star, 0, 1)
    small = graph.truncate_view(view, 4)
    np.testing.assert_array_equal(small.local_nodes, [0, 1, 2, 3])
    assert global_edges(small) == {(0, 1), (0, 2), (0, 3)}
    assert graph.truncate_view(view, 20) is view


def test_graph_digest():
    """Digests depend on the edge set only, not on its input order."""
    a = graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    b = graph.from_edges(4, [(3, 1), (3, 2), (2, 1), (1, 0)])
    assert graph.graph_digest(a) == graph.graph_digest(b)
    assert graph.graph_digest(a) != graph.graph_digest(
        graph.message_graph(a, [(0, 1)]))
