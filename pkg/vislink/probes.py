"""
Analysis probes: how much structure VSFs carry (reproduction ratios),
graph-level substructure counting, links between isomorphic nodes,
positional-encoding baselines and ablation grids over run configurations.
"""
import os
from collections import namedtuple
import numpy as np
import torch
import torch.nn as nn
from vislink import check, config, experiment, features, graph, metrics, \
    render, train, utils, vsf
from vislink.modeling import networks
from vislink.modeling.integrate import IntegrationConfig, STRATEGIES
from vislink.modeling.mpnn import AGGREGATORS, Mpnn, MpnnConfig, \
    propagation_matrix
from vislink.modeling.readout import mlp
from vislink.rendering import style as styles

ProbeReport = namedtuple('ProbeReport', [
    'probe', 'config', 'scores', 'notes', 'criterion', 'run_config'])

CRITERION_VERSION = 'sf-success-v1'
RELATIVE_TOLERANCE = 0.1
# makes zero-valued real targets attainable
ABSOLUTE_TOLERANCE = 0.01
DATASETS = ('erdos_renyi', 'random_regular')
SPLIT_FRACTIONS = (0.3, 0.2, 0.5)
ABLATION_AXES = ('scope_k', 'style_consistency', 'visualizer_variant',
                 'integration', 'adaptivity', 'labeling', 'color', 'shape')

DE_NOTE = ('DE targets are distance vectors to the highest-degree anchor '
           'nodes, concatenated for both endpoints; each component is '
           'scored as a real value.')
C6_NOTE = ('The 6-cycle is vertex-transitive, so nodes 1 and 3 are '
           'automorphic images of each other with respect to node 0 while '
           'lying at distances 1 and 3 from it.')


def success_ratio(pred, target, kind):
    """Percentage of successfully predicted structural features.

    Integer kinds (CN, SPD, DRNL) succeed when the rounded prediction equals
    the target. Real kinds succeed when `|pred - target|` is at most
    `max(0.1 |target|, 0.01)`; multi-component targets are scored per
    component.

    Parameters
    ----------
    pred : array_like
        Predictions.
    target : array_like
        Targets of the same shape.
    kind : str
        Structural feature kind.

    Returns
    -------
    float
        Percentage in [0, 100].
    """
    check.one_of(kind, features.SF_KINDS, 'structural feature')
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(
            'Predictions of shape {} do not match targets of shape '
            '{}!'.format(pred.shape, target.shape))
    if kind in features.INTEGER_SF_KINDS:
        hits = np.rint(pred) == target
    else:
        tolerance = np.maximum(RELATIVE_TOLERANCE * np.abs(target),
                               ABSOLUTE_TOLERANCE)
        hits = np.abs(pred - target) <= tolerance
    return 100 * float(np.mean(hits))


def normalized_mse(pred, labels):
    """Mean squared error over the variance of the labels.

    Returns
    -------
    float or None
        Normalized MSE, or None if the labels have zero variance.
    """
    pred = np.asarray(pred, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=np.float64).ravel()
    variance = labels.var()
    if variance == 0:
        return None
    return float(np.mean((pred - labels)**2) / variance)


def _standardize(train_inputs, inputs):
    mean = train_inputs.mean(axis=0)
    std = train_inputs.std(axis=0)
    std[std == 0] = 1
    return (inputs - mean) / std


def fit_regressor(inputs, targets, seed=0, epochs=1000, lr=1e-2,
                  hidden_dim=64):
    """Fits a 3-layer perceptron with full-batch Adam on the squared error.

    Returns
    -------
    torch.nn.Module
        Fitted perceptron in evaluation mode.
    """
    inputs = torch.as_tensor(inputs, dtype=torch.float32)
    targets = torch.as_tensor(targets, dtype=torch.float32).reshape(
        inputs.shape[0], -1)
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        model = mlp(inputs.shape[1], hidden_dim, targets.shape[1], 3)
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    for _ in range(epochs):
        opt.zero_grad()
        loss = nn.functional.mse_loss(model(inputs), targets)
        loss.backward()
        opt.step()
    return model.eval()


def _predict(model, inputs):
    with torch.no_grad():
        return model(torch.as_tensor(inputs, dtype=torch.float32)).numpy()


def pair_inputs(vsfs, pairs):
    """Returns per-pair probe inputs.

    A node repository gives `[v_u + v_v, v_u * v_v]`, which does not
    depend on the endpoint order; a `P x S` matrix already holds one VSF per
    pair.
    """
    if isinstance(vsfs, vsf.VsfRepository):
        matrix = np.asarray(vsfs.matrix, dtype=np.float64)
        v_u, v_v = matrix[pairs[:, 0]], matrix[pairs[:, 1]]
        return np.hstack([v_u + v_v, v_u * v_v])
    vsfs = np.asarray(vsfs, dtype=np.float64)
    check.n_dimensional(vsfs, [2], 'vsfs')
    check.match_shape(pairs=(pairs, 0), vsfs=(vsfs, 0))
    return vsfs


def link_vsfs(encoder, g, pairs, k, style, cache_dir=None, **kwargs):
    """Renders and encodes the masked k-hop subgraph of every pair.

    Returns
    -------
    ndarray
        VSFs of shape `len(pairs) x S`.
    """
    pairs = np.sort(check.pair_array(pairs, g.n), axis=1)
    views = [graph.k_hop_link_subgraph(g, u, v, k) for u, v in pairs]
    images = render.render_batch(views, style, cache_dir, **kwargs).images
    if not images:
        return np.zeros((0, encoder.output_dim), dtype=np.float32)
    return np.stack([vsf.encode_image(encoder, image) for image in images])


def reproduction_ratio(vsfs, g, targets, pairs, finetuned=False, k=2,
                       holdout=0.3, **kwargs):
    """Measures how well VSFs reproduce structural features.

    A separate 3-layer perceptron is fitted from the VSFs to every target
    kind and scored with `success_ratio` on held-out pairs.

    Parameters
    ----------
    vsfs : named tuple or ndarray
        Node VSF repository, or one VSF per pair.
    g : named tuple
        Graph the targets are computed on.
    targets : list of str
        Structural feature kinds.
    pairs : array_like
        Probe pairs of shape `P x 2`.
    finetuned : bool, optional
        Whether the encoder was finetuned; echoed into the report.
    k : int, optional
        Visual perception scope of the targets.
    holdout : float, optional
        Fraction of pairs scored. If 0, the fitted pairs are scored.
    **kwargs
        seed : int, optional
            Seed of the split and of the perceptrons.
        epochs : int, optional
            Training epochs of every perceptron.
        verbose : int, optional
            Warnings are shown unless verbose is 0.
        run_config_text : str, optional
            Run configuration echoed into the report.

    Returns
    -------
    named tuple
        Probe report with one percentage per target, None for targets
        that are constant over the probe pairs.
    """
    seed = kwargs.get('seed', 0)
    pairs = np.sort(check.pair_array(pairs, g.n), axis=1)
    check.non_empty(pairs, 'pairs')
    if not 0 <= holdout < 1:
        raise ValueError('\'holdout\' should lie in [0, 1)!')
    inputs = pair_inputs(vsfs, pairs)

    rng = np.random.default_rng(utils.derive_seed(seed, 'probe-split'))
    order = rng.permutation(pairs.shape[0])
    n_scored = int(round(holdout * pairs.shape[0]))
    scored = order[:n_scored] if n_scored else order
    fitted = order[n_scored:]
    inputs = _standardize(inputs[fitted], inputs)

    scores, notes = {}, []
    for kind in targets:
        y = features.pair_targets(g, kind, pairs, k, **kwargs)
        if np.all(y == y.flat[0]):
            scores[kind] = None
            notes.append('{} is constant over the probe pairs.'.format(kind))
            continue
        model = fit_regressor(
            inputs[fitted], y[fitted], utils.derive_seed(seed, kind),
            kwargs.get('epochs', 1000))
        pred = _predict(model, inputs[scored]).reshape(y[scored].shape)
        scores[kind] = success_ratio(pred, y[scored], kind)
    if 'DE' in targets:
        utils.warning(DE_NOTE, **kwargs)
        notes.append(DE_NOTE)

    cfg = {'targets': list(targets), 'pairs': int(pairs.shape[0]),
           'finetuned': bool(finetuned), 'k': k, 'holdout': holdout,
           'node_level': isinstance(vsfs, vsf.VsfRepository)}
    return ProbeReport('reproduction', cfg, scores, notes, CRITERION_VERSION,
                       kwargs.get('run_config_text', ''))


def finetune_encoder(encoder, g, pairs, labels, style, k, **kwargs):
    """Finetunes a vision encoder to classify links from their images.

    A 2-layer perceptron head is trained together with the encoder on the
    binary cross-entropy of the labels; the head is discarded.

    Parameters
    ----------
    encoder : VisionEncoder
        Encoder; it is made trainable while finetuning and frozen again
        afterwards.
    g : named tuple
        Graph.
    pairs : array_like
        Links of shape `P x 2`.
    labels : array_like
        0/1 labels, one per link.
    style : named tuple
        Render style.
    k : int
        Visual perception scope.
    **kwargs
        epochs : int, optional
            Number of passes over the links.
        batch_size : int, optional
            Links per step.
        lr : float, optional
            Learning rate.
        seed : int, optional
            Seed of the head and of the link order.

    Returns
    -------
    VisionEncoder
        The finetuned, frozen encoder.
    """
    epochs = kwargs.get('epochs', 5)
    batch_size = kwargs.get('batch_size', 32)
    seed = kwargs.get('seed', 0)
    pairs = np.sort(check.pair_array(pairs, g.n), axis=1)
    labels = np.asarray(labels, dtype=np.float64)
    check.same_length(labels, pairs.shape[0], 'labels')

    views = [graph.k_hop_link_subgraph(g, u, v, k) for u, v in pairs]
    images = render.render_batch(views, style, kwargs.get('cache_dir'),
                                 verbose=kwargs.get('verbose', 1)).images
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(utils.derive_seed(seed, 'finetune-head'))
        head = mlp(encoder.output_dim, max(1, encoder.output_dim // 2), 1, 2)
    encoder.set_trainable(True)
    encoder.train()
    opt = torch.optim.Adam(list(encoder.parameters()) + list(head.parameters()),
                           lr=kwargs.get('lr', 1e-4))
    rng = np.random.default_rng(utils.derive_seed(seed, 'finetune'))
    for epoch in range(epochs):
        order = rng.permutation(len(images))
        for begin in range(0, order.size, batch_size):
            batch = order[begin:begin + batch_size]
            opt.zero_grad()
            logits = head(vsf.encode_images(
                encoder, [images[i] for i in batch])).squeeze(-1)
            p = torch.sigmoid(logits)
            loss = metrics.bce_loss(p, labels[batch])
            loss.backward()
            opt.step()
        utils.message('Finetuning epoch {}: loss {}.'.format(
            epoch, utils.rounded(loss.item())), **kwargs)
    encoder.set_trainable(False)
    return encoder.eval()


def whole_graph_view(g):
    """Returns a view of the entire graph, with node 0 as its center."""
    return graph.SubgraphView(graph.Node(0), None, np.arange(g.n),
                              np.asarray(g.edges, dtype=np.int64), False)


def generate_graphs(dataset, n_graphs, seed=0):
    """Samples Erdos-Renyi graphs (`n = 10`, `p = 0.3`) or random regular
    graphs with sizes and degrees drawn from `RANDOM_REGULAR_CHOICES`."""
    check.one_of(dataset, DATASETS, 'dataset')
    rng = np.random.default_rng(utils.derive_seed(seed, dataset))
    graphs = []
    for i in range(n_graphs):
        graph_seed = utils.derive_seed(seed, 'graph-{}'.format(i))
        if dataset == 'erdos_renyi':
            graphs.append(features.gen_erdos_renyi(10, 0.3, graph_seed))
        else:
            m, d = features.RANDOM_REGULAR_CHOICES[
                rng.integers(len(features.RANDOM_REGULAR_CHOICES))]
            graphs.append(features.gen_random_regular(m, d, graph_seed))
    return graphs


def _disjoint_union(graphs):
    sizes = np.array([g.n for g in graphs])
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    edges = [g.edges + offset for g, offset in zip(graphs, offsets)
             if g.edges.size]
    edges = np.vstack(edges) if edges else np.zeros((0, 2), dtype=np.int64)
    union = graph.from_edges(int(sizes.sum()), edges)
    membership = np.repeat(np.arange(len(graphs)), sizes)
    return union, torch.from_numpy(membership)


class GraphRegressor(nn.Module):
    """MPNN, sum pooling and a 3-layer perceptron decoder. Graph-level VSFs
    are concatenated after the pooled representations."""

    def __init__(self, mpnn_cfg, vsf_dim=0):
        super().__init__()
        self.mpnn = Mpnn(mpnn_cfg)
        self.decoder = mlp(mpnn_cfg.hidden_dim + vsf_dim,
                           mpnn_cfg.hidden_dim, 1, 3)

    def forward(self, x, adjacency, membership, n_graphs, v=None):
        y = self.mpnn(x, adjacency)
        pooled = torch.zeros(n_graphs, y.shape[1], dtype=y.dtype)
        pooled = pooled.index_add(0, membership, y)
        if v is not None:
            pooled = torch.cat([pooled, v], dim=-1)
        return self.decoder(pooled).squeeze(-1)


def _fit_graph_regressor(graphs, labels, vsfs, parts, cfg, seed, epochs, lr):
    union, membership = _disjoint_union(graphs)
    adjacency = propagation_matrix(union, cfg.aggregator)
    x = torch.ones(union.n, 1)
    y = torch.as_tensor(labels, dtype=torch.float32)
    v = None if vsfs is None else torch.as_tensor(vsfs, dtype=torch.float32)

    torch.manual_seed(utils.derive_seed(seed, 'regressor'))
    model = GraphRegressor(cfg, 0 if v is None else v.shape[1])
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    train_idx, valid_idx, test_idx = (torch.from_numpy(part) for part in parts)

    best, best_state = None, None
    for _ in range(epochs):
        model.train()
        opt.zero_grad()
        pred = model(x, adjacency, membership, len(graphs), v)
        loss = nn.functional.mse_loss(pred[train_idx], y[train_idx])
        loss.backward()
        opt.step()
        model.eval()
        with torch.no_grad():
            pred = model(x, adjacency, membership, len(graphs), v)
            valid = nn.functional.mse_loss(pred[valid_idx], y[valid_idx]).item()
        if best is None or valid < best:
            best = valid
            best_state = {key: value.clone()
                          for key, value in model.state_dict().items()}
    model.load_state_dict(best_state)
    model.eval()
    with torch.no_grad():
        pred = model(x, adjacency, membership, len(graphs), v)
    return normalized_mse(pred[test_idx].numpy(), labels[test_idx])


def substructure_experiment(dataset='erdos_renyi', n_graphs=1000,
                            kind='triangle', with_vsf=False, seeds=3,
                            mpnn='gcn', **kwargs):
    """Regresses substructure counts of small synthetic graphs.

    Graphs are split 30%/20%/50% for training, validation and testing; the
    state with the lowest validation error is tested.

    Parameters
    ----------
    dataset : {'erdos_renyi', 'random_regular'}, optional
        Graph generator.
    n_graphs : int, optional
        Number of graphs.
    kind : {'triangle', 'three_star'}, optional
        Substructure.
    with_vsf : bool, optional
        If True, the VSF of every whole-graph image is concatenated after
        the pooled MPNN representation.
    seeds : int, optional
        Number of seeds.
    mpnn : {'gcn', 'sage'}, optional
        Aggregator.
    **kwargs
        encoder : VisionEncoder, optional
            Frozen encoder. Defaults to a seeded `small_cnn`.
        style : named tuple, optional
            Render style.
        depth, hidden_dim, epochs, lr : optional
            MPNN depth, hidden size, full-batch epochs and learning rate.
        seed : int, optional
            Top-level seed.
        run_config_text : str, optional
            Run configuration echoed into the report.

    Returns
    -------
    named tuple
        Probe report with the `best` and `median` normalized MSE over seeds
        (None where the test labels have zero variance).
    """
    check.one_of(kind, features.SUBSTRUCTURE_KINDS, 'substructure')
    check.one_of(mpnn, AGGREGATORS, 'aggregator')
    check.integer(n_graphs, 'n_graphs')
    if n_graphs < 10:
        raise ValueError('\'n_graphs\' should be at least 10!')
    seed = kwargs.get('seed', 0)
    epochs = kwargs.get('epochs', 300)
    lr = kwargs.get('lr', 1e-2)
    graphs = generate_graphs(dataset, n_graphs, seed)
    labels = np.array([features.count_substructure(g, kind) for g in graphs],
                      dtype=np.float64)
    utils.message('Generated {} {} graphs.'.format(n_graphs, dataset),
                  **kwargs)

    vsfs = None
    if with_vsf:
        encoder = kwargs.get('encoder')
        if encoder is None:
            encoder = vsf.random_encoder(
                'small_cnn', utils.derive_seed(seed, 'encoder'))
        style = kwargs.get('style') or styles.default_style()
        images = render.render_batch(
            [whole_graph_view(g) for g in graphs], style,
            kwargs.get('cache_dir'), verbose=kwargs.get('verbose', 1)).images
        vsfs = np.stack([vsf.encode_image(encoder, image) for image in images])

    sizes = graph.split_sizes(n_graphs, SPLIT_FRACTIONS)
    cfg = MpnnConfig(kwargs.get('depth', 2), 1, kwargs.get('hidden_dim', 64),
                     mpnn)
    per_seed = []
    for s in range(seeds):
        rng = np.random.default_rng(utils.derive_seed(seed, 'split-{}'.format(s)))
        order = rng.permutation(n_graphs)
        parts = np.split(order, np.cumsum(sizes)[:-1])
        if vsfs is not None:
            inputs = _standardize(vsfs[parts[0]], vsfs)
        else:
            inputs = None
        score = _fit_graph_regressor(graphs, labels, inputs, parts, cfg,
                                     utils.derive_seed(seed, s), epochs, lr)
        per_seed.append(score)
        utils.message('Seed {}: normalized MSE {}.'.format(
            s, utils.rounded(score)), **kwargs)

    defined = [score for score in per_seed if score is not None]
    scores = {'best': min(defined) if defined else None,
              'median': float(np.median(defined)) if defined else None,
              'per_seed': per_seed}
    notes = []
    if len(defined) < len(per_seed):
        notes.append('Test labels of some seeds have zero variance.')
    probe_cfg = {'dataset': dataset, 'n_graphs': n_graphs, 'kind': kind,
                 'with_vsf': bool(with_vsf), 'seeds': seeds, 'mpnn': mpnn,
                 'depth': cfg.depth, 'hidden_dim': cfg.hidden_dim,
                 'epochs': epochs}
    return ProbeReport('substructure', probe_cfg, scores, notes,
                       CRITERION_VERSION, kwargs.get('run_config_text', ''))


def cycle_graph(n):
    return graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def pixel_difference(first, second):
    """Counts the pixels whose color differs between two images."""
    return int(np.any(np.asarray(first) != np.asarray(second), axis=-1).sum())


def isomorphic_pair_demo(depths=(1, 2, 3), **kwargs):
    """Scores the links (0, 1) and (0, 3) of a 6-cycle with constant node
    attributes.

    Plain MPNNs give both links the same score at every depth. Their 1-hop
    images differ, and a GVN model fitted to separate them does.

    Parameters
    ----------
    depths : tuple of int, optional
        MPNN depths of the plain models.
    **kwargs
        epochs : int, optional
            Training steps of the GVN model.
        seed : int, optional
            Seed of all models.
        run_config_text : str, optional
            Run configuration echoed into the report.

    Returns
    -------
    named tuple
        Probe report with the plain score gap per depth, the pixel
        difference of the two images and the fitted GVN score gap.
    """
    seed = kwargs.get('seed', 0)
    epochs = kwargs.get('epochs', 200)
    g = cycle_graph(6)
    x = torch.ones(g.n, 1)
    queries = np.array([[0, 1], [0, 3]])
    scores = {}

    for depth in depths:
        cfg = MpnnConfig(depth, 1, 16, 'gcn')
        torch.manual_seed(utils.derive_seed(seed, 'depth-{}'.format(depth)))
        model = networks.BaselineModel(cfg, 16)
        p = train.predict(model, g, x, propagation_matrix(g), queries)
        scores['mpnn_gap_depth_{}'.format(depth)] = float(abs(p[0] - p[1]))

    style = styles.default_style()
    images = [render.render(graph.k_hop_link_subgraph(g, u, v, 1), style)
              for u, v in queries]
    scores['pixel_difference'] = pixel_difference(*images)

    encoder = vsf.random_encoder('small_cnn', utils.derive_seed(seed, 'encoder'))
    torch.manual_seed(utils.derive_seed(seed, 'gvn'))
    model = networks.GvnModel(
        MpnnConfig(1, 1, 16, 'gcn'),
        IntegrationConfig('attention', 'post', encoder.output_dim, None, False),
        encoder, 1, style, 16)
    adjacency = propagation_matrix(g)
    opt = torch.optim.Adam(
        [p for p in model.parameters() if p.requires_grad], lr=1e-2)
    labels = np.array([1.0, 0.0])
    for _ in range(epochs):
        model.train()
        opt.zero_grad()
        loss = metrics.bce_loss(model(g, x, adjacency, queries), labels)
        loss.backward()
        opt.step()
    p = train.predict(model, g, x, adjacency, queries)
    scores['gvn_gap'] = float(abs(p[0] - p[1]))
    utils.message('Plain MPNN gaps {}, GVN gap {}.'.format(
        [utils.rounded(scores['mpnn_gap_depth_{}'.format(d)]) for d in depths],
        utils.rounded(scores['gvn_gap'])), **kwargs)

    cfg = {'graph': 'cycle-6', 'queries': queries.tolist(),
           'depths': list(depths), 'epochs': epochs}
    return ProbeReport('isomorphic', cfg, scores, [C6_NOTE], CRITERION_VERSION,
                       kwargs.get('run_config_text', ''))


def image_coordinates(g, k, style):
    """Returns the image coordinates of every node in the layout of its own
    k-hop node-centered view.

    Returns
    -------
    ndarray
        Coordinates of shape `n x 2` in `[0.05, 0.95]^2`.
    """
    coords = np.zeros((g.n, 2))
    for v in range(g.n):
        view = graph.k_hop_node_subgraph(g, v, k)
        coords[v] = render.layout(view, style).positions[0]
    return coords


def default_pe_dim(g, kind):
    if kind == 'image_coords':
        return 2
    if kind == 'degree':
        return 1
    return min(16, g.n - 1)


def pe_baseline_experiment(g, splits, kind, dim=None, **kwargs):
    """Trains a 2-layer GCN with a 2-layer readout on positional encodings
    of the message graph instead of node attributes.

    Parameters
    ----------
    g : named tuple
        Graph.
    splits : named tuple
        Split set.
    kind : str
        Any of `features.PE_KINDS`.
    dim : int, optional
        Encoding dimension.
    **kwargs
        k : int, optional
            Scope of `'image_coords'` layouts.
        style : named tuple, optional
            Render style of `'image_coords'` layouts.
        hidden_dim : int, optional
            Hidden size.
        seed : int, optional
            Seed of training.
        epochs : int, optional
            Training epochs.
        verbose : int, optional
            Verbosity.
        run_config_text : str, optional
            Run configuration echoed into the report.

    Returns
    -------
    named tuple
        Evaluation report; its metrics include `hits@100` when there are
        at least 100 test negatives.
    """
    check.one_of(kind, features.PE_KINDS, 'positional encoding')
    message = graph.message_graph(g, graph.message_pairs(splits))
    dim = default_pe_dim(g, kind) if dim is None else dim
    aux = None
    if kind == 'image_coords':
        aux = image_coordinates(message, kwargs.get('k', 2),
                                kwargs.get('style') or styles.default_style())
    pe = features.node_pe(message, kind, dim, aux,
                          verbose=kwargs.get('verbose', 1))
    x = torch.as_tensor(pe, dtype=torch.float32)

    hidden_dim = kwargs.get('hidden_dim', 64)
    seed = kwargs.get('seed', 0)
    torch.manual_seed(utils.derive_seed(seed, 'model'))
    model = networks.BaselineModel(MpnnConfig(2, dim, hidden_dim, 'gcn'),
                                   hidden_dim, 2)
    cfg = train.set_defaults(epochs=kwargs.get('epochs', 100), seed=seed)
    result = train.train(model, g, splits, cfg, x=x,
                         dataset=kwargs.get('dataset', 'graph'),
                         model_name='gcn-{}'.format(kind),
                         run_config_text=kwargs.get('run_config_text', ''),
                         verbose=kwargs.get('verbose', 1))
    return result.report


def _scope(cfg, value):
    check.hop_count(value)
    return cfg._replace(k=value)


def _consistency(cfg, value):
    if not isinstance(value, bool):
        raise TypeError('\'style_consistency\' values should be booleans!')
    return cfg._replace(style_consistency=value)


def _visualizer(cfg, value):
    check.one_of(value, styles.VISUALIZERS, 'visualizer')
    return cfg._replace(style=value)


def _integration(cfg, value):
    check.one_of(value, STRATEGIES, 'integration strategy')
    return cfg._replace(integration=value)


def _adaptivity(cfg, value):
    check.one_of(value, config.ADAPTIVITIES, 'adaptivity')
    # E-GVN keeps its encoder frozen; finetuning needs per-link images
    model = 'gvn' if value == 'full' else 'egvn'
    return cfg._replace(model=model, adaptivity=value)


def _labeling(cfg, value):
    check.one_of(value, styles.LABELINGS, 'labeling')
    return cfg._replace(labeling=value)


def _color(cfg, value):
    check.one_of(value, styles.PALETTE, 'center color')
    return cfg._replace(center_color=value)


def _shape(cfg, value):
    check.one_of(value, styles.NODE_SHAPES, 'node shape')
    return cfg._replace(node_shape=value)


axis_functions = {
    'scope_k': _scope,
    'style_consistency': _consistency,
    'visualizer_variant': _visualizer,
    'integration': _integration,
    'adaptivity': _adaptivity,
    'labeling': _labeling,
    'color': _color,
    'shape': _shape,
}


def ablation_configs(axis, grid, base_config):
    """Returns one validated run configuration per grid value, each writing
    to its own subdirectory of the base output directory.

    Raises
    -------
    ValueError
        If the axis is unknown or a grid value is not supported.
    """
    check.one_of(axis, ABLATION_AXES, 'ablation axis')
    check.non_empty(grid, 'grid')
    configs = []
    for value in grid:
        cfg = axis_functions[axis](base_config, value)
        output_dir = os.path.join(base_config.output_dir,
                                  '{}-{}'.format(axis, value))
        configs.append(config.validate_config(
            cfg._replace(output_dir=output_dir)))
    return configs


def ablation_driver(axis, grid, base_config, **kwargs):
    """Runs the experiment of every grid value of one ablation axis with
    the seeds of the base configuration.

    All grid values are checked before anything runs.

    Returns
    -------
    list of named tuple
        One evaluation report per grid value.
    """
    configs = ablation_configs(axis, grid, base_config)
    reports = []
    for value, cfg in zip(grid, configs):
        utils.message('Ablation {} = {}.'.format(axis, value), **kwargs)
        report, _ = experiment.run_experiment(cfg, **kwargs)
        reports.append(report)
    return reports
