"""
Link prediction models. All of them score query links with
`model(g, x, adjacency, queries, **kwargs)`, where `g` is the message graph,
`x` the node attributes and `adjacency` the propagation matrix of `g`.
"""
import numpy as np
import torch
import torch.nn as nn
from vislink import check, graph, render, vsf
from vislink.modeling.integrate import PostIntegration, PreIntegration
from vislink.modeling.mpnn import Mpnn, as_features, propagation_matrix
from vislink.modeling.readout import Readout
from vislink.rendering import style as styles


def query_array(queries, n):
    """Checks query links and orients every pair as `u < v`."""
    queries = check.pair_array(queries, n, 'queries')
    if np.any(queries[:, 0] == queries[:, 1]):
        check.distinct_pair(*queries[queries[:, 0] == queries[:, 1]][0])
    return np.sort(queries, axis=1)


class BaselineModel(nn.Module):
    """MPNN followed by the readout.

    Parameters
    ----------
    mpnn_cfg : named tuple
        MPNN configuration.
    readout_hidden : int, optional
        Hidden size of the readout.
    readout_layers : int, optional
        Number of readout layers.
    """

    def __init__(self, mpnn_cfg, readout_hidden=None, readout_layers=2):
        super().__init__()
        self.mpnn_cfg = mpnn_cfg
        self.integration_cfg = None
        self.mpnn = Mpnn(mpnn_cfg)
        self.readout = Readout(mpnn_cfg.hidden_dim, readout_hidden,
                               readout_layers)

    def forward(self, g, x, adjacency, queries, **kwargs):
        queries = torch.from_numpy(query_array(queries, g.n))
        y = self.mpnn(as_features(x, g.n), adjacency)
        return self.readout(y[queries[:, 0]], y[queries[:, 1]])


class GvnModel(nn.Module):
    """Renders and encodes the k-hop subgraph of every query link, then
    integrates its VSF with the MPNN representations of the endpoints.

    Parameters
    ----------
    mpnn_cfg : named tuple
        MPNN configuration.
    integration_cfg : named tuple
        Integration configuration with `stage == 'post'`.
    encoder : VisionEncoder
        Vision encoder; finetuned with the model if it is trainable.
    k : int
        Visual perception scope.
    style : named tuple
        Render style.
    readout_hidden : int, optional
        Hidden size of the readout.
    readout_layers : int, optional
        Number of readout layers.
    cache_dir : str, optional
        Image cache directory.
    randomize : bool, optional
        If True, every view is rendered with its own sampled style.
    seed : int, optional
        Seed of the sampled styles.
    """

    def __init__(self, mpnn_cfg, integration_cfg, encoder, k, style,
                 readout_hidden=None, readout_layers=2, cache_dir=None,
                 randomize=False, seed=0):
        super().__init__()
        check.hop_count(k)
        if integration_cfg.vsf_dim != encoder.output_dim:
            raise ValueError(
                'Integration expects VSFs of size {} but the encoder outputs '
                '{}!'.format(integration_cfg.vsf_dim, encoder.output_dim))
        self.mpnn_cfg = mpnn_cfg
        self.integration_cfg = integration_cfg
        self.mpnn = Mpnn(mpnn_cfg)
        self.encoder = encoder
        self.integration = PostIntegration(
            integration_cfg, mpnn_cfg.hidden_dim, readout_hidden,
            readout_layers)
        self.k = k
        self.style = style
        self.cache_dir = cache_dir
        self.randomize = randomize
        self.seed = seed
        self._memo = {}
        self._memo_graph = None
        self._memo_digest = None

    def link_vsfs(self, g, queries, **kwargs):
        """Returns the VSFs of canonical query links as a `B x S` tensor.

        A frozen encoder's VSFs are memoized per link for the most recent
        message graph; the memo is cleared when the graph changes.
        """
        kwargs.setdefault('verbose', 0)
        counter = kwargs.get('counter')
        differentiable = self.encoder.trainable and self.training and \
            torch.is_grad_enabled()
        memoize = not self.encoder.trainable
        if memoize and g is not self._memo_graph:
            digest = graph.graph_digest(g)
            if digest != self._memo_digest:
                self._memo.clear()
            self._memo_graph, self._memo_digest = g, digest

        keys = [(int(u), int(v)) for u, v in queries]
        missing = [i for i, key in enumerate(keys) if key not in self._memo] \
            if memoize else list(range(len(keys)))
        views = [graph.k_hop_link_subgraph(g, *keys[i], self.k, mask=True)
                 for i in missing]
        images = render.render_batch(
            views, self.style, self.cache_dir, randomize=self.randomize,
            seed=self.seed, **kwargs).images
        if counter is not None:
            counter['encode'] += len(images)

        if differentiable:
            return vsf.encode_images(self.encoder, images)

        vectors = [torch.from_numpy(vsf.encode_image(self.encoder, image))
                   for image in images]
        if not memoize:
            return torch.stack(vectors) if vectors else \
                torch.zeros(0, self.encoder.output_dim)
        for i, vector in zip(missing, vectors):
            self._memo[keys[i]] = vector
        if not keys:
            return torch.zeros(0, self.encoder.output_dim)
        return torch.stack([self._memo[key] for key in keys])

    def forward(self, g, x, adjacency, queries, **kwargs):
        queries = query_array(queries, g.n)
        y = self.mpnn(as_features(x, g.n), adjacency)
        v = self.link_vsfs(g, queries, **kwargs).to(y.dtype)
        index = torch.from_numpy(queries)
        return self.integration(y[index[:, 0]], y[index[:, 1]], v)


class EgvnModel(nn.Module):
    """Integrates adapted per-node VSFs into the node attributes, runs the
    MPNN once and scores query links with the readout.

    Parameters
    ----------
    mpnn_cfg : named tuple
        MPNN configuration; `in_dim` is replaced by the size of the
        vision-aware attributes.
    integration_cfg : named tuple
        Integration configuration with `stage == 'pre'`; `vsf_dim` is the
        adapted VSF size.
    repo : named tuple
        VSF repository.
    feature_dim : int
        Node attribute size `F`.
    adapter : Adapter, optional
        Trainable adapter. If None, the frozen VSFs are used as they are.
    readout_hidden : int, optional
        Hidden size of the readout.
    readout_layers : int, optional
        Number of readout layers.
    """

    def __init__(self, mpnn_cfg, integration_cfg, repo, feature_dim,
                 adapter=None, readout_hidden=None, readout_layers=2):
        super().__init__()
        size = repo.matrix.shape[1] if adapter is None else adapter.out_dim
        if adapter is not None and adapter.in_dim != repo.matrix.shape[1]:
            raise ValueError(
                'Adapter expects VSFs of size {} but the repository holds '
                '{}!'.format(adapter.in_dim, repo.matrix.shape[1]))
        if integration_cfg.vsf_dim != size:
            raise ValueError(
                'Integration expects VSFs of size {} but receives '
                '{}!'.format(integration_cfg.vsf_dim, size))
        self.integration_cfg = integration_cfg
        self.integration = PreIntegration(integration_cfg, feature_dim)
        self.mpnn_cfg = mpnn_cfg._replace(in_dim=self.integration.out_dim)
        self.mpnn = Mpnn(self.mpnn_cfg)
        self.adapter = adapter
        self.readout = Readout(mpnn_cfg.hidden_dim, readout_hidden,
                               readout_layers)
        self.register_buffer('vsf', torch.from_numpy(
            np.array(repo.matrix, dtype=np.float32)), persistent=False)
        self.k = repo.k

        if integration_cfg.zero_init and integration_cfg.strategy == 'concat':
            first = self.mpnn.layers[0].weight
            with torch.no_grad():
                first[:, feature_dim:self.integration.out_dim] = 0
                if self.mpnn_cfg.aggregator == 'sage':
                    first[:, self.integration.out_dim + feature_dim:] = 0

    def node_vsfs(self):
        """Returns the (adapted) VSFs of all nodes."""
        if self.adapter is None:
            return self.vsf
        return self.adapter(self.vsf)

    def attributes(self, x):
        """Returns the vision-aware node attributes.

        Raises
        -------
        ValueError
            If the repository and the attributes cover different nodes.
        """
        check.match_shape(x=(x, 0), vsf=(self.vsf, 0))
        return self.integration(x, self.node_vsfs().to(x.dtype))

    def forward(self, g, x, adjacency, queries, **kwargs):
        queries = torch.from_numpy(query_array(queries, g.n))
        y = self.mpnn(self.attributes(as_features(x, g.n)), adjacency)
        return self.readout(y[queries[:, 0]], y[queries[:, 1]])


def gvn_forward(model, g, x, queries, adjacency=None, **kwargs):
    """Scores query links with a GVN model.

    Exactly one render and one encode happen per distinct query link not
    yet seen by a frozen encoder.

    Parameters
    ----------
    model : GvnModel
        Model holding the encoder, scope and style.
    g : named tuple
        Message graph.
    x : array_like or torch.Tensor
        Node attributes.
    queries : array_like
        Query links of shape `B x 2`.
    adjacency : torch.Tensor, optional
        Propagation matrix of `g`. Built if None.
    **kwargs
        counter : collections.Counter, optional
            Incremented under `'render'` and `'encode'`.

    Returns
    -------
    torch.Tensor
        Probabilities of shape `B`.
    """
    if adjacency is None:
        adjacency = propagation_matrix(g, model.mpnn_cfg.aggregator)
    return model(g, x, adjacency, queries, **kwargs)


def egvn_forward(model, g, x, queries, repo, style, adjacency=None,
                 **kwargs):
    """Scores query links with an E-GVN model, rendering nothing.

    Parameters
    ----------
    model : EgvnModel
        Model holding the VSFs of `repo` and the adapter.
    g : named tuple
        Message graph the repository was built from.
    x : array_like or torch.Tensor
        Node attributes.
    queries : array_like
        Query links of shape `B x 2`.
    repo : named tuple
        VSF repository.
    style : named tuple
        Render style the repository should have been built with.
    adjacency : torch.Tensor, optional
        Propagation matrix of `g`. Built if None.

    Returns
    -------
    torch.Tensor
        Probabilities of shape `B`.

    Raises
    -------
    StalenessError
        If the repository was built from another graph, style or scope.
    """
    vsf.check_repository(repo, graph.graph_digest(g),
                         styles.style_digest(style), model.k)
    if adjacency is None:
        adjacency = propagation_matrix(g, model.mpnn_cfg.aggregator)
    return model(g, x, adjacency, queries, **kwargs)
