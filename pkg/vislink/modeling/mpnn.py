from collections import namedtuple
import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F
from scipy.sparse import diags, identity
from vislink import check, graph

MpnnConfig = namedtuple('MpnnConfig', [
    'depth', 'in_dim', 'hidden_dim', 'aggregator'])

AGGREGATORS = ('gcn', 'sage')


def mpnn_requirements(cfg):
    """Checks an MPNN configuration.

    Raises
    -------
    ValueError
        If the depth is outside of [1, 3], a dimension is not positive or
        the aggregator is not supported.
    """
    check.integer(cfg.depth, 'depth')
    if not 1 <= cfg.depth <= 3:
        raise ValueError(
            '\'depth\' should be between 1 and 3! Instead received '
            '{}.'.format(cfg.depth))
    check.integer(cfg.in_dim, 'in_dim')
    check.positive_number(cfg.in_dim, 'in_dim')
    check.integer(cfg.hidden_dim, 'hidden_dim')
    check.positive_number(cfg.hidden_dim, 'hidden_dim')
    check.one_of(cfg.aggregator, AGGREGATORS, 'aggregator')


def propagation_matrix(g, aggregator='gcn', dtype=torch.float32):
    """Builds the sparse propagation matrix of a message graph.

    Parameters
    ----------
    g : named tuple
        Message graph.
    aggregator : {'gcn', 'sage'}, optional
        `'gcn'` gives `D~^-1/2 (A + I) D~^-1/2` with `D~` the degrees of
        `A + I`; `'sage'` gives the neighbor mean `D^-1 A` (zero rows for
        isolated nodes).
    dtype : torch.dtype, optional
        Value type.

    Returns
    -------
    torch.Tensor
        Sparse COO tensor of shape `n x n`.
    """
    check.one_of(aggregator, AGGREGATORS, 'aggregator')
    if aggregator == 'gcn':
        a = g.adjacency + identity(g.n, format='csr')
        deg = np.asarray(a.sum(axis=1)).ravel()
        d = diags(deg ** -0.5)
        matrix = (d @ a @ d).tocoo()
    else:
        deg = graph.degrees(g).astype(np.float64)
        inv = np.zeros_like(deg)
        inv[deg > 0] = 1 / deg[deg > 0]
        matrix = (diags(inv) @ g.adjacency).tocoo()
    indices = torch.from_numpy(np.vstack([matrix.row, matrix.col]).astype(
        np.int64))
    values = torch.from_numpy(matrix.data).to(dtype)
    return torch.sparse_coo_tensor(indices, values, (g.n, g.n)).coalesce()


class Mpnn(nn.Module):
    """GCN- or SAGE-style message passing.

    Every round aggregates neighbor representations and applies an affine
    update; rounds are separated by rectifiers and the last round is
    linear.
    """

    def __init__(self, cfg):
        super().__init__()
        mpnn_requirements(cfg)
        self.cfg = cfg
        dims = [cfg.in_dim] + [cfg.hidden_dim] * cfg.depth
        factor = 2 if cfg.aggregator == 'sage' else 1
        self.layers = nn.ModuleList(
            nn.Linear(factor * d_in, d_out)
            for d_in, d_out in zip(dims[:-1], dims[1:]))

    def forward(self, x, adjacency):
        adjacency = adjacency.to(x.dtype)
        h = x
        for i, layer in enumerate(self.layers):
            if self.cfg.aggregator == 'gcn':
                h = torch.sparse.mm(adjacency, F.linear(h, layer.weight)) + \
                    layer.bias
            else:
                h = layer(torch.cat([h, torch.sparse.mm(adjacency, h)], dim=1))
            if i < len(self.layers) - 1:
                h = F.relu(h)
        return h


def as_features(x, n, dtype=torch.float32):
    """Converts a node feature matrix to a tensor and checks its rows."""
    if not torch.is_tensor(x):
        x = torch.as_tensor(np.asarray(x), dtype=dtype)
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError(
            'Node features should have shape ({}, F)! Instead received '
            '{}.'.format(n, tuple(x.shape)))
    return x


def mpnn_forward(g, x, cfg, mpnn=None):
    """Computes node representations over a message graph.

    Parameters
    ----------
    g : named tuple
        Message graph.
    x : array_like or torch.Tensor
        Node features of shape `n x cfg.in_dim`.
    cfg : named tuple
        MPNN configuration.
    mpnn : Mpnn, optional
        Module to use. A new one is built from `cfg` if None.

    Returns
    -------
    torch.Tensor
        Representations of shape `n x cfg.hidden_dim`.

    Raises
    -------
    ValueError
        If `x` does not have `n` rows and `cfg.in_dim` columns.
    """
    x = as_features(x, g.n)
    check.same_length(x, cfg.in_dim, 'x')
    if mpnn is None:
        mpnn = Mpnn(cfg)
    return mpnn(x, propagation_matrix(g, cfg.aggregator, x.dtype))
