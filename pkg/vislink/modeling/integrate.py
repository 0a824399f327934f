"""
Integration of VSFs with node information.

Post-MPNN integration (GVN) combines the representations of both endpoints
with the VSF of the link; pre-MPNN integration (E-GVN) makes node
attributes vision-aware before message passing.
"""
from collections import namedtuple
import torch
import torch.nn as nn
from vislink import check
from vislink.modeling.readout import Readout, mlp

IntegrationConfig = namedtuple('IntegrationConfig', [
    'strategy', 'stage', 'vsf_dim', 'proj_dim', 'zero_init'])

STRATEGIES = ('attention', 'concat', 'weighted')
STAGES = ('post', 'pre')
# raw value of delta that saturates the sigmoid
SATURATED_DELTA = 30.0


def integration_requirements(cfg):
    check.one_of(cfg.strategy, STRATEGIES, 'integration strategy')
    check.one_of(cfg.stage, STAGES, 'integration stage')
    check.integer(cfg.vsf_dim, 'vsf_dim')
    check.positive_number(cfg.vsf_dim, 'vsf_dim')
    if cfg.proj_dim is not None:
        check.integer(cfg.proj_dim, 'proj_dim')
        check.positive_number(cfg.proj_dim, 'proj_dim')


class GatedInjection(nn.Module):
    """Single-token cross attention of a query onto a visual token.

    With one key the attention weight is 1, so the visual value is injected
    as a gated residual `q + sigmoid(w . [q; v]) * W_v v`.

    Parameters
    ----------
    query_dim : int
        Size of the query.
    context_dim : int
        Size of the visual token.
    zero_init : bool, optional
        If True, `W_v` starts at zero and the module is the identity on the
        query.
    """

    def __init__(self, query_dim, context_dim, zero_init=False):
        super().__init__()
        self.value = nn.Linear(context_dim, query_dim, bias=False)
        self.gate = nn.Linear(query_dim + context_dim, 1)
        if zero_init:
            nn.init.zeros_(self.value.weight)

    def forward(self, query, context):
        gate = torch.sigmoid(self.gate(torch.cat([query, context], dim=-1)))
        return query + gate * self.value(context)


class VDecoder(nn.Module):
    """Three-layer perceptron mapping a VSF to a link probability."""

    def __init__(self, vsf_dim, hidden_dim=None):
        super().__init__()
        hidden_dim = hidden_dim or max(1, vsf_dim // 2)
        self.mlp = mlp(vsf_dim, hidden_dim, 1, 3)

    def forward(self, v):
        return torch.sigmoid(self.mlp(v)).squeeze(-1)


def _mix(raw_delta, delta, first, second):
    if delta is None:
        delta = torch.sigmoid(raw_delta)
    return delta * first + (1 - delta) * second


class PostIntegration(nn.Module):
    """GVN integration after message passing, ending in the readout.

    Parameters
    ----------
    cfg : named tuple
        Integration configuration with `stage == 'post'`.
    dim : int
        Size `F'` of the node representations.
    readout_hidden : int, optional
        Hidden size of the readout.
    readout_layers : int, optional
        Number of readout layers.
    """

    def __init__(self, cfg, dim, readout_hidden=None, readout_layers=2):
        super().__init__()
        integration_requirements(cfg)
        self.cfg = cfg
        self.strategy = cfg.strategy
        size = cfg.vsf_dim
        if cfg.strategy == 'attention':
            proj_dim = cfg.proj_dim or dim
            self.project = nn.Linear(size, proj_dim)
            self.injection = GatedInjection(dim, proj_dim, cfg.zero_init)
            self.readout = Readout(dim, readout_hidden, readout_layers)
        elif cfg.strategy == 'concat':
            self.readout = Readout(dim + size, readout_hidden, readout_layers)
            if cfg.zero_init:
                with torch.no_grad():
                    self.readout.first_layer.weight[:, dim:] = 0
        else:
            self.readout = Readout(dim, readout_hidden, readout_layers)
            self.decoder = VDecoder(size)
            self.delta = nn.Parameter(torch.tensor(
                -SATURATED_DELTA if cfg.zero_init else 0.0))

    def forward(self, y_u, y_v, v, delta=None):
        if self.strategy == 'attention':
            context = self.project(v)
            return self.readout(self.injection(y_u, context),
                                self.injection(y_v, context))
        if self.strategy == 'concat':
            return self.readout(torch.cat([y_u, v], dim=-1),
                                torch.cat([y_v, v], dim=-1))
        return _mix(self.delta, delta, self.decoder(v),
                    self.readout(y_u, y_v))


class PreIntegration(nn.Module):
    """E-GVN integration of adapted VSFs into node attributes.

    Parameters
    ----------
    cfg : named tuple
        Integration configuration with `stage == 'pre'`; `vsf_dim` is the
        adapted VSF size.
    feature_dim : int
        Node attribute size `F` (may be 0).

    Attributes
    ----------
    out_dim : int
        Size of the vision-aware attributes.
    """

    def __init__(self, cfg, feature_dim):
        super().__init__()
        integration_requirements(cfg)
        self.cfg = cfg
        self.strategy = cfg.strategy
        size = cfg.vsf_dim
        if cfg.strategy == 'attention':
            if feature_dim == 0:
                raise ValueError(
                    'Attention integration needs node attributes!')
            self.injection = GatedInjection(feature_dim, size, cfg.zero_init)
            self.out_dim = feature_dim
        elif cfg.strategy == 'concat':
            self.out_dim = feature_dim + size
        else:
            self.out_dim = cfg.proj_dim or feature_dim or size
            self.attribute = nn.Linear(feature_dim, self.out_dim)
            self.visual = nn.Linear(size, self.out_dim)
            self.delta = nn.Parameter(torch.tensor(
                SATURATED_DELTA if cfg.zero_init else 0.0))
            if cfg.zero_init:
                if self.out_dim != feature_dim:
                    raise ValueError(
                        'Zero-initialized weighted integration needs '
                        '\'proj_dim\' equal to the attribute size!')
                with torch.no_grad():
                    self.attribute.weight.copy_(torch.eye(feature_dim))
                    nn.init.zeros_(self.attribute.bias)
                    nn.init.zeros_(self.visual.weight)
                    nn.init.zeros_(self.visual.bias)

    def forward(self, x, v, delta=None):
        if self.strategy == 'attention':
            return self.injection(x, v)
        if self.strategy == 'concat':
            return torch.cat([x, v.to(x.dtype)], dim=-1)
        return _mix(self.delta, delta, self.attribute(x), self.visual(v))


def gvn_integrate(strategy, y_u, y_v, v, module, delta=None):
    """Scores links from endpoint representations and link VSFs.

    Parameters
    ----------
    strategy : {'attention', 'concat', 'weighted'}
        Integration strategy; must be the strategy `module` was built for.
    y_u, y_v : torch.Tensor
        Endpoint representations of shape `B x F'`.
    v : torch.Tensor
        Link VSFs of shape `B x S`.
    module : PostIntegration
        Integration module.
    delta : float, optional
        Fixed mixing weight of `'weighted'`, used instead of the learned one.

    Returns
    -------
    torch.Tensor
        Probabilities of shape `B`.
    """
    check.one_of(strategy, STRATEGIES, 'integration strategy')
    if module.strategy != strategy:
        raise ValueError(
            'Module integrates with \'{}\', not \'{}\'!'.format(
                module.strategy, strategy))
    return module(y_u, y_v, v, delta)


def egvn_integrate(strategy, x, v, module, delta=None):
    """Makes node attributes vision-aware.

    Parameters
    ----------
    strategy : {'attention', 'concat', 'weighted'}
        Integration strategy; must be the strategy `module` was built for.
    x : torch.Tensor
        Node attributes of shape `n x F`.
    v : torch.Tensor
        Adapted VSFs of shape `n x S_out`.
    module : PreIntegration
        Integration module.
    delta : float, optional
        Fixed mixing weight of `'weighted'`, used instead of the learned one.

    Returns
    -------
    torch.Tensor
        Attributes of shape `n x module.out_dim`.
    """
    check.one_of(strategy, STRATEGIES, 'integration strategy')
    if module.strategy != strategy:
        raise ValueError(
            'Module integrates with \'{}\', not \'{}\'!'.format(
                module.strategy, strategy))
    return module(x, v, delta)
