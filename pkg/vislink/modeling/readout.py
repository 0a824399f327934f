import torch
import torch.nn as nn


def mlp(in_dim, hidden_dim, out_dim, num_layers):
    """Builds a perceptron with rectifiers between its affine layers."""
    dims = [in_dim] + [hidden_dim] * (num_layers - 1) + [out_dim]
    layers = []
    for i, (d_in, d_out) in enumerate(zip(dims[:-1], dims[1:])):
        layers.append(nn.Linear(d_in, d_out))
        if i < num_layers - 1:
            layers.append(nn.ReLU())
    return nn.Sequential(*layers)


class Readout(nn.Module):
    """Link probability `sigmoid(MLP(y_u * y_v))`.

    Parameters
    ----------
    dim : int
        Size of the node representations.
    hidden_dim : int, optional
        Hidden size of the perceptron. Defaults to `dim`.
    num_layers : int, optional
        Number of affine layers.
    zero_init : bool, optional
        If True, the final layer is zero-initialized so every probability
        is 0.5.
    """

    def __init__(self, dim, hidden_dim=None, num_layers=2, zero_init=False):
        super().__init__()
        if num_layers < 1:
            raise ValueError(
                '\'num_layers\' should be positive! Instead received '
                '{}.'.format(num_layers))
        self.dim = dim
        self.mlp = mlp(dim, hidden_dim or dim, 1, num_layers)
        if zero_init:
            nn.init.zeros_(self.mlp[-1].weight)
            nn.init.zeros_(self.mlp[-1].bias)

    @property
    def first_layer(self):
        return self.mlp[0]

    def forward(self, y_u, y_v):
        return torch.sigmoid(self.mlp(y_u * y_v)).squeeze(-1)


def readout(module, y_u, y_v):
    """Scores node representation pairs with a readout module.

    Raises
    -------
    ValueError
        If the two representations have different shapes.
    """
    if y_u.shape != y_v.shape:
        raise ValueError(
            'Representations should have matching shapes! Received {} and '
            '{}.'.format(tuple(y_u.shape), tuple(y_v.shape)))
    return module(y_u, y_v)
