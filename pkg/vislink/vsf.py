"""
Visual structural features (VSFs): the vision encoder, the adapter that
refines frozen VSFs and the persisted per-node VSF repository.
"""
import os
import struct
from collections import namedtuple
import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F
import torchvision
from vislink import check, graph, render, utils
from vislink.rendering import style as styles

VsfRepository = namedtuple('VsfRepository', [
    'matrix', 'graph_digest', 'style_digest', 'k', 'encoder_id'])

BACKBONES = ('resnet50', 'small_cnn')
REPOSITORY_MAGIC = b'VSFR'
REPOSITORY_VERSION = 1

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def _resnet50():
    network = torchvision.models.resnet50(weights=None)
    # global-average-pooled output of the last convolutional block
    network.fc = nn.Identity()
    return network, 2048, 224, IMAGENET_MEAN, IMAGENET_STD


def _small_cnn():
    network = nn.Sequential(
        nn.Conv2d(3, 16, 3, stride=2, padding=1), nn.ReLU(),
        nn.Conv2d(16, 32, 3, stride=2, padding=1), nn.ReLU(),
        nn.Conv2d(32, 64, 3, stride=2, padding=1), nn.ReLU(),
        nn.AdaptiveAvgPool2d(1), nn.Flatten())
    return network, 64, None, (0.5, 0.5, 0.5), (0.5, 0.5, 0.5)


backbone_functions = {'resnet50': _resnet50, 'small_cnn': _small_cnn}


class VisionEncoder(nn.Module):
    """Maps rendered images to VSF vectors of length `output_dim`.

    Parameters
    ----------
    backbone : {'resnet50', 'small_cnn'}
        Architecture.
    weights : str, optional
        Path of the file the weights were loaded from.
    trainable : bool, optional
        If False, the parameters never receive gradients.
    """

    def __init__(self, backbone, weights=None, trainable=False):
        super().__init__()
        check.one_of(backbone, BACKBONES, 'backbone')
        self.backbone = backbone
        self.weights = weights
        self.network, self.output_dim, self.input_px, mean, std = \
            backbone_functions[backbone]()
        self.register_buffer('mean', torch.tensor(mean).view(1, 3, 1, 1))
        self.register_buffer('std', torch.tensor(std).view(1, 3, 1, 1))
        self.set_trainable(trainable)

    def set_trainable(self, trainable):
        self.trainable = bool(trainable)
        self.network.requires_grad_(self.trainable)

    def forward(self, pixels):
        """Encodes a `B x 3 x H x W` batch of pixel values in [0, 1]."""
        if self.input_px is not None and \
                tuple(pixels.shape[-2:]) != (self.input_px, self.input_px):
            pixels = F.interpolate(pixels, size=(self.input_px, self.input_px),
                                   mode='bilinear', align_corners=False)
        return self.network((pixels - self.mean) / self.std)


def images_to_tensor(images):
    """Stacks `H x W x 3` uint8 images into a `B x 3 x H x W` float tensor."""
    array = np.stack([np.asarray(image) for image in images])
    return torch.from_numpy(array).permute(0, 3, 1, 2).float() / 255


def random_encoder(backbone='small_cnn', seed=0, trainable=False):
    """Builds an encoder with a seeded random initialization."""
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        return VisionEncoder(backbone, None, trainable)


def save_encoder_weights(backbone, path, seed=0):
    """Saves the seeded random initialization of a backbone to a file.

    Returns
    -------
    str
        Path of the weights file.
    """
    state = random_encoder(backbone, seed).network.state_dict()
    utils.atomic_write(path, lambda handle: torch.save(state, handle))
    return path


def load_encoder(backbone, weights, trainable=False):
    """Loads a vision encoder from a weights file.

    Parameters
    ----------
    backbone : {'resnet50', 'small_cnn'}
        Architecture.
    weights : str
        Path of a `torch.save` state dict of the backbone. Classifier
        weights (`fc.*`) are ignored.
    trainable : bool, optional
        If True, the encoder is finetuned together with the model.

    Returns
    -------
    VisionEncoder
        Encoder.

    Raises
    -------
    EncoderLoadError
        If the weights file is missing or does not match the backbone.
    """
    encoder = VisionEncoder(backbone, weights, trainable)
    if weights is None or not os.path.exists(weights):
        raise check.EncoderLoadError(
            'Encoder weights \'{}\' do not exist.'.format(weights))
    try:
        state = torch.load(weights, map_location='cpu', weights_only=True)
        state = {key: value for key, value in state.items()
                 if not key.startswith('fc.')}
        encoder.network.load_state_dict(state)
    except Exception as error:
        raise check.EncoderLoadError(
            'Encoder weights \'{}\' cannot be loaded into \'{}\': {}'.format(
                weights, backbone, error)) from error
    return encoder


def encoder_id(encoder):
    """Returns an identifier of the backbone and its weights."""
    if encoder.weights is not None and os.path.exists(encoder.weights):
        fingerprint = utils.file_digest(encoder.weights)
    else:
        fingerprint = utils.parameter_digest(encoder.network)
    return '{}:{}'.format(encoder.backbone, fingerprint[:16])


def encode_images(encoder, images):
    """Encodes a list of images into a `B x S` tensor.

    Gradients flow into the encoder if it is trainable and gradients are
    enabled.
    """
    return encoder(images_to_tensor(images))


def encode_image(encoder, image):
    """Encodes one image in evaluation mode.

    Parameters
    ----------
    encoder : VisionEncoder
        Encoder.
    image : ndarray
        Image of shape `H x W x 3` and type uint8.

    Returns
    -------
    ndarray
        VSF vector of length `encoder.output_dim` and type float32.
    """
    was_training = encoder.training
    encoder.eval()
    with torch.no_grad():
        vector = encode_images(encoder, [image])[0]
    encoder.train(was_training)
    return vector.numpy().astype(np.float32)


class Adapter(nn.Module):
    """Two-layer perceptron refining frozen VSFs.

    Parameters
    ----------
    in_dim : int
        VSF length `S`.
    hidden_dim : int, optional
        Hidden size. Defaults to `S // 2`.
    out_dim : int, optional
        Output size. Defaults to `S`.
    activation : bool, optional
        If True, a rectifier follows the first layer.
    zero_init : bool, optional
        If True, the output layer is zero-initialized.
    """

    def __init__(self, in_dim, hidden_dim=None, out_dim=None, activation=True,
                 zero_init=False):
        super().__init__()
        self.in_dim = in_dim
        self.hidden_dim = hidden_dim or max(1, in_dim // 2)
        self.out_dim = out_dim or in_dim
        self.first = nn.Linear(in_dim, self.hidden_dim)
        self.activation = nn.ReLU() if activation else nn.Identity()
        self.second = nn.Linear(self.hidden_dim, self.out_dim)
        if zero_init:
            nn.init.zeros_(self.second.weight)
            nn.init.zeros_(self.second.bias)

    def forward(self, v):
        return self.second(self.activation(self.first(v)))


def adapt(adapter, v):
    """Applies an adapter to one VSF vector or a batch of them.

    Raises
    -------
    ValueError
        If the VSF length differs from the adapter input size.
    """
    check.same_length(v, adapter.in_dim, 'v')
    if not torch.is_tensor(v):
        v = torch.as_tensor(np.asarray(v), dtype=torch.float32)
    return adapter(v)


def save_repository(repo, path):
    """Writes a repository in the binary `VSFR` format.

    The header holds the magic, the version (u32), `n` (u64) and `S` (u32),
    followed by the length-prefixed UTF-8 graph digest, style digest, `k`
    and encoder id, then `n*S` little-endian float32 values in row-major
    order.
    """
    matrix = np.ascontiguousarray(repo.matrix, dtype='<f4')
    n, size = matrix.shape

    def write(handle):
        handle.write(REPOSITORY_MAGIC)
        handle.write(struct.pack('<IQI', REPOSITORY_VERSION, n, size))
        for text in (repo.graph_digest, repo.style_digest, str(repo.k),
                     repo.encoder_id):
            encoded = text.encode('utf-8')
            handle.write(struct.pack('<I', len(encoded)))
            handle.write(encoded)
        handle.write(matrix.tobytes())

    utils.atomic_write(path, write)
    return path


def load_repository(path):
    """Reads a repository written by `save_repository`.

    Raises
    -------
    ValueError
        If the file is not a complete `VSFR` repository.
    """
    with open(path, 'rb') as handle:
        data = handle.read()
    if data[:4] != REPOSITORY_MAGIC:
        raise ValueError('\'{}\' is not a VSF repository!'.format(path))
    try:
        version, n, size = struct.unpack_from('<IQI', data, 4)
        offset = 20
        texts = []
        for _ in range(4):
            length, = struct.unpack_from('<I', data, offset)
            offset += 4
            texts.append(data[offset:offset + length].decode('utf-8'))
            offset += length
    except (struct.error, UnicodeDecodeError) as error:
        raise ValueError(
            'VSF repository \'{}\' has a corrupt header!'.format(path)) \
            from error
    if version != REPOSITORY_VERSION:
        raise ValueError(
            'VSF repository version {} is not supported!'.format(version))
    if len(data) - offset != 4 * n * size:
        raise ValueError(
            'VSF repository \'{}\' is truncated!'.format(path))
    matrix = np.frombuffer(data, dtype='<f4', offset=offset).reshape(n, size)
    return VsfRepository(matrix.astype(np.float32), texts[0], texts[1],
                         int(texts[2]), texts[3])


def check_repository(repo, graph_digest, style_digest, k):
    """Raises `StalenessError` if the repository was built from other
    inputs."""
    check.repository_metadata(repo, graph_digest, style_digest, k)


def build_repository(g, k, style, encoder, path=None, cache_dir=None,
                     **kwargs):
    """Builds the per-node VSF repository with a frozen encoder.

    Each node's k-hop node-centered view is rendered once and encoded once.
    If `path` already holds a repository built from the same inputs, it is
    returned without rendering anything.

    Parameters
    ----------
    g : named tuple
        Graph.
    k : int
        Visual perception scope.
    style : named tuple
        Render style.
    encoder : VisionEncoder
        Frozen encoder.
    path : str, optional
        Repository file.
    cache_dir : str, optional
        Image cache directory.
    **kwargs
        counter : collections.Counter, optional
            Incremented under `'render'` and `'encode'`.
        verbose : int, optional
            If 1, progress is reported.

    Returns
    -------
    named tuple
        Repository with an `n x S` float32 matrix.

    Raises
    -------
    ValueError
        If the encoder is trainable.
    StalenessError
        If `path` holds a repository built from other inputs.
    """
    if encoder.trainable:
        raise ValueError('VSF repositories need a frozen encoder!')
    check.hop_count(k)
    graph_digest = graph.graph_digest(g)
    style_digest = styles.style_digest(style)
    identifier = encoder_id(encoder)

    if path is not None and os.path.exists(path):
        repo = load_repository(path)
        check_repository(repo, graph_digest, style_digest, k)
        if repo.encoder_id != identifier:
            raise check.StalenessError(
                'VSF repository is stale: encoder id is \'{}\' but \'{}\' '
                'was expected. Rebuild the repository.'.format(
                    repo.encoder_id, identifier))
        utils.message('Loaded VSF repository from {}.'.format(path), **kwargs)
        return repo

    utils.message('Building VSF repository for {} nodes.'.format(g.n),
                  **kwargs)
    views = [graph.k_hop_node_subgraph(g, v, k) for v in range(g.n)]
    batch = render.render_batch(views, style, cache_dir, **kwargs)
    matrix = np.zeros((g.n, encoder.output_dim), dtype=np.float32)
    counter = kwargs.get('counter')
    for v, image in enumerate(batch.images):
        matrix[v] = encode_image(encoder, image)
        if counter is not None:
            counter['encode'] += 1

    repo = VsfRepository(matrix, graph_digest, style_digest, k, identifier)
    if path is not None:
        save_repository(repo, path)
        utils.message('Saved VSF repository to {}.'.format(path), **kwargs)
    return repo
