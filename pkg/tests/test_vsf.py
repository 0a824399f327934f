from collections import Counter
from vislink import check, graph, render, utils, vsf
from vislink.rendering import style as styles
import numpy as np
import pytest
import torch

c6 = graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
t1 = graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
small_style = styles.default_style(canvas_px=(64, 64), node_radius_px=3,
                                   edge_width_px=1, layout_iterations=20)

# build_repository() staleness
stale_graphs = [c6, t1, c6]
stale_k = [2, 1, 1]
stale_styles = [small_style, small_style,
                small_style._replace(node_shape='circle')]
stale_arguments = zip(stale_graphs, stale_k, stale_styles)

# load_repository()
corruptions = [lambda data: b'XXXX' + data[4:],
               lambda data: data[:-4],
               lambda data: data[:10]]


@pytest.fixture
def encoder():
    return vsf.random_encoder('small_cnn', seed=0)


def test_random_encoder(encoder):
    """Seeded encoders are frozen and reproducible."""
    assert not encoder.trainable
    assert all(not p.requires_grad for p in encoder.network.parameters())
    assert encoder.output_dim == 64
    same = vsf.random_encoder('small_cnn', seed=0)
    other = vsf.random_encoder('small_cnn', seed=1)
    assert vsf.encoder_id(encoder) == vsf.encoder_id(same)
    assert vsf.encoder_id(encoder) != vsf.encoder_id(other)
    assert vsf.encoder_id(encoder).startswith('small_cnn:')


def test_trainable_encoder():
    encoder = vsf.random_encoder('small_cnn', seed=0, trainable=True)
    assert all(p.requires_grad for p in encoder.network.parameters())
    encoder.set_trainable(False)
    assert not any(p.requires_grad for p in encoder.network.parameters())


def test_encode_image(encoder):
    """Encoding is deterministic and yields a float32 vector."""
    view = graph.k_hop_link_subgraph(t1, 0, 2, 1)
    image = render.render(view, small_style)
    vector = vsf.encode_image(encoder, image)
    assert vector.shape == (64,)
    assert vector.dtype == np.float32
    np.testing.assert_array_equal(vector, vsf.encode_image(encoder, image))
    assert encoder.training


def test_encode_images_gradients():
    """Gradients reach trainable encoders only."""
    image = render.render(graph.k_hop_node_subgraph(t1, 1, 1), small_style)
    trainable = vsf.random_encoder('small_cnn', seed=0, trainable=True)
    vsf.encode_images(trainable, [image, image]).sum().backward()
    assert all(p.grad is not None for p in trainable.network.parameters())

    frozen = vsf.random_encoder('small_cnn', seed=0)
    output = vsf.encode_images(frozen, [image])
    assert output.shape == (1, 64)
    assert not output.requires_grad


def test_load_encoder(tmp_path, encoder):
    """Weights saved from a seeded initialization load back identically."""
    path = vsf.save_encoder_weights('small_cnn', str(tmp_path / 'w.pt'),
                                    seed=0)
    loaded = vsf.load_encoder('small_cnn', path)
    assert utils.parameter_digest(loaded.network) == \
        utils.parameter_digest(encoder.network)
    assert vsf.encoder_id(loaded).startswith('small_cnn:')


def test_load_encoder_errors(tmp_path):
    with pytest.raises(check.EncoderLoadError):
        vsf.load_encoder('small_cnn', str(tmp_path / 'missing.pt'))
    path = str(tmp_path / 'bad.pt')
    torch.save({'weight': torch.zeros(3)}, path)
    with pytest.raises(check.EncoderLoadError):
        vsf.load_encoder('small_cnn', path)
    with pytest.raises(ValueError):
        vsf.VisionEncoder('vgg16')


def test_build_repository(tmp_path, encoder):
    """Every node is rendered and encoded once, and only once."""
    path = str(tmp_path / 'c6.vsfr')
    counter = Counter()
    repo = vsf.build_repository(c6, 1, small_style, encoder, path,
                                str(tmp_path / 'cache'), counter=counter,
                                verbose=0)
    assert repo.matrix.shape == (6, 64)
    assert repo.matrix.dtype == np.float32
    assert counter == Counter({'render': 6, 'encode': 6})
    # all node views of a cycle are isomorphic
    np.testing.assert_array_equal(repo.matrix, repo.matrix[[0]].repeat(6, 0))

    again = vsf.build_repository(c6, 1, small_style, encoder, path,
                                 counter=counter, verbose=0)
    assert counter == Counter({'render': 6, 'encode': 6})
    np.testing.assert_array_equal(again.matrix, repo.matrix)
    assert again.graph_digest == graph.graph_digest(c6)
    assert again.k == 1


@pytest.mark.parametrize('k', [1, 2])
def test_repository_rows(encoder, k):
    """Row i encodes the rendered k-hop view centered on node i."""
    repo = vsf.build_repository(t1, k, small_style, encoder, verbose=0)
    for i in range(t1.n):
        view = graph.k_hop_node_subgraph(t1, i, k)
        expected = vsf.encode_image(encoder, render.render(view, small_style))
        np.testing.assert_allclose(repo.matrix[i], expected, rtol=1e-6)


@pytest.mark.parametrize('g,k,style', stale_arguments)
def test_build_repository_stale(tmp_path, encoder, g, k, style):
    """A repository built from other inputs is never reused.

    Parameters
    ----------
    g : named tuple
        Graph of the second build.
    k : int
        Scope of the second build.
    style : named tuple
        Style of the second build.
    """
    path = str(tmp_path / 'repo.vsfr')
    vsf.build_repository(c6, 1, small_style, encoder, path, verbose=0)
    with pytest.raises(check.StalenessError):
        vsf.build_repository(g, k, style, encoder, path, verbose=0)


def test_build_repository_other_encoder(tmp_path, encoder):
    path = str(tmp_path / 'repo.vsfr')
    vsf.build_repository(c6, 1, small_style, encoder, path, verbose=0)
    with pytest.raises(check.StalenessError):
        vsf.build_repository(c6, 1, small_style,
                             vsf.random_encoder('small_cnn', seed=5), path,
                             verbose=0)


def test_build_repository_trainable_encoder():
    encoder = vsf.random_encoder('small_cnn', trainable=True)
    with pytest.raises(ValueError):
        vsf.build_repository(c6, 1, small_style, encoder, verbose=0)


def test_repository_file(tmp_path):
    """The binary header carries the metadata next to the matrix."""
    matrix = np.arange(12, dtype=np.float32).reshape(3, 4)
    repo = vsf.VsfRepository(matrix, 'a' * 64, 'b' * 64, 2, 'small_cnn:x')
    path = vsf.save_repository(repo, str(tmp_path / 'r.vsfr'))
    with open(path, 'rb') as handle:
        data = handle.read()
    assert data[:4] == vsf.REPOSITORY_MAGIC
    assert len(data) == 20 + 4 * 4 + 64 + 64 + 1 + 11 + 4 * 12

    loaded = vsf.load_repository(path)
    np.testing.assert_array_equal(loaded.matrix, matrix)
    assert loaded._replace(matrix=None) == repo._replace(matrix=None)
    vsf.check_repository(loaded, 'a' * 64, 'b' * 64, 2)
    with pytest.raises(check.StalenessError):
        vsf.check_repository(loaded, 'a' * 64, 'b' * 64, 3)


@pytest.mark.parametrize('corrupt', corruptions)
def test_load_repository_corrupt(tmp_path, corrupt):
    """Damaged repository files are rejected."""
    repo = vsf.VsfRepository(np.ones((2, 3), dtype=np.float32), 'g', 's', 1,
                             'e')
    path = vsf.save_repository(repo, str(tmp_path / 'r.vsfr'))
    with open(path, 'rb') as handle:
        data = handle.read()
    with open(path, 'wb') as handle:
        handle.write(corrupt(data))
    with pytest.raises(ValueError):
        vsf.load_repository(path)


def test_adapter():
    adapter = vsf.Adapter(8, 4, 6)
    assert adapter(torch.ones(5, 8)).shape == (5, 6)
    assert vsf.Adapter(8).out_dim == 8
    assert vsf.Adapter(8).hidden_dim == 4

    zero = vsf.Adapter(8, zero_init=True)
    np.testing.assert_array_equal(
        vsf.adapt(zero, np.ones(8)).detach().numpy(), np.zeros(8))
    with pytest.raises(ValueError):
        vsf.adapt(adapter, np.ones(7))


def test_identity_adapter():
    """An adapter configured as the identity passes VSFs through."""
    adapter = vsf.Adapter(8, 8, 8, activation=False)
    with torch.no_grad():
        for layer in (adapter.first, adapter.second):
            layer.weight.copy_(torch.eye(8))
            layer.bias.zero_()
    v = np.random.default_rng(0).normal(size=(3, 8)).astype(np.float32)
    np.testing.assert_allclose(vsf.adapt(adapter, v).detach().numpy(), v,
                               rtol=1e-6)
