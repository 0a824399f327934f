from vislink import config, features, graph, probes, utils, vsf
from vislink.rendering import style as styles
import numpy as np
import pytest

ring = graph.from_edges(
    30, [(i, (i + 1) % 30) for i in range(30)] +
    [(i, (i + 7) % 30) for i in range(0, 30, 2)])
splits = graph.make_splits(ring, seed=0, neg_per_pos=3)
small_style = styles.default_style(canvas_px=(64, 64), node_radius_px=3,
                                   edge_width_px=1, layout_iterations=20)

# success_ratio()
success_pred = [[0.4, 1.2, 3.0],
                [1.05, 0.005, 2.5],
                [0.6, 2.4],
                [[0.95, 3.2], [0.0, 1.0]]]
success_target = [[1, 1, 2],
                  [1.0, 0.0, 2.0],
                  [1, 2],
                  [[1.0, 3.0], [0.02, 1.0]]]
success_kind = ['CN', 'AA', 'SPD', 'DE']
success_expected = [100/3, 200/3, 100, 75]
success_arguments = zip(success_pred, success_target, success_kind,
                        success_expected)

# ablation_configs()
ablation_axes = ['scope_k', 'style_consistency', 'visualizer_variant',
                 'integration', 'adaptivity', 'labeling', 'color', 'shape']
ablation_grids = [[1, 3], [True, False], ['graphviz', 'igraph'],
                  ['concat', 'attention'], ['freeze', 'partial'],
                  ['none', 'unique'], ['red', 'black'], ['circle', 'box']]
ablation_fields = ['k', 'style_consistency', 'style', 'integration',
                   'adaptivity', 'labeling', 'center_color', 'node_shape']
ablation_arguments = zip(ablation_axes, ablation_grids, ablation_fields)

invalid_ablation_axes = ['scope_k', 'style_consistency', 'color', 'depth']
invalid_ablation_grids = [[1, 4], ['yes'], ['purple'], [1]]
invalid_ablation_errors = [ValueError, TypeError, ValueError, ValueError]
invalid_ablation_arguments = zip(invalid_ablation_axes, invalid_ablation_grids,
                                 invalid_ablation_errors)


def ring_repository():
    return vsf.build_repository(ring, 1, small_style,
                                vsf.random_encoder('small_cnn'), verbose=0)


def probe_pairs():
    return np.vstack([splits.test_pos, splits.test_neg])


@pytest.mark.parametrize('pred,target,kind,expected', success_arguments)
def test_success_ratio(pred, target, kind, expected):
    """Tests function `probes.success_ratio()`.

    Parameters
    ----------
    pred : list
        Predictions.
    target : list
        Targets.
    kind : str
        Structural feature kind.
    expected : float
        Expected percentage.
    """
    assert probes.success_ratio(pred, target, kind) == pytest.approx(expected)


def test_success_ratio_errors():
    with pytest.raises(ValueError):
        probes.success_ratio([1, 2], [1, 2, 3], 'CN')
    with pytest.raises(ValueError):
        probes.success_ratio([1], [1], 'katz')


def test_normalized_mse():
    labels = np.array([1.0, 2.0, 3.0, 6.0])
    assert probes.normalized_mse(labels, labels) == 0
    assert probes.normalized_mse(np.full(4, labels.mean()), labels) == \
        pytest.approx(1)
    assert probes.normalized_mse([1, 2], [3, 3]) is None


def test_fit_regressor():
    inputs = np.linspace(-1, 1, 20).reshape(-1, 1)
    targets = 2 * inputs[:, 0]
    model = probes.fit_regressor(inputs, targets, epochs=500)
    assert not model.training
    pred = probes._predict(model, inputs).ravel()
    assert probes.normalized_mse(pred, targets) < 0.05


def test_pair_inputs():
    repo = ring_repository()
    pairs = np.array([[0, 1], [1, 0], [2, 9]])
    inputs = probes.pair_inputs(repo, pairs)
    assert inputs.shape == (3, 128)
    np.testing.assert_array_equal(inputs[0], inputs[1])

    matrix = np.ones((3, 5))
    assert probes.pair_inputs(matrix, pairs) is not None
    with pytest.raises(ValueError):
        probes.pair_inputs(np.ones((2, 5)), pairs)


def test_link_vsfs():
    encoder = vsf.random_encoder('small_cnn')
    vsfs = probes.link_vsfs(encoder, ring, [(0, 1), (1, 0), (3, 20)], 1,
                            small_style, verbose=0)
    assert vsfs.shape == (3, 64)
    np.testing.assert_array_equal(vsfs[0], vsfs[1])


def test_reproduction_ratio(capsys):
    """Every target is scored as a percentage; DE comes with its note."""
    report = probes.reproduction_ratio(
        ring_repository(), ring, ['CN', 'SPD', 'AA', 'DE'], probe_pairs(),
        k=1, epochs=50)
    assert report.probe == 'reproduction'
    assert report.criterion == probes.CRITERION_VERSION
    assert set(report.scores) == {'CN', 'SPD', 'AA', 'DE'}
    for score in report.scores.values():
        assert score is None or 0 <= score <= 100
    assert probes.DE_NOTE in report.notes
    assert 'Warning' in capsys.readouterr().out
    assert report.config['node_level']
    assert not report.config['finetuned']


def test_reproduction_ratio_link_level():
    pairs = probe_pairs()
    encoder = vsf.random_encoder('small_cnn')
    vsfs = probes.link_vsfs(encoder, ring, pairs, 1, small_style, verbose=0)
    report = probes.reproduction_ratio(vsfs, ring, ['SPD'], pairs,
                                       finetuned=True, k=1, epochs=20)
    assert not report.config['node_level']
    assert report.config['finetuned']
    assert 0 <= report.scores['SPD'] <= 100


def test_reproduction_ratio_constant_targets():
    """Targets that never vary over the probe pairs are not scored."""
    cycle = probes.cycle_graph(6)
    repo = vsf.build_repository(cycle, 1, small_style,
                                vsf.random_encoder('small_cnn'), verbose=0)
    pairs = [(i, (i + 1) % 6) for i in range(6)]
    report = probes.reproduction_ratio(repo, cycle, ['CN', 'SPD'], pairs,
                                       k=1, epochs=5, verbose=0)
    assert report.scores == {'CN': None, 'SPD': None}
    assert len(report.notes) == 2


def test_reproduction_ratio_errors():
    repo = ring_repository()
    with pytest.raises(ValueError):
        probes.reproduction_ratio(repo, ring, ['CN'], probe_pairs(),
                                  holdout=1)
    with pytest.raises(ValueError):
        probes.reproduction_ratio(repo, ring, ['CN'], np.empty((0, 2)))


def test_finetune_encoder():
    """Finetuning changes the weights and leaves the encoder frozen."""
    encoder = vsf.random_encoder('small_cnn')
    before = utils.parameter_digest(encoder)
    pairs = np.vstack([splits.train_pos[:8], splits.valid_neg[:8]])
    labels = np.r_[np.ones(8), np.zeros(8)]
    tuned = probes.finetune_encoder(encoder, ring, pairs, labels, small_style,
                                    1, epochs=1, batch_size=8, lr=1e-3,
                                    verbose=0)
    assert tuned is encoder
    assert not tuned.trainable
    assert not tuned.training
    assert utils.parameter_digest(tuned) != before

    with pytest.raises(ValueError):
        probes.finetune_encoder(encoder, ring, pairs, labels[:3], small_style,
                                1, verbose=0)


def test_generate_graphs():
    graphs = probes.generate_graphs('erdos_renyi', 5, seed=1)
    assert len(graphs) == 5
    assert all(g.n == 10 for g in graphs)
    same = probes.generate_graphs('erdos_renyi', 5, seed=1)
    for first, second in zip(graphs, same):
        np.testing.assert_array_equal(first.edges, second.edges)

    choices = {(m, d) for m, d in features.RANDOM_REGULAR_CHOICES}
    for g in probes.generate_graphs('random_regular', 4):
        degrees = graph.degrees(g)
        assert np.all(degrees == degrees[0])
        assert (g.n, int(degrees[0])) in choices

    with pytest.raises(ValueError):
        probes.generate_graphs('barabasi_albert', 3)


def test_whole_graph_view():
    view = probes.whole_graph_view(ring)
    assert view.center == graph.Node(0)
    assert view.local_nodes.size == 30
    assert view.local_edges.shape == (45, 2)


def test_substructure_experiment():
    report = probes.substructure_experiment(
        n_graphs=20, seeds=2, epochs=10, hidden_dim=8, verbose=0)
    assert report.probe == 'substructure'
    assert len(report.scores['per_seed']) == 2
    defined = [s for s in report.scores['per_seed'] if s is not None]
    if defined:
        assert report.scores['best'] == min(defined)
        assert report.scores['best'] <= report.scores['median']
    assert not report.config['with_vsf']


def test_substructure_experiment_with_vsf():
    report = probes.substructure_experiment(
        'random_regular', n_graphs=10, kind='three_star', with_vsf=True,
        seeds=1, mpnn='sage', epochs=5, hidden_dim=8, style=small_style,
        verbose=0)
    assert report.config['with_vsf']
    assert report.config['mpnn'] == 'sage'
    assert len(report.scores['per_seed']) == 1


def test_substructure_experiment_errors():
    with pytest.raises(ValueError):
        probes.substructure_experiment(n_graphs=9)
    with pytest.raises(ValueError):
        probes.substructure_experiment(n_graphs=10, kind='square')
    with pytest.raises(ValueError):
        probes.substructure_experiment(n_graphs=10, mpnn='gin')


def test_pixel_difference():
    first = np.zeros((4, 4, 3), dtype=np.uint8)
    second = first.copy()
    assert probes.pixel_difference(first, second) == 0
    second[1, 2, 0] = 255
    second[3, 3] = 7
    assert probes.pixel_difference(first, second) == 2


def test_isomorphic_pair_demo():
    """Plain MPNNs cannot tell the links apart; their images can."""
    report = probes.isomorphic_pair_demo(depths=(1, 2, 3), epochs=50,
                                         run_config_text='[data]\n',
                                         verbose=0)
    for depth in (1, 2, 3):
        gap = report.scores['mpnn_gap_depth_{}'.format(depth)]
        assert gap == pytest.approx(0, abs=1e-6)
    assert report.scores['pixel_difference'] > 0
    assert report.scores['gvn_gap'] > 1e-3
    assert report.run_config == '[data]\n'
    assert report.notes == [probes.C6_NOTE]


def test_image_coordinates():
    coords = probes.image_coordinates(ring, 1, small_style)
    assert coords.shape == (30, 2)
    assert np.all((coords >= 0.05 - 1e-9) & (coords <= 0.95 + 1e-9))


def test_pe_baseline_experiment():
    report = probes.pe_baseline_experiment(ring, splits, 'degree', epochs=2,
                                           hidden_dim=8, dataset='ring',
                                           verbose=0)
    assert report.model == 'gcn-degree'
    assert report.dataset == 'ring'
    assert 'mrr' in report.metrics

    report = probes.pe_baseline_experiment(ring, splits, 'image_coords', k=1,
                                           style=small_style, epochs=2,
                                           hidden_dim=8, verbose=0)
    assert report.model == 'gcn-image_coords'


@pytest.mark.parametrize('axis,grid,field', ablation_arguments)
def test_ablation_configs(axis, grid, field):
    """Tests function `probes.ablation_configs()`.

    Parameters
    ----------
    axis : str
        Ablation axis.
    grid : list
        Values of the axis.
    field : str
        Configuration field the axis sets.
    """
    base = config.default_config(output_dir='runs')
    configs = probes.ablation_configs(axis, grid, base)
    assert [getattr(cfg, field) for cfg in configs] == grid
    for cfg, value in zip(configs, grid):
        assert cfg.output_dir.endswith('{}-{}'.format(axis, value))


def test_ablation_full_adaptivity():
    """Full finetuning runs as GVN, the other adaptivities as E-GVN."""
    base = config.default_config()
    configs = probes.ablation_configs('adaptivity',
                                      ['freeze', 'partial', 'full'], base)
    assert [cfg.model for cfg in configs] == ['egvn', 'egvn', 'gvn']


@pytest.mark.parametrize('axis,grid,error', invalid_ablation_arguments)
def test_ablation_configs_errors(axis, grid, error):
    with pytest.raises(error):
        probes.ablation_configs(axis, grid, config.default_config())


def test_ablation_driver(tmp_path):
    path = tmp_path / 'ring.txt'
    path.write_text('\n'.join('{} {}'.format(u, v) for u, v in ring.edges))
    base = config.default_config(
        edges=str(path), dataset='ring', model='baseline-gcn', hidden_dim=8,
        epochs=2, batch_size=16, neg_per_pos=3,
        output_dir=str(tmp_path / 'out'), verbose=0)
    reports = probes.ablation_driver('integration', ['concat', 'weighted'],
                                     base, verbose=0)
    assert len(reports) == 2
    assert all(report.model == 'baseline-gcn' for report in reports)
    assert (tmp_path / 'out' / 'integration-concat' / 'report.json').exists()
