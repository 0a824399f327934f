"""
Runs configured experiments: loads the data, builds the model named by a
run configuration, trains it once per seed and writes reports and
checkpoints to the output directory.
"""
import os
import time
from collections import Counter
import torch
from vislink import check, config, graph, metrics, train, utils, vsf
from vislink.modeling import checkpoint, networks
from vislink.modeling.integrate import IntegrationConfig
from vislink.modeling.mpnn import MpnnConfig, propagation_matrix
from vislink.rendering import style as styles


def load_dataset(cfg, seed=0):
    """Loads the graph and its splits.

    Splits are read from `cfg.splits_dir` if it is set and sampled with
    `seed` otherwise.

    Returns
    -------
    tuple of named tuple
        Graph and split set.

    Raises
    -------
    ConfigurationError
        If no edge list is configured.
    """
    if cfg.edges is None:
        raise check.ConfigurationError(
            'No edge list configured! Set \'edges\' in [data].')
    g = graph.load_edge_list(cfg.edges)
    if cfg.features is not None:
        g = g._replace(features=graph.load_features(cfg.features, g.n))
    if cfg.splits_dir is not None:
        splits = graph.load_splits(cfg.splits_dir, g,
                                   cfg.use_valid_as_message_paths)
    else:
        splits = graph.make_splits(
            g, seed=seed, neg_per_pos=cfg.neg_per_pos,
            use_valid_as_message_paths=cfg.use_valid_as_message_paths)
    return g, splits


def build_style(cfg):
    """Returns the render style of a run configuration."""
    overrides = {'labeling': cfg.labeling}
    if cfg.center_color is not None:
        overrides['center_color'] = cfg.center_color
    if cfg.node_shape is not None:
        overrides['node_shape'] = cfg.node_shape
    return styles.visualizer_style(cfg.style, **overrides)


def build_encoder(cfg, seed=0, trainable=False):
    """Loads the configured vision encoder.

    Without a weights file, the small backbone gets a seeded random
    initialization; the ResNet50 backbone always needs weights.

    Raises
    -------
    EncoderLoadError
        If the weights are missing or do not fit the backbone.
    """
    if cfg.weights is not None:
        return vsf.load_encoder(cfg.backbone, cfg.weights, trainable)
    if cfg.backbone == 'small_cnn':
        return vsf.random_encoder(cfg.backbone,
                                  utils.derive_seed(seed, 'encoder'),
                                  trainable)
    raise check.EncoderLoadError(
        'Backbone \'{}\' needs a weights file! Set \'weights\' in '
        '[vision].'.format(cfg.backbone))


def repository_path(cfg, seed):
    return os.path.join(cfg.output_dir, 'vsf-seed{}.vsfr'.format(seed))


def build_model(cfg, g, message, seed=0, **kwargs):
    """Builds the model of a run configuration.

    Parameters
    ----------
    cfg : named tuple
        Run configuration.
    g : named tuple
        Full graph, providing the node attributes.
    message : named tuple
        Message graph; E-GVN builds its VSF repository from it.
    seed : int, optional
        Seed of the parameter initialization.
    **kwargs
        counter : collections.Counter, optional
            Render and encode counter.
        verbose : int, optional
            Verbosity of the repository build.

    Returns
    -------
    torch.nn.Module
        Link prediction model.
    """
    feature_dim = train.feature_matrix(g).shape[1]
    mpnn_cfg = MpnnConfig(cfg.depth, feature_dim, cfg.hidden_dim,
                          cfg.aggregator)
    torch.manual_seed(utils.derive_seed(seed, 'model'))

    if cfg.model == 'baseline-gcn':
        return networks.BaselineModel(mpnn_cfg, cfg.hidden_dim,
                                      cfg.readout_layers)

    style = build_style(cfg)
    randomize = not cfg.style_consistency
    style_seed = utils.derive_seed(seed, 'style')
    if cfg.model == 'gvn':
        encoder = build_encoder(cfg, seed, trainable=cfg.adaptivity == 'full')
        integration_cfg = IntegrationConfig(
            cfg.integration, 'post', encoder.output_dim, None, False)
        return networks.GvnModel(
            mpnn_cfg, integration_cfg, encoder, cfg.k, style, cfg.hidden_dim,
            cfg.readout_layers, cfg.cache_dir, randomize, style_seed)

    encoder = build_encoder(cfg, seed)
    os.makedirs(cfg.output_dir, exist_ok=True)
    repo = vsf.build_repository(
        message, cfg.k, style, encoder, repository_path(cfg, seed),
        cfg.cache_dir, randomize=randomize, seed=style_seed, **kwargs)
    size = repo.matrix.shape[1]
    adapter = None
    if cfg.adaptivity == 'partial':
        adapter = vsf.Adapter(size, out_dim=cfg.hidden_dim)
        size = adapter.out_dim
    integration_cfg = IntegrationConfig(cfg.integration, 'pre', size, None,
                                        False)
    return networks.EgvnModel(mpnn_cfg, integration_cfg, repo, feature_dim,
                              adapter, cfg.hidden_dim, cfg.readout_layers)


def run_seed(cfg, seed, **kwargs):
    """Trains and tests the configured model with one seed.

    Returns
    -------
    named tuple
        Training result.
    """
    kwargs.setdefault('verbose', cfg.verbose)
    counter = kwargs.setdefault('counter', Counter())
    g, splits = load_dataset(cfg, seed)
    graph.split_requirements(g, splits)
    message = graph.message_graph(g, graph.message_pairs(splits))
    model = build_model(cfg, g, message, seed, counter=counter,
                        verbose=kwargs['verbose'])
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, 'checkpoint-seed{}.pt'.format(seed))
    utils.message('Training {} with seed {}.'.format(cfg.model, seed),
                  **kwargs)
    return train.train(model, g, splits, config.train_config(cfg, seed),
                       dataset=cfg.dataset, model_name=cfg.model,
                       checkpoint_path=path,
                       run_config_text=config.config_to_text(cfg), **kwargs)


def run_experiment(cfg, **kwargs):
    """Trains the configured model once per seed.

    The report over all seeds is saved as `report.json` in the output
    directory.

    Parameters
    ----------
    cfg : named tuple
        Run configuration.
    **kwargs
        verbose : {1, 2, 0}, optional
            Overrides `cfg.verbose`.

    Returns
    -------
    tuple
        Aggregated evaluation report and the list of checkpoint paths.
    """
    config.validate_config(cfg)
    kwargs.setdefault('verbose', cfg.verbose)
    low, high = config.HIDDEN_DIM_RANGE
    if not low <= cfg.hidden_dim <= high:
        utils.warning('\'hidden_dim\' = {} lies outside [{}, {}].'.format(
            cfg.hidden_dim, low, high), **kwargs)
    results = [run_seed(cfg, seed, **kwargs) for seed in cfg.seeds]
    report = metrics.aggregate_reports([result.report for result in results])
    path = metrics.save_report(report, os.path.join(cfg.output_dir, 'report'))
    utils.message('{}: {}. Report saved to {}.'.format(
        cfg.model, metrics.format_metrics(report.metrics), path), **kwargs)
    return report, [result.checkpoint for result in results]


def evaluate_checkpoint(cfg, path, seed=None, **kwargs):
    """Tests a saved model on the test links of its splits.

    Parameters
    ----------
    cfg : named tuple
        Run configuration the checkpoint was trained with.
    path : str
        Checkpoint file.
    seed : int, optional
        Seed the checkpoint was trained with. Defaults to the first
        configured seed.

    Returns
    -------
    named tuple
        Evaluation report.

    Raises
    -------
    FileNotFoundError
        If the checkpoint does not exist.
    """
    kwargs.setdefault('verbose', cfg.verbose)
    counter = kwargs.setdefault('counter', Counter())
    saved = checkpoint.load_checkpoint(path)
    seed = cfg.seeds[0] if seed is None else seed
    g, splits = load_dataset(cfg, seed)
    message = graph.message_graph(g, graph.message_pairs(splits))
    model = build_model(cfg, g, message, seed, **kwargs)
    checkpoint.restore(model, saved)

    start = time.perf_counter()
    adjacency = propagation_matrix(message, model.mpnn_cfg.aggregator)
    test_metrics = train.evaluate(
        model, message, train.feature_matrix(g), adjacency, splits.test_pos,
        splits.test_neg, counter=counter, verbose=0)
    report = metrics.EvalReport(
        cfg.dataset, cfg.model, [seed],
        {name: metrics.summarize([value])
         for name, value in test_metrics.items()},
        counter['encode'], counter['render'], time.perf_counter() - start,
        metrics.PROTOCOL_VERSION,
        metrics.TIE_RULE, config.config_to_text(cfg))
    utils.message('Evaluated {}: {}.'.format(
        path, metrics.format_metrics(report.metrics)), **kwargs)
    return report
