"""
Command-line interface.

    vislink render --config run.ini --mode node --k 2
    vislink vsf-build --config run.ini
    vislink train --config run.ini --model egvn --integration attention
    vislink eval --config run.ini --checkpoint runs/checkpoint-seed0.pt
    vislink probe substructure --kind triangle

Exit codes are 0 on success, 1 on runtime failures (including stale VSF
repositories) and 2 on usage or validation errors.
"""
import argparse
import os
import sys
import numpy as np
from vislink import check, config, experiment, features, graph, metrics, \
    probes, render, utils, vsf
from vislink.modeling.integrate import STRATEGIES

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _common(parser):
    parser.add_argument('--config', help='run configuration file')
    parser.add_argument('--seed', type=int, help='single seed to run')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--cache', help='image cache directory')
    parser.add_argument('--verbose', type=int, choices=(0, 1, 2))


def build_parser():
    parser = argparse.ArgumentParser(
        prog='vislink',
        description='Link prediction with visual structural features.')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('render', help='populate the image cache')
    _common(p)
    p.add_argument('--mode', choices=('link', 'node'), default='node')
    p.add_argument('--k', type=int, choices=(1, 2, 3))

    p = commands.add_parser('vsf-build', help='build VSF repositories')
    _common(p)
    p.add_argument('--k', type=int, choices=(1, 2, 3))

    p = commands.add_parser('train', help='train and test a model')
    _common(p)
    p.add_argument('--model', choices=config.MODELS)
    p.add_argument('--integration', choices=STRATEGIES)
    p.add_argument('--k', type=int, choices=(1, 2, 3))
    p.add_argument('--epochs', type=int)

    p = commands.add_parser('eval', help='test a saved model')
    _common(p)
    p.add_argument('--checkpoint', help='checkpoint file')

    p = commands.add_parser('probe', help='run an analysis probe')
    probe_commands = p.add_subparsers(dest='probe', required=True)

    q = probe_commands.add_parser('substructure')
    _common(q)
    q.add_argument('--dataset', choices=probes.DATASETS,
                   default='erdos_renyi')
    q.add_argument('--kind', choices=features.SUBSTRUCTURE_KINDS,
                   default='triangle')
    q.add_argument('--n-graphs', type=int, default=1000)
    q.add_argument('--seeds', type=int, default=3)
    q.add_argument('--with-vsf', action='store_true')
    q.add_argument('--mpnn', choices=('gcn', 'sage'), default='gcn')
    q.add_argument('--epochs', type=int, default=300)

    q = probe_commands.add_parser('isomorphic')
    _common(q)
    q.add_argument('--epochs', type=int, default=200)

    q = probe_commands.add_parser('reproduction')
    _common(q)
    q.add_argument('--targets', default=','.join(features.SF_KINDS),
                   help='comma-separated structural features')
    q.add_argument('--level', choices=('link', 'node'), default='node')
    q.add_argument('--pairs', type=int, default=500)
    q.add_argument('--finetuned', action='store_true')

    q = probe_commands.add_parser('pe')
    _common(q)
    q.add_argument('--kind', choices=features.PE_KINDS, default='laplacian')
    q.add_argument('--dim', type=int)

    q = probe_commands.add_parser('ablation')
    _common(q)
    q.add_argument('--axis', choices=probes.ABLATION_AXES, required=True)
    q.add_argument('--grid', required=True,
                   help='comma-separated values of the axis')
    return parser


def run_config(args):
    """Loads the configuration file and applies command-line overrides."""
    cfg = config.load_config(args.config) if args.config else \
        config.default_config()
    overrides = {}
    if args.seed is not None:
        overrides['seeds'] = (args.seed,)
    if args.out is not None:
        overrides['output_dir'] = args.out
    if args.cache is not None:
        overrides['cache_dir'] = args.cache
    if args.verbose is not None:
        overrides['verbose'] = args.verbose
    for name in ('model', 'integration', 'k', 'epochs'):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return config.validate_config(cfg._replace(**overrides))


def cmd_render(args):
    cfg = run_config(args)
    cache_dir = cfg.cache_dir or os.path.join(cfg.output_dir, 'cache')
    g, _ = experiment.load_dataset(cfg, cfg.seeds[0])
    if args.mode == 'node':
        views = [graph.k_hop_node_subgraph(g, v, cfg.k) for v in range(g.n)]
    else:
        views = [graph.k_hop_link_subgraph(g, u, v, cfg.k)
                 for u, v in g.edges]
    batch = render.render_batch(
        views, experiment.build_style(cfg), cache_dir,
        randomize=not cfg.style_consistency,
        seed=utils.derive_seed(cfg.seeds[0], 'style'), verbose=cfg.verbose)
    print('{} cached, {} rendered'.format(batch.cached, batch.rendered))
    print(cache_dir)
    return EXIT_SUCCESS


def cmd_vsf_build(args):
    cfg = run_config(args)
    os.makedirs(cfg.output_dir, exist_ok=True)
    for seed in cfg.seeds:
        g, splits = experiment.load_dataset(cfg, seed)
        message = graph.message_graph(g, graph.message_pairs(splits))
        path = experiment.repository_path(cfg, seed)
        vsf.build_repository(
            message, cfg.k, experiment.build_style(cfg),
            experiment.build_encoder(cfg, seed), path, cfg.cache_dir,
            randomize=not cfg.style_consistency,
            seed=utils.derive_seed(seed, 'style'), verbose=cfg.verbose)
        print(path)
    return EXIT_SUCCESS


def cmd_train(args):
    cfg = run_config(args)
    report, checkpoints = experiment.run_experiment(cfg)
    print(metrics.format_metrics(report.metrics))
    for path in checkpoints:
        print(path)
    return EXIT_SUCCESS


def cmd_eval(args):
    if args.checkpoint is None or not os.path.exists(args.checkpoint):
        _error('Checkpoint \'{}\' does not exist.'.format(args.checkpoint))
        return EXIT_USAGE
    cfg = run_config(args)
    report = experiment.evaluate_checkpoint(cfg, args.checkpoint)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = metrics.save_report(report, os.path.join(cfg.output_dir, 'eval'))
    print(metrics.format_metrics(report.metrics))
    print(path)
    return EXIT_SUCCESS


def _save_probe(report, cfg):
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = metrics.save_report(
        report, os.path.join(cfg.output_dir, 'probe-{}'.format(report.probe)))
    print(path)
    return EXIT_SUCCESS


def _probe_substructure(args, cfg):
    return probes.substructure_experiment(
        args.dataset, args.n_graphs, args.kind, args.with_vsf, args.seeds,
        args.mpnn, epochs=args.epochs, seed=cfg.seeds[0],
        style=experiment.build_style(cfg), cache_dir=cfg.cache_dir,
        run_config_text=config.config_to_text(cfg), verbose=cfg.verbose)


def _probe_isomorphic(args, cfg):
    return probes.isomorphic_pair_demo(
        epochs=args.epochs, seed=cfg.seeds[0],
        run_config_text=config.config_to_text(cfg), verbose=cfg.verbose)


def _probe_reproduction(args, cfg):
    seed = cfg.seeds[0]
    targets = [kind.strip() for kind in args.targets.split(',') if kind.strip()]
    for kind in targets:
        check.one_of(kind, features.SF_KINDS, 'structural feature')
    g, splits = experiment.load_dataset(cfg, seed)
    message = graph.message_graph(g, graph.message_pairs(splits))
    style = experiment.build_style(cfg)
    encoder = experiment.build_encoder(cfg, seed)

    count = min(args.pairs, splits.test_pos.shape[0])
    rng = np.random.default_rng(utils.derive_seed(seed, 'probe-pairs'))
    positives = splits.test_pos[rng.permutation(
        splits.test_pos.shape[0])[:count]]
    negatives = graph.sample_negatives(
        g, count, seed=utils.derive_seed(seed, 'probe-negatives'))
    pairs = np.concatenate([positives, negatives])

    if args.finetuned:
        train_pos = splits.train_pos[:count]
        train_neg = graph.sample_negatives(
            g, train_pos.shape[0], seed=utils.derive_seed(seed, 'finetune'))
        encoder = probes.finetune_encoder(
            encoder, message, np.concatenate([train_pos, train_neg]),
            np.concatenate([np.ones(train_pos.shape[0]),
                            np.zeros(train_neg.shape[0])]),
            style, cfg.k, seed=seed, cache_dir=cfg.cache_dir,
            verbose=cfg.verbose)

    if args.level == 'node' and not args.finetuned:
        vsfs = vsf.build_repository(message, cfg.k, style, encoder,
                                    experiment.repository_path(cfg, seed),
                                    cfg.cache_dir, verbose=cfg.verbose)
    else:
        vsfs = probes.link_vsfs(encoder, message, pairs, cfg.k, style,
                                None if args.finetuned else cfg.cache_dir,
                                verbose=cfg.verbose)
    return probes.reproduction_ratio(
        vsfs, message, targets, pairs, args.finetuned, cfg.k, seed=seed,
        run_config_text=config.config_to_text(cfg), verbose=cfg.verbose)


def _probe_pe(args, cfg):
    seed = cfg.seeds[0]
    g, splits = experiment.load_dataset(cfg, seed)
    return probes.pe_baseline_experiment(
        g, splits, args.kind, args.dim, k=cfg.k,
        style=experiment.build_style(cfg), hidden_dim=cfg.hidden_dim,
        seed=seed, epochs=cfg.epochs, dataset=cfg.dataset,
        run_config_text=config.config_to_text(cfg), verbose=cfg.verbose)


def grid_values(axis, text):
    """Parses the comma-separated grid of an ablation axis."""
    values = [value.strip() for value in text.split(',') if value.strip()]
    if axis == 'scope_k':
        return [int(value) for value in values]
    if axis == 'style_consistency':
        return [config.parse_value(axis, 'bool', value) for value in values]
    return values


def _probe_ablation(args, cfg):
    grid = grid_values(args.axis, args.grid)
    reports = probes.ablation_driver(args.axis, grid, cfg, verbose=cfg.verbose)
    for value, report in zip(grid, reports):
        print('{} = {}: {}'.format(args.axis, value,
                                   metrics.format_metrics(report.metrics)))
    return None


probe_functions = {
    'substructure': _probe_substructure,
    'isomorphic': _probe_isomorphic,
    'reproduction': _probe_reproduction,
    'pe': _probe_pe,
    'ablation': _probe_ablation,
}


def cmd_probe(args):
    cfg = run_config(args)
    report = probe_functions[args.probe](args, cfg)
    if report is None:
        return EXIT_SUCCESS
    return _save_probe(report, cfg)


command_functions = {
    'render': cmd_render,
    'vsf-build': cmd_vsf_build,
    'train': cmd_train,
    'eval': cmd_eval,
    'probe': cmd_probe,
}


def _error(text):
    print('Error: {}'.format(text), file=sys.stderr)


def main(argv=None):
    """Runs a command and returns its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as error:
        return error.code
    try:
        return command_functions[args.command](args)
    except (RuntimeError, OSError) as error:
        _error(error)
        return EXIT_FAILURE
    except (ValueError, TypeError) as error:
        _error(error)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
