import copy
import time
from collections import Counter, namedtuple
import numpy as np
import torch
from vislink import check, graph, metrics, utils
from vislink.modeling import checkpoint, mpnn

TrainConfig = namedtuple('TrainConfig', [
    'epochs', 'batch_size', 'lr_vision', 'lr_main', 'weight_decay', 'seed',
    'patience', 'eval_k', 'mask_message_links'])
TrainResult = namedtuple('TrainResult', [
    'checkpoint', 'report', 'test_metrics', 'history'])

EVAL_BATCH_SIZE = 4096


def set_defaults(**kwargs):
    """Builds a training configuration, filling in default values.

    Returns
    -------
    named tuple
        Validated training configuration.
    """
    kwargs.setdefault('epochs', 100)
    kwargs.setdefault('batch_size', 1024)
    kwargs.setdefault('lr_vision', 1e-4)
    kwargs.setdefault('lr_main', 1e-3)
    kwargs.setdefault('weight_decay', 0)
    kwargs.setdefault('seed', 0)
    kwargs.setdefault('patience', 20)
    kwargs.setdefault('eval_k', 100)
    kwargs.setdefault('mask_message_links', False)
    cfg = TrainConfig(**kwargs)
    train_requirements(cfg)
    return cfg


def train_requirements(cfg):
    """Checks a training configuration.

    Raises
    -------
    ValueError
        If a learning rate is not positive, the weight decay is outside of
        [0, 1e-4] or a count is not positive.
    """
    check.positive_number(cfg.lr_vision, 'lr_vision')
    check.positive_number(cfg.lr_main, 'lr_main')
    check.number(cfg.weight_decay, 'weight_decay')
    if not 0 <= cfg.weight_decay <= 1e-4:
        raise ValueError(
            '\'weight_decay\' should lie in [0, 1e-4]! Instead received '
            '{}.'.format(cfg.weight_decay))
    for name in ('epochs', 'batch_size', 'patience', 'eval_k'):
        check.integer(getattr(cfg, name), name)
        check.positive_number(getattr(cfg, name), name)
    check.integer(cfg.seed, 'seed')


def feature_matrix(g):
    """Returns the node attributes, or a constant column for featureless
    graphs."""
    if g.features is None:
        return torch.ones(g.n, 1)
    return torch.as_tensor(g.features, dtype=torch.float32)


def optimizer(model, cfg):
    """Adam with the encoder and adapter at `lr_vision` and everything else
    at `lr_main`. Frozen parameters are left out."""
    vision, main = [], []
    for name, parameter in model.named_parameters():
        if not parameter.requires_grad:
            continue
        if name.startswith(('encoder.', 'adapter.')):
            vision.append(parameter)
        else:
            main.append(parameter)
    groups = [{'params': params, 'lr': lr}
              for params, lr in ((vision, cfg.lr_vision), (main, cfg.lr_main))
              if params]
    return torch.optim.Adam(groups, weight_decay=cfg.weight_decay)


def predict(model, g, x, adjacency, pairs, **kwargs):
    """Scores pairs in evaluation mode without gradients.

    Returns
    -------
    ndarray
        Probabilities, one per pair.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    was_training = model.training
    model.eval()
    scores = []
    with torch.no_grad():
        for start in range(0, pairs.shape[0], EVAL_BATCH_SIZE):
            batch = pairs[start:start + EVAL_BATCH_SIZE]
            scores.append(model(g, x, adjacency, batch, **kwargs).cpu().numpy())
    model.train(was_training)
    if not scores:
        return np.zeros(0)
    return np.concatenate(scores).astype(np.float64)


def evaluate(model, g, x, adjacency, pos, neg, **kwargs):
    """Computes ranking metrics of positive against negative pairs.

    Parameters
    ----------
    model : torch.nn.Module
        Link prediction model.
    g : named tuple
        Message graph.
    x : torch.Tensor
        Node attributes.
    adjacency : torch.Tensor
        Propagation matrix of `g`.
    pos, neg : ndarray
        Positive and negative pairs.

    Returns
    -------
    dict of float
        Metrics from `metrics.ranking_metrics`.
    """
    pos_scores = predict(model, g, x, adjacency, pos, **kwargs)
    neg_scores = predict(model, g, x, adjacency, neg, **kwargs)
    return metrics.ranking_metrics(pos_scores, neg_scores)


def _validation_score(model, g, x, adjacency, splits, cfg, **kwargs):
    if splits.valid_pos.shape[0] == 0 or splits.valid_neg.shape[0] == 0:
        return None
    k = min(cfg.eval_k, splits.valid_neg.shape[0])
    pos = predict(model, g, x, adjacency, splits.valid_pos, **kwargs)
    neg = predict(model, g, x, adjacency, splits.valid_neg, **kwargs)
    return metrics.hr_at_k(pos, neg, k)


def _without_batch(g, message, batch):
    codes = batch[:, 0] * g.n + batch[:, 1]
    message_codes = message[:, 0] * g.n + message[:, 1]
    return graph.message_graph(g, message[~np.isin(message_codes, codes)])


def train(model, g, splits, cfg, **kwargs):
    """Trains a link prediction model and evaluates it on the test links.

    Training links are both supervision and message-passing paths;
    validation links are message-passing paths too if
    `splits.use_valid_as_message_paths`. Every batch of training links is
    paired with as many sampled non-edges. The state with the best
    validation HR@K is restored before testing.

    Parameters
    ----------
    model : torch.nn.Module
        Link prediction model.
    g : named tuple
        Full graph.
    splits : named tuple
        Split set.
    cfg : named tuple
        Training configuration.
    **kwargs
        x : torch.Tensor, optional
            Node attributes. Defaults to `feature_matrix(g)`.
        dataset : str, optional
            Dataset name for the report.
        model_name : str, optional
            Model name for the report.
        checkpoint_path : str, optional
            If given, the best model is saved there.
        run_config_text : str, optional
            Run configuration echoed into the report and checkpoint.
        counter : collections.Counter, optional
            Render and encode counter.
        verbose : {1, 2, 0}, optional
            If 1, all messages are shown. If 2, only warnings are shown. If
            0, no messages are shown.

    Returns
    -------
    named tuple
        Result with fields `checkpoint` (path or None), `report`,
        `test_metrics` and `history` (per-epoch loss and validation score).

    Raises
    -------
    DivergenceError
        If the loss becomes non-finite.
    """
    kwargs.setdefault('verbose', 1)
    kwargs.setdefault('counter', Counter())
    counter = kwargs['counter']
    forward_kwargs = {'counter': counter, 'verbose': 0}
    train_requirements(cfg)
    start = time.perf_counter()
    torch.manual_seed(utils.derive_seed(cfg.seed, 'torch'))

    message_pairs = graph.message_pairs(splits)
    message = graph.message_graph(g, message_pairs)
    aggregator = model.mpnn_cfg.aggregator
    adjacency = mpnn.propagation_matrix(message, aggregator)
    x = kwargs.get('x')
    if x is None:
        x = feature_matrix(g)
    opt = optimizer(model, cfg)
    positives = splits.train_pos

    best_score, best_state, waited = None, None, 0
    history = []
    utils.message('Started training on {} links.'.format(positives.shape[0]),
                  **kwargs)
    for epoch in range(cfg.epochs):
        model.train()
        rng = np.random.default_rng(utils.derive_seed(
            cfg.seed, 'epoch-{}'.format(epoch)))
        order = rng.permutation(positives.shape[0])
        losses = []
        for b, begin in enumerate(range(0, order.size, cfg.batch_size)):
            batch = positives[order[begin:begin + cfg.batch_size]]
            negatives = graph.sample_negatives(
                g, batch.shape[0], seed=utils.derive_seed(
                    cfg.seed, 'negatives-{}-{}'.format(epoch, b)))
            pairs = np.concatenate([batch, negatives])
            labels = np.concatenate([np.ones(batch.shape[0]),
                                     np.zeros(negatives.shape[0])])

            batch_graph, batch_adjacency = message, adjacency
            if cfg.mask_message_links:
                batch_graph = _without_batch(g, message_pairs, batch)
                batch_adjacency = mpnn.propagation_matrix(
                    batch_graph, aggregator)

            opt.zero_grad()
            p = model(batch_graph, x, batch_adjacency, pairs, **forward_kwargs)
            loss = metrics.bce_loss(p, labels)
            if not torch.isfinite(loss):
                raise check.DivergenceError(
                    'Loss became {} at epoch {}, batch {}.'.format(
                        loss.item(), epoch, b))
            loss.backward()
            opt.step()
            losses.append(loss.item())

        score = _validation_score(model, message, x, adjacency, splits, cfg,
                                  **forward_kwargs)
        history.append({'epoch': epoch, 'loss': float(np.mean(losses)),
                        'valid': score})
        utils.message('Epoch {}: loss {}, validation HR@{} {}.'.format(
            epoch, utils.rounded(np.mean(losses)), cfg.eval_k,
            utils.rounded(score)), **kwargs)

        if score is None or best_score is None or score > best_score:
            best_score = score
            best_state = copy.deepcopy(model.state_dict())
            waited = 0
        else:
            waited += 1
            if waited >= cfg.patience:
                utils.message('Stopped early after epoch {}.'.format(epoch),
                              **kwargs)
                break

    if best_state is not None:
        model.load_state_dict(best_state)

    test_metrics = evaluate(model, message, x, adjacency, splits.test_pos,
                            splits.test_neg, **forward_kwargs)
    path = kwargs.get('checkpoint_path')
    if path is not None:
        checkpoint.save_checkpoint(path, model,
                                   kwargs.get('run_config_text', ''))

    report = metrics.EvalReport(
        kwargs.get('dataset', 'graph'),
        kwargs.get('model_name', type(model).__name__),
        [cfg.seed],
        {name: metrics.summarize([value])
         for name, value in test_metrics.items()},
        counter['encode'], counter['render'],
        time.perf_counter() - start, metrics.PROTOCOL_VERSION,
        metrics.TIE_RULE, kwargs.get('run_config_text', ''))
    utils.message('Test: {}.'.format(metrics.format_metrics(report.metrics)),
                  **kwargs)
    return TrainResult(path, report, test_metrics, history)
