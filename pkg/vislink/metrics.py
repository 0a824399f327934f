"""
Training loss, ranking metrics and evaluation reports.

HR@K counts a positive as a hit only if it is strictly greater than the
K-th highest negative score. MRR ranks a positive below only the negatives
strictly greater than it, so ties favor the positive.
"""
import json
from collections import namedtuple
import numpy as np
import torch
import torch.nn.functional as F
from vislink import utils

EvalReport = namedtuple('EvalReport', [
    'dataset', 'model', 'seeds', 'metrics', 'encode_count', 'render_count',
    'wall_seconds', 'protocol', 'tie_rule', 'config'])

PROTOCOL_VERSION = 'v1'
TIE_RULE = 'hits: strictly greater than the K-th negative; mrr: optimistic'
HITS_KS = (1, 3, 10, 20, 50, 100)


def bce_loss(p, labels):
    """Mean binary cross-entropy of probabilities against 0/1 labels.

    Raises
    -------
    ValueError
        If the batch is empty.
    """
    if p.numel() == 0:
        raise ValueError('Cannot compute the loss of an empty batch!')
    labels = torch.as_tensor(labels, dtype=p.dtype)
    return F.binary_cross_entropy(p, labels)


def hr_at_k(pos_scores, neg_scores, k):
    """Fraction of positives scored strictly above the `k`-th highest
    negative.

    Parameters
    ----------
    pos_scores : array_like
        Scores of positive links.
    neg_scores : array_like
        Scores of negative links.
    k : int
        Rank of the threshold negative.

    Returns
    -------
    float
        Hit ratio.

    Raises
    -------
    ValueError
        If there are fewer than `k` negatives.
    """
    pos_scores = np.asarray(pos_scores, dtype=np.float64).ravel()
    neg_scores = np.asarray(neg_scores, dtype=np.float64).ravel()
    if k < 1 or k > neg_scores.size:
        raise ValueError(
            'HR@{} needs at least {} negatives! Received {}.'.format(
                k, k, neg_scores.size))
    if pos_scores.size == 0:
        return 0.0
    threshold = np.sort(neg_scores)[::-1][k - 1]
    return float(np.mean(pos_scores > threshold))


def mrr(pos_scores, neg_scores):
    """Mean reciprocal rank of positives among their negatives.

    Parameters
    ----------
    pos_scores : array_like
        Scores of `P` positive links.
    neg_scores : array_like
        Either a `P x N` array with the negatives of every positive or a
        vector of negatives shared by all positives.

    Returns
    -------
    float
        MRR, where the rank of a positive is one plus the number of its
        negatives with a strictly greater score.
    """
    pos_scores = np.asarray(pos_scores, dtype=np.float64).ravel()
    neg_scores = np.asarray(neg_scores, dtype=np.float64)
    if pos_scores.size == 0:
        return 0.0
    if neg_scores.ndim == 1:
        neg_scores = np.broadcast_to(
            neg_scores, (pos_scores.size, neg_scores.size))
    ranks = 1 + np.sum(neg_scores > pos_scores[:, None], axis=1)
    return float(np.mean(1 / ranks))


def ranking_metrics(pos_scores, neg_scores):
    """Computes HR@{1, 3, 10, 20, 50, 100} (for K not exceeding the number
    of negatives) and MRR against shared negatives."""
    n_neg = np.size(neg_scores)
    metrics = {'hits@{}'.format(k): hr_at_k(pos_scores, neg_scores, k)
               for k in HITS_KS if k <= n_neg}
    metrics['mrr'] = mrr(pos_scores, neg_scores)
    return metrics


def summarize(values):
    """Returns the mean and the (population) standard deviation."""
    values = np.asarray(values, dtype=np.float64)
    return {'mean': float(values.mean()), 'std': float(values.std())}


def aggregate_reports(reports):
    """Merges single-seed reports of the same run into one report.

    Metric means and standard deviations are taken over the seeds; counts
    and wall time are summed.
    """
    first = reports[0]
    names = [name for name in first.metrics
             if all(name in report.metrics for report in reports)]
    metrics = {name: summarize([report.metrics[name]['mean']
                                for report in reports])
               for name in names}
    return first._replace(
        seeds=[seed for report in reports for seed in report.seeds],
        metrics=metrics,
        encode_count=sum(report.encode_count for report in reports),
        render_count=sum(report.render_count for report in reports),
        wall_seconds=sum(report.wall_seconds for report in reports))


def format_metrics(metrics, sf=4):
    """Formats `{name: {mean, std}}` metrics for messages."""
    return ', '.join('{} {} ± {}'.format(
        name, utils.rounded(value['mean'], sf), utils.rounded(value['std'], sf))
        for name, value in metrics.items())


def save_report(report, path, allow_overwrite=True):
    """Saves a report named tuple as JSON.

    Parameters
    ----------
    report : named tuple
        Evaluation or probe report.
    path : str
        Path of the file, excluding the extension.
    allow_overwrite : bool, optional
        If False, a number is appended to the path if it exists.

    Returns
    -------
    str
        Path of the saved file.
    """
    if allow_overwrite:
        path = '{}.json'.format(path)
    else:
        path = utils.unique_path(path, 'json')
    text = json.dumps(report._asdict(), indent=2, default=_jsonable)
    utils.atomic_write(path, lambda handle: handle.write(text), mode='w')
    return path


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, '_asdict'):
        return value._asdict()
    raise TypeError('{} is not JSON serializable'.format(type(value).__name__))
