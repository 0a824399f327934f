import numbers
import numpy as np


class EdgeListError(ValueError):
    """Raised when an edge-list file cannot be parsed."""


class ConfigurationError(ValueError):
    """Raised when a configuration cannot be used as given."""


class CapacityError(ValueError):
    """Raised when more distinct items are requested than exist."""


class StalenessError(RuntimeError):
    """Raised when a persisted artifact was built from different inputs."""


class CacheError(RuntimeError):
    """Raised when a cache entry fails read-back verification."""


class EncoderLoadError(RuntimeError):
    """Raised when vision encoder weights cannot be loaded."""


class DivergenceError(RuntimeError):
    """Raised when training produces a non-finite loss."""


def n_dimensional(array, n_list=[2], name='array'):
    """Checks that array is `n`-dimensional.

    Parameters
    ----------
    array : ndarray
        Array.
    n_list : list of int, optional
        Possible number of dimensions.
    name : str, optional
        Name of the variable.

    Raises
    -------
    TypeError
        If array is not `n`-dimensional.
    """
    dim = array.ndim
    if dim not in n_list:
        err_msg = '\'{}\' should be {}-dimensional array! Instead received ' \
                  '{}-dimensional array.'
        if len(n_list) == 1:
            n_list_str = str(n_list[0])
        else:
            n_list_str = '- or '.join([str(i) for i in n_list])

        raise TypeError(err_msg.format(name, n_list_str, dim))


def numeric_array(array, name='array'):
    """Checks that array only contains numbers.

    Parameters
    ----------
    array : ndarray
        Array.
    name : str, optional
        Name of the array.

    Raises
    -------
    TypeError
        If array contains non-number elements.
    """
    if not np.issubdtype(array.dtype, np.number):
        raise TypeError('\'{}\' should only contain numbers!'.format(name))


def non_empty(array, name='array'):
    """Checks that array is not empty.

    Parameters
    ----------
    array : ndarray or sequence
        Array.
    name : str, optional
        Name of the array.

    Raises
    -------
    ValueError
        If the array is empty.
    """
    if np.size(array) == 0:
        raise ValueError('\'{}\' array is empty!'.format(name))


def match_shape(**kwargs):
    """Checks that arrays or tensors agree in size along given dimensions.

    Parameters
    ----------
    **kwargs : dict of tuple of (array_like and int)
        Arrays (or tensors) and the dimension along which they should be
        matched, e.g. `x=(x, 0), vsf=(vsf, 0)` for one row per node.

    Raises
    -------
    ValueError
        If any of the sizes differ from the size of the first item.
    """
    items = list(kwargs.items())
    first_key, (first_array, first_dim) = items[0]
    size = np.shape(first_array)[first_dim]
    for key, (array, dim) in items[1:]:
        if np.shape(array)[dim] != size:
            raise ValueError(
                'Dimension {} of \'{}\' ({}) should match dimension {} of '
                '\'{}\' ({})!'.format(dim, key, np.shape(array)[dim],
                                      first_dim, first_key, size))


def non_negative_array(array, name='array'):
    """Checks if all the elements of the array are non-negative.

    Parameters
    ----------
    array : ndarray
        Array.
    name : str, optional
        Name of the array.

    Raises
    -------
    ValueError
        If the array contains negative values.
    """
    if (array < 0).any():
        raise ValueError(
            '\'{}\' array contains at least one negative value!'.format(name))


def finite_array(array, name='array'):
    """Checks if all the elements of the array are finite.

    Parameters
    ----------
    array : ndarray
        Array.
    name : str, optional
        Name of the array.

    Raises
    -------
    ValueError
        If the array contains infinities or NaNs.
    """
    if not np.isfinite(array).all():
        raise ValueError(
            '\'{}\' array contains at least one non-finite value!'.format(
                name))


def number(value, name='variable'):
    """Checks if the variable is a number.

    Parameters
    ----------
    value : any
        Variable of arbitrary type.
    name : str, optional
        Name of the variable.

    Raises
    -------
    TypeError
        If the variable is not int or float.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(
            'Type {} of \'{}\' is not supported. Use int or '
            'float instead.'.format(type(value).__name__, name))


def integer(value, name='variable'):
    """Checks if the variable is an integer.

    Parameters
    ----------
    value : any
        Variable of arbitrary type.
    name : str, optional
        Name of the variable.

    Raises
    -------
    TypeError
        If the variable is not an integer.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(
            'Type {} of \'{}\' is not supported. Use int instead.'.format(
                type(value).__name__, name))


def non_negative_number(value, name='number'):
    """Checks if the number is negative.

    Parameters
    ----------
    value : int or float
        Number.
    name : str, optional
        Name of the number.

    Raises
    -------
    ValueError
        If the number is negative.
    """
    if value < 0:
        raise ValueError('\'{}\' is negative!'.format(name))


def positive_number(value, name='number'):
    """Checks if the number is strictly positive.

    Parameters
    ----------
    value : int or float
        Number.
    name : str, optional
        Name of the number.

    Raises
    -------
    ValueError
        If the number is zero or negative.
    """
    number(value, name)
    if value <= 0:
        raise ValueError('\'{}\' should be positive!'.format(name))


def probability(value, name='p'):
    """Checks that the value lies in [0, 1].

    Parameters
    ----------
    value : int or float
        Number.
    name : str, optional
        Name of the number.

    Raises
    -------
    ValueError
        If the value is outside of [0, 1].
    """
    number(value, name)
    if not 0 <= value <= 1:
        raise ValueError(
            '\'{}\' should lie in [0, 1]! Instead received {}.'.format(
                name, value))


def one_of(value, options, name='value'):
    """Checks that the value is one of the supported options.

    Parameters
    ----------
    value : any
        Value.
    options : iterable
        Supported options.
    name : str, optional
        Name of the value.

    Raises
    -------
    ValueError
        If the value is not supported.
    """
    if value not in tuple(options):
        raise ValueError(
            '{} \'{}\' is not currently supported! Use one of {{{}}}.'.format(
                name.capitalize(), value,
                ', '.join(str(option) for option in options)))


def hop_count(k, name='k'):
    """Checks that the visual perception scope is between 1 and 3 hops.

    Parameters
    ----------
    k : int
        Number of hops.
    name : str, optional
        Name of the variable.

    Raises
    -------
    ValueError
        If `k` is outside of [1, 3].
    """
    integer(k, name)
    if not 1 <= k <= 3:
        raise ValueError(
            '\'{}\' should be between 1 and 3! Instead received {}.'.format(
                name, k))


def node_id(v, n, name='node'):
    """Checks that `v` is a valid node id of a graph with `n` nodes.

    Parameters
    ----------
    v : int
        Node id.
    n : int
        Number of nodes.
    name : str, optional
        Name of the variable.

    Raises
    -------
    ValueError
        If `v` is out of range.
    """
    integer(v, name)
    if not 0 <= v < n:
        raise ValueError(
            '\'{}\' should be in [0, {}) but is {}!'.format(name, n, v))


def distinct_pair(u, v):
    """Checks that the two endpoints of a pair differ.

    Raises
    -------
    ValueError
        If `u == v`.
    """
    if u == v:
        raise ValueError(
            'Pair ({0}, {0}) is a self-loop! Endpoints should differ.'.format(
                u))


def pair_array(pairs, n, name='pairs'):
    """Converts pairs to an `m x 2` integer array and checks node ids.

    Parameters
    ----------
    pairs : array_like
        Node pairs.
    n : int
        Number of nodes.
    name : str, optional
        Name of the array.

    Returns
    -------
    ndarray
        Pairs of shape `m x 2`.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise ValueError(
            '\'{}\' contains node ids outside of [0, {})!'.format(name, n))
    return pairs


def ratios(values, name='ratios'):
    """Checks that split ratios are non-negative and sum to 1.

    Parameters
    ----------
    values : tuple of float
        Ratios.
    name : str, optional
        Name of the variable.

    Raises
    -------
    ValueError
        If the ratios are negative or do not sum to 1.
    """
    values = np.asarray(values, dtype=float)
    non_negative_array(values, name)
    if not np.isclose(values.sum(), 1):
        raise ValueError(
            '\'{}\' should sum to 1! Instead they sum to {}.'.format(
                name, values.sum()))


def same_length(vector, length, name='vector'):
    """Checks that the last dimension of a vector or batch has a given size.

    Parameters
    ----------
    vector : ndarray or torch.Tensor
        Vector or batch of vectors.
    length : int
        Expected size of the last dimension.
    name : str, optional
        Name of the vector.

    Raises
    -------
    ValueError
        If the sizes differ.
    """
    if vector.shape[-1] != length:
        raise ValueError(
            '\'{}\' should have {} entries per row! Instead received '
            '{}.'.format(name, length, vector.shape[-1]))


def repository_metadata(repo, graph_digest, style_digest, k):
    """Checks that a VSF repository matches the inputs it is used with.

    Parameters
    ----------
    repo : VsfRepository
        Repository.
    graph_digest : str
        Digest of the graph the repository should have been built from.
    style_digest : str
        Digest of the render style.
    k : int
        Visual perception scope.

    Raises
    -------
    StalenessError
        If any of the metadata fields differ.
    """
    expected = (('graph digest', repo.graph_digest, graph_digest),
                ('style digest', repo.style_digest, style_digest),
                ('k', str(repo.k), str(k)))
    for field, stored, wanted in expected:
        if stored != wanted:
            raise StalenessError(
                'VSF repository is stale: {} is \'{}\' but \'{}\' was '
                'expected. Rebuild the repository.'.format(
                    field, stored, wanted))
