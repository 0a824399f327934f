from vislink import check
from vislink.vsf import VsfRepository
import pytest
import numpy as np

# n_dimensional()
n_dimensional_array = [np.array(0),
                       np.array([1, 2, 3]),
                       np.array([[1, 2, 3], [4, 5, 6]]),
                       np.array([[['a', 'b']]])]
n_dimensional_n_list = [[0, 1, 2],
                        [2],
                        [2],
                        [3, 5]]
n_dimensional_error = [False,
                       True,
                       False,
                       False]
n_dimensional_arguments = zip(
    n_dimensional_array, n_dimensional_n_list, n_dimensional_error)

# numeric_array()
numeric_array_array = [np.array([['a', 'b'], ['c', 'd']]),
                       np.array(['a', 'b', 0.5],),
                       np.array([None, 1]),
                       np.array([[0.1, 5], [0.2, 10]])]
numeric_array_error = [True,
                       True,
                       True,
                       False]
numeric_array_arguments = zip(numeric_array_array, numeric_array_error)

# non_empty()
non_empty_array = [np.array([]),
                   np.array([[]]),
                   np.array([1, 2]),
                   (),
                   (0,)]
non_empty_error = [True,
                   True,
                   False,
                   True,
                   False]
non_empty_arguments = zip(non_empty_array, non_empty_error)

# match_shape()
match_shape_inputs = [{'a': (np.array([1, 0]), 0),
                       'b': (np.array([[1, 2, 3], [4, 5, 6]]), 0)},
                      {'a': (np.array([1, 0]), 0),
                       'b': (np.array([[1, 2, 3], [4, 5, 6]]), 1)},
                      {'a': (np.array([[]]), 1),
                       'b': (np.array([[[]]]), 2)}]
match_shape_error = [False,
                     True,
                     False]
match_shape_arguments = zip(match_shape_inputs, match_shape_error)

# non_negative_array()
non_negative_array_array = [np.zeros((5, 5)),
                            -np.ones((5, 5)),
                            np.array([0, 1, 2]),
                            np.array([0, -1, -2])]
non_negative_array_error = [False,
                            True,
                            False,
                            True]
non_negative_array_arguments = zip(
    non_negative_array_array, non_negative_array_error)

# finite_array()
finite_array_array = [np.zeros((5, 5)),
                      np.inf*np.ones((5, 5)),
                      np.array([0, -np.inf, -2]),
                      np.array([1, np.nan, 2]),
                      np.array([0, 5e100, 1])]
finite_array_error = [False,
                      True,
                      True,
                      True,
                      False]
finite_array_arguments = zip(finite_array_array, finite_array_error)

# number()
number_value = [1,
                0.5,
                -3,
                np.inf,
                np.float32(2),
                None,
                'a',
                True,
                np.array([1, 2, 3])]
number_error = [False,
                False,
                False,
                False,
                False,
                True,
                True,
                True,
                True]
number_arguments = zip(number_value, number_error)

# integer()
integer_value = [1,
                 np.int64(3),
                 0.5,
                 2.0,
                 False,
                 '1']
integer_error = [False,
                 False,
                 True,
                 True,
                 True,
                 True]
integer_arguments = zip(integer_value, integer_error)

# non_negative_number()
non_negative_number_value = [0,
                             1.0,
                             -1,
                             np.inf,
                             -np.inf]
non_negative_number_error = [False,
                             False,
                             True,
                             False,
                             True]
non_negative_number_arguments = zip(
    non_negative_number_value, non_negative_number_error)

# positive_number()
positive_number_value = [1e-4,
                         3,
                         0,
                         -2.5]
positive_number_error = [False,
                         False,
                         True,
                         True]
positive_number_arguments = zip(positive_number_value, positive_number_error)

# probability()
probability_value = [0,
                     0.3,
                     1,
                     1.01,
                     -0.1]
probability_error = [False,
                     False,
                     False,
                     True,
                     True]
probability_arguments = zip(probability_value, probability_error)

# hop_count()
hop_count_value = [1, 2, 3, 0, 4, 2.0]
hop_count_error = [None, None, None, ValueError, ValueError, TypeError]
hop_count_arguments = zip(hop_count_value, hop_count_error)

# node_id()
node_id_inputs = [(0, 5),
                  (4, 5),
                  (5, 5),
                  (-1, 5)]
node_id_error = [False,
                 False,
                 True,
                 True]
node_id_arguments = zip(node_id_inputs, node_id_error)

# pair_array()
pair_array_pairs = [[[0, 1], [2, 3]],
                    [0, 1, 2, 3],
                    [[0, 4]],
                    [[-1, 2]],
                    []]
pair_array_error = [False,
                    False,
                    True,
                    True,
                    False]
pair_array_shapes = [(2, 2),
                     (2, 2),
                     None,
                     None,
                     (0, 2)]
pair_array_arguments = zip(pair_array_pairs, pair_array_error,
                           pair_array_shapes)

# ratios()
ratios_values = [(0.7, 0.1, 0.2),
                 (0.3, 0.2, 0.5),
                 (0.5, 0.5, 0.5),
                 (1.2, -0.1, -0.1)]
ratios_error = [False,
                False,
                True,
                True]
ratios_arguments = zip(ratios_values, ratios_error)

# repository_metadata()
repository = VsfRepository(np.zeros((3, 2), dtype=np.float32), 'graph-a',
                           'style-a', 2, 'encoder-a')
repository_metadata_inputs = [('graph-a', 'style-a', 2),
                              ('graph-b', 'style-a', 2),
                              ('graph-a', 'style-b', 2),
                              ('graph-a', 'style-a', 1)]
repository_metadata_field = [None,
                             'graph digest',
                             'style digest',
                             'k']
repository_metadata_arguments = zip(
    repository_metadata_inputs, repository_metadata_field)


@pytest.mark.parametrize('array,n_list,error', n_dimensional_arguments)
def test_n_dimensional(array, n_list, error):
    """Tests `vislink.check.n_dimensional()`.

    Parameters
    ----------
    array : ndarray
        Array.
    n_list : list of int, optional
        Possible number of dimensions.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(TypeError):
            check.n_dimensional(array, n_list=n_list)
    else:
        check.n_dimensional(array, n_list=n_list)


@pytest.mark.parametrize('array,error', numeric_array_arguments)
def test_numeric_array(array, error):
    """Tests `vislink.check.numeric_array()`."""
    if error:
        with pytest.raises(TypeError):
            check.numeric_array(array)
    else:
        check.numeric_array(array)


@pytest.mark.parametrize('array,error', non_empty_arguments)
def test_non_empty(array, error):
    """Tests `vislink.check.non_empty()`.

    Parameters
    ----------
    array : ndarray or tuple
        Array.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(ValueError):
            check.non_empty(array)
    else:
        check.non_empty(array)


@pytest.mark.parametrize('inputs,error', match_shape_arguments)
def test_match_shape(inputs, error):
    """Tests `vislink.check.match_shape()`.

    Parameters
    ----------
    inputs : dict of tuple of (ndarray and int)
        Arrays and the dimension along which they should be matched.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(ValueError):
            check.match_shape(**inputs)
    else:
        check.match_shape(**inputs)


@pytest.mark.parametrize('array,error', non_negative_array_arguments)
def test_non_negative_array(array, error):
    """Tests `vislink.check.non_negative_array()`."""
    if error:
        with pytest.raises(ValueError):
            check.non_negative_array(array)
    else:
        check.non_negative_array(array)


@pytest.mark.parametrize('array,error', finite_array_arguments)
def test_finite_array(array, error):
    """Tests `vislink.check.finite_array()`.

    Parameters
    ----------
    array : ndarray
        Array.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(ValueError):
            check.finite_array(array)
    else:
        check.finite_array(array)


@pytest.mark.parametrize('value,error', number_arguments)
def test_number(value, error):
    """Tests `vislink.check.number()`.

    Parameters
    ----------
    value : any
        Variable of arbitrary type.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(TypeError):
            check.number(value)
    else:
        check.number(value)


@pytest.mark.parametrize('value,error', integer_arguments)
def test_integer(value, error):
    """Tests `vislink.check.integer()`."""
    if error:
        with pytest.raises(TypeError):
            check.integer(value)
    else:
        check.integer(value)


@pytest.mark.parametrize('value,error', non_negative_number_arguments)
def test_non_negative_number(value, error):
    """Tests `vislink.check.non_negative_number()`.

    Parameters
    ----------
    value : int or float
        Number.
    error : bool
        Whether an error should be raised.
    """
    if error:
        with pytest.raises(ValueError):
            check.non_negative_number(value)
    else:
        check.non_negative_number(value)


@pytest.mark.parametrize('value,error', positive_number_arguments)
def test_positive_number(value, error):
    """Tests `vislink.check.positive_number()`."""
    if error:
        with pytest.raises(ValueError):
            check.positive_number(value)
    else:
        check.positive_number(value)


@pytest.mark.parametrize('value,error', probability_arguments)
def test_probability(value, error):
    """Tests `vislink.check.probability()`."""
    if error:
        with pytest.raises(ValueError):
            check.probability(value)
    else:
        check.probability(value)


@pytest.mark.parametrize('k,error', hop_count_arguments)
def test_hop_count(k, error):
    """Tests `vislink.check.hop_count()`.

    Parameters
    ----------
    k : any
        Number of hops.
    error : type or None
        Expected exception, if any.
    """
    if error is not None:
        with pytest.raises(error):
            check.hop_count(k)
    else:
        check.hop_count(k)


@pytest.mark.parametrize('inputs,error', node_id_arguments)
def test_node_id(inputs, error):
    """Tests `vislink.check.node_id()`."""
    if error:
        with pytest.raises(ValueError):
            check.node_id(*inputs)
    else:
        check.node_id(*inputs)


def test_distinct_pair():
    """Tests `vislink.check.distinct_pair()`."""
    check.distinct_pair(0, 1)
    with pytest.raises(ValueError, match='self-loop'):
        check.distinct_pair(3, 3)


@pytest.mark.parametrize('pairs,error,shape', pair_array_arguments)
def test_pair_array(pairs, error, shape):
    """Tests `vislink.check.pair_array()`.

    Parameters
    ----------
    pairs : list
        Node pairs of a 4-node graph.
    error : bool
        Whether an error should be raised.
    shape : tuple of int
        Shape of the returned array.
    """
    if error:
        with pytest.raises(ValueError):
            check.pair_array(pairs, 4)
    else:
        result = check.pair_array(pairs, 4)
        assert result.shape == shape
        assert result.dtype == np.int64


@pytest.mark.parametrize('values,error', ratios_arguments)
def test_ratios(values, error):
    """Tests `vislink.check.ratios()`."""
    if error:
        with pytest.raises(ValueError):
            check.ratios(values)
    else:
        check.ratios(values)


def test_same_length():
    """Tests `vislink.check.same_length()` on vectors and batches."""
    check.same_length(np.zeros(4), 4)
    check.same_length(np.zeros((3, 4)), 4)
    with pytest.raises(ValueError):
        check.same_length(np.zeros((4, 3)), 4)


@pytest.mark.parametrize('inputs,field', repository_metadata_arguments)
def test_repository_metadata(inputs, field):
    """Tests `vislink.check.repository_metadata()`.

    Parameters
    ----------
    inputs : tuple
        Graph digest, style digest and scope the repository is used with.
    field : str or None
        Name of the mismatched field, if any.
    """
    if field is None:
        check.repository_metadata(repository, *inputs)
    else:
        with pytest.raises(check.StalenessError, match=field):
            check.repository_metadata(repository, *inputs)


def test_error_hierarchy():
    """Domain errors are caught by handlers of built-in exceptions."""
    for error in (check.EdgeListError, check.ConfigurationError,
                  check.CapacityError):
        assert issubclass(error, ValueError)
    for error in (check.StalenessError, check.CacheError,
                  check.EncoderLoadError, check.DivergenceError):
        assert issubclass(error, RuntimeError)
