from collections import namedtuple
from vislink import check
from vislink.modeling.integrate import STRATEGIES

CostReport = namedtuple('CostReport', [
    'mode', 'strategy', 'render_count', 'encode_count', 'integration_term',
    'integration_order'])

MODES = ('gvn', 'egvn')


def _gvn_terms(n, l, F, F_out, S):
    return {
        'attention': (l * (S*F_out + F_out**2), 'l(SF\'+F\'^2)'),
        'concat': (l * (F_out + S), 'l(F\'+S)'),
        'weighted': (l * S**2, 'lS^2'),
    }


def _egvn_terms(n, l, F, F_out, S):
    return {
        'attention': (n * (S**2 + S*F + F**2), 'n(S^2+SF+F^2)'),
        'concat': (n * (S**2 + F + S), 'n(S^2+F+S)'),
        'weighted': (n * (S**2 + F**2), 'n(S^2+F^2)'),
    }


def estimate_costs(mode, n, l, F, F_out, S, strategy='attention'):
    """Counts the visual work of scoring `l` query links on `n` nodes.

    GVN renders and encodes one image per query link; E-GVN renders and
    encodes one image per node, once. The integration term is the order of
    the operations spent on combining VSFs with node information.

    Parameters
    ----------
    mode : {'gvn', 'egvn'}
        Framework (case-insensitive).
    n : int
        Number of nodes.
    l : int
        Number of query links.
    F : int
        Node attribute size.
    F_out : int
        Node representation size `F'`.
    S : int
        VSF size.
    strategy : {'attention', 'concat', 'weighted'}, optional
        Integration strategy.

    Returns
    -------
    named tuple
        Cost report.
    """
    mode = mode.lower()
    check.one_of(mode, MODES, 'mode')
    check.one_of(strategy, STRATEGIES, 'integration strategy')
    for value, name in ((n, 'n'), (l, 'l'), (F, 'F'), (F_out, 'F_out'),
                        (S, 'S')):
        check.integer(value, name)
        check.non_negative_number(value, name)

    if mode == 'gvn':
        count = l
        term, order = _gvn_terms(n, l, F, F_out, S)[strategy]
    else:
        count = n
        term, order = _egvn_terms(n, l, F, F_out, S)[strategy]
    return CostReport(mode, strategy, count, count, term, order)
