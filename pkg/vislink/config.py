"""
Run configuration: INI-style `key = value` files with the sections
`[data]`, `[model]`, `[style]`, `[vision]`, `[train]` and `[output]`.

Empty values stand for None, booleans are `true`/`false` and seeds are a
comma-separated list.

`hidden_dim` defaults to 256 and accepts any positive size; runs outside
`HIDDEN_DIM_RANGE` are reported with a warning.
"""
import configparser
from collections import OrderedDict, namedtuple
from vislink import check
from vislink.modeling.integrate import STRATEGIES
from vislink.modeling.mpnn import AGGREGATORS
from vislink.rendering import style as styles
from vislink.train import TrainConfig, train_requirements
from vislink.vsf import BACKBONES

MODELS = ('gvn', 'egvn', 'baseline-gcn')
ADAPTIVITIES = ('freeze', 'partial', 'full')
# studied hidden sizes; others are accepted with a warning
HIDDEN_DIM_RANGE = (512, 2048)

# section -> ordered (field, kind, default)
SECTIONS = OrderedDict([
    ('data', (('edges', 'optional', None),
              ('features', 'optional', None),
              ('splits_dir', 'optional', None),
              ('dataset', 'str', 'graph'),
              ('neg_per_pos', 'int', 100),
              ('use_valid_as_message_paths', 'bool', False))),
    ('model', (('model', 'str', 'egvn'),
               ('depth', 'int', 2),
               ('hidden_dim', 'int', 256),
               ('aggregator', 'str', 'gcn'),
               ('readout_layers', 'int', 2),
               ('integration', 'str', 'attention'))),
    ('style', (('k', 'int', 2),
               ('style', 'str', 'graphviz'),
               ('center_color', 'optional', None),
               ('node_shape', 'optional', None),
               ('labeling', 'str', 'none'),
               ('style_consistency', 'bool', True))),
    ('vision', (('adaptivity', 'str', 'partial'),
                ('backbone', 'str', 'resnet50'),
                ('weights', 'optional', None))),
    ('train', (('seeds', 'ints', (0,)),
               ('epochs', 'int', 100),
               ('batch_size', 'int', 1024),
               ('lr_vision', 'float', 1e-4),
               ('lr_main', 'float', 1e-3),
               ('weight_decay', 'float', 0.0),
               ('patience', 'int', 20),
               ('mask_message_links', 'bool', False))),
    ('output', (('output_dir', 'str', 'runs'),
                ('cache_dir', 'optional', None),
                ('verbose', 'int', 1))),
])
FIELDS = OrderedDict((field, (section, kind, default))
                     for section, entries in SECTIONS.items()
                     for field, kind, default in entries)

RunConfig = namedtuple('RunConfig', list(FIELDS))


def parse_value(field, kind, text):
    text = text.strip()
    try:
        if kind == 'optional':
            return text or None
        if kind == 'str':
            return text
        if kind == 'int':
            return int(text)
        if kind == 'float':
            return float(text)
        if kind == 'ints':
            return tuple(int(part) for part in text.split(',') if part.strip())
        if text.lower() in ('true', 'yes', '1'):
            return True
        if text.lower() in ('false', 'no', '0'):
            return False
        raise ValueError(text)
    except ValueError as error:
        raise check.ConfigurationError(
            'Invalid value \'{}\' for \'{}\'.'.format(text, field)) from error


def _format_value(kind, value):
    if value is None:
        return ''
    if kind == 'bool':
        return 'true' if value else 'false'
    if kind == 'ints':
        return ', '.join(str(v) for v in value)
    return str(value)


def default_config(**kwargs):
    """Returns the default run configuration with some fields replaced."""
    values = {field: default for field, (_, _, default) in FIELDS.items()}
    unknown = set(kwargs) - set(values)
    if unknown:
        raise check.ConfigurationError(
            'Unknown configuration keys: {}.'.format(', '.join(sorted(unknown))))
    values.update(kwargs)
    return validate_config(RunConfig(**values))


def parse_config_text(text):
    """Parses configuration text into a validated run configuration.

    Raises
    -------
    ConfigurationError
        If a section or key is unknown or a value is invalid.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as error:
        raise check.ConfigurationError(
            'Cannot parse configuration: {}'.format(error)) from error

    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise check.ConfigurationError(
                'Unknown configuration section [{}].'.format(section))
        for key, text_value in parser.items(section):
            if key not in FIELDS or FIELDS[key][0] != section:
                raise check.ConfigurationError(
                    'Unknown configuration key \'{}\' in [{}].'.format(
                        key, section))
            values[key] = parse_value(key, FIELDS[key][1], text_value)
    return default_config(**values)


def load_config(path):
    """Reads a run configuration file."""
    with open(path, encoding='utf-8') as handle:
        return parse_config_text(handle.read())


def config_to_text(cfg):
    """Writes a run configuration as text that `parse_config_text` reads
    back into an identical configuration."""
    lines = []
    for section, entries in SECTIONS.items():
        if lines:
            lines.append('')
        lines.append('[{}]'.format(section))
        for field, kind, _ in entries:
            value = _format_value(kind, getattr(cfg, field))
            lines.append('{} = {}'.format(field, value).rstrip())
    return '\n'.join(lines) + '\n'


def train_config(cfg, seed):
    """Returns the training configuration of one seed of a run."""
    return TrainConfig(cfg.epochs, cfg.batch_size, cfg.lr_vision, cfg.lr_main,
                       cfg.weight_decay, seed, cfg.patience, 100,
                       cfg.mask_message_links)


def validate_config(cfg):
    """Checks every field of a run configuration.

    Returns
    -------
    named tuple
        The same configuration.

    Raises
    -------
    ConfigurationError
        If any field is invalid.
    """
    try:
        check.one_of(cfg.model, MODELS, 'model')
        check.one_of(cfg.integration, STRATEGIES, 'integration strategy')
        check.one_of(cfg.aggregator, AGGREGATORS, 'aggregator')
        check.one_of(cfg.style, styles.VISUALIZERS, 'visualizer')
        check.one_of(cfg.labeling, styles.LABELINGS, 'labeling')
        if cfg.node_shape is not None:
            check.one_of(cfg.node_shape, styles.NODE_SHAPES, 'node shape')
        if cfg.center_color is not None:
            check.one_of(cfg.center_color, styles.PALETTE, 'center color')
        check.one_of(cfg.adaptivity, ADAPTIVITIES, 'adaptivity')
        check.one_of(cfg.backbone, BACKBONES, 'backbone')
        check.one_of(cfg.verbose, (0, 1, 2), 'verbose')
        check.hop_count(cfg.k)
        check.integer(cfg.depth, 'depth')
        if not 1 <= cfg.depth <= 3:
            raise ValueError('\'depth\' should be between 1 and 3!')
        for name in ('hidden_dim', 'readout_layers', 'neg_per_pos'):
            check.integer(getattr(cfg, name), name)
            check.positive_number(getattr(cfg, name), name)
        check.non_empty(cfg.seeds, 'seeds')
        for seed in cfg.seeds:
            check.integer(seed, 'seed')
        train_requirements(train_config(cfg, cfg.seeds[0]))
        if cfg.model == 'egvn' and cfg.adaptivity == 'full':
            raise ValueError(
                'E-GVN keeps the encoder frozen! Use adaptivity \'freeze\' '
                'or \'partial\', or the \'gvn\' model.')
    except check.ConfigurationError:
        raise
    except (ValueError, TypeError) as error:
        raise check.ConfigurationError(str(error)) from error
    return cfg
