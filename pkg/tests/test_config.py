from vislink import check, config
import pytest

# parse_config_text()
invalid_config_texts = ['[network]\ndepth = 2\n',
                        '[model]\nwidth = 2\n',
                        '[train]\nk = 2\n',
                        '[style]\nk = two\n',
                        '[style]\nk = 4\n',
                        '[style]\nstyle_consistency = maybe\n',
                        '[model]\ndepth = 0\n',
                        '[model]\nintegration = sum\n',
                        '[train]\nweight_decay = 0.001\n',
                        '[train]\nseeds =\n',
                        '[vision]\nadaptivity = full\n',
                        '[vision]\nbackbone = vgg16\n',
                        'depth = 2\n']

# parse_value()
value_kinds = ['optional', 'optional', 'int', 'float', 'ints', 'bool', 'bool']
value_texts = ['', ' runs/cache ', '3', '1e-4', '0, 1,2', 'True', 'no']
value_expected = [None, 'runs/cache', 3, 1e-4, (0, 1, 2), True, False]
value_arguments = zip(value_kinds, value_texts, value_expected)


def test_default_config():
    cfg = config.default_config()
    assert cfg.model == 'egvn'
    assert cfg.k == 2
    assert cfg.seeds == (0,)
    assert cfg.adaptivity == 'partial'
    assert cfg.style_consistency
    assert cfg.output_dir == 'runs'


def test_default_config_unknown_key():
    with pytest.raises(check.ConfigurationError):
        config.default_config(resolution=10)


@pytest.mark.parametrize('kind,text,expected', value_arguments)
def test_parse_value(kind, text, expected):
    """Tests function `config.parse_value()`.

    Parameters
    ----------
    kind : str
        Value kind.
    text : str
        Raw value.
    expected : any
        Parsed value.
    """
    assert config.parse_value('field', kind, text) == expected


def test_parse_config_text():
    text = '\n'.join(['[data]',
                      'edges = cora.txt',
                      '',
                      '[model]',
                      'model = gvn',
                      'integration = weighted',
                      '',
                      '[vision]',
                      'adaptivity = full',
                      '',
                      '[train]',
                      'seeds = 0, 1, 2',
                      'epochs = 5'])
    cfg = config.parse_config_text(text)
    assert cfg.edges == 'cora.txt'
    assert (cfg.model, cfg.integration, cfg.adaptivity) == \
        ('gvn', 'weighted', 'full')
    assert cfg.seeds == (0, 1, 2)
    assert cfg.epochs == 5
    assert cfg.features is None


@pytest.mark.parametrize('text', invalid_config_texts)
def test_parse_config_text_errors(text):
    """Invalid configuration files are rejected with one error type."""
    with pytest.raises(check.ConfigurationError):
        config.parse_config_text(text)


def test_config_text_round_trip(tmp_path):
    cfg = config.default_config(edges='g.txt', seeds=(3, 4), model='gvn',
                                center_color='red', style_consistency=False,
                                lr_main=5e-4)
    path = tmp_path / 'run.ini'
    path.write_text(config.config_to_text(cfg))
    assert config.load_config(str(path)) == cfg


def test_train_config():
    cfg = config.default_config(epochs=7, mask_message_links=True)
    train_cfg = config.train_config(cfg, 3)
    assert train_cfg.seed == 3
    assert train_cfg.epochs == 7
    assert train_cfg.eval_k == 100
    assert train_cfg.mask_message_links


def test_validate_config():
    cfg = config.default_config()
    assert config.validate_config(cfg) is cfg
    with pytest.raises(check.ConfigurationError):
        config.validate_config(cfg._replace(model='egvn', adaptivity='full'))
    with pytest.raises(check.ConfigurationError):
        config.validate_config(cfg._replace(verbose=3))
    with pytest.raises(check.ConfigurationError):
        config.validate_config(cfg._replace(node_shape='star'))


def test_validate_config_hidden_dim():
    """Any positive hidden size validates; the studied range is a
    warning threshold only."""
    cfg = config.default_config()
    assert cfg.hidden_dim == 256
    low, high = config.HIDDEN_DIM_RANGE
    for hidden_dim in (8, low, high, 4096):
        config.validate_config(cfg._replace(hidden_dim=hidden_dim))
    for hidden_dim in (0, -512):
        with pytest.raises(check.ConfigurationError):
            config.validate_config(cfg._replace(hidden_dim=hidden_dim))
