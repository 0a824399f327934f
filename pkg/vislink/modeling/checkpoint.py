import ast
import os
from collections import namedtuple
import torch
from vislink import utils
from vislink.modeling.integrate import IntegrationConfig
from vislink.modeling.mpnn import MpnnConfig

Checkpoint = namedtuple('Checkpoint', [
    'state', 'model_class', 'mpnn_cfg', 'integration_cfg', 'run_config'])

CHECKPOINT_FORMAT = 'vislink-checkpoint-1'


def config_text(cfg):
    """Echoes a configuration named tuple as `field = value` lines."""
    if cfg is None:
        return ''
    return '\n'.join('{} = {!r}'.format(field, getattr(cfg, field))
                     for field in cfg._fields)


def parse_config(text, config_type):
    """Parses text written by `config_text` back into a named tuple."""
    if not text:
        return None
    values = {}
    for line in text.splitlines():
        field, value = line.split(' = ', 1)
        values[field] = ast.literal_eval(value)
    return config_type(**values)


def _frozen_encoder_keys(model):
    encoder = getattr(model, 'encoder', None)
    if encoder is None or encoder.trainable:
        return ()
    return tuple('encoder.' + key for key in encoder.state_dict())


def save_checkpoint(path, model, run_config_text=''):
    """Saves model parameters and the echoed configurations.

    Parameters of a frozen encoder are left out; they are loaded from the
    encoder's own weights file.

    Parameters
    ----------
    path : str
        Checkpoint file.
    model : torch.nn.Module
        Model with `mpnn_cfg` and `integration_cfg` attributes.
    run_config_text : str, optional
        Text of the run configuration.

    Returns
    -------
    str
        Path of the checkpoint.
    """
    excluded = set(_frozen_encoder_keys(model))
    state = {key: value.detach().cpu().clone()
             for key, value in model.state_dict().items()
             if key not in excluded}
    archive = {
        'format': CHECKPOINT_FORMAT,
        'model_class': type(model).__name__,
        'state': state,
        'mpnn_config': config_text(model.mpnn_cfg),
        'integration_config': config_text(model.integration_cfg),
        'run_config': run_config_text,
    }
    utils.atomic_write(path, lambda handle: torch.save(archive, handle))
    return path


def load_checkpoint(path):
    """Loads a checkpoint written by `save_checkpoint`.

    Raises
    -------
    FileNotFoundError
        If the checkpoint does not exist.
    ValueError
        If the file is not a checkpoint.
    """
    if not os.path.exists(path):
        raise FileNotFoundError('Checkpoint \'{}\' does not exist.'.format(
            path))
    archive = torch.load(path, map_location='cpu', weights_only=True)
    if not isinstance(archive, dict) or \
            archive.get('format') != CHECKPOINT_FORMAT:
        raise ValueError('\'{}\' is not a checkpoint!'.format(path))
    return Checkpoint(
        archive['state'], archive['model_class'],
        parse_config(archive['mpnn_config'], MpnnConfig),
        parse_config(archive['integration_config'], IntegrationConfig),
        archive['run_config'])


def restore(model, checkpoint):
    """Loads checkpoint parameters into a model built from the same
    configurations.

    Raises
    -------
    ValueError
        If the model class or configurations differ from the echoed ones,
        or parameters other than frozen encoder ones are missing.
    """
    expected = (('model class', type(model).__name__, checkpoint.model_class),
                ('MPNN config', model.mpnn_cfg, checkpoint.mpnn_cfg),
                ('integration config', model.integration_cfg,
                 checkpoint.integration_cfg))
    for name, actual, stored in expected:
        if actual != stored:
            raise ValueError(
                'Checkpoint {} {} does not match the model\'s {}!'.format(
                    name, stored, actual))
    result = model.load_state_dict(checkpoint.state, strict=False)
    missing = set(result.missing_keys) - set(_frozen_encoder_keys(model))
    if missing or result.unexpected_keys:
        raise ValueError(
            'Checkpoint does not fit the model: missing {}, unexpected '
            '{}.'.format(sorted(missing), sorted(result.unexpected_keys)))
    return model
