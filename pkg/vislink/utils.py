import hashlib
import os
import tempfile
import zlib
from datetime import datetime
import numpy as np
from pathvalidate import sanitize_filepath
from sigfig import round


def unique_path(path, extension='json', sanitize=True):
    """Append a number to the path, if it is not unique.

    Parameters
    ----------
    path : str
        Path of the filename without the extension.
    extension : str, optional
        File extension.
    sanitize : bool, optional
        If True, sanitizes the filename by removing illegal characters and
        making the path compatible with the operating system.

    Returns
    -------
    str
        Unique path.
    """
    if sanitize:
        path = sanitize_filepath(str(path), platform='auto')

    full_path = '{}.{}'.format(path, extension)
    if os.path.exists(full_path):
        number = 1
        while True:
            number += 1
            new_full_path = '{}-{}.{}'.format(path, number, extension)
            if os.path.exists(new_full_path):
                continue
            else:
                full_path = new_full_path
                break

    return full_path


def time(keep_ms=False):
    """Returns current time.

    Parameters
    ----------
    keep_ms : bool, optional
        If True, includes milliseconds.
    Returns
    -------
    str
        Current time.
    """
    time_str = str(datetime.now())
    if keep_ms is False:
        time_str = time_str.split('.')[0]
    return time_str


def message(message_str, **kwargs):
    """Prints current time followed by a gap and a custom message.

    Parameters
    ----------
    message_str : str
        Message to be printed at the end of the line.
    **kwargs
        verbose : int, optional
            The message is shown only is verbose is equal to 1.
        show_time : bool, optional
            If True, prints out current time.
    """
    if kwargs.get('verbose', 1) == 1:
        if kwargs.get('show_time', True):
            message_str = time(kwargs.get('keep_ms', False)) + \
                          gap(kwargs.get('gap_size', 5)) + \
                          message_str
        print(message_str)


def warning(message_str, **kwargs):
    """Prints a warning unless all messages are silenced.

    Warnings are shown both when `verbose` is 1 and when it is 2.

    Parameters
    ----------
    message_str : str
        Warning text (without the 'Warning: ' prefix).
    """
    if kwargs.get('verbose', 1) in (1, 2):
        kwargs['verbose'] = 1
        message('Warning: ' + message_str, **kwargs)


def gap(gap_size=5):
    """Returns a given number of whitespace characters.

    Parameters
    ----------
    gap_size : int, optional
        Number of whitespace characters to be printed.

    Returns
    -------
    str
        Whitespace.
    """
    gap_str = gap_size*' '
    return gap_str


def rounded(value, sf=4):
    """Rounds a metric to a number of significant figures for display."""
    if value is None or value == 0 or not np.isfinite(value):
        return value
    return round(float(value), sigfigs=sf)


def digest(*parts):
    """Returns a lowercase hex sha256 digest of the given parts.

    Parameters
    ----------
    *parts : bytes or str or ndarray
        Parts to be hashed in order. Strings are UTF-8 encoded and arrays
        contribute their dtype, shape and raw bytes.

    Returns
    -------
    str
        Hex digest.
    """
    hasher = hashlib.sha256()
    for part in parts:
        if isinstance(part, np.ndarray):
            part = np.ascontiguousarray(part)
            hasher.update('{}{}'.format(part.dtype.str, part.shape).encode())
            part = part.tobytes()
        elif isinstance(part, str):
            part = part.encode('utf-8')
        hasher.update(len(part).to_bytes(8, 'little'))
        hasher.update(part)
    return hasher.hexdigest()


def file_digest(path):
    """Returns the sha256 digest of a file's contents."""
    hasher = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(1 << 20), b''):
            hasher.update(block)
    return hasher.hexdigest()


def parameter_digest(module):
    """Returns a digest of all parameters and buffers of a torch module."""
    arrays = [tensor.detach().cpu().numpy()
              for _, tensor in sorted(module.state_dict().items())]
    return digest(*arrays)


def derive_seed(seed, component):
    """Expands the top-level seed into a seed for a named component.

    Parameters
    ----------
    seed : int
        Top-level seed.
    component : str
        Name of the component, e.g. `'splits'` or `'negatives-3'`.

    Returns
    -------
    int
        Derived 32-bit seed.
    """
    sequence = np.random.SeedSequence(
        [int(seed), zlib.crc32(component.encode('utf-8'))])
    return int(sequence.generate_state(1)[0])


def atomic_write(path, write, mode='wb'):
    """Writes a file by renaming a completed temporary file into place.

    Parameters
    ----------
    path : str
        Final path.
    write : callable
        Called with an open file handle.
    mode : str, optional
        File mode for the temporary file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix='.tmp')
    try:
        with os.fdopen(fd, mode) as handle:
            write(handle)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
