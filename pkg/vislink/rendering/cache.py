"""
Content-addressed PNG cache. An entry `<cache_dir>/<hh>/<key>.png` is paired
with `<key>.sha256`, holding the digest of the decoded pixels that is
verified on every read.
"""
import os
from pathvalidate import sanitize_filepath
from vislink import check, utils
from vislink.rendering import utils as rendering_utils


def entry_paths(cache_dir, key):
    """Returns the PNG and digest paths of a cache entry."""
    directory = sanitize_filepath(
        os.path.join(str(cache_dir), key[:2]), platform='auto')
    return (os.path.join(directory, key + '.png'),
            os.path.join(directory, key + '.sha256'))


def read(cache_dir, key):
    """Reads a cached image.

    Parameters
    ----------
    cache_dir : str
        Cache directory.
    key : str
        Entry key.

    Returns
    -------
    ndarray or None
        Image, or None if the entry does not exist.

    Raises
    -------
    CacheError
        If the decoded pixels do not match the stored digest.
    """
    png_path, digest_path = entry_paths(cache_dir, key)
    if not (os.path.exists(png_path) and os.path.exists(digest_path)):
        return None
    try:
        with open(png_path, 'rb') as handle:
            image = rendering_utils.png_to_image(handle.read())
        with open(digest_path, encoding='utf-8') as handle:
            expected = handle.read().strip()
    except Exception as error:
        raise check.CacheError(
            'Cache entry \'{}\' cannot be read: {}'.format(png_path, error)) \
            from error
    if utils.digest(image) != expected:
        raise check.CacheError(
            'Cache entry \'{}\' does not match its pixel digest.'.format(
                png_path))
    return image


def write(cache_dir, key, image):
    """Writes an image and its pixel digest, each renamed into place."""
    png_path, digest_path = entry_paths(cache_dir, key)
    data = rendering_utils.image_to_png(image)
    utils.atomic_write(png_path, lambda handle: handle.write(data))
    utils.atomic_write(digest_path,
                       lambda handle: handle.write(utils.digest(image)),
                       mode='w')


def count_entries(cache_dir):
    """Returns the number of PNG entries in a cache directory."""
    if not os.path.isdir(cache_dir):
        return 0
    return sum(name.endswith('.png')
               for _, _, names in os.walk(cache_dir) for name in names)
