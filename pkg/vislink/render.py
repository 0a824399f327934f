"""
Rendering of subgraph views as raster images.

`render` is a pure function of the view, the style and the layout seed;
`render_batch` adds a content-addressed on-disk cache on top of it.
"""
from collections import namedtuple
import numpy as np
from vislink import check, graph, utils
from vislink.rendering import cache, layout as layouts, shapes, style as styles
from vislink.rendering import utils as rendering_utils

RenderedBatch = namedtuple('RenderedBatch', ['images', 'rendered', 'cached'])

MAX_RENDER_NODES = 120


def canonical_encoding(view, with_ids=False):
    """Encodes a view as text.

    Parameters
    ----------
    view : named tuple
        Subgraph view.
    with_ids : bool, optional
        If True, the global ids of the local nodes are included, so that
        only the very same subgraph of the same graph encodes identically.

    Returns
    -------
    str
        Encoding of the center kind, node count and local edges.
    """
    kind = 'link' if isinstance(view.center, graph.Link) else 'node'
    parts = [kind, str(view.local_nodes.size),
             ' '.join('{}-{}'.format(a, b) for a, b in view.local_edges)]
    if with_ids:
        parts.append(' '.join(str(v) for v in view.local_nodes))
    return '|'.join(parts)


def view_seed(view, labeling='none'):
    """Returns the layout seed of a view.

    Structurally identical views get the same seed. With unique labeling
    the global ids are visible in the image and take part in the seed.
    """
    encoding = canonical_encoding(view, with_ids=labeling == 'unique')
    return int(utils.digest(encoding)[:8], 16)


def layout(view, style, seed=None):
    """Computes the positions of the local nodes of a view.

    Parameters
    ----------
    view : named tuple
        Non-empty subgraph view.
    style : named tuple
        Render style; `layout` and `layout_iterations` are used.
    seed : int, optional
        Seed of the initial positions. Defaults to `view_seed(view)`.

    Returns
    -------
    named tuple
        Layout with `positions` of shape `|local_nodes| x 2` in
        `[0.05, 0.95]^2`.
    """
    check.non_empty(view.local_nodes, 'local_nodes')
    if seed is None:
        seed = view_seed(view, style.labeling)
    return layouts.place(view.local_nodes.size, view.local_edges,
                         style.layout, style.layout_iterations, seed)


def _labels(view, labeling):
    if labeling == 'relabel':
        return [str(i) for i in range(view.local_nodes.size)]
    if labeling == 'unique':
        return [str(v) for v in view.local_nodes]
    return None


def render(view, style, seed=None):
    """Renders a subgraph view as an image.

    Center nodes are filled with `style.center_color` and all other nodes
    with `style.fill_color`. A masked center link is never drawn.

    Parameters
    ----------
    view : named tuple
        Subgraph view. Views with more than `MAX_RENDER_NODES` nodes are
        truncated in BFS order from the center.
    style : named tuple
        Render style.
    seed : int, optional
        Layout seed. Defaults to `view_seed(view)`.

    Returns
    -------
    ndarray
        Image of shape `H x W x 3` and type uint8.

    Raises
    -------
    ConfigurationError
        If the canvas is too small for the node glyphs.
    """
    styles.style_requirements(style)
    view = graph.truncate_view(view, MAX_RENDER_NODES)
    positions = layout(view, style, seed).positions
    height, width = style.canvas_px
    points = positions * np.array([width, height])
    n_centers = graph.center_count(view)

    surface, ctx = rendering_utils.new_canvas(
        style.canvas_px, style.background_color)

    for a, b in view.local_edges:
        if view.mask_center_link and n_centers == 2 and (a, b) == (0, 1):
            continue
        ctx.move_to(*points[a])
        shapes.line(ctx, *points[b])
        rendering_utils.complete_path(
            ctx, style.outline_color, style.edge_width_px)

    glyph = shapes.glyph_functions[style.node_shape]
    for i, point in enumerate(points):
        ctx.move_to(*point)
        glyph(ctx, style.node_radius_px)
        fill = style.center_color if i < n_centers else style.fill_color
        rendering_utils.complete_fill(
            ctx, fill, style.outline_color, max(1, style.edge_width_px // 2))

    labels = _labels(view, style.labeling)
    if labels is not None:
        ctx.set_font_size(style.node_radius_px)
        ctx.set_source_rgb(*style.outline_color)
        for text, (x, y) in zip(labels, points):
            extents = ctx.text_extents(text)
            ctx.move_to(x - extents.width/2 - extents.x_bearing,
                        y - extents.height/2 - extents.y_bearing)
            ctx.show_text(text)

    return rendering_utils.surface_to_array(surface)


def randomize_style(base, seed):
    """Samples an inconsistent style around a base style.

    The fill color is drawn from White, Black, Brown, Yellow, Red and
    Green, the node shape from all supported shapes and the layout from all
    supported variants. The center color is drawn from the remaining
    palette colors, so it always differs from the fill.

    Parameters
    ----------
    base : named tuple
        Render style providing the remaining fields.
    seed : int
        Random seed.

    Returns
    -------
    named tuple
        Sampled render style.
    """
    rng = np.random.default_rng(seed)
    fill = styles.FILL_CHOICES[rng.integers(len(styles.FILL_CHOICES))]
    shape = styles.NODE_SHAPES[rng.integers(len(styles.NODE_SHAPES))]
    variant = styles.LAYOUTS[rng.integers(len(styles.LAYOUTS))]
    centers = [name for name in styles.PALETTE if name != fill]
    center = centers[rng.integers(len(centers))]
    return base._replace(fill_color=styles.PALETTE[fill],
                         center_color=styles.PALETTE[center],
                         node_shape=shape, layout=variant)


def cache_key(view, style, seed):
    """Returns the cache key of a view rendered with a style and seed."""
    return utils.digest(canonical_encoding(view, with_ids=True),
                        styles.style_digest(style), str(seed))


def render_batch(views, style, cache_dir=None, **kwargs):
    """Renders a list of views, reusing cached images.

    Parameters
    ----------
    views : list of named tuple
        Subgraph views.
    style : named tuple
        Render style.
    cache_dir : str, optional
        Cache directory. If None, nothing is cached.
    **kwargs
        randomize : bool, optional
            If True, every view is rendered with its own style sampled by
            `randomize_style`.
        seed : int, optional
            Top-level seed of the sampled styles.
        counter : collections.Counter, optional
            Incremented under `'render'` for every image actually rendered.
        verbose : int, optional
            If 1, progress is reported; if 2, only warnings are shown.

    Returns
    -------
    named tuple
        Batch with `images` (list of ndarray), `rendered` and `cached`
        counts.
    """
    randomize = kwargs.get('randomize', False)
    counter = kwargs.get('counter')
    images, rendered, cached = [], 0, 0

    for view in views:
        view_style = style
        if randomize:
            view_style = randomize_style(style, utils.derive_seed(
                kwargs.get('seed', 0), 'style-{}'.format(view_seed(view))))
        seed = view_seed(view, view_style.labeling)
        key = cache_key(view, view_style, seed)

        image = None
        if cache_dir is not None:
            try:
                image = cache.read(cache_dir, key)
            except check.CacheError as error:
                utils.warning('{} Re-rendering.'.format(error), **kwargs)

        if image is None:
            image = render(view, view_style, seed)
            rendered += 1
            if counter is not None:
                counter['render'] += 1
            if cache_dir is not None:
                cache.write(cache_dir, key, image)
        else:
            cached += 1
        images.append(image)

    utils.message('Rendered {} images ({} from cache).'.format(
        rendered + cached, cached), **kwargs)
    return RenderedBatch(images, rendered, cached)
