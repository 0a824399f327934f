from collections import namedtuple
from vislink import check, utils

RenderStyle = namedtuple('RenderStyle', [
    'canvas_px', 'node_shape', 'fill_color', 'center_color',
    'background_color', 'outline_color', 'labeling', 'layout',
    'layout_iterations', 'edge_width_px', 'node_radius_px'])

PALETTE = {
    'white': (255/255, 255/255, 255/255),
    'black': (0/255, 0/255, 0/255),
    'brown': (165/255, 42/255, 42/255),
    'yellow': (255/255, 255/255, 0/255),
    'red': (255/255, 0/255, 0/255),
    'green': (0/255, 128/255, 0/255),
    'dark_blue': (0/255, 0/255, 139/255),
}
FILL_CHOICES = ('white', 'black', 'brown', 'yellow', 'red', 'green')
NODE_SHAPES = ('box', 'circle', 'ellipse', 'pentagon')
LABELINGS = ('none', 'relabel', 'unique')
LAYOUTS = ('force_directed', 'circular', 'spectral')
VISUALIZERS = ('graphviz', 'matplotlib', 'igraph')


def color(value):
    """Returns a normalized RGB tuple for a palette name or an RGB tuple."""
    if isinstance(value, str):
        check.one_of(value, PALETTE, 'color')
        return PALETTE[value]
    value = tuple(float(x) for x in value)
    if len(value) != 3 or not all(0 <= x <= 1 for x in value):
        raise ValueError(
            'Color {} should be a normalized RGB triple!'.format(value))
    return value


def color_name(rgb):
    """Returns the palette name of an RGB tuple, if it has one."""
    for name, value in PALETTE.items():
        if value == tuple(rgb):
            return name
    return None


def default_style(**kwargs):
    """Builds a render style, filling in the default profile.

    The default profile draws white boxes with black outlines on a white
    224x224 canvas, with center nodes in brown and no labels.

    Parameters
    ----------
    **kwargs
        Any `RenderStyle` field. Colors may be palette names or normalized
        RGB tuples.

    Returns
    -------
    named tuple
        Validated render style.
    """
    kwargs.setdefault('canvas_px', (224, 224))
    kwargs.setdefault('node_shape', 'box')
    kwargs.setdefault('fill_color', 'white')
    kwargs.setdefault('center_color', 'brown')
    kwargs.setdefault('background_color', 'white')
    kwargs.setdefault('outline_color', 'black')
    kwargs.setdefault('labeling', 'none')
    kwargs.setdefault('layout', 'force_directed')
    kwargs.setdefault('layout_iterations', 50)
    kwargs.setdefault('edge_width_px', 2)
    kwargs.setdefault('node_radius_px', 10)

    for field in ('fill_color', 'center_color', 'background_color',
                  'outline_color'):
        kwargs[field] = color(kwargs[field])
    kwargs['canvas_px'] = tuple(int(x) for x in kwargs['canvas_px'])

    style = RenderStyle(**kwargs)
    style_requirements(style)
    return style


def visualizer_style(name, **kwargs):
    """Returns a style emulating the look of a graph visualizer.

    Parameters
    ----------
    name : {'graphviz', 'matplotlib', 'igraph'}
        Visualizer profile. `'graphviz'` is the default profile;
        `'matplotlib'` draws dark blue disks without outlines; `'igraph'`
        draws red disks with black outlines.
    **kwargs
        Overrides of individual fields.

    Returns
    -------
    named tuple
        Render style.
    """
    check.one_of(name, VISUALIZERS, 'visualizer')
    if name == 'matplotlib':
        kwargs.setdefault('node_shape', 'circle')
        kwargs.setdefault('fill_color', 'dark_blue')
        kwargs.setdefault('outline_color', 'dark_blue')
    elif name == 'igraph':
        kwargs.setdefault('node_shape', 'circle')
        kwargs.setdefault('fill_color', 'red')
        kwargs.setdefault('center_color', 'yellow')
        kwargs.setdefault('layout', 'circular')
    return default_style(**kwargs)


def style_requirements(style):
    """Checks that a render style is usable.

    Raises
    -------
    ValueError
        If a categorical field is not supported.
    ConfigurationError
        If the node glyphs do not fit into the canvas margin.
    """
    check.one_of(style.node_shape, NODE_SHAPES, 'node shape')
    check.one_of(style.labeling, LABELINGS, 'labeling')
    check.one_of(style.layout, LAYOUTS, 'layout')
    check.integer(style.layout_iterations, 'layout_iterations')
    check.non_negative_number(style.layout_iterations, 'layout_iterations')
    check.positive_number(style.node_radius_px, 'node_radius_px')
    check.positive_number(style.edge_width_px, 'edge_width_px')
    height, width = style.canvas_px
    if min(height, width) <= 0:
        raise check.ConfigurationError(
            'Canvas {}x{} is empty.'.format(height, width))
    # layouts leave a 5% margin on every side for the glyphs
    if 2 * style.node_radius_px > 0.1 * min(height, width):
        raise check.ConfigurationError(
            'Canvas {}x{} is too small for node glyphs of radius {} px.'.format(
                height, width, style.node_radius_px))


def style_digest(style):
    """Returns a lowercase hex sha256 digest of the ordered style fields."""
    fields = ['{}={!r}'.format(field, getattr(style, field))
              for field in RenderStyle._fields]
    return utils.digest(*fields)
