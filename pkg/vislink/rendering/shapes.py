import numpy as np


def line(ctx, x, y):
    """Draws a line from the current point to `(x, y)`.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    x, y : float
        End point.
    """
    ctx.line_to(x, y)


def box(ctx, radius):
    """Draws a square centered at the current point.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    radius : float
        Half of the side length.
    """
    x, y = ctx.get_current_point()
    ctx.rectangle(x - radius, y - radius, 2*radius, 2*radius)


def circle(ctx, radius):
    """Draws a circle centered at the current point.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    radius : float
        Radius of the circle.
    """
    x, y = ctx.get_current_point()
    ctx.new_sub_path()
    ctx.arc(x, y, radius, 0, 2*np.pi)


def ellipse(ctx, radius):
    """Draws a horizontal ellipse centered at the current point.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    radius : float
        Horizontal semi-axis. The vertical semi-axis is `0.6*radius`.
    """
    x, y = ctx.get_current_point()
    ctx.save()
    ctx.translate(x, y)
    ctx.scale(1, 0.6)
    ctx.new_sub_path()
    ctx.arc(0, 0, radius, 0, 2*np.pi)
    ctx.restore()


def pentagon(ctx, radius):
    """Draws a regular pentagon with one vertex pointing up.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    radius : float
        Circumradius.
    """
    x, y = ctx.get_current_point()
    angles = -np.pi/2 + 2*np.pi*np.arange(5)/5
    ctx.move_to(x + radius*np.cos(angles[0]), y + radius*np.sin(angles[0]))
    for angle in angles[1:]:
        ctx.line_to(x + radius*np.cos(angle), y + radius*np.sin(angle))
    ctx.close_path()


glyph_functions = {
    'box': box,
    'circle': circle,
    'ellipse': ellipse,
    'pentagon': pentagon,
}
