import io
import cairo
import numpy as np


def complete_path(ctx, rgb=(0, 0, 0), width=1):
    """Strokes the current path.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    rgb : tuple of float
        Normalized RGB value of the path.
    width : float
        Width of the path.
    """
    ctx.set_line_width(width)
    ctx.set_source_rgb(*rgb)
    ctx.stroke()


def complete_fill(ctx, rgb=(0, 0, 0), outline_rgb=None, width=1):
    """Fills the current path and optionally strokes its outline.

    Parameters
    ----------
    ctx : cairo.Context
        Context.
    rgb : tuple of float
        Normalized RGB value of the fill.
    outline_rgb : tuple of float, optional
        Normalized RGB value of the outline. If None, no outline is drawn.
    width : float
        Width of the outline.
    """
    ctx.set_source_rgb(*rgb)
    if outline_rgb is None:
        ctx.fill()
    else:
        ctx.fill_preserve()
        complete_path(ctx, outline_rgb, width)


def new_canvas(canvas_px, background_rgb):
    """Creates an aliased RGB surface filled with the background color.

    Parameters
    ----------
    canvas_px : tuple of int
        Height and width in pixels.
    background_rgb : tuple of float
        Normalized RGB value of the background.

    Returns
    -------
    cairo.ImageSurface
        Surface.
    cairo.Context
        Context with anti-aliasing disabled.
    """
    height, width = canvas_px
    surface = cairo.ImageSurface(cairo.FORMAT_RGB24, width, height)
    ctx = cairo.Context(surface)
    ctx.set_antialias(cairo.ANTIALIAS_NONE)
    font_options = cairo.FontOptions()
    font_options.set_antialias(cairo.ANTIALIAS_NONE)
    font_options.set_hint_style(cairo.HINT_STYLE_NONE)
    ctx.set_font_options(font_options)
    ctx.set_source_rgb(*background_rgb)
    ctx.paint()
    return surface, ctx


def surface_to_array(surface):
    """Converts an RGB24/ARGB32 surface to an `H x W x 3` uint8 array."""
    surface.flush()
    height, width = surface.get_height(), surface.get_width()
    stride = surface.get_stride()
    data = np.frombuffer(bytes(surface.get_data()), dtype=np.uint8)
    pixels = data.reshape(height, stride)[:, :4*width].reshape(height, width, 4)
    # cairo stores native-endian 32-bit words, i.e. BGRX in memory
    return np.ascontiguousarray(pixels[:, :, [2, 1, 0]])


def array_to_surface(image):
    """Converts an `H x W x 3` uint8 array to an RGB24 surface."""
    height, width = image.shape[:2]
    stride = cairo.ImageSurface.format_stride_for_width(
        cairo.FORMAT_RGB24, width)
    data = np.zeros((height, stride), dtype=np.uint8)
    pixels = data[:, :4*width].reshape(height, width, 4)
    pixels[:, :, [2, 1, 0]] = image
    buffer = bytearray(data.tobytes())
    return cairo.ImageSurface.create_for_data(
        buffer, cairo.FORMAT_RGB24, width, height, stride)


def image_to_png(image):
    """Encodes an image as PNG bytes."""
    handle = io.BytesIO()
    array_to_surface(image).write_to_png(handle)
    return handle.getvalue()


def png_to_image(data):
    """Decodes PNG bytes to an `H x W x 3` uint8 array."""
    surface = cairo.ImageSurface.create_from_png(io.BytesIO(data))
    return surface_to_array(surface)
