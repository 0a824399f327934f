from vislink.rendering import cache, layout, shapes, style, utils
