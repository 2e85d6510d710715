"""Shared exception base for the toolkit.

Every domain error raised by this package derives from ColorlexError,
so the CLI can separate expected failures (bad input, missing data)
from bugs.
"""


class ColorlexError(Exception):
    pass
