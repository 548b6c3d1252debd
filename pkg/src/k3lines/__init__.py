"""Lines on quartic surfaces over fields of characteristic 3."""
__version__ = "0.1.0"
