"""Main package for dockvision."""
__version__ = "0.1.0"

from dockvision.types import SCHEMA_VERSION

__all__ = [
    'SCHEMA_VERSION',
    '__version__',
]
