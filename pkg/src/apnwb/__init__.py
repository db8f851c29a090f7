"""apnwb: APN functions from relative trace compositions over GF(2^n)."""

from .gf2n import Field, FieldElement, get_field

__all__ = ["Field", "FieldElement", "get_field"]
__version__ = "0.1.0"
