"""divring: division rings of group algebras, ranks and zero-divisor checks."""

__version__ = "0.1.0"
