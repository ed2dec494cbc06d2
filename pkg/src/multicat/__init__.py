"""multicat: a symbolic computation kernel for finite colored operads.

Build table-backed multicategories, quotient presentations by congruence
closure, form tensor products and internal homs, enumerate algebra
structures, and verify the algebraic laws exhaustively at desk scale.
"""

__version__ = "0.1.0"
