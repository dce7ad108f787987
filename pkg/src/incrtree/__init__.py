"""Random generation of increasing trees with exact random-bit accounting.

Two samplers produce uniform strictly increasing binary trees:

* :mod:`incrtree.marchal` builds a uniform alternating sequence from a
  rejection-corrected Markov chain and reads the tree off its ranks;
* :mod:`incrtree.recursive` draws subtree sizes lazily from their exact law.

:mod:`incrtree.family` extends the recursive method to weighted unary-binary
families ``T' = a T**2 + b T + c``.  All randomness comes from a seeded
:class:`~incrtree.rng_bits.BitSource`, so every run is reproducible and its
bit cost is known exactly.
"""

__version__ = "0.1.0"

from .errors import (AmbiguousOrder, DomainError, EvenSize, IncrTreeError, InvalidExpectation,
                     RefinementLimitExceeded, SizeTooLarge, UnsupportedFamily)
from .rng_bits import BitSource, LazyUniform, lazy_compare, uniform_int
from .exactnum import RealInterval, family_counts, tangent_counts
from .tree_model import IncreasingTree, canonical_key, decode, encode
from .family import FamilySpec, make_spec

__all__ = [
    "__version__",
    "AmbiguousOrder", "DomainError", "EvenSize", "IncrTreeError", "InvalidExpectation",
    "RefinementLimitExceeded", "SizeTooLarge", "UnsupportedFamily",
    "BitSource", "LazyUniform", "lazy_compare", "uniform_int",
    "RealInterval", "family_counts", "tangent_counts",
    "IncreasingTree", "canonical_key", "decode", "encode",
    "FamilySpec", "make_spec",
]
