"""Lower tails of the Galton-Watson martingale limit and the conditioning principle.

The main entry points:

* :func:`new_distribution` builds an offspring law and its constants;
* :mod:`bottcher.generation` holds exact laws and simulation of ``Z_n``;
* :mod:`bottcher.laplace` computes ``phi`` and the scaling function ``k``;
* :mod:`bottcher.tail` computes ``k*``, the periodic tail function ``M``
  and the gap functional;
* :mod:`bottcher.conditioning` computes conditional probabilities given
  ``Z_n / a**n < eps``, both exactly and by Monte Carlo.
"""

from .offspring import OffspringDistribution, from_json, new_distribution

__all__ = ["OffspringDistribution", "from_json", "new_distribution"]
__version__ = "0.1.0"
