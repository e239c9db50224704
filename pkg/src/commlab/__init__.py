"""commlab: commutator and self-commutator constructions for truncated
compact operators, with numerical certificates.

Modules: ``numkit`` (matrix kernel), ``anderson`` (block tri-diagonal
construction), ``staircase`` (banded forms), ``selfcomm`` (type A / type C
solvers), ``liealg`` (sl root-space tools), ``minimize`` (penalty search for
the norm minimum), ``idealseq`` (sequence classifiers), ``matio`` (text
formats) and ``cli``.
"""

from . import (  # noqa: F401
    anderson,
    idealseq,
    liealg,
    matio,
    minimize,
    numkit,
    selfcomm,
    sequences,
    staircase,
)

__version__ = "0.1.0"
