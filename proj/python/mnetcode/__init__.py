"""Vector linear network codes on the m-parameterized relay family.

Thin JSON-string facade over the C++ core: network construction, code
verification, exhaustive search certificates, the inequality ledger and
rank-table utilities.  Every *_json argument and return value is a JSON
document as produced by the `mnet` command-line tool, so artifacts move
freely between the two.
"""

from ._mnetcode import (
    check_axioms,
    from_subspaces,
    gen_network,
    ledger,
    membership,
    rank_of,
    rho_max,
    routing_code,
    search,
    terminal_tuple,
    tuple_terminal,
    validate_network,
    verify,
    version,
)

__version__ = version()

__all__ = [
    "check_axioms",
    "from_subspaces",
    "gen_network",
    "ledger",
    "membership",
    "rank_of",
    "rho_max",
    "routing_code",
    "search",
    "terminal_tuple",
    "tuple_terminal",
    "validate_network",
    "verify",
    "version",
    "__version__",
]
