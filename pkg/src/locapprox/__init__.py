"""Exact simultaneous approximation over valuations, orderings and absolute
values on Q, Q(i) and Q(T).

The public surface is re-exported here; see the README for a tour.
"""

from .errors import ApproxError
from .elements import (
    FIELDS,
    Q,
    QI,
    QT,
    FieldElem,
    format_element,
    from_rational,
    gen,
    one,
    parse_element,
    q_elem,
    qi_elem,
    qt_elem,
    zero,
)

__all__ = [
    "ApproxError",
    "FIELDS",
    "Q",
    "QI",
    "QT",
    "FieldElem",
    "format_element",
    "from_rational",
    "gen",
    "one",
    "parse_element",
    "q_elem",
    "qi_elem",
    "qt_elem",
    "zero",
]

__version__ = "0.1.0"
