from .engine import EPS_Q, Network, add_conjunction_node, add_disjunction_node
from .kb_format import parse_kb, serialize_kb

__all__ = [
    "EPS_Q",
    "Network",
    "add_conjunction_node",
    "add_disjunction_node",
    "parse_kb",
    "serialize_kb",
]
