from .engine import MAX_ATOMS, MAX_OUTER, format_query, parse_query, query, saturate

__all__ = ["MAX_ATOMS", "MAX_OUTER", "format_query", "parse_query", "query", "saturate"]
