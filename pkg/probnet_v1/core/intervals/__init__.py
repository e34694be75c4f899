from .engine import contains, format_endpoint, format_interval, intersect

__all__ = ["contains", "format_endpoint", "format_interval", "intersect"]
