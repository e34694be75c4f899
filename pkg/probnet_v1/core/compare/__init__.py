from .engine import SOUNDNESS_SLACK, compare_frame, compare_network, render_compare_table

__all__ = ["SOUNDNESS_SLACK", "compare_frame", "compare_network", "render_compare_table"]
