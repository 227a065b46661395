"""Named-color table from the CSS/X11 palette."""

from __future__ import annotations

from pathlib import Path

from matplotlib.colors import CSS4_COLORS

from .formats import write_color_table


def css_colors() -> dict[str, tuple[int, int, int]]:
    colors = {}
    for name, hex_value in CSS4_COLORS.items():
        digits = hex_value.lstrip("#")
        colors[name.lower()] = (
            int(digits[0:2], 16),
            int(digits[2:4], 16),
            int(digits[4:6], 16),
        )
    return colors


def export_colors(out_path: str | Path) -> int:
    """Write the color table and return how many names it holds."""
    colors = css_colors()
    write_color_table(out_path, colors)
    return len(colors)
