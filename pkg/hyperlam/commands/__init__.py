"""Command groups of the hyperlam CLI."""

from hyperlam.commands import cache, crosscheck, dpo, encode, graphs, prove

__all__ = ["cache", "crosscheck", "dpo", "encode", "graphs", "prove"]
