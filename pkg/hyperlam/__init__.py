"""hyperlam: hypergraph rewriting and hypergraph Lambek calculus toolkit."""

__version__ = "0.1.0"
