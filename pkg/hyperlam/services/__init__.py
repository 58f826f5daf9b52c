"""Replacement, canonical forms, DPO rewriting, proof search, encodings and I/O."""
