"""Restricted Algorithmic Rust toolchain: frontend, subset checker, and
Restricted Algorithmic C emitter, bundled with an array-backed set corpus
and its verification harness."""

__version__ = "0.1.0"
