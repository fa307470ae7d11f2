"""Exact C_p-equivariant algebra: Mackey and Green functors, box products,
Mackey fields, twisted cyclic bar complexes, and equivariant circle models."""

__version__ = "0.1.0"
