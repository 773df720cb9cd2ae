"""Smooth self-similar solutions of SO(d) Yang-Mills equations in odd dimensions."""
__version__ = "0.1.0"
