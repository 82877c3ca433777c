"""Operator models of quantum quaternion spheres and odd quantum spheres."""
__version__ = "0.1.0"
