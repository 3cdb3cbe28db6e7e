"""Cotangent paths, loops and their tangent cones."""
