# Discretized paths, loops and tangent vectors
