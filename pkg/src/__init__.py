# Poisson path-space lab
