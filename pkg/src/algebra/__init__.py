# Exact polynomial arithmetic
