# Canonical bracket of local functionals
