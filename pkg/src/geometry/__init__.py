# Bivector fields and the Poisson test
