"""
Finite-field oracle: orbits of bundle automorphisms on flags at 0, 1, inf
"""
