"""Mirror-curve topological recursion for toric Calabi-Yau 3-orbifolds.

Given the fan data of a semi-projective toric CY 3-orbifold and a framed outer
brane, this package builds the mirror curve and computes the higher-genus
B-model invariants (correlation forms, free energies, open potentials) by two
independent algorithms, cross-checked against the A-model side (mirror maps,
disk factors, Picard-Fuchs operators).
"""

__version__ = "0.1.0"
