"""Numerical tolerances shared by every service."""

# Maximum ‖R − R*‖_F for an element to count as an observable.
HERMITICITY_TOL = 1e-10

# Eigenvalues closer than this are one spectral point.
CLUSTER_TOL = 1e-8

# Off-diagonal Frobenius mass allowed for "A is diagonal in the context basis".
CONTAINS_TOL = 1e-8

# Commutator norm at or below which two observables are compatible.
COMMUTATOR_TOL = 1e-10

# Unitarity of a context basis.
UNITARITY_TOL = 1e-10

# Gram eigenvalues above this count towards the GNS quotient rank.
GRAM_RANK_TOL = 1e-10

# Born weights below this are numerical zeros.
PROBABILITY_FLOOR = 1e-14

# Events "value <= a" are evaluated against a + EVENT_SLACK.
EVENT_SLACK = 1e-12

# Overlaps above this connect two basis columns of different contexts.
OVERLAP_TOL = 1e-8

# Observable fingerprints round entries to this grid.
FINGERPRINT_GRID = 1e-9
