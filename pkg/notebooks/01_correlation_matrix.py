"""
Pauli correlations of a two-qubit state
=======================================

Every two-qubit density matrix is fixed by the 16 numbers
``R[i, j] = Tr(rho sigma_i x sigma_j)``. The 3x3 block ``T = R[1:, 1:]``
carries the correlations, and its trace norm decides entanglement for a wide
class of states.
"""

import numpy as np

from qent import bell_state, correlation_matrix, density_from_pure, svd3, t_matrix
from qent.pauli import density_from_correlation

np.set_printoptions(precision=4, suppress=True)

# Bell state |Phi+> = (|00> + |11>) / sqrt(2)
rho = density_from_pure(bell_state("phi+"))
r = correlation_matrix(rho)
print("R for |Phi+>:")
print(r)

# no local Bloch vectors, perfect correlations along every axis
t = t_matrix(r)
print("singular values of T:", svd3(t))
print("trace norm:", svd3(t).sum())

# R determines rho completely
print("round trip error:", np.abs(density_from_correlation(r) - rho).max())

# a product state has T = a b^T, a rank one block of trace norm at most 1
product = density_from_pure([1, 0, 0, 0])
print("product state singular values:", svd3(t_matrix(correlation_matrix(product))))
