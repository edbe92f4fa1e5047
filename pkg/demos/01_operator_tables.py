"""Walk through the exact operator and Bell-state tables.

The whole package rests on a four-element, all-real operator set: the
identity, the bit flip X, the phase flip Z, and their product ZX.  This
script prints the tables and demonstrates the three structural facts the
protocol layer relies on: orthonormality under the trace inner product,
XOR composition of labels, and the signed action on Bell states.
"""

import itertools

import numpy as np

from bellproto.algebra import (
    LABELS,
    TwoBits,
    apply_omega_to_bell,
    bell_vector_int,
    omega_inner,
    omega_matrix_int,
    pauli_compose,
    pauli_matrix_int,
)

np.set_printoptions(linewidth=100)

print("single-qubit operator set (labels 0..3 = I, X, Z, ZX):")
for label in LABELS:
    print(f"  label {label}:")
    for row in pauli_matrix_int(label):
        print(f"    {row}")

print("\nBell amplitudes scaled by sqrt(2) (labels 0..3):")
for label in LABELS:
    print(f"  label {label}: {bell_vector_int(label)}")

print("\ntrace inner products Tr(omega_a omega_b^T); the basis is orthonormal")
print("up to the common normalisation 4:")
gram = np.array([[omega_inner(a, b) for b in LABELS] for a in LABELS])
print(gram)

total = sum(omega_matrix_int(t) @ omega_matrix_int(t).T for t in LABELS)
print("\ncompleteness sum of omega omega^T (equals 4I):")
print(total)

print("\ncomposition table: label parts XOR, phases tracked explicitly.")
print("entries are (label, phase); the -1 cells are why phases matter:")
for a in LABELS:
    row = [pauli_compose(a, b) for b in LABELS]
    print("  " + "  ".join(f"({l},{p:+d})" for l, p in row))

print("\naction of the pair operators on Bell states; label = xor, and the")
print("diagonal always collapses onto Bell label 0 with phase +1:")
for rho in LABELS:
    row = [apply_omega_to_bell(rho, mu) for mu in LABELS]
    print("  " + "  ".join(f"({l},{p:+d})" for l, p in row))

print("\ntwo-bit reading of a label: hi bit = Z exponent (message), lo bit =")
print("X exponent (signature); a pair outcome IS a label:")
for label in LABELS:
    bits = TwoBits.from_label(label)
    print(f"  label {label} <-> bits {bits} (z={bits.hi}, x={bits.lo})")

negative_cells = [
    (rho, mu)
    for rho, mu in itertools.product(LABELS, repeat=2)
    if apply_omega_to_bell(rho, mu).phase < 0
]
print(f"\nnegative-phase action cells: {negative_cells}")
print("these four cells are the seed of every sign subtlety downstream.")
