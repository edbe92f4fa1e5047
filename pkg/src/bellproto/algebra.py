"""Exact operator and Bell-state tables for the all-real single-qubit set.

Conventions fixed here and used everywhere else in the package:

* Operator labels 0..3 mean I, X, Z, ZX in that order.  All four matrices
  are real; label 3 is the product Z @ X = [[0, 1], [-1, 0]] rather than the
  complex Y, so the whole algebra closes over {-1, 0, 1} entries.
* Bell labels 0..3 mean (|00>+|11>), (|01>+|10>), (|00>-|11>), (|01>-|10>),
  each scaled by 1/sqrt(2).
* A label decodes to the exponent pair (z, x) with ``label = 2*z + x`` and
  the matrix with label (z, x) is exactly Z^z @ X^x with phase +1.
* Labels compose by XOR of exponent pairs.  The only phases that ever
  appear are +/-1; they are tracked explicitly as :class:`SignedLabel`
  because label 3 is not symmetric (its transpose is its negative) and
  dropping the signs silently corrupts every downstream oracle.
* Pair operators ("omega") act on the second qubit of a two-qubit system:
  omega(label) = I (x) pauli(label).  They form an orthonormal basis of a
  4-dimensional space under the trace inner product Tr(A @ B.T), with
  squared norm 4.

All tables are generated at import time from the matrices themselves and
cross-checked entry by entry; an inconsistent build raises immediately.
Everything in this module is immutable after import and safe to share
across threads.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

LABELS = (0, 1, 2, 3)


class TwoBits(NamedTuple):
    """A classical bit pair (hi, lo); the currency of every pair outcome."""

    hi: int
    lo: int

    @property
    def label(self) -> int:
        return 2 * self.hi + self.lo

    @classmethod
    def from_label(cls, label: int) -> "TwoBits":
        _check_label(label)
        return cls((label >> 1) & 1, label & 1)

    @classmethod
    def parse(cls, text: str) -> "TwoBits":
        if len(text) != 2 or any(c not in "01" for c in text):
            raise ValueError(f"expected a 2-bit string like '01', got {text!r}")
        return cls(int(text[0]), int(text[1]))

    def __xor__(self, other: "TwoBits") -> "TwoBits":
        return TwoBits(self.hi ^ other.hi, self.lo ^ other.lo)

    def __str__(self) -> str:
        return f"{self.hi}{self.lo}"


class SignedLabel(NamedTuple):
    """An operator or Bell label together with its +/-1 phase."""

    label: int
    phase: int


def _check_label(label: int) -> None:
    if label not in (0, 1, 2, 3):
        raise ValueError(f"label must be in 0..3, got {label!r}")


def _check_bit(bit: int) -> None:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# Integer master copies; float views are derived from these.
_PAULI_INT = tuple(
    _frozen(np.array(m, dtype=np.int64))
    for m in (
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 0], [0, -1]],
        [[0, 1], [-1, 0]],
    )
)
_OMEGA_INT = tuple(_frozen(np.kron(_PAULI_INT[0], p)) for p in _PAULI_INT)
# Bell amplitudes scaled by sqrt(2) so the table stays integer-exact.
_BELL_INT = tuple(
    _frozen(np.array(v, dtype=np.int64))
    for v in ([1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 0, -1], [0, 1, -1, 0])
)

_SQRT2 = np.sqrt(2.0)
_PAULI_FLOAT = tuple(_frozen(m.astype(np.float64)) for m in _PAULI_INT)
_OMEGA_FLOAT = tuple(_frozen(m.astype(np.float64)) for m in _OMEGA_INT)
_BELL_FLOAT = tuple(_frozen(v.astype(np.float64) / _SQRT2) for v in _BELL_INT)


def pauli_matrix(label: int) -> np.ndarray:
    """The 2x2 real matrix for a label; read-only view, do not mutate."""
    _check_label(label)
    return _PAULI_FLOAT[label]


def pauli_matrix_int(label: int) -> np.ndarray:
    _check_label(label)
    return _PAULI_INT[label]


def omega_matrix(label: int) -> np.ndarray:
    """The 4x4 pair operator I (x) pauli(label); read-only view."""
    _check_label(label)
    return _OMEGA_FLOAT[label]


def omega_matrix_int(label: int) -> np.ndarray:
    _check_label(label)
    return _OMEGA_INT[label]


def bell_vector(label: int) -> np.ndarray:
    """Unit amplitude vector of a Bell state; read-only view."""
    _check_label(label)
    return _BELL_FLOAT[label]


def bell_vector_int(label: int) -> np.ndarray:
    """Bell amplitudes scaled by sqrt(2), exact over {-1, 0, 1}."""
    _check_label(label)
    return _BELL_INT[label]


def omega_inner(a: int, b: int) -> int:
    """Trace inner product Tr(omega_a @ omega_b.T), computed exactly.

    Equals 4 when a == b and 0 otherwise: the four pair operators are an
    orthonormal basis up to the common normalisation 4.
    """
    _check_label(a)
    _check_label(b)
    return int(np.trace(_OMEGA_INT[a] @ _OMEGA_INT[b].T))


def x_bit(label: int) -> int:
    """X exponent of a label (its low bit)."""
    _check_label(label)
    return label & 1


def z_bit(label: int) -> int:
    """Z exponent of a label (its high bit)."""
    _check_label(label)
    return (label >> 1) & 1


def encode_two_bits(bits: TwoBits) -> int:
    """Bit pair -> operator label: 00->I, 01->X, 10->Z, 11->ZX."""
    _check_bit(bits.hi)
    _check_bit(bits.lo)
    return bits.label


def decode_two_bits(label: int) -> TwoBits:
    """Operator label -> bit pair; inverse of :func:`encode_two_bits`."""
    return TwoBits.from_label(label)


def label_from_zx(z: int, x: int) -> int:
    """Label of the product Z^z @ X^x (phase exactly +1).

    Under the message/signature reading of a bit pair, ``z`` carries the
    message bit and ``x`` the signature bit: both values of z map to the
    same x-column, so announcing x reveals nothing about z.
    """
    _check_bit(z)
    _check_bit(x)
    return 2 * z + x


def _build_action_table() -> tuple[tuple[SignedLabel, ...], ...]:
    table = []
    for rho in LABELS:
        row = []
        for mu in LABELS:
            out = _OMEGA_INT[rho] @ _BELL_INT[mu]
            target = rho ^ mu
            ref = _BELL_INT[target]
            if np.array_equal(out, ref):
                row.append(SignedLabel(target, 1))
            elif np.array_equal(out, -ref):
                row.append(SignedLabel(target, -1))
            else:  # pragma: no cover - build-time self check
                raise RuntimeError(f"pair action table inconsistent at {(rho, mu)}")
        table.append(tuple(row))
    return tuple(table)


def _build_compose_table() -> tuple[tuple[SignedLabel, ...], ...]:
    table = []
    for a in LABELS:
        row = []
        for b in LABELS:
            prod = _PAULI_INT[a] @ _PAULI_INT[b]
            target = a ^ b
            ref = _PAULI_INT[target]
            if np.array_equal(prod, ref):
                row.append(SignedLabel(target, 1))
            elif np.array_equal(prod, -ref):
                row.append(SignedLabel(target, -1))
            else:  # pragma: no cover - build-time self check
                raise RuntimeError(f"compose table inconsistent at {(a, b)}")
        table.append(tuple(row))
    return tuple(table)


_ACTION_TABLE = _build_action_table()
_COMPOSE_TABLE = _build_compose_table()


def apply_omega_to_bell(rho: int, mu: int) -> SignedLabel:
    """Signed Bell label of omega(rho) applied to Bell state mu.

    The label part is always ``rho ^ mu``; in particular the action
    collapses every diagonal pair (rho == mu) onto Bell label 0 with
    phase +1.  Off-diagonal phases are not all +1 and are tabulated here
    exactly.
    """
    _check_label(rho)
    _check_label(mu)
    return _ACTION_TABLE[rho][mu]


def pauli_compose(a: int, b: int) -> SignedLabel:
    """Signed label of the matrix product pauli(a) @ pauli(b)."""
    _check_label(a)
    _check_label(b)
    return _COMPOSE_TABLE[a][b]


def pauli_compose_sequence(labels) -> SignedLabel:
    """Fold :func:`pauli_compose` over a sequence, left to right."""
    out = SignedLabel(0, 1)
    for lab in labels:
        step = pauli_compose(out.label, lab)
        out = SignedLabel(step.label, out.phase * step.phase)
    return out


def pauli_transpose_phase(label: int) -> int:
    """Sign s with pauli(label).T == s * pauli(label); -1 only for label 3."""
    _check_label(label)
    return -1 if label == 3 else 1


def _self_test() -> None:
    ident = np.eye(2, dtype=np.int64)
    for lab in LABELS:
        if not np.array_equal(_PAULI_INT[lab] @ _PAULI_INT[lab].T, ident):
            raise RuntimeError("pauli matrices are not orthogonal")
        if not np.array_equal(_OMEGA_INT[lab], np.kron(ident, _PAULI_INT[lab])):
            raise RuntimeError("pair operators do not factor as I (x) pauli")
    for a in LABELS:
        for b in LABELS:
            if omega_inner(a, b) != (4 if a == b else 0):
                raise RuntimeError("pair operator basis is not orthonormal")
    total = sum(_OMEGA_INT[lab] @ _OMEGA_INT[lab].T for lab in LABELS)
    if not np.array_equal(total, 4 * np.eye(4, dtype=np.int64)):
        raise RuntimeError("pair operator completeness sum failed")
    for lab in LABELS:
        if _ACTION_TABLE[lab][lab] != SignedLabel(0, 1):
            raise RuntimeError("diagonal Bell action does not collapse to label 0")
    for z in (0, 1):
        for x in (0, 1):
            prod = np.linalg.matrix_power(_PAULI_INT[2], z) @ np.linalg.matrix_power(
                _PAULI_INT[1], x
            )
            if not np.array_equal(prod, _PAULI_INT[label_from_zx(z, x)]):
                raise RuntimeError("z/x exponent encoding inconsistent")


_self_test()
