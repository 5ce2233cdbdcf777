"""
Small dense 3x3 complex tensor algebra.

Tensors are plain ``numpy`` arrays of shape (3, 3) and dtype complex;
vectors are arrays of shape (3,). Nothing here conjugates implicitly:
every call site writes the conjugates its formula needs.
"""
import numpy as np

from mqedrates.errors import DomainError

IDENTITY = np.eye(3, dtype=complex)


def as_vector(v):
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    return v


def as_tensor(a):
    a = np.asarray(a, dtype=complex)
    if a.shape != (3, 3):
        raise DomainError(f"expected a 3x3 tensor, got shape {a.shape}")
    return a


def unit(v):
    """Normalise a real direction vector."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DomainError("cannot normalise the zero vector")
    return v / n


def dyadic(u, v):
    """Outer product ``u ⊗ v``: ``result[i, j] = u[i] * v[j]``."""
    return np.outer(as_vector(u), as_vector(v))


def transpose(a):
    return as_tensor(a).T.copy()


def dagger(a):
    """Conjugate transpose."""
    return as_tensor(a).conj().T


def trace_product(a, b):
    """``Tr[A · B] = sum_ij A[i, j] B[j, i]``."""
    return complex(np.einsum("ij,ji->", as_tensor(a), as_tensor(b)))


def quadratic_form(u, a, v):
    """``u · A · v`` without conjugating either vector."""
    return complex(as_vector(u) @ as_tensor(a) @ as_vector(v))


def frobenius4(d1, d2, d3, d4, a, b):
    """
    Contract the rank-4 dipole tensor ``d1⊗d2⊗d3⊗d4`` with ``A ⊗ B``.

    ``sum_ijkl d1_i d2_j d3_k d4_l A_ij B_kl``. The contraction factorises
    into ``(d1·A·d2)(d3·B·d4)``, which is how it is evaluated.
    """
    return quadratic_form(d1, a, d2) * quadratic_form(d3, b, d4)


def is_finite(a):
    return bool(np.all(np.isfinite(a)))
