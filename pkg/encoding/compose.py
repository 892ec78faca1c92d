"""
encoding/compose.py

Композиция кодирований E1 ∘ E2 (E2 внутреннее, E1 внешнее).

U = V1(V2 ⊗ P1 + V̄2 ⊗ Q1), анцилла E2 ⊗ E1,
P = P2 ⊗ P1 + Q̄2 ⊗ Q1, Q = Q2 ⊗ P1 + P̄2 ⊗ Q1.
"""

from typing import List

import numpy as np

from hamcore.errors import DimMismatch
from hamcore.linalg import permutation_matrix

from .core import Encoding, LocalBlock, assemble_isometry, local_encoding


def _global_compose(e1: Encoding, e2: Encoding):
    inner = e2.v
    u = np.kron(inner, e1.proj_p) + np.kron(inner.conj(), e1.proj_q)
    v = e1.v @ u
    proj_p = np.kron(e2.proj_p, e1.proj_p) + np.kron(e2.proj_q.conj(), e1.proj_q)
    proj_q = np.kron(e2.proj_q, e1.proj_p) + np.kron(e2.proj_p.conj(), e1.proj_q)
    return v, proj_p, proj_q


def _kron_projectors(blocks, attr: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for b in blocks:
        out = np.kron(out, getattr(b, attr))
    return out


def _local_compose(e1: Encoding, e2: Encoding, proj_p: np.ndarray, proj_q: np.ndarray) -> Encoding:
    """Поблочная композиция: блок i собирается из V2_i и блоков E1 на S2_i."""
    outer = e1.locality
    blocks: List[LocalBlock] = []
    anc_order: List[int] = []
    n2 = len(e2.locality)
    for b2 in e2.locality:
        subs = [outer[j] for j in b2.sim_sites]
        sites = tuple(sorted(s for b in subs for s in b.sim_sites))
        v1_s = assemble_isometry(subs, e1.d_in, e1.d_out, sites)
        p1_s = _kron_projectors(subs, 'proj_p')
        q1_s = _kron_projectors(subs, 'proj_q')
        u_i = v1_s @ (np.kron(b2.v, p1_s) + np.kron(b2.v.conj(), q1_s))
        anc = b2.anc_dim * p1_s.shape[0]
        pe = np.kron(b2.proj_p, p1_s) + np.kron(b2.proj_q.conj(), q1_s)
        qe = np.kron(b2.proj_q, p1_s) + np.kron(b2.proj_p.conj(), q1_s)
        blocks.append(LocalBlock(b2.orig_site, sites, u_i, anc, pe, qe))
        anc_order.append(b2.orig_site)
        anc_order.extend(n2 + j for j in b2.sim_sites)
    # глобальные P, Q из порядка E2 ⊗ E1 в порядок блоков
    dims = [b.anc_dim for b in e2.locality] + [b.anc_dim for b in outer]
    perm = permutation_matrix(dims, anc_order)
    proj_p = perm @ proj_p @ perm.T
    proj_q = perm @ proj_q @ perm.T
    return local_encoding(blocks, e2.d_in, e1.d_out, e1.n_out, proj_p, proj_q)


def compose(e1: Encoding, e2: Encoding) -> Encoding:
    """
    Композиция E1 ∘ E2: сначала E2, затем E1.

    Если оба кодирования локальны и согласованы по узлам, результат тоже
    локален (блоки объединяют узлы E1 над узлами блока E2).

    Raises:
        DimMismatch: если dim_out(E2) != dim_in(E1)
    """
    if e2.dim_out != e1.dim_in:
        raise DimMismatch(
            f"Выход внутреннего кодирования ({e2.dim_out}) не совпадает со входом внешнего ({e1.dim_in})"
        )
    v, proj_p, proj_q = _global_compose(e1, e2)
    both_local = (
        e1.locality is not None and e2.locality is not None
        and e2.n_out == e1.n_in and e2.d_out == e1.d_in
    )
    if both_local:
        return _local_compose(e1, e2, proj_p, proj_q)
    return Encoding(
        v, e2.dim_in, e2.anc_dim * e1.anc_dim, proj_p, proj_q, None,
        n_in=e2.n_in, d_in=e2.d_in, n_out=e1.n_out, d_out=e1.d_out,
    )
