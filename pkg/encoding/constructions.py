"""
encoding/constructions.py

Точные конструкции кодирований:
- комплексный гамильтониан -> вещественный (глобально и локально)
- кудиты -> кубиты
- идеальная симуляция E(H) + Δ'(1 - E(1))
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from hamcore.errors import NotQubit, DimMismatch
from hamcore.hamiltonian import Hamiltonian, assemble, norm_bound
from hamcore.linalg import permutation_matrix, kron_all
from hamcore.terms import PauliTerm, LocalTerm

from .core import Encoding, LocalBlock, local_encoding


# u|0⟩ = |+y⟩, u|1⟩ = |−y⟩
Y_BASIS = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)

KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


@dataclass
class SimulatorInstance:
    """Гамильтониан симулятора, кодирование и порог Δ для сертификации."""
    h_sim: Hamiltonian
    encoding: Optional[Encoding]
    delta: float
    name: str = ""
    delta_prime: Optional[float] = None

    def __str__(self) -> str:
        return f"{self.name}: n'={self.h_sim.n}, Δ={self.delta:.6g}, {self.encoding}"


def complex_to_real_enc(n: int) -> Encoding:
    """
    Глобальное кодирование комплексного гамильтониана в вещественный.

    Анцилла становится первым кубитом выхода:
    E(H) = |+y⟩⟨+y| ⊗ H + |−y⟩⟨−y| ⊗ H̄, p = q = 1.
    """
    if n < 1:
        raise DimMismatch("complex_to_real_enc требует n >= 1")
    dim = 2 ** n
    swap = permutation_matrix([dim, 2], [1, 0])
    v = np.kron(Y_BASIS, np.eye(dim)) @ swap
    return Encoding(v, dim, 2, KET0, KET1, None, n_in=n, d_in=2, n_out=n + 1, d_out=2)


def complex_to_real_local_encoding(n: int) -> Encoding:
    """
    Локальное кодирование: кубит j остаётся на узле j, его анцилла j'
    переходит на узел n + j; V_j|ψ⟩|0⟩ = |ψ⟩|+y⟩, V_j|ψ⟩|1⟩ = |ψ⟩|−y⟩.
    """
    v_j = np.kron(np.eye(2), Y_BASIS)
    blocks = [LocalBlock(j, (j, n + j), v_j, 2, KET0, KET1) for j in range(n)]
    return local_encoding(blocks, 2, 2, 2 * n)


def realify_term(t: PauliTerm, n: int) -> PauliTerm:
    """φ: X -> X, Z -> Z, Y_j -> Y_j Y_{n+j}."""
    letters: Dict[int, str] = {}
    for s, ch in zip(t.sites, t.letters):
        letters[s] = ch
        if ch == 'Y':
            letters[n + s] = 'Y'
    sites = tuple(sorted(letters))
    return PauliTerm(sites, "".join(letters[s] for s in sites), t.weight, "complex_to_real")


def complex_to_real_sim(h: Hamiltonian, with_encoding: bool = True) -> SimulatorInstance:
    """
    Локальная симуляция комплексного k-локального кубитного гамильтониана
    вещественным 2k-локальным на 2n кубитах.

    H' = Σ φ(h_i) + Δ' Σ_i (1 − Y_{i'}Y_{(i+1)'}), p = q = 1.
    with_encoding=False пропускает плотную изометрию (encoding = None).
    """
    if h.d != 2:
        raise NotQubit("complex_to_real_sim определено только для кубитов")
    n = h.n
    bound = norm_bound(h)
    delta_prime = 2 * bound + 2
    terms: List[PauliTerm] = [realify_term(t, n) for t in h.pauli_terms()]
    if n > 1:
        terms.append(PauliTerm((), "", delta_prime * (n - 1), "complex_to_real_penalty"))
        for i in range(n - 1):
            terms.append(PauliTerm((n + i, n + i + 1), "YY", -delta_prime, "complex_to_real_penalty"))
    h_sim = Hamiltonian(2 * n, 2, tuple(terms))
    return SimulatorInstance(
        h_sim, complex_to_real_local_encoding(n) if with_encoding else None, 2 * bound + 1,
        "complex_to_real", delta_prime,
    )


def qudit_isometry(d: int) -> np.ndarray:
    """W: вложение d уровней в первые d базисных состояний ⌈log2 d⌉ кубитов."""
    m = max(1, int(np.ceil(np.log2(d))))
    return np.eye(2 ** m, dtype=complex)[:, :d]


def qudit_to_qubit(h: Hamiltonian, delta_prime: Optional[float] = None,
                   with_encoding: bool = True) -> SimulatorInstance:
    """
    Идеальная симуляция кудитного гамильтониана кубитным.

    H' = VHV† + Δ' Σ_i (1 − WW†)_i, V = W^{⊗n}.
    """
    d = h.d
    w = qudit_isometry(d)
    m = int(round(np.log2(w.shape[0])))
    n_out = h.n * m
    bound = norm_bound(h)
    if delta_prime is None:
        delta_prime = 2 * bound + 2

    def sim_sites(site: int) -> List[int]:
        return list(range(site * m, site * m + m))

    terms: List[LocalTerm] = []
    for t in h.terms:
        k = len(t.support)
        wk = kron_all([w] * k)
        block = wk @ t.block @ wk.conj().T
        sites = [s for site in t.support for s in sim_sites(site)]
        terms.append(LocalTerm(tuple(sites), block, t.weight, "qudit"))
    leak = np.eye(2 ** m) - w @ w.conj().T
    if np.max(np.abs(leak)) > 0:
        for i in range(h.n):
            terms.append(LocalTerm(tuple(sim_sites(i)), leak, delta_prime, "qudit_penalty"))
    blocks = [
        LocalBlock(i, tuple(sim_sites(i)), w, 1, np.ones((1, 1)), np.zeros((1, 1)))
        for i in range(h.n)
    ]
    enc = local_encoding(blocks, d, 2, n_out) if with_encoding else None
    return SimulatorInstance(Hamiltonian(n_out, 2, tuple(terms)), enc, bound + 1, "qudit_to_qubit", delta_prime)


def perfect_simulation(h: Hamiltonian, e: Encoding, delta_prime: float) -> Hamiltonian:
    """H' = E(H) + Δ'(1 − E(1)) как гамильтониан из одного плотного терма."""
    if e.n_out is None or e.d_out is None:
        raise DimMismatch("Кодирование должно знать число и размерность узлов выхода")
    m = assemble(h).entries
    image = e.extended_apply(m)
    penalty = np.eye(e.dim_out) - e.encoded_projector()
    block = image + delta_prime * penalty
    block = (block + block.conj().T) / 2
    return Hamiltonian(e.n_out, e.d_out, (LocalTerm(tuple(range(e.n_out)), block, 1.0, "perfect"),))
