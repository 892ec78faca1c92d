"""
encoding/core.py

Кодирование E(M) = V(M ⊗ P + M̄ ⊗ Q)V† и его локальная структура.

Порядок множителей на входе V: система, затем анцилла E. У локального
кодирования анциллы упорядочены по исходным узлам: E_0 ⊗ E_1 ⊗ ...
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from hamcore.errors import DimMismatch, BadSupport
from hamcore.linalg import permutation_matrix
from hamcore.spectrum import DenseOperator, as_matrix


def _rank(proj: np.ndarray) -> int:
    return int(round(float(np.trace(proj).real))) if proj.size else 0


@dataclass(frozen=True, eq=False)
class LocalBlock:
    """
    Блок локального кодирования для одного исходного узла.

    v отображает (узел orig_site ⊗ E_i) в узлы sim_sites (по возрастанию).
    """
    orig_site: int
    sim_sites: Tuple[int, ...]
    v: np.ndarray
    anc_dim: int
    proj_p: np.ndarray
    proj_q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'sim_sites', tuple(int(s) for s in self.sim_sites))
        object.__setattr__(self, 'v', np.asarray(self.v, dtype=complex))
        object.__setattr__(self, 'proj_p', np.asarray(self.proj_p, dtype=complex))
        object.__setattr__(self, 'proj_q', np.asarray(self.proj_q, dtype=complex))
        if list(self.sim_sites) != sorted(set(self.sim_sites)):
            raise BadSupport(f"Узлы блока {self.orig_site} должны строго возрастать: {self.sim_sites}")
        if self.proj_p.shape != (self.anc_dim, self.anc_dim) or \
                self.proj_q.shape != (self.anc_dim, self.anc_dim):
            raise DimMismatch(f"Проекторы блока {self.orig_site} не размера {self.anc_dim}")


@dataclass(frozen=True, eq=False)
class Encoding:
    """
    Кодирование наблюдаемых.

    v: матрица dim_out x (dim_in·anc_dim), изометрия на носителе P + Q
    proj_p, proj_q: ортогональные проекторы на анцилле (ранги p и q)
    locality: блоки локального кодирования (по одному на исходный узел)
    n_in/d_in, n_out/d_out: число и размерность узлов, если известны
    """
    v: np.ndarray
    dim_in: int
    anc_dim: int
    proj_p: np.ndarray
    proj_q: np.ndarray
    locality: Optional[Tuple[LocalBlock, ...]] = None
    n_in: Optional[int] = None
    d_in: Optional[int] = None
    n_out: Optional[int] = None
    d_out: Optional[int] = None

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex)
        object.__setattr__(self, 'v', v)
        object.__setattr__(self, 'proj_p', np.asarray(self.proj_p, dtype=complex))
        object.__setattr__(self, 'proj_q', np.asarray(self.proj_q, dtype=complex))
        if v.ndim != 2 or v.shape[1] != self.dim_in * self.anc_dim:
            raise DimMismatch(
                f"V имеет форму {v.shape}, ожидалось (*, {self.dim_in}·{self.anc_dim})"
            )
        for name in ('proj_p', 'proj_q'):
            if getattr(self, name).shape != (self.anc_dim, self.anc_dim):
                raise DimMismatch(f"{name} должен быть {self.anc_dim}x{self.anc_dim}")
        if self.locality is not None:
            object.__setattr__(self, 'locality', tuple(self.locality))

    @property
    def dim_out(self) -> int:
        return self.v.shape[0]

    @property
    def p(self) -> int:
        return _rank(self.proj_p)

    @property
    def q(self) -> int:
        return _rank(self.proj_q)

    @property
    def multiplicity(self) -> int:
        """p + q: кратность каждого собственного значения."""
        return self.p + self.q

    @property
    def standard(self) -> bool:
        return self.p >= 1

    @property
    def is_local(self) -> bool:
        return self.locality is not None

    def lift(self, m: np.ndarray) -> np.ndarray:
        """M ⊗ P + M̄ ⊗ Q (до применения V)."""
        return np.kron(m, self.proj_p) + np.kron(m.conj(), self.proj_q)

    def extended_apply(self, m) -> np.ndarray:
        """E'(M) для произвольной (не обязательно эрмитовой) матрицы."""
        m = as_matrix(m)
        if m.shape != (self.dim_in, self.dim_in):
            raise DimMismatch(f"Оператор {m.shape} не действует на пространстве размерности {self.dim_in}")
        return self.v @ self.lift(m) @ self.v.conj().T

    def encoded_projector(self) -> np.ndarray:
        """E(1) = V(1 ⊗ (P + Q))V†."""
        return self.extended_apply(np.eye(self.dim_in))

    def j_operator(self) -> np.ndarray:
        """E(i·1): комплексная структура на закодированном подпространстве."""
        return self.extended_apply(1j * np.eye(self.dim_in))

    def support_basis(self) -> np.ndarray:
        """Ортонормированный базис носителя 1 ⊗ (P + Q) на входе V."""
        r = self.proj_p + self.proj_q
        values, vecs = np.linalg.eigh((r + r.conj().T) / 2)
        anc = vecs[:, values > 0.5]
        return np.kron(np.eye(self.dim_in), anc)

    def encoded_basis(self) -> np.ndarray:
        """Столбцы V(1 ⊗ R): базис закодированного подпространства."""
        return self.v @ self.support_basis()

    def __str__(self) -> str:
        local = ", local" if self.is_local else ""
        return f"Encoding({self.dim_in} -> {self.dim_out}, p={self.p}, q={self.q}{local})"


def apply(e: Encoding, m) -> DenseOperator:
    """
    E(M) = V(M ⊗ P + M̄ ⊗ Q)V†.

    Raises:
        DimMismatch: если размерность M не равна dim_in
    """
    out = e.extended_apply(m)
    return DenseOperator.of(out)


def assemble_isometry(blocks: Sequence[LocalBlock], d_in: int, d_out: int,
                      out_sites: Sequence[int]) -> np.ndarray:
    """
    Глобальная изометрия Π_out (⊗_i V_i) Π_in.

    Вход: исходные узлы блоков (в порядке блоков), затем их анциллы.
    Выход: узлы out_sites по возрастанию; каждый узел покрыт ровно одним блоком.
    """
    n = len(blocks)
    out_sites = list(out_sites)
    covered = [s for b in blocks for s in b.sim_sites]
    if sorted(covered) != sorted(out_sites) or len(set(covered)) != len(covered):
        raise BadSupport(f"Блоки покрывают узлы {sorted(covered)}, ожидалось {sorted(out_sites)}")
    t = np.ones((1, 1), dtype=complex)
    for b in blocks:
        t = np.kron(t, b.v)
    in_dims = [d_in] * n + [b.anc_dim for b in blocks]
    in_order = [x for i in range(n) for x in (i, n + i)]
    pi_in = permutation_matrix(in_dims, in_order)
    positions = [out_sites.index(s) for s in covered]
    pi_out = permutation_matrix([d_out] * len(covered), list(np.argsort(positions)))
    return pi_out @ t @ pi_in


def local_encoding(blocks: Sequence[LocalBlock], d_in: int, d_out: int, n_out: int,
                   proj_p: Optional[np.ndarray] = None,
                   proj_q: Optional[np.ndarray] = None) -> Encoding:
    """
    Собирает локальное кодирование из блоков.

    По умолчанию P = ⊗P_i и Q = ⊗Q_i (анциллы в порядке блоков).
    """
    blocks = sorted(blocks, key=lambda b: b.orig_site)
    n_in = len(blocks)
    if [b.orig_site for b in blocks] != list(range(n_in)):
        raise BadSupport("Нужен ровно один блок на каждый исходный узел")
    v = assemble_isometry(blocks, d_in, d_out, range(n_out))
    anc_dim = int(np.prod([b.anc_dim for b in blocks])) if blocks else 1
    if proj_p is None:
        proj_p = np.ones((1, 1), dtype=complex)
        for b in blocks:
            proj_p = np.kron(proj_p, b.proj_p)
    if proj_q is None:
        proj_q = np.ones((1, 1), dtype=complex)
        for b in blocks:
            proj_q = np.kron(proj_q, b.proj_q)
        if not blocks:
            proj_q = np.zeros((1, 1), dtype=complex)
    return Encoding(
        v=v, dim_in=d_in ** n_in, anc_dim=anc_dim, proj_p=proj_p, proj_q=proj_q,
        locality=tuple(blocks), n_in=n_in, d_in=d_in, n_out=n_out, d_out=d_out,
    )


def identity_encoding(dim: int, n: Optional[int] = None, d: Optional[int] = None) -> Encoding:
    """Тождественное кодирование (V = 1, p = 1, q = 0); локальное при заданных n, d."""
    if n is not None and d is not None:
        blocks = [
            LocalBlock(i, (i,), np.eye(d), 1, np.ones((1, 1)), np.zeros((1, 1)))
            for i in range(n)
        ]
        return local_encoding(blocks, d, d, n)
    return Encoding(np.eye(dim), dim, 1, np.ones((1, 1)), np.zeros((1, 1)))


def ancilla_encoding(n_target: int, n_sim: int, groups: dict) -> Encoding:
    """
    Локальное кодирование, присоединяющее к узлам фиксированные состояния анцилл.

    Args:
        n_target: число целевых кубитов (узлы 0..n_target-1 сохраняются)
        n_sim: число кубитов симулятора
        groups: целевой узел -> (узлы анцилл, вектор их совместного состояния);
            узлы анцилл перечислены по возрастанию, вектор в том же порядке

    Returns:
        локальное кодирование с p = 1, q = 0
    """
    blocks = []
    claimed: List[int] = []
    for i in range(n_target):
        anc_sites, state = groups.get(i, ((), np.ones(1)))
        anc_sites = tuple(int(s) for s in anc_sites)
        state = np.asarray(state, dtype=complex).ravel()
        if state.size != 2 ** len(anc_sites):
            raise DimMismatch(f"Состояние анцилл узла {i} не соответствует узлам {anc_sites}")
        if any(s < n_target or s >= n_sim for s in anc_sites):
            raise BadSupport(f"Анциллы узла {i} вне диапазона [{n_target}, {n_sim}): {anc_sites}")
        claimed.extend(anc_sites)
        # целевой узел меньше любой анциллы, поэтому он идёт первым
        v_i = np.kron(np.eye(2, dtype=complex), state.reshape(-1, 1))
        blocks.append(LocalBlock(i, (i,) + anc_sites, v_i, 1, np.ones((1, 1)), np.zeros((1, 1))))
    if len(set(claimed)) != len(claimed):
        raise BadSupport("Одна анцилла приписана нескольким целевым узлам")
    return local_encoding(blocks, 2, 2, n_sim)


def mediator_encoding(n_target: int, n_sim: int, mediator_states: dict,
                      owner: dict) -> Encoding:
    """
    Кодирование гаджета с медиаторами: V|ψ⟩ = |ψ⟩ ⊗ |m_e⟩.

    Args:
        n_target: число целевых кубитов
        n_sim: число кубитов симулятора
        mediator_states: медиатор -> вектор состояния (размерности 2)
        owner: медиатор -> целевой узел, к блоку которого он относится
    """
    groups = {}
    for i in range(n_target):
        mine = sorted(m for m, o in owner.items() if o == i)
        if not mine:
            continue
        state = np.ones(1, dtype=complex)
        for m in mine:
            state = np.kron(state, np.asarray(mediator_states[m], dtype=complex))
        groups[i] = (tuple(mine), state)
    return ancilla_encoding(n_target, n_sim, groups)
