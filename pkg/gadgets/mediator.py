"""
gadgets/mediator.py

Гаджеты второго порядка с одним медиатором: subdivision, fork, crossing.

Медиатор штрафуется H0 = |1⟩⟨1| и в основном пространстве находится в |0⟩;
H2 переводит его в |1⟩ и обратно, порождая эффективное взаимодействие
−(H2)_{-+}(H2)_{+-}. Остаточные члены компенсируются в H1.
"""

from typing import Dict, Optional

import numpy as np

from hamcore.errors import BadTopology, OverlapViolation
from hamcore.terms import LocalTerm, PauliTerm

from .base import (
    KET0, PROJ1, PerturbativeGadget, as_local, pauli_hamiltonian, place_block, product_term,
)


X = np.array([[0, 1], [1, 0]], dtype=complex)


def _mediator_site(n_target: int, mediator: Optional[int]) -> int:
    return n_target if mediator is None else int(mediator)


def subdivision_gadget(a, b, n_target: Optional[int] = None, mediator: Optional[int] = None,
                       name: str = "subdivision") -> PerturbativeGadget:
    """
    Гаджет разбиения: эффективное взаимодействие A ⊗ B через медиатор c.

    H0 = |1⟩⟨1|_c, H2 = (A ⊗ X_c − X_c ⊗ B)/√2, H1 = (A² + B²)/2.
    Второй порядок даёт |0⟩⟨0|_c(½A² − AB + ½B²) со знаком минус,
    H1 компенсирует квадраты, остаётся +A ⊗ B.

    Args:
        a, b: термы (PauliTerm или LocalTerm) с непересекающимися носителями
        n_target: число целевых кубитов (по умолчанию 1 + наибольший узел)
        mediator: узел медиатора (по умолчанию n_target)

    Raises:
        OverlapViolation: если носители A и B пересекаются
    """
    a_term, b_term = as_local(a), as_local(b)
    if set(a_term.sites) & set(b_term.sites):
        raise OverlapViolation(f"Носители {a_term.sites} и {b_term.sites} пересекаются")
    if not a_term.sites or not b_term.sites:
        raise OverlapViolation("Термы A и B должны действовать хотя бы на один узел")
    n_t = n_target if n_target is not None else max(a_term.sites + b_term.sites) + 1
    c = _mediator_site(n_t, mediator)
    n_sim = c + 1
    x_c = LocalTerm((c,), X)
    s = 1.0 / np.sqrt(2.0)

    a_sq = place_block(a_term.block @ a_term.block, a_term.sites, a_term.weight ** 2)
    b_sq = place_block(b_term.block @ b_term.block, b_term.sites, b_term.weight ** 2)
    h0 = pauli_hamiltonian(n_sim, [LocalTerm((c,), PROJ1)], f"{name}:H0")
    h2 = pauli_hamiltonian(n_sim, [
        product_term(a_term, x_c).scaled(s),
        product_term(b_term, x_c).scaled(-s),
    ], f"{name}:H2")
    h1 = pauli_hamiltonian(n_sim, [a_sq.scaled(0.5), b_sq.scaled(0.5)], f"{name}:H1")
    target = pauli_hamiltonian(n_t, [product_term(a_term, b_term)], name)
    owner = min(a_term.sites)
    return PerturbativeGadget(
        name=name, order=2, n_target=n_t, n_sim=n_sim, h0=h0, h1=h1, h2=h2, target=target,
        kind='mediator', blocks={owner: ((c,), KET0)}, mediators=(c,),
    )


def fork_gadget(a: int, b: int, c: int, w1: float = 1.0, w2: float = 1.0,
                n_target: Optional[int] = None, mediator: Optional[int] = None) -> PerturbativeGadget:
    """
    Гаджет fork: w1·X_aX_b + w2·X_aX_c, у вершины a остаётся одно ребро (a, e).

    Частный случай subdivision с A = X_a, B = w1·X_b + w2·X_c; компенсация
    w1·w2·X_bX_c попадает в H1.

    Raises:
        BadTopology: если a, b, c не различны
    """
    if len({a, b, c}) != 3:
        raise BadTopology(f"fork требует три разных узла: {(a, b, c)}")
    pair = tuple(sorted((b, c)))
    weights = {b: w1, c: w2}
    block = weights[pair[0]] * np.kron(X, np.eye(2)) + weights[pair[1]] * np.kron(np.eye(2), X)
    return subdivision_gadget(
        PauliTerm((a,), "X"), LocalTerm(pair, block),
        n_target=n_target, mediator=mediator, name="fork",
    )


def crossing_weights(w1: float, w2: float):
    """Коэффициенты звезды u_a, u_b, u_c, u_d: u_a·u_c = −w1, u_b·u_d = −w2."""
    u_a = np.sqrt(abs(w1))
    u_b = np.sqrt(abs(w2))
    return u_a, u_b, -np.sign(w1) * u_a, -np.sign(w2) * u_b


def _pair_term(i: int, j: int, letters: Dict[int, str], weight: float) -> PauliTerm:
    lo, hi = sorted((i, j))
    return PauliTerm((lo, hi), letters[lo] + letters[hi], weight)


def crossing_gadget(a: int, b: int, c: int, d: int, w1: float = 1.0, w2: float = 1.0,
                    n_target: Optional[int] = None, mediator: Optional[int] = None,
                    letters: Optional[Dict[int, str]] = None) -> PerturbativeGadget:
    """
    Гаджет crossing: w1·P_aP_c + w2·P_bP_d (диагонали квадрата a-b-c-d)
    без пересечения рёбер.

    H2 = (1/√2)·Σ_j u_j P_j X_e — звезда на медиаторе e;
    второй порядок даёт −½(Σ u_j P_j)². Так как u_a·u_c = −w1 и
    u_b·u_d = −w2, диагонали этого квадрата и есть цель, поэтому H1
    содержит только константу ½Σu_j² и четыре стороны u_i·u_j·P_iP_j.
    Диагональных членов в H1 нет вовсе.

    Args:
        letters: буква Паули P_j в каждом углу (по умолчанию X везде)

    Raises:
        BadTopology: если углы не различны или буква угла не из X, Y, Z
    """
    corners = (a, b, c, d)
    if len(set(corners)) != 4:
        raise BadTopology(f"crossing требует четыре разных угла: {corners}")
    letters = {j: 'X' for j in corners} if letters is None else dict(letters)
    if any(letters.get(j) not in ('X', 'Y', 'Z') for j in corners):
        raise BadTopology(f"crossing: нужна буква X, Y или Z в каждом углу, получено {letters}")
    n_t = n_target if n_target is not None else max(corners) + 1
    e = _mediator_site(n_t, mediator)
    n_sim = e + 1
    u = dict(zip(corners, crossing_weights(w1, w2)))
    s = 1.0 / np.sqrt(2.0)
    star = {**letters, e: 'X'}

    h0 = pauli_hamiltonian(n_sim, [LocalTerm((e,), PROJ1)], "crossing:H0")
    h2 = pauli_hamiltonian(n_sim, [_pair_term(j, e, star, s * u[j]) for j in corners], "crossing:H2")
    # диагонали (a, c), (b, d) в H1 не входят: цель + u_a·u_c·P_aP_c = 0
    sides = [(a, b), (b, c), (c, d), (d, a)]
    square = [PauliTerm((), "", 0.5 * sum(v ** 2 for v in u.values()))]
    square.extend(_pair_term(i, j, letters, u[i] * u[j]) for i, j in sides)
    h1 = pauli_hamiltonian(n_sim, square, "crossing:H1")
    target_terms = [_pair_term(a, c, letters, w1), _pair_term(b, d, letters, w2)]
    target = pauli_hamiltonian(n_t, target_terms, "crossing")
    return PerturbativeGadget(
        name="crossing", order=2, n_target=n_t, n_sim=n_sim, h0=h0, h1=h1, h2=h2, target=target,
        kind='mediator', blocks={min(corners): ((e,), KET0)}, mediators=(e,),
        notes={f"u{j}": float(u[j]) for j in corners},
    )
