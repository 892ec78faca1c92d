"""
gadgets/subspace.py

Гаджеты первого порядка с кодированием в основное пространство H0:
- one_local_deletion_gadget: удаление 1-локальной части взаимодействия
  через четыре анциллы на логический кубит
- subspace3_gadget: логический кубит в основном пространстве трёх
  физических кубитов
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Tuple

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import BadForm, BadKind
from hamcore.hamiltonian import Hamiltonian, assemble, collect_pauli, pauli_decompose
from hamcore.linalg import operator_norm, partial_trace
from hamcore.spectrum import DenseOperator, diagonalize
from hamcore.terms import LocalTerm, PauliTerm, pauli_matrix
from encoding.core import Encoding

from .base import PerturbativeGadget, as_local, effective_hamiltonian, pauli_hamiltonian, place_block
from .heisenberg import logical_coefficients

logger = logging.getLogger(__name__)

LETTERS = 'XYZ'

# H0 на четырёх анциллах a, b, c, d: (i, j, знак) для взаимодействия h_ij
DELETION_FORMS = {
    'symmetric': ((0, 1, 1.0), (2, 3, 1.0), (0, 2, -1.0), (1, 3, -1.0)),
    'antisymmetric': ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)),
}

# строки таблицы кодирований в три кубита: (подпись, пары (i, j, знак))
SUBSPACE_KINDS = {
    1: ("XX + αYY -> XX + YY, H_ab + H_bc", ((0, 1, 1.0), (1, 2, 1.0))),
    2: ("XX + αYY + βZZ -> XX + α'YY, H_ab - H_bc", ((0, 1, 1.0), (1, 2, -1.0))),
    3: ("XZ - ZX -> XX + YY, H_ab + H_bc + H_ca", ((0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0))),
}


# ---------------------------------------------------------------------------
# Общие шаги
# ---------------------------------------------------------------------------

def _interaction_block(h) -> np.ndarray:
    if isinstance(h, (PauliTerm, LocalTerm)):
        local = as_local(h)
        if len(local.sites) != 2:
            raise BadForm(f"Ожидалось двухкубитное взаимодействие, носитель {local.sites}")
        return local.weight * np.asarray(local.block, dtype=complex)
    block = np.asarray(h, dtype=complex)
    if block.shape != (4, 4):
        raise BadForm(f"Ожидалась матрица 4x4, получено {block.shape}")
    return block


def _split_parts(block: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """
    Разложение двухкубитного h = Σ K_PQ P⊗Q + Σ a_P P⊗1 + Σ b_P 1⊗P + c.

    Returns:
        (K 3x3, a, b, c)
    """
    coeffs = collect_pauli(pauli_decompose(LocalTerm((0, 1), block), 2, cutoff=0.0), 1e-14)
    k = np.zeros((3, 3))
    a = np.zeros(3)
    b = np.zeros(3)
    const = 0.0
    for (sites, letters), w in coeffs.items():
        w = float(np.real(w))
        if sites == (0, 1):
            k[LETTERS.index(letters[0]), LETTERS.index(letters[1])] = w
        elif sites == (0,):
            a[LETTERS.index(letters)] = w
        elif sites == (1,):
            b[LETTERS.index(letters)] = w
        else:
            const += w
    return k, a, b, const


def _two_local_block(k: np.ndarray) -> np.ndarray:
    return sum(
        k[i, j] * pauli_matrix(p + q)
        for i, p in enumerate(LETTERS) for j, q in enumerate(LETTERS)
    )


def _placed(block: np.ndarray, pairs, sites, scale: float = 1.0) -> List[LocalTerm]:
    return [place_block(block, (sites[i], sites[j]), sign * scale) for i, j, sign in pairs]


def _local_h0(block: np.ndarray, pairs, size: int) -> np.ndarray:
    terms = _placed(block, pairs, tuple(range(size)))
    return assemble(Hamiltonian(size, 2, tuple(terms))).entries


# ---------------------------------------------------------------------------
# Удаление 1-локальной части
# ---------------------------------------------------------------------------

def deletion_form(h, tol: float = 1e-10) -> str:
    """
    'symmetric' для K + A⊗1 + 1⊗A с симметричной K,
    'antisymmetric' для K + A⊗1 − 1⊗A с антисимметричной K.

    Raises:
        BadForm: если h не подходит ни под одну форму или K = 0
    """
    k, a, b, _ = _split_parts(_interaction_block(h))
    if np.max(np.abs(k)) <= tol:
        raise BadForm("У взаимодействия нет 2-локальной части")
    if np.max(np.abs(k - k.T)) <= tol and np.max(np.abs(a - b)) <= tol:
        return 'symmetric'
    if np.max(np.abs(k + k.T)) <= tol and np.max(np.abs(a + b)) <= tol:
        return 'antisymmetric'
    raise BadForm("Взаимодействие не имеет вида K + A⊗1 ± 1⊗A с (анти)симметричной K")


def one_local_deletion_gadget(h, tol: Tolerances = DEFAULT_TOLERANCES) -> PerturbativeGadget:
    """
    Гаджет первого порядка: h между двумя логическими кубитами без его
    1-локальной части.

    К каждому логическому кубиту x присоединяются анциллы a, b, c, d в
    единственном основном состоянии H0 (h_ab + h_cd − h_ac − h_bd или
    кольцо h_ab + h_bc + h_cd + h_da). Редуцированное состояние d
    максимально смешано, поэтому −h между x и d даёт в первом порядке
    только −A_x.

    Raises:
        BadForm: форма h не подходит, основное состояние H0 вырождено
            или d не максимально смешан
    """
    block = _interaction_block(h)
    form = deletion_form(block)
    pairs = DELETION_FORMS[form]
    k, _, _, _ = _split_parts(block)

    spec = diagonalize(_local_h0(block, pairs, 4), tol)
    e0, e1 = float(spec.eigenvalues[0]), float(spec.eigenvalues[1])
    gap = e1 - e0
    if gap <= tol.degeneracy_tol * max(1.0, abs(e0)):
        raise BadForm(f"Основное состояние H0 ({form}) вырождено")
    ground = spec.eigenvectors[:, 0]
    rho_d = partial_trace(np.outer(ground, ground.conj()), [2] * 4, [3])
    if operator_norm(rho_d - np.eye(2) / 2.0) > 1e-8:
        raise BadForm("Анцилла d не максимально запутана с a, b, c")

    name = "one_local_deletion"
    n_sim = 10
    h0_terms: List = []
    h1_terms: List = [place_block(block, (0, 1))]
    blocks = {}
    for x in (0, 1):
        anc = tuple(range(2 + 4 * x, 6 + 4 * x))
        h0_terms.extend(_placed(block, pairs, anc, 1.0 / gap))
        h0_terms.append(PauliTerm((), "", -e0 / gap))
        blocks[x] = (anc, ground)
    h1_terms.append(place_block(block, (0, 5), -1.0))
    h1_terms.append(place_block(block, (9, 1), -1.0))

    target = pauli_hamiltonian(2, [LocalTerm((0, 1), _two_local_block(k))], name)
    draft = PerturbativeGadget(
        name=name, order=1, n_target=2, n_sim=n_sim,
        h0=pauli_hamiltonian(n_sim, h0_terms, f"{name}:H0"),
        h1=pauli_hamiltonian(n_sim, h1_terms, f"{name}:H1"),
        h2=Hamiltonian(n_sim, 2, ()),
        target=target, kind='mediator', blocks=blocks,
        mediators=tuple(range(2, n_sim)),
        notes={'gap': gap, 'antisymmetric': float(form == 'antisymmetric')},
    )
    diff = effective_hamiltonian(draft, tol).entries - assemble(target).entries
    shift = float(np.trace(diff).real) / 4.0
    if operator_norm(diff - shift * np.eye(4)) > 1e-8:
        raise BadForm("Первый порядок не воспроизводит 2-локальную часть h")
    h1_terms.append(PauliTerm((), "", -shift))
    return replace(draft, h1=pauli_hamiltonian(n_sim, h1_terms, f"{name}:H1"))


# ---------------------------------------------------------------------------
# Кодирование в три кубита
# ---------------------------------------------------------------------------

@dataclass
class SubspaceEncoding:
    """Логический кубит в основном пространстве тройки и связь двух троек."""
    kind: int
    interaction: np.ndarray
    basis: np.ndarray
    gap: float
    cross_sites: Tuple[int, int]
    gadget: PerturbativeGadget
    effective: DenseOperator
    coefficients: Dict[str, float] = field(default_factory=dict)

    @property
    def encoding(self) -> Encoding:
        return self.gadget.encoding

    @property
    def alpha_prime(self) -> float:
        """Отношение YY/XX эффективной связи (nan, если XX нет)."""
        xx = self.coefficients.get('XX', 0.0)
        if abs(xx) < 1e-12:
            return float('nan')
        return self.coefficients.get('YY', 0.0) / xx

    def __str__(self) -> str:
        parts = [f"{v:+.6g} {k}" for k, v in sorted(self.coefficients.items()) if abs(v) > 1e-10]
        return f"kind {self.kind} ({SUBSPACE_KINDS[self.kind][0]}): " + (" ".join(parts) or "0")


def subspace_interaction(kind: int, alpha: float = 1.0, beta: float = 1.0) -> np.ndarray:
    """
    Физическое взаимодействие строки kind.

    Raises:
        BadKind: неизвестная строка или нулевые α, β там, где они нужны
    """
    if kind not in SUBSPACE_KINDS:
        raise BadKind(f"Неизвестный тип кодирования: {kind} (ожидалось 1, 2 или 3)")
    if kind == 1:
        if alpha == 0.0:
            raise BadKind("Для XX + αYY нужно α != 0")
        return pauli_matrix('XX') + alpha * pauli_matrix('YY')
    if kind == 2:
        if alpha == 0.0 or beta == 0.0:
            raise BadKind("Для XX + αYY + βZZ нужны ненулевые α и β")
        return pauli_matrix('XX') + alpha * pauli_matrix('YY') + beta * pauli_matrix('ZZ')
    return pauli_matrix('XZ') - pauli_matrix('ZX')


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    mags = np.round(np.abs(vec), 9)
    lead = int(np.argmax(mags))
    return vec * np.exp(-1j * np.angle(vec[lead]))


def _triple_basis(kind: int, ground: np.ndarray) -> np.ndarray:
    """
    Базис основного пространства, зафиксированный симметриями.

    Типы 1, 2: |0_L⟩, |1_L⟩ — собственные векторы Z⊗Z⊗Z (+1, −1),
    фаза |1_L⟩ делает ⟨0_L|X⊗X⊗X|1_L⟩ > 0.
    Тип 3: |0_L⟩ — старший собственный вектор Y_a + Y_b + Y_c,
    |1_L⟩ — его образ при обращении времени (Y⊗Y⊗Y)K.
    """
    if kind in (1, 2):
        sym = pauli_matrix('ZZZ')
    else:
        sym = pauli_matrix('YII') + pauli_matrix('IYI') + pauli_matrix('IIY')
    values, vecs = np.linalg.eigh(ground.conj().T @ sym @ ground)
    zero = _fix_global_phase(ground @ vecs[:, int(np.argmax(values))])
    if kind in (1, 2):
        one = ground @ vecs[:, int(np.argmin(values))]
        overlap = zero.conj() @ pauli_matrix('XXX') @ one
        one = one * np.exp(-1j * np.angle(overlap))
    else:
        one = pauli_matrix('YYY') @ zero.conj()
    return np.column_stack([zero, one])


def subspace3_gadget(kind: int, alpha: float = 1.0, beta: float = 1.0,
                     cross_sites: Tuple[int, int] = (0, 0),
                     tol: Tolerances = DEFAULT_TOLERANCES) -> SubspaceEncoding:
    """
    Логический кубит в основном пространстве тройки (a, b, c) и связь
    двух таких троек физическим взаимодействием между узлами cross_sites.

    Эффективная связь первого порядка считается на 6-кубитном симуляторе.

    Args:
        kind: строка таблицы кодирований (1, 2, 3)
        cross_sites: номера узлов в первой и второй тройке (0..2)

    Raises:
        BadKind: неизвестная строка, нулевые параметры или основное
            пространство не двумерно
    """
    block = subspace_interaction(kind, alpha, beta)
    pairs = SUBSPACE_KINDS[kind][1]
    i, j = (int(s) for s in cross_sites)
    if not (0 <= i < 3 and 0 <= j < 3):
        raise BadKind(f"Узлы связи должны лежать в 0..2: {cross_sites}")

    spec = diagonalize(_local_h0(block, pairs, 3), tol)
    e0 = float(spec.eigenvalues[0])
    limit = tol.degeneracy_tol * max(1.0, abs(e0))
    count = int(np.sum(spec.eigenvalues <= e0 + limit))
    if count != 2:
        raise BadKind(f"Основное пространство типа {kind} имеет размерность {count}, а не 2")
    gap = float(spec.eigenvalues[2]) - e0
    basis = _triple_basis(kind, spec.eigenvectors[:, :2])

    name = f"subspace3_kind{kind}"
    h0_terms: List = []
    for triple in ((0, 1, 2), (3, 4, 5)):
        h0_terms.extend(_placed(block, pairs, triple, 1.0 / gap))
        h0_terms.append(PauliTerm((), "", -e0 / gap))
    h1 = pauli_hamiltonian(6, [place_block(block, (i, 3 + j))], f"{name}:H1")
    draft = PerturbativeGadget(
        name=name, order=1, n_target=2, n_sim=6,
        h0=pauli_hamiltonian(6, h0_terms, f"{name}:H0"), h1=h1,
        h2=Hamiltonian(6, 2, ()), target=Hamiltonian(2, 2, ()),
        kind='subspace', blocks={0: ((0, 1, 2), basis), 1: ((3, 4, 5), basis)},
        couplings=((0, 1),), notes={'gap': gap},
    )
    effective = effective_hamiltonian(draft, tol)
    coeffs = logical_coefficients(effective, 2)
    target = pauli_hamiltonian(2, [LocalTerm((0, 1), effective.entries)], name)
    gadget = replace(draft, target=target)
    result = SubspaceEncoding(kind, block, basis, gap, (i, j), gadget, effective, coeffs)
    logger.debug("%s", result)
    return result
