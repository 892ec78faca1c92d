"""
gadgets/base.py

Пертурбативный гаджет и общая машинерия для всех конкретных гаджетов.

Гаджет задаётся слагаемыми H0 (сильное, с вырожденным основным
пространством), H2 (выводит из основного пространства), H1' и H1.
Симулятор собирается как ΔH0 + Δ^a H2 + Δ^b H1' + H1, показатели
зависят от порядка теории возмущений.
"""

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import BadForm, BlockViolation, DimensionCap, HamforgeError, OverlapViolation
from hamcore.hamiltonian import Hamiltonian, assemble, collect_pauli, norm_bound, pauli_decompose
from hamcore.linalg import operator_norm, permutation_matrix
from hamcore.spectrum import DenseOperator, diagonalize
from hamcore.terms import LocalTerm, PauliTerm
from encoding.core import Encoding, LocalBlock, ancilla_encoding, local_encoding


PROJ0 = np.diag([1.0, 0.0]).astype(complex)
PROJ1 = np.diag([0.0, 1.0]).astype(complex)
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)

# показатели степени Δ при слагаемых гаджета
DELTA_EXPONENTS = {
    1: {'h0': 1.0, 'h1': 0.0},
    2: {'h0': 1.0, 'h2': 0.5, 'h1': 0.0},
    3: {'h0': 1.0, 'h2': 2.0 / 3.0, 'h1prime': 1.0 / 3.0, 'h1': 0.0},
}

GADGET_KINDS = ('mediator', 'subspace')


# ---------------------------------------------------------------------------
# Операции над термами
# ---------------------------------------------------------------------------

def as_local(term) -> LocalTerm:
    """PauliTerm или LocalTerm -> LocalTerm на том же носителе."""
    if isinstance(term, LocalTerm):
        return term
    return LocalTerm(term.sites, term.block(), term.weight, term.origin)


def place_block(block: np.ndarray, sites: Sequence[int], weight: float = 1.0,
                origin: Optional[str] = None) -> LocalTerm:
    """
    LocalTerm из блока с множителями в произвольном порядке узлов.

    Args:
        block: матрица, множители в порядке sites
        sites: различные номера узлов в любом порядке
    """
    sites = [int(s) for s in sites]
    if len(set(sites)) != len(sites):
        raise OverlapViolation(f"Повторяющиеся узлы в носителе {sites}")
    order = list(np.argsort(sites))
    block = np.asarray(block, dtype=complex)
    if order != list(range(len(order))):
        pm = permutation_matrix([2] * len(order), order)
        block = pm @ block @ pm.T
    return LocalTerm(tuple(sorted(sites)), block, weight, origin)


def sorted_state(sites: Sequence[int], state: np.ndarray) -> Tuple[Tuple[int, ...], np.ndarray]:
    """Переупорядочивает множители вектора состояния по возрастанию узлов."""
    sites = [int(s) for s in sites]
    order = list(np.argsort(sites))
    tensor = np.asarray(state, dtype=complex).reshape([2] * len(sites))
    return tuple(sorted(sites)), tensor.transpose(order).reshape(-1)


def product_term(*terms, origin: Optional[str] = None) -> LocalTerm:
    """
    Тензорное произведение термов с непересекающимися носителями.

    Raises:
        OverlapViolation: если носители пересекаются
    """
    sites: List[int] = []
    block = np.ones((1, 1), dtype=complex)
    weight = 1.0
    for t in terms:
        t = as_local(t)
        if set(t.sites) & set(sites):
            raise OverlapViolation(f"Носители {t.sites} и {sorted(sites)} пересекаются")
        sites.extend(t.sites)
        block = np.kron(block, t.block)
        weight *= t.weight
    return place_block(block, sites, weight, origin)


def pauli_hamiltonian(n: int, terms: Iterable, origin: Optional[str] = None,
                      cutoff: float = 1e-12, family_tag: Optional[str] = None) -> Hamiltonian:
    """
    Раскладывает термы по строкам Паули и складывает одинаковые.

    Нулевые (с точностью cutoff) коэффициенты отбрасываются, поэтому
    компенсирующие слагаемые, сократившиеся точно, не попадают в симулятор.
    """
    expanded: List[PauliTerm] = []
    for t in terms:
        expanded.extend(pauli_decompose(t, 2))
    coeffs = collect_pauli(expanded, cutoff)
    out = [PauliTerm(sites, letters, w, origin) for (sites, letters), w in sorted(coeffs.items())]
    return Hamiltonian(n, 2, tuple(out), family_tag)


def hamiltonian_norm(h: Hamiltonian) -> float:
    """‖H‖ точно, если H собирается в пределах dim_cap; иначе оценка сверху."""
    try:
        return operator_norm(assemble(h).entries)
    except DimensionCap:
        return norm_bound(h)


def extended(h: Hamiltonian, n: int) -> Hamiltonian:
    """Тот же набор термов на большем числе узлов."""
    if n < h.n:
        raise BadForm(f"Нельзя сузить гамильтониан с {h.n} до {n} узлов")
    return Hamiltonian(n, h.d, h.terms)


# ---------------------------------------------------------------------------
# Гаджет
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class PerturbativeGadget:
    """
    Пертурбативный гаджет.

    Узлы 0..n_target-1 симулятора — целевые кубиты (для kind='mediator')
    или не используются напрямую (kind='subspace', логические кубиты живут
    в основном пространстве блоков). Медиаторы и блоки нумеруются от n_target.

    blocks:
        mediator: целевой узел -> (узлы анцилл, их состояние в основном пространстве H0)
        subspace: логический узел -> (физические узлы, базис 2^k x 2 логического кубита)
    target: предсказанный низкоэнергетический гамильтониан на целевых узлах
    couplings: пары логических узлов, связанные H2 (для kind='subspace')
    h1_block_diagonal: требовать блочной диагональности H1 (второй порядок);
        False допускает вклад (H1)_{-+}, исчезающий как Δ^{-1/2}
    """
    name: str
    order: int
    n_target: int
    n_sim: int
    h0: Hamiltonian
    h1: Hamiltonian
    h2: Hamiltonian
    target: Hamiltonian
    h1prime: Optional[Hamiltonian] = None
    kind: str = 'mediator'
    blocks: Dict[int, Tuple[Tuple[int, ...], np.ndarray]] = field(default_factory=dict)
    mediators: Tuple[int, ...] = ()
    couplings: Tuple[Tuple[int, int], ...] = ()
    h1_block_diagonal: bool = True
    notes: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.order not in DELTA_EXPONENTS:
            raise BadForm(f"Порядок гаджета должен быть 1, 2 или 3: {self.order}")
        if self.kind not in GADGET_KINDS:
            raise BadForm(f"Неизвестный тип гаджета: '{self.kind}'")
        if self.order == 3 and self.h1prime is None:
            raise BadForm("Гаджету третьего порядка нужен H1'")
        parts = [self.h0, self.h1, self.h2] + ([self.h1prime] if self.h1prime is not None else [])
        if any(p.n != self.n_sim for p in parts):
            raise BadForm(f"Все слагаемые гаджета '{self.name}' должны жить на {self.n_sim} узлах")
        if self.target.n != self.n_target:
            raise BadForm(f"Целевой гамильтониан на {self.target.n} узлах, ожидалось {self.n_target}")
        self.mediators = tuple(sorted(self.mediators))

    @cached_property
    def lambda_norm(self) -> float:
        """Λ = max(‖H1‖, ‖H1'‖, ‖H2‖)."""
        parts = [self.h1, self.h2] + ([self.h1prime] if self.h1prime is not None else [])
        return max(hamiltonian_norm(p) for p in parts)

    @cached_property
    def encoding(self) -> Encoding:
        """Локальное кодирование цели в основное пространство H0."""
        if self.kind == 'mediator':
            return ancilla_encoding(self.n_target, self.n_sim, self.blocks)
        blocks = [
            LocalBlock(u, sites, basis, 1, np.ones((1, 1)), np.zeros((1, 1)))
            for u, (sites, basis) in sorted(self.blocks.items())
        ]
        return local_encoding(blocks, 2, 2, self.n_sim)

    @property
    def ground_isometry(self) -> np.ndarray:
        return self.encoding.v

    @property
    def delta_rule(self) -> Dict[str, float]:
        return dict(DELTA_EXPONENTS[self.order])

    @property
    def effective(self) -> DenseOperator:
        return effective_hamiltonian(self)

    def simulator_encoding(self) -> Encoding:
        return self.encoding

    def __str__(self) -> str:
        return (
            f"{self.name}: порядок {self.order}, {self.n_target} -> {self.n_sim} кубитов, "
            f"медиаторов {len(self.mediators)}"
        )


@dataclass
class GadgetReport:
    """Сводка по гаджету."""
    name: str
    order: int
    kind: str
    n_target: int
    n_sim: int
    mediators: int
    lambda_norm: float
    sim_terms: int

    def __str__(self) -> str:
        return (
            f"{self.name} [{self.kind}, порядок {self.order}]: "
            f"{self.n_target} -> {self.n_sim} кубитов, медиаторов {self.mediators}, "
            f"Λ = {self.lambda_norm:.6g}, термов {self.sim_terms}"
        )


def gadget_report(g: PerturbativeGadget) -> GadgetReport:
    terms = len(g.h0) + len(g.h1) + len(g.h2) + (len(g.h1prime) if g.h1prime is not None else 0)
    return GadgetReport(
        g.name, g.order, g.kind, g.n_target, g.n_sim, len(g.mediators), g.lambda_norm, terms,
    )


# ---------------------------------------------------------------------------
# Эффективный гамильтониан и сборка симулятора
# ---------------------------------------------------------------------------

def _excited_resolvent(h0: np.ndarray, v: np.ndarray, name: str,
                       tol: Tolerances) -> np.ndarray:
    """
    Псевдообратный H0 на возбуждённом подпространстве.

    Raises:
        BlockViolation: если V не совпадает с нулевым подпространством H0
            или щель меньше 1
    """
    spec = diagonalize(h0, tol)
    k = v.shape[1]
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    ground = int(np.sum(spec.eigenvalues <= 0.5))
    if ground != k:
        raise BlockViolation(
            f"{name}: размерность основного пространства H0 = {ground}, у изометрии {k} столбцов"
        )
    if operator_norm(h0 @ v) > tol.tol_assemble * scale:
        raise BlockViolation(f"{name}: изометрия не лежит в ядре H0")
    if k < spec.dim and spec.eigenvalues[k] < 1.0 - tol.tol_eig:
        raise BlockViolation(f"{name}: щель H0 = {spec.eigenvalues[k]:.6g} < 1")
    excited = spec.eigenvectors[:, k:]
    return (excited / spec.eigenvalues[k:]) @ excited.conj().T


def effective_hamiltonian(g: PerturbativeGadget,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> DenseOperator:
    """
    Низкоэнергетический гамильтониан гаджета в базисе изометрии V.

    порядок 1: V†H1V
    порядок 2: V†H1V − V†H2 G H2V
    порядок 3: V†H1V + V†H2 G H2 G H2V
    где G — обратный H0 на возбуждённом подпространстве.

    Raises:
        BlockViolation: если нарушены блочные условия порядка
    """
    v = g.ground_isometry
    h0 = assemble(g.h0).entries
    resolvent = _excited_resolvent(h0, v, g.name, tol)
    h1 = assemble(g.h1).entries
    scale = max(1.0, g.lambda_norm)
    limit = tol.tol_assemble * scale
    eff = v.conj().T @ h1 @ v
    if g.order == 1:
        return DenseOperator.of(eff)

    h2 = assemble(g.h2).entries
    if operator_norm(v.conj().T @ h2 @ v) > limit:
        raise BlockViolation(f"{g.name}: (H2)_-- != 0")
    h2v = h2 @ v
    second = h2v.conj().T @ resolvent @ h2v
    leak = h1 @ v - v @ (v.conj().T @ h1 @ v)
    if g.order == 2:
        if g.h1_block_diagonal and operator_norm(leak) > limit:
            raise BlockViolation(f"{g.name}: H1 не блочно-диагонален")
        return DenseOperator.of(eff - second)

    h1p = assemble(g.h1prime).entries
    if operator_norm(v.conj().T @ h1p @ v - second) > limit * scale:
        raise BlockViolation(f"{g.name}: (H1')_-- != (H2)_-+ G (H2)_+-")
    if operator_norm(h1p @ v - v @ (v.conj().T @ h1p @ v)) > limit:
        raise BlockViolation(f"{g.name}: H1' не блочно-диагонален")
    third = h2v.conj().T @ resolvent @ h2 @ resolvent @ h2v
    return DenseOperator.of(eff + third)


def effective_mismatch(g: PerturbativeGadget, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """‖H_eff − V H_target V†‖ в базисе изометрии."""
    eff = effective_hamiltonian(g, tol).entries
    target = assemble(g.target).entries
    return operator_norm(eff - target)


def schedule(order: int, delta: float) -> Dict[str, float]:
    """Коэффициенты при H0, H2, H1', H1 для заданного Δ."""
    if order not in DELTA_EXPONENTS:
        raise BadForm(f"Порядок гаджета должен быть 1, 2 или 3: {order}")
    return {name: float(delta) ** power for name, power in DELTA_EXPONENTS[order].items()}


def build_simulator(g: PerturbativeGadget, delta: float) -> Hamiltonian:
    """
    H_sim = ΔH0 + Δ^a H2 + Δ^b H1' + H1; каждый терм помечен origin
    вида "имя_гаджета:слагаемое".
    """
    if not delta > 0:
        raise HamforgeError(f"Δ должно быть положительным: {delta}")
    terms = []
    for component, factor in schedule(g.order, delta).items():
        part = getattr(g, component)
        tag = f"{g.name}:{component}"
        terms.extend(t.scaled(factor).with_origin(tag) for t in part.terms)
    return Hamiltonian(g.n_sim, 2, tuple(terms))


def with_passthrough(g: PerturbativeGadget, terms: Sequence) -> PerturbativeGadget:
    """
    Добавляет термы цели, которые гаджет не трогает, в H1 и в target.

    Для kind='mediator' термы действуют только на целевые узлы и коммутируют
    с изометрией. У гаджетов-подпространств целевые узлы не совпадают с
    физическими, поэтому допускается лишь константа.

    Raises:
        BadForm: терм вне целевых узлов или нетождественный терм
            для гаджета-подпространства
    """
    terms = list(terms)
    if not terms:
        return g
    for t in terms:
        sites = t.sites
        if g.kind == 'subspace' and sites:
            raise BadForm(f"{g.name}: через гаджет-подпространство проходит только константа, не {sites}")
        if any(s >= g.n_target for s in sites):
            raise BadForm(f"{g.name}: терм на {sites} вне {g.n_target} целевых узлов")
    return replace(
        g,
        h1=Hamiltonian(g.n_sim, 2, g.h1.terms + tuple(terms)),
        target=Hamiltonian(g.n_target, 2, g.target.terms + tuple(terms)),
    )
