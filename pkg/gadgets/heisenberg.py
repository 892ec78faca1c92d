"""
gadgets/heisenberg.py

Логический кубит в основном пространстве гейзенберговского (или XY)
гамильтониана на полном графе K4.

H0 = Σ_{i<j} H_ij + сдвиг, H_ij = XX + YY + ZZ (heisenberg) или XX + YY (xy).
Основное пространство двумерно и натянуто на произведения синглетов:
|0_L⟩ = Ψ⁻_{13}Ψ⁻_{24}, |1_L⟩ = (2/√3)Ψ⁻_{12}Ψ⁻_{34} − (1/√3)Ψ⁻_{13}Ψ⁻_{24}
(узлы K4 нумеруются 1..4, на симуляторе им отвечают 4 подряд идущих кубита).

Первый порядок (физическое H_ij внутри блока) даёт однокубитные логические
поля, второй порядок (H_ij' между блоками) — двухкубитные логические
взаимодействия.
"""

from dataclasses import dataclass
from functools import partial
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import BadForm, BadPair, BadTopology, OverlapViolation, UnsupportedFamily
from hamcore.hamiltonian import Hamiltonian, assemble
from hamcore.linalg import operator_norm
from hamcore.spectrum import DenseOperator
from hamcore.terms import PauliTerm, pauli_matrix

from .base import PerturbativeGadget, effective_hamiltonian, pauli_hamiltonian


INTERACTIONS = ('heisenberg', 'xy')
INTERACTION_LETTERS = {'heisenberg': ('XX', 'YY', 'ZZ'), 'xy': ('XX', 'YY')}
# сдвиг, обнуляющий энергию основного пространства
H0_SHIFT = {'heisenberg': 6.0, 'xy': 4.0}
# Π H_ij Π = PAULI_COUNT · Π X_iX_j Π
PAULI_COUNT = {'heisenberg': 3, 'xy': 2}
# энергия образа σ_i Π в одном блоке
EXCITATION = {'heisenberg': 4.0, 'xy': 2.0}

K4_PAIRS = tuple(combinations(range(4), 2))

# Π X_iX_j Π = x·X_L + z·Z_L + c·1 (узлы 1..4)
FIRST_ORDER_EXPECTED = {
    (1, 3): (0.0, -2.0 / 3.0, -1.0 / 3.0),
    (2, 4): (0.0, -2.0 / 3.0, -1.0 / 3.0),
    (1, 2): (-1.0 / np.sqrt(3.0), 1.0 / 3.0, -1.0 / 3.0),
    (3, 4): (-1.0 / np.sqrt(3.0), 1.0 / 3.0, -1.0 / 3.0),
    (1, 4): (1.0 / np.sqrt(3.0), 1.0 / 3.0, -1.0 / 3.0),
    (2, 3): (1.0 / np.sqrt(3.0), 1.0 / 3.0, -1.0 / 3.0),
}

# строки таблицы второго порядка: метка, веса α_ij (узлы с нуля),
# ожидаемое 2-локальное слагаемое и его знак
SECOND_ORDER_WEIGHTS = (
    ("H11' - H33'", {(0, 0): 1.0, (2, 2): -1.0}, 'ZZ', 1.0),
    ("H11' + H33'", {(0, 0): 1.0, (2, 2): 1.0}, 'ZZ', -1.0),
    ("H13' - H11' + H32'", {(0, 2): 1.0, (0, 0): -1.0, (2, 1): 1.0}, 'ZX', 1.0),
    ("H13' - H11' - H32'", {(0, 2): 1.0, (0, 0): -1.0, (2, 1): -1.0}, 'ZX', -1.0),
    ("H11' - 2H22' + H33'", {(0, 0): 1.0, (1, 1): -2.0, (2, 2): 1.0}, 'XX', 1.0),
    ("35H11' + 5H22' - 3H33' + 5H44'",
     {(0, 0): 35.0, (1, 1): 5.0, (2, 2): -3.0, (3, 3): 5.0}, 'XX', -1.0),
)


def _check_interaction(interaction: str) -> None:
    if interaction not in INTERACTIONS:
        raise UnsupportedFamily(f"Неизвестное взаимодействие логического кубита: '{interaction}'")


def _singlet_product(pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Произведение синглетов (|01⟩ − |10⟩)/√2 на парах узлов 0..3."""
    state = np.zeros([2] * 4, dtype=complex)
    for bits in product((0, 1), repeat=4):
        amp = 1.0
        for i, j in pairs:
            if bits[i] == bits[j]:
                amp = 0.0
                break
            amp *= (-1) ** bits[i] / np.sqrt(2.0)
        state[bits] = amp
    return state.reshape(-1)


def logical_basis(interaction: str = 'heisenberg') -> np.ndarray:
    """Матрица 16 x 2 со столбцами |0_L⟩, |1_L⟩ (одна для обоих взаимодействий)."""
    _check_interaction(interaction)
    zero = _singlet_product([(0, 2), (1, 3)])
    other = _singlet_product([(0, 1), (2, 3)])
    one = (2.0 / np.sqrt(3.0)) * other - (1.0 / np.sqrt(3.0)) * zero
    return np.column_stack([zero, one])


def pair_terms(i: int, j: int, interaction: str, weight: float = 1.0,
               origin: Optional[str] = None) -> List[PauliTerm]:
    """Термы H_ij на физических узлах i, j."""
    sites = tuple(sorted((i, j)))
    return [PauliTerm(sites, letters, weight, origin) for letters in INTERACTION_LETTERS[interaction]]


@dataclass(frozen=True)
class LogicalQubitGadget:
    """
    Блок K4 из четырёх физических кубитов.

    physical_sites: узлы симулятора, соответствующие вершинам 1..4
    """
    physical_sites: Tuple[int, int, int, int] = (0, 1, 2, 3)
    interaction: str = 'heisenberg'

    def __post_init__(self):
        sites = tuple(int(s) for s in self.physical_sites)
        if len(sites) != 4 or len(set(sites)) != 4:
            raise BadTopology(f"Блоку K4 нужны четыре разных узла: {self.physical_sites}")
        object.__setattr__(self, 'physical_sites', sites)
        _check_interaction(self.interaction)

    @property
    def logical_basis(self) -> np.ndarray:
        return logical_basis(self.interaction)

    def h0_terms(self, origin: str = "K4:H0") -> List[PauliTerm]:
        s = self.physical_sites
        terms = [PauliTerm((), "", H0_SHIFT[self.interaction], origin)]
        for i, j in K4_PAIRS:
            terms.extend(pair_terms(s[i], s[j], self.interaction, 1.0, origin))
        return terms

    def local_h0(self) -> np.ndarray:
        """H0 блока как матрица 16 x 16 в порядке вершин 1..4."""
        local = LogicalQubitGadget((0, 1, 2, 3), self.interaction)
        return assemble(Hamiltonian(4, 2, tuple(local.h0_terms()))).entries

    def defect(self) -> float:
        """max(‖L†L − 1‖, ‖H0 L‖): ноль для корректного логического базиса."""
        basis = self.logical_basis
        ortho = operator_norm(basis.conj().T @ basis - np.eye(2))
        return max(ortho, operator_norm(self.local_h0() @ basis))


def logical_coefficients(op, n_logical: int) -> Dict[str, float]:
    """
    Вещественные коэффициенты оператора на n логических кубитах
    по строкам Паули, ключи вида 'XI', 'ZX' (I — тождество на кубите).
    """
    m = np.asarray(op.entries if isinstance(op, DenseOperator) else op, dtype=complex)
    out = {}
    for letters in product('IXYZ', repeat=n_logical):
        word = "".join(letters)
        out[word] = float(np.trace(pauli_matrix(word) @ m).real / 2 ** n_logical)
    return out


def _pair_index(pair: Sequence[int]) -> Tuple[int, int]:
    try:
        i, j = (int(x) for x in pair)
    except (TypeError, ValueError):
        raise BadPair(f"Пара должна состоять из двух вершин: {pair}")
    if i == j or not (1 <= i <= 4 and 1 <= j <= 4):
        raise BadPair(f"Некорректная пара вершин K4 (ожидались разные числа 1..4): {pair}")
    return i - 1, j - 1


def physical_projection(letters: str, pair: Sequence[int],
                        interaction: str = 'heisenberg') -> np.ndarray:
    """L† σ_iτ_j L для вершин pair (нумерация с 1), letters — две буквы."""
    i, j = _pair_index(pair)
    basis = logical_basis(interaction)
    word = ['I'] * 4
    word[i], word[j] = letters[0], letters[1]
    return basis.conj().T @ pauli_matrix("".join(word)) @ basis


def heisenberg_first_order(pair: Sequence[int], interaction: str = 'heisenberg') -> DenseOperator:
    """
    Π H_ij Π / 3 в логическом базисе (для Гейзенберга это Π X_iX_j Π).

    Args:
        pair: вершины K4, нумерация с 1

    Raises:
        BadPair: если вершины не различны или вне 1..4
    """
    _check_interaction(interaction)
    total = sum(physical_projection(letters, pair, interaction)
                for letters in INTERACTION_LETTERS[interaction])
    return DenseOperator.of(total / 3.0)


def _first_order_tensors(interaction: str = 'heisenberg') -> Dict[str, np.ndarray]:
    """
    Матрицы коэффициентов T^P_ik логической буквы P (I, X, Z) в
    Π X_iX_k Π; на диагонали Π X_iX_i Π = 1.
    """
    out = {letter: np.zeros((4, 4)) for letter in 'IXZ'}
    for i in range(4):
        out['I'][i, i] = 1.0
    for i, k in K4_PAIRS:
        coeffs = logical_coefficients(physical_projection('XX', (i + 1, k + 1), interaction), 1)
        for letter in 'IXZ':
            out[letter][i, k] = out[letter][k, i] = coeffs[letter]
    return out


def second_order_factor(interaction: str) -> float:
    """c в −c·Σ α_ij α_kl T_ik ⊗ T_jl: число букв / суммарная энергия возбуждения."""
    _check_interaction(interaction)
    return PAULI_COUNT[interaction] / (2.0 * EXCITATION[interaction])


def _weights_matrix(weights) -> np.ndarray:
    if isinstance(weights, dict):
        alpha = np.zeros((4, 4))
        for (i, j), w in weights.items():
            alpha[i, j] = w
        return alpha
    alpha = np.asarray(weights, dtype=float)
    if alpha.shape != (4, 4):
        raise BadForm(f"Веса H2 должны образовывать матрицу 4x4, получено {alpha.shape}")
    return alpha


def second_order_closed_form(weights, interaction: str = 'heisenberg') -> DenseOperator:
    """−c·Σ α_ij α_kl (Π X_iX_k Π) ⊗ (Π X_jX_l Π) как матрица 4 x 4."""
    alpha = _weights_matrix(weights)
    c = second_order_factor(interaction)
    t = _first_order_tensors(interaction)
    ops = {
        (i, k): sum(t[p][i, k] * pauli_matrix(p) for p in 'IXZ')
        for i in range(4) for k in range(4)
    }
    out = np.zeros((4, 4), dtype=complex)
    for i, j, k, l in product(range(4), repeat=4):
        coeff = alpha[i, j] * alpha[k, l]
        if coeff != 0.0:
            out += coeff * np.kron(ops[(i, k)], ops[(j, l)])
    return DenseOperator.of(-c * out)


def coupled_blocks_gadget(weights, interaction: str = 'heisenberg',
                          sites: Tuple[Sequence[int], Sequence[int]] = ((0, 1, 2, 3), (4, 5, 6, 7)),
                          ) -> PerturbativeGadget:
    """
    Два блока K4 со связью H2 = Σ α_ij H_{i j'} (без H1).

    Raises:
        OverlapViolation: если блоки пересекаются
    """
    first = LogicalQubitGadget(tuple(sites[0]), interaction)
    second = LogicalQubitGadget(tuple(sites[1]), interaction)
    if set(first.physical_sites) & set(second.physical_sites):
        raise OverlapViolation(
            f"Блоки K4 пересекаются: {first.physical_sites} и {second.physical_sites}"
        )
    alpha = _weights_matrix(weights)
    n_sim = max(first.physical_sites + second.physical_sites) + 1
    h2_terms = []
    for i, j in product(range(4), repeat=2):
        if alpha[i, j] != 0.0:
            h2_terms.extend(pair_terms(
                first.physical_sites[i], second.physical_sites[j], interaction, alpha[i, j],
            ))
    basis = logical_basis(interaction)
    return PerturbativeGadget(
        name=f"K4x2-{interaction}", order=2, n_target=2, n_sim=n_sim,
        h0=pauli_hamiltonian(n_sim, first.h0_terms() + second.h0_terms(), "K4:H0"),
        h1=Hamiltonian(n_sim, 2, ()),
        h2=pauli_hamiltonian(n_sim, h2_terms, "K4:H2"),
        target=Hamiltonian(2, 2, ()),
        kind='subspace',
        blocks={0: (tuple(sorted(first.physical_sites)), _reorder_basis(first, basis)),
                1: (tuple(sorted(second.physical_sites)), _reorder_basis(second, basis))},
        couplings=((0, 1),),
    )


def _reorder_basis(block: LogicalQubitGadget, basis: np.ndarray) -> np.ndarray:
    """Базис в порядке возрастания физических узлов блока."""
    order = list(np.argsort(block.physical_sites))
    cols = [
        np.asarray(basis[:, c]).reshape([2] * 4).transpose(order).reshape(-1)
        for c in range(basis.shape[1])
    ]
    return np.column_stack(cols)


def heisenberg_second_order(weights, interaction: str = 'heisenberg',
                            sites: Tuple[Sequence[int], Sequence[int]] = ((0, 1, 2, 3), (4, 5, 6, 7)),
                            tol: Tolerances = DEFAULT_TOLERANCES) -> DenseOperator:
    """
    Эффективный логический оператор второго порядка −V†H2 G H2V,
    вычисленный на 8-кубитном симуляторе.

    Args:
        weights: матрица 4 x 4 (или словарь (i, j) -> α) весов H_{ij'}, узлы с нуля

    Raises:
        OverlapViolation: если блоки пересекаются
    """
    return effective_hamiltonian(coupled_blocks_gadget(weights, interaction, sites), tol)


def xy_variant(op):
    """Та же операция для XY-взаимодействия H_ij = XX + YY."""
    return partial(op, interaction='xy')


@dataclass
class FirstOrderRow:
    pair: Tuple[int, int]
    x: float
    z: float
    identity: float

    def __str__(self) -> str:
        return f"({self.pair[0]},{self.pair[1]}): {_format_logical(self.x, self.z, self.identity)}"


@dataclass
class SecondOrderRow:
    label: str
    expected: str
    sign: float
    scale: float
    residual: float

    @property
    def sign_ok(self) -> bool:
        return self.sign > 0

    def __str__(self) -> str:
        sign = "+" if self.sign > 0 else "-"
        letters = f"{self.expected[0]}_L {self.expected[1]}_L"
        return f"{self.label}: {sign}{letters}, scale {self.scale:.12g}, residual {self.residual:.3e}"


def _format_logical(x: float, z: float, identity: float) -> str:
    parts = []
    for coeff, name in ((x, "X_L"), (z, "Z_L"), (identity, "I")):
        if abs(coeff) > 1e-12:
            parts.append(f"{coeff:+.12g} {name}")
    return " ".join(parts) if parts else "0"


def first_order_table(interaction: str = 'heisenberg') -> List[FirstOrderRow]:
    """Первый порядок для всех шести пар вершин K4."""
    rows = []
    for pair in FIRST_ORDER_EXPECTED:
        coeffs = logical_coefficients(heisenberg_first_order(pair, interaction), 1)
        rows.append(FirstOrderRow(pair, coeffs['X'], coeffs['Z'], coeffs['I']))
    return rows


def second_order_table(interaction: str = 'heisenberg') -> List[SecondOrderRow]:
    """
    Второй порядок для строк SECOND_ORDER_WEIGHTS на 8-кубитном симуляторе.

    scale — модуль коэффициента ожидаемого слагаемого; sign — отношение
    его знака к ожидаемому; residual — наибольший из остальных
    2-локальных коэффициентов, делённый на scale.
    """
    rows = []
    for label, weights, expected, sign in SECOND_ORDER_WEIGHTS:
        coeffs = logical_coefficients(heisenberg_second_order(weights, interaction), 2)
        two_local = {k: v for k, v in coeffs.items() if 'I' not in k}
        value = two_local.pop(expected)
        scale = abs(value)
        others = max(abs(v) for v in two_local.values())
        residual = others / scale if scale > 0 else float('inf')
        rows.append(SecondOrderRow(label, expected, float(np.sign(value) * sign), scale, residual))
    return rows


# ---------------------------------------------------------------------------
# Компиляция в чистый гейзенберговский (XY) симулятор
# ---------------------------------------------------------------------------

def _quadratic_coefficient(alpha: np.ndarray, t: Dict[str, np.ndarray], p: str, q: str) -> float:
    return float(np.sum((alpha.T @ t[p] @ alpha) * t[q]))


def solve_pair_weights(j_matrix, interaction: str = 'heisenberg', seed: int = 1234,
                       restarts: int = 32, tol: float = 1e-10) -> np.ndarray:
    """
    Веса α (4 x 4) такие, что 2-локальная часть второго порядка равна
    Σ_{P,Q ∈ {X,Z}} J_PQ P_L ⊗ Q_L.

    Из всех найденных решений выбирается решение с наименьшей нормой.

    Raises:
        UnsupportedFamily: если решение не найдено
    """
    j_matrix = np.asarray(j_matrix, dtype=float)
    if j_matrix.shape != (2, 2):
        raise BadForm(f"Матрица связи должна быть 2x2 (X, Z), получено {j_matrix.shape}")
    if np.max(np.abs(j_matrix)) == 0.0:
        return np.zeros((4, 4))
    c = second_order_factor(interaction)
    t = _first_order_tensors(interaction)
    letters = ('X', 'Z')

    def residual(x: np.ndarray) -> np.ndarray:
        alpha = x.reshape(4, 4)
        return np.array([
            -c * _quadratic_coefficient(alpha, t, p, q) - j_matrix[a, b]
            for a, p in enumerate(letters) for b, q in enumerate(letters)
        ])

    rng = np.random.default_rng(seed)
    scale = np.sqrt(8.0 * np.max(np.abs(j_matrix)))
    limit = tol * max(1.0, float(np.max(np.abs(j_matrix))))
    best = None
    for _ in range(restarts):
        x0 = rng.normal(size=16) * scale
        fit = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        if np.max(np.abs(residual(fit.x))) <= limit:
            if best is None or np.linalg.norm(fit.x) < np.linalg.norm(best):
                best = fit.x
    if best is None:
        raise UnsupportedFamily(f"Не удалось подобрать веса H2 для связи {j_matrix.tolist()}")
    return best.reshape(4, 4)


def _field_weights(fx: float, fz: float, interaction: str) -> Tuple[float, float, float]:
    """
    Веса β14, β13 при H_14, H_13 внутри блока и возникающая константа:
    β14·Π H_14 Π + β13·Π H_13 Π = fx·X_L + fz·Z_L + const.
    """
    count = PAULI_COUNT[interaction]
    c14 = logical_coefficients(physical_projection('XX', (1, 4), interaction), 1)
    c13 = logical_coefficients(physical_projection('XX', (1, 3), interaction), 1)
    system = count * np.array([[c14['X'], c13['X']], [c14['Z'], c13['Z']]])
    b14, b13 = np.linalg.solve(system, [fx, fz])
    const = count * (b14 * c14['I'] + b13 * c13['I'])
    return float(b14), float(b13), float(const)


def heisenberg_compile(n_logical: int, couplings: Dict[Tuple[int, int], np.ndarray],
                       fields: Optional[Dict[int, Tuple[float, float]]] = None,
                       interaction: str = 'heisenberg', seed: int = 1234) -> PerturbativeGadget:
    """
    Гаджет, симулирующий вещественный 2-локальный гамильтониан
    Σ_{(u,v)} Σ_{P,Q∈{X,Z}} J_PQ P_uQ_v + Σ_u (hx X_u + hz Z_u)
    чисто гейзенберговским (XY) симулятором на 4·n_logical кубитах.

    Логический узел u занимает физические узлы 4u..4u+3. Второй порядок
    по H2 между блоками реализует связи, H1 внутри блоков — поля
    за вычетом однокубитных остатков второго порядка, тождественный
    терм в H1 убирает константу.

    Raises:
        BadPair: пара вне диапазона или u >= v
        UnsupportedFamily: для связи не нашлось весов
    """
    _check_interaction(interaction)
    fields = dict(fields or {})
    blocks = [LogicalQubitGadget(tuple(range(4 * u, 4 * u + 4)), interaction) for u in range(n_logical)]
    n_sim = 4 * n_logical
    residual_fields = {u: [0.0, 0.0] for u in range(n_logical)}
    constant = 0.0
    h2_terms: List[PauliTerm] = []
    target_terms: List[PauliTerm] = []
    notes: Dict[str, float] = {}

    for (u, v), j_matrix in sorted(couplings.items()):
        if not (0 <= u < v < n_logical):
            raise BadPair(f"Пара логических узлов должна удовлетворять 0 <= u < v < {n_logical}: {(u, v)}")
        j_matrix = np.asarray(j_matrix, dtype=float)
        alpha = solve_pair_weights(j_matrix, interaction, seed)
        notes[f"alpha_norm_{u}_{v}"] = float(np.linalg.norm(alpha))
        for i, j in product(range(4), repeat=2):
            if alpha[i, j] != 0.0:
                h2_terms.extend(pair_terms(4 * u + i, 4 * v + j, interaction, alpha[i, j]))
        coeffs = logical_coefficients(second_order_closed_form(alpha, interaction), 2)
        residual_fields[u][0] += coeffs['XI']
        residual_fields[u][1] += coeffs['ZI']
        residual_fields[v][0] += coeffs['IX']
        residual_fields[v][1] += coeffs['IZ']
        constant += coeffs['II']
        for a, p in enumerate('XZ'):
            for b, q in enumerate('XZ'):
                if j_matrix[a, b] != 0.0:
                    target_terms.append(PauliTerm((u, v), p + q, j_matrix[a, b]))

    h1_terms: List[PauliTerm] = []
    for u in range(n_logical):
        hx, hz = fields.get(u, (0.0, 0.0))
        for letter, value in (('X', hx), ('Z', hz)):
            if value != 0.0:
                target_terms.append(PauliTerm((u,), letter, value))
        fx = hx - residual_fields[u][0]
        fz = hz - residual_fields[u][1]
        b14, b13, const = _field_weights(fx, fz, interaction)
        constant += const
        h1_terms.extend(pair_terms(4 * u, 4 * u + 3, interaction, b14))
        h1_terms.extend(pair_terms(4 * u, 4 * u + 2, interaction, b13))
    h1_terms.append(PauliTerm((), "", -constant))

    h0_terms = [t for block in blocks for t in block.h0_terms()]
    basis = logical_basis(interaction)
    name = f"{interaction}_compile"
    return PerturbativeGadget(
        name=name, order=2, n_target=n_logical, n_sim=n_sim,
        h0=pauli_hamiltonian(n_sim, h0_terms, f"{name}:H0"),
        h1=pauli_hamiltonian(n_sim, h1_terms, f"{name}:H1"),
        h2=pauli_hamiltonian(n_sim, h2_terms, f"{name}:H2"),
        target=Hamiltonian(n_logical, 2, tuple(target_terms)),
        kind='subspace',
        blocks={u: (block.physical_sites, basis) for u, block in enumerate(blocks)},
        couplings=tuple(sorted(couplings)),
        h1_block_diagonal=(interaction == 'heisenberg'),
        notes=notes,
    )
