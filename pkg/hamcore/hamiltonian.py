"""
hamcore/hamiltonian.py

Гамильтониан: n узлов размерности d и список термов.
Сборка в плотную матрицу и разложение по базису Паули.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Dict, Tuple, Union, Iterable

import numpy as np
import networkx as nx

from .config import DEFAULT_TOLERANCES, get_dim_cap
from .errors import BadSupport, NotQubit, DimMismatch, DimensionCap
from .fast_pauli import accumulate_pauli_string
from .linalg import embed_operator
from .spectrum import DenseOperator
from .terms import PauliTerm, LocalTerm, pauli_matrix


Term = Union[PauliTerm, LocalTerm]

FAMILY_TAGS = (
    'heisenberg', 'xy', 'no_y_pauli', 'real_2local_with_fields', 'tim', 'unrestricted'
)


@dataclass(eq=False)
class Hamiltonian:
    """
    Гамильтониан на n узлах с однородной локальной размерностью d.

    family_tag, если задан, проверяется при создании (audit_family).
    geometry: узел -> (строка, столбец) для решёточных раскладок.
    """
    n: int
    d: int = 2
    terms: Tuple[Term, ...] = ()
    family_tag: Optional[str] = None
    geometry: Optional[Dict[int, Tuple[int, int]]] = None

    def __post_init__(self):
        if self.d < 2:
            raise DimMismatch(f"Локальная размерность должна быть >= 2, получено {self.d}")
        if self.n < 0:
            raise BadSupport(f"Число узлов должно быть неотрицательным: {self.n}")
        self.terms = tuple(self.terms)
        for idx, term in enumerate(self.terms):
            if any(s >= self.n for s in term.sites):
                raise BadSupport(f"Терм #{idx} ссылается на узел вне [0, {self.n}): {term.sites}")
            if isinstance(term, PauliTerm):
                if self.d != 2:
                    raise NotQubit(f"Терм Паули #{idx} допустим только при d = 2")
            else:
                expected = self.d ** len(term.support)
                if term.block.shape[0] != expected:
                    raise DimMismatch(
                        f"Терм #{idx}: блок {term.block.shape[0]}x{term.block.shape[0]}, "
                        f"ожидалось {expected}x{expected}"
                    )
        if self.family_tag is not None:
            # отложенный импорт: families использует pauli_decompose отсюда
            from .families import audit_family
            audit_family(self)

    @property
    def dim(self) -> int:
        return self.d ** self.n

    @property
    def k_max(self) -> int:
        """Наибольший размер носителя."""
        return max((len(t.sites) for t in self.terms), default=0)

    def with_terms(self, terms: Iterable[Term], family_tag: Optional[str] = None) -> "Hamiltonian":
        return Hamiltonian(self.n, self.d, tuple(terms), family_tag, self.geometry)

    def scaled(self, factor: float) -> "Hamiltonian":
        return self.with_terms([t.scaled(factor) for t in self.terms])

    def relabel(self, perm: List[int]) -> "Hamiltonian":
        """Переименовывает узлы: узел s становится perm[s]."""
        new_terms: List[Term] = []
        for t in self.terms:
            if isinstance(t, PauliTerm):
                new_terms.append(t.shifted({s: perm[s] for s in t.sites}))
            else:
                new_sites = [perm[s] for s in t.support]
                order = list(np.argsort(new_sites))
                block = t.block
                if order != list(range(len(order))):
                    from .linalg import permutation_matrix
                    pm = permutation_matrix([self.d] * len(order), order)
                    block = pm @ block @ pm.T
                new_terms.append(LocalTerm(tuple(sorted(new_sites)), block, t.weight, t.origin))
        return Hamiltonian(self.n, self.d, tuple(new_terms), None, None)

    def pauli_terms(self) -> List[PauliTerm]:
        """Все термы, разложенные по строкам Паули (только d = 2)."""
        out: List[PauliTerm] = []
        for t in self.terms:
            if isinstance(t, PauliTerm):
                out.append(t)
            else:
                out.extend(pauli_decompose(t, self.d))
        return out

    def interaction_graph(self) -> nx.Graph:
        """Граф взаимодействий по 2-узловым носителям."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for t in self.terms:
            if len(t.sites) == 2:
                g.add_edge(*t.sites)
            elif len(t.sites) > 2:
                for a, b in zip(t.sites, t.sites[1:]):
                    g.add_edge(a, b)
        return g

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        tag = f", family={self.family_tag}" if self.family_tag else ""
        return f"Hamiltonian(n={self.n}, d={self.d}, terms={len(self.terms)}{tag})"


def assemble(h: Hamiltonian, dim_cap: Optional[int] = None) -> DenseOperator:
    """
    Собирает плотную матрицу Σ_i w_i (h_i ⊗ 1).

    Args:
        h: гамильтониан
        dim_cap: предел размерности (по умолчанию из HAMFORGE_DIM_CAP)

    Returns:
        эрмитов DenseOperator размера d^n
    """
    cap = get_dim_cap() if dim_cap is None else dim_cap
    dim = h.d ** h.n
    if dim > cap:
        raise DimensionCap(f"Размерность {h.d}^{h.n} = {dim} превышает dim_cap = {cap}")
    out = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        if isinstance(t, PauliTerm):
            if t.is_identity:
                out[np.diag_indices(dim)] += t.weight
            else:
                accumulate_pauli_string(out, h.n, t.sites, t.letters, t.weight)
        else:
            out += t.weight * embed_operator(t.block, t.support, h.n, h.d)
    # симметризация убирает ошибки округления порядка машинного эпсилона
    out = (out + out.conj().T) / 2
    return DenseOperator(out, hermitian=True)


def norm_bound(h: Hamiltonian) -> float:
    """Оценка ‖H‖ сверху по неравенству треугольника (без сборки матрицы)."""
    total = 0.0
    for t in h.terms:
        if isinstance(t, PauliTerm):
            total += abs(t.weight)
        else:
            total += abs(t.weight) * float(np.linalg.norm(t.block, 2))
    return total


def pauli_decompose(t: Term, d: int = 2, cutoff: float = 1e-14) -> List[PauliTerm]:
    """
    Раскладывает терм по строкам Паули на его носителе.

    Коэффициент строки P равен Re tr(P·block)/2^k · weight. Тождественная
    компонента возвращается первой как терм с пустыми sites.

    Raises:
        NotQubit: если d != 2
    """
    if d != 2:
        raise NotQubit(f"Разложение Паули определено только для d = 2, получено d = {d}")
    if isinstance(t, PauliTerm):
        return [t]
    k = len(t.support)
    if t.block.shape[0] != 2 ** k:
        raise NotQubit(f"Блок {t.block.shape} не является кубитным на {k} узлах")
    terms: List[PauliTerm] = []
    for letters in product('IXYZ', repeat=k):
        p = pauli_matrix("".join(letters))
        coeff = np.trace(p @ t.block).real / 2 ** k * t.weight
        if abs(coeff) <= cutoff:
            continue
        sites = tuple(s for s, ch in zip(t.support, letters) if ch != 'I')
        word = "".join(ch for ch in letters if ch != 'I')
        terms.append(PauliTerm(sites, word, coeff, t.origin))
    return terms


def collect_pauli(terms: Iterable[PauliTerm], cutoff: float = 1e-12) -> Dict[Tuple[Tuple[int, ...], str], float]:
    """Складывает коэффициенты одинаковых строк Паули."""
    acc: Dict[Tuple[Tuple[int, ...], str], float] = {}
    for t in terms:
        key = (t.sites, t.letters)
        acc[key] = acc.get(key, 0.0) + t.weight
    return {k: v for k, v in acc.items() if abs(v) > cutoff}


def from_pauli_dict(n: int, coeffs: Dict[str, float], origin: Optional[str] = None,
                    family_tag: Optional[str] = None) -> Hamiltonian:
    """
    Строит гамильтониан из словаря вида {"X0 X1": 0.5, "Z2": -1, "I": 3}.
    """
    terms = []
    for label, w in coeffs.items():
        terms.append(parse_pauli_label(label, w, origin))
    return Hamiltonian(n, 2, tuple(terms), family_tag)


def parse_pauli_label(label: str, weight: float = 1.0, origin: Optional[str] = None) -> PauliTerm:
    """Разбирает метку "X0 Z3" в PauliTerm (обратная к PauliTerm.label)."""
    label = label.strip()
    if label in ("", "I"):
        return PauliTerm((), "", weight, origin)
    pairs = []
    for token in label.split():
        letter, site = token[0], token[1:]
        if not site.isdigit():
            raise BadSupport(f"Некорректная метка Паули: '{label}'")
        pairs.append((int(site), letter))
    pairs.sort()
    return PauliTerm(tuple(p[0] for p in pairs), "".join(p[1] for p in pairs), weight, origin)
