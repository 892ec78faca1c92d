"""
gadgets/reductions.py

Гаджеты, меняющие вид взаимодействий:
- y_elimination_gadget: строки Паули с чётным числом Y (общий носитель Y) без букв Y в симуляторе
- three_to_two_gadget: 3-локальный A⊗B⊗C из 2-локальных (третий порядок)
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from hamcore.errors import BadOperand, OddYCount, OverlapViolation
from hamcore.hamiltonian import pauli_decompose
from hamcore.linalg import operator_norm
from hamcore.terms import LocalTerm, PauliTerm, pauli_matrix

from .base import KET0, KET1, PerturbativeGadget, as_local, pauli_hamiltonian, product_term


def _letters_term(letters: Dict[int, str], weight: float) -> PauliTerm:
    sites = tuple(sorted(letters))
    return PauliTerm(sites, "".join(letters[s] for s in sites), weight)


def y_support(t: PauliTerm) -> Tuple[int, ...]:
    """Узлы, на которых строка содержит букву Y."""
    return tuple(s for s, ch in zip(t.sites, t.letters) if ch == 'Y')


def y_support_groups(terms: Iterable[PauliTerm]) -> Dict[Tuple[int, ...], List[PauliTerm]]:
    """Строки с буквами Y, сгруппированные по носителю букв Y."""
    groups: Dict[Tuple[int, ...], List[PauliTerm]] = {}
    for t in terms:
        if t.y_count:
            groups.setdefault(y_support(t), []).append(t)
    return groups


def _rest_operator(terms: Sequence[PauliTerm], ys: Tuple[int, ...]):
    """
    A = Σ w_k P_k — сомножители строк вне носителя Y.

    Returns:
        (узлы A, блок A) либо ((), 1x1 скаляр)
    """
    rest = sorted({s for t in terms for s in t.sites if s not in ys})
    block = np.zeros((2 ** len(rest), 2 ** len(rest)), dtype=complex)
    for t in terms:
        word = dict(zip(t.sites, t.letters))
        block += t.weight * pauli_matrix("".join(word.get(s, 'I') for s in rest))
    return tuple(rest), block


def y_elimination_gadget(t: Union[PauliTerm, Sequence[PauliTerm]], n_target: Optional[int] = None,
                         mediator: Optional[int] = None) -> PerturbativeGadget:
    """
    Гаджет, убирающий букву Y: Σ_k w_k Y^{⊗2m} ⊗ P_k = Y^{⊗2m} ⊗ A
    (все строки с одним и тем же носителем букв Y).

    H0 = |0⟩⟨0|_a (медиатор в |1⟩), r = ‖A‖,
    H2 = X_a(c·X^{⊗2m} + c'·Z^{⊗2m} ⊗ A), c = √(r/2), c' = (−1)^{m+1}/√(2r),
    H1 = r/2 + A²/(2r).
    Так как X^{⊗2m}Z^{⊗2m} = Z^{⊗2m}X^{⊗2m} = (−1)^m Y^{⊗2m}, второй порядок даёт
    −c² − c'²A² + Y^{⊗2m}A, а H1 убирает первые два слагаемых.

    Raises:
        OddYCount: если число букв Y нечётно или равно нулю
        BadOperand: если строки группы расходятся в носителе букв Y
    """
    terms = [t] if isinstance(t, PauliTerm) else list(t)
    if not terms:
        raise BadOperand("Пустая группа строк для исключения Y")
    for term in terms:
        count = term.y_count
        if count == 0 or count % 2:
            raise OddYCount(f"Нужно чётное положительное число букв Y, в {term.label()} их {count}")
    ys = y_support(terms[0])
    if any(y_support(term) != ys for term in terms):
        raise BadOperand(f"Строки группы должны иметь буквы Y на одних и тех же узлах {ys}")
    n_t = n_target if n_target is not None else max(s for term in terms for s in term.sites) + 1
    a = n_t if mediator is None else int(mediator)
    n_sim = a + 1
    m = len(ys) // 2
    rest, block = _rest_operator(terms, ys)
    r = operator_norm(block)
    if r == 0.0:
        raise BadOperand(f"Группа строк с Y на {ys} в сумме равна нулю")
    c = np.sqrt(r / 2.0)
    c_phase = (-1) ** (m + 1) / np.sqrt(2.0 * r)

    flip = _letters_term({**{s: 'X' for s in ys}, a: 'X'}, c)
    phase_string = _letters_term({**{s: 'Z' for s in ys}, a: 'X'}, c_phase)
    if rest:
        phase = product_term(phase_string, LocalTerm(rest, block))
        square = LocalTerm(rest, block @ block, 1.0 / (2.0 * r))
    else:
        phase = phase_string.scaled(block[0, 0].real)
        square = PauliTerm((), "", block[0, 0].real ** 2 / (2.0 * r))
    name = "y_elimination"
    h0 = pauli_hamiltonian(n_sim, [PauliTerm((), "", 0.5), PauliTerm((a,), "Z", 0.5)], f"{name}:H0")
    h2 = pauli_hamiltonian(n_sim, [flip, phase], f"{name}:H2")
    h1 = pauli_hamiltonian(n_sim, [PauliTerm((), "", r / 2.0), square], f"{name}:H1")
    target = pauli_hamiltonian(n_t, terms, name)
    return PerturbativeGadget(
        name=name, order=2, n_target=n_t, n_sim=n_sim, h0=h0, h1=h1, h2=h2, target=target,
        kind='mediator', blocks={min(ys): ((a,), KET1)}, mediators=(a,),
        notes={'norm_rest': float(r)},
    )


def _real_axis(term, label: str) -> Tuple[int, float, float, float]:
    """
    Однокубитный терм как r·(cos θ X + sin θ Z): возвращает (узел, r, x, z)
    с x² + z² = 1.

    Raises:
        BadOperand: если терм не однокубитный, содержит Y или след
    """
    local = as_local(term)
    if len(local.sites) != 1:
        raise BadOperand(f"{label}: ожидался однокубитный терм, носитель {local.sites}")
    comps = {p.letters: p.weight for p in pauli_decompose(local, 2, cutoff=0.0)}
    if abs(comps.get('Y', 0.0)) > 1e-12:
        raise BadOperand(f"{label}: терм содержит Y")
    if abs(comps.get('', 0.0)) > 1e-12:
        raise BadOperand(f"{label}: терм должен быть бесследовым")
    x, z = comps.get('X', 0.0), comps.get('Z', 0.0)
    r = float(np.hypot(x, z))
    if r == 0.0:
        return local.sites[0], 0.0, 0.0, 1.0
    return local.sites[0], r, x / r, z / r


def _axis_terms(site: int, x: float, z: float, weight: float = 1.0, extra: Dict[int, str] = None):
    """w·(x X + z Z) на узле site, умноженное на строку extra."""
    extra = extra or {}
    out = []
    for letter, coeff in (('X', x), ('Z', z)):
        if coeff == 0.0:
            continue
        out.append(_letters_term({**extra, site: letter}, weight * coeff))
    return out


def three_to_two_gadget(a, b, c, n_target: Optional[int] = None,
                        mediator: Optional[int] = None) -> PerturbativeGadget:
    """
    Гаджет третьего порядка: A ⊗ B ⊗ C из 2-локальных термов.

    Термы нормируются: A = r_a·Â и т. д., w = r_a r_b r_c.
    H0 = |1⟩⟨1|_d, H2 = κ(Â + B̂)X_d + w·Ĉ|1⟩⟨1|_d, κ = 1/√2,
    H1' = κ²(Â + B̂)² (условие третьего порядка), H1 = −w·Ĉ.
    Третий порядок: κ²w(Â + B̂)Ĉ(Â + B̂) = w(Ĉ + ÂB̂Ĉ); −wĈ в H1 его убирает.

    Raises:
        BadOperand: если какой-то терм не вещественный бесследовый однокубитный
        OverlapViolation: если узлы совпадают
    """
    (sa, ra, xa, za) = _real_axis(a, "A")
    (sb, rb, xb, zb) = _real_axis(b, "B")
    (sc, rc, xc, zc) = _real_axis(c, "C")
    if len({sa, sb, sc}) != 3:
        raise OverlapViolation(f"Термы должны стоять на разных узлах: {(sa, sb, sc)}")
    n_t = n_target if n_target is not None else max(sa, sb, sc) + 1
    d = n_t if mediator is None else int(mediator)
    n_sim = d + 1
    w = ra * rb * rc
    kappa = 1.0 / np.sqrt(2.0)
    name = "three_to_two"

    h0 = pauli_hamiltonian(n_sim, [PauliTerm((), "", 0.5), PauliTerm((d,), "Z", -0.5)], f"{name}:H0")
    h2_terms = (
        _axis_terms(sa, xa, za, kappa, {d: 'X'})
        + _axis_terms(sb, xb, zb, kappa, {d: 'X'})
        + _axis_terms(sc, xc, zc, 0.5 * w)
        + _axis_terms(sc, xc, zc, -0.5 * w, {d: 'Z'})
    )
    h2 = pauli_hamiltonian(n_sim, h2_terms, f"{name}:H2")
    # κ²(Â + B̂)² = 1 + ÂB̂
    cross = [
        _letters_term({sa: la, sb: lb}, ca * cb)
        for la, ca in (('X', xa), ('Z', za)) if ca != 0.0
        for lb, cb in (('X', xb), ('Z', zb)) if cb != 0.0
    ]
    h1prime = pauli_hamiltonian(n_sim, [PauliTerm((), "", 1.0)] + cross, f"{name}:H1'")
    h1 = pauli_hamiltonian(n_sim, _axis_terms(sc, xc, zc, -w), f"{name}:H1")
    target_terms = [
        _letters_term({sa: la, sb: lb, sc: lc}, w * ca * cb * cc)
        for la, ca in (('X', xa), ('Z', za)) if ca != 0.0
        for lb, cb in (('X', xb), ('Z', zb)) if cb != 0.0
        for lc, cc in (('X', xc), ('Z', zc)) if cc != 0.0
    ]
    target = pauli_hamiltonian(n_t, target_terms, name)
    return PerturbativeGadget(
        name=name, order=3, n_target=n_t, n_sim=n_sim, h0=h0, h1=h1, h2=h2, target=target,
        h1prime=h1prime, kind='mediator', blocks={min(sa, sb, sc): ((d,), KET0)},
        mediators=(d,), notes={'weight': float(w)},
    )
