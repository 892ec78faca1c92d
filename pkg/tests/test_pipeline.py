"""
tests/test_pipeline.py

Тесты компиляции:
- классификация наборов взаимодействий
- деление бюджета и текст плана
- цепочки проходов (сертифицированные на малых размерах)
- раскладка на квадратную решётку
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import logging
import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from hamcore import PAULI, Hamiltonian, PauliTerm, assemble, audit_family, diagonalize
from hamcore.config import DEFAULT_TOLERANCES
from hamcore.errors import HamforgeError, Only1Local, UnsupportedFamily
from gadgets import crossing_gadget
from pipeline import (
    CLASSICAL, STOQUASTIC, UNIVERSAL, CompilationPlan, InteractionSet, LatticeRouter, PassManager,
    PassRecord, budget_split, classify, compile_hamiltonian, is_grid_subgraph,
    layout_square_lattice, one_local_vectors, pauli_rank, two_local_matrix,
)
from pipeline.lattice import drop_rounding_noise
from pipeline.passes import PassContext, run_gadget_stage


GOLDEN = [
    ([{"XX": 1.0, "YY": 1.0, "ZZ": 1.0}], UNIVERSAL),
    ([{"XX": 1.0, "YY": 1.0}], UNIVERSAL),
    ([{"XX": 1.0}, {"Z": 1.0}], STOQUASTIC),
    ([{"ZZ": 1.0}, {"Z": 1.0}], CLASSICAL),
    ([{"XZ": 1.0, "ZX": -1.0}], UNIVERSAL),
]


def _make_real_pair(seed: int = 7) -> Hamiltonian:
    rng = np.random.default_rng(seed)
    terms = [PauliTerm((0, 1), letters, rng.uniform(-0.3, 0.3)) for letters in ("XX", "XZ", "ZX", "ZZ")]
    terms += [PauliTerm((s,), ch, rng.uniform(-0.2, 0.2)) for s in (0, 1) for ch in "XZ"]
    return Hamiltonian(2, 2, tuple(terms))


def _make_lattice(n: int, cols: int = 3) -> Hamiltonian:
    """Первые n узлов решётки 3x3 по строкам: XX на рёбрах, Z-поля."""
    geometry = {i: (i // cols, i % cols) for i in range(n)}
    terms = [PauliTerm((i,), "Z", 0.5) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            (ri, ci), (rj, cj) = geometry[i], geometry[j]
            if abs(ri - rj) + abs(ci - cj) == 1:
                terms.append(PauliTerm((i, j), "XX", 1.0))
    return Hamiltonian(n, 2, tuple(terms), None, geometry)


def _lowest(h: Hamiltonian, k: int) -> np.ndarray:
    return diagonalize(assemble(h)).eigenvalues[:k]


# ---------------------------------------------------------------------------
# Классификация
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("items,expected", GOLDEN)
def test_classify_golden(items, expected):
    """Эталонные наборы."""
    assert classify(InteractionSet.from_pauli(items)) == expected


@pytest.mark.parametrize("items,expected", GOLDEN)
def test_classify_invariant_under_local_unitaries(items, expected):
    """Сопряжение всего набора одним U⊗U не меняет класс."""
    rng = np.random.default_rng(11)
    base = InteractionSet.from_pauli(items)
    for _ in range(20):
        u = unitary_group.rvs(2, random_state=rng)
        uu = np.kron(u, u)
        rotated = [
            (uu if b.shape == (4, 4) else u) @ b @ (uu if b.shape == (4, 4) else u).conj().T
            for b in base.interactions
        ]
        assert classify(InteractionSet(tuple(rotated))) == expected


def test_classify_only_one_local():
    """Набор без 2-локальной части."""
    with pytest.raises(Only1Local):
        classify(InteractionSet.from_pauli([{"Z": 1.0}, {"X": 0.5}]))


def test_pauli_rank_and_matrix():
    """Ранг Паули: Гейзенберг 3, XY 2, XX 1; M симметрична для XX+YY."""
    assert pauli_rank(InteractionSet.from_pauli([{"XX": 1, "YY": 1, "ZZ": 1}]).interactions[0]) == 3
    xy = InteractionSet.from_pauli([{"XX": 1, "YY": 1}]).interactions[0]
    assert pauli_rank(xy) == 2
    m = two_local_matrix(xy)
    assert np.allclose(m, np.diag([1.0, 1.0, 0.0]))
    assert pauli_rank(InteractionSet.from_pauli([{"XX": 2.0, "Z": 1.0}]).interactions[0]) == 1


def test_from_pauli_mixed_lengths_pads_first_qubit():
    """Однобуквенная строка рядом с двухбуквенной действует на первый кубит."""
    block = InteractionSet.from_pauli([{"XX": 2.0, "Z": 1.0}]).interactions[0]
    assert block.shape == (4, 4)
    expected = 2.0 * np.kron(PAULI['X'], PAULI['X']) + np.kron(PAULI['Z'], np.eye(2))
    assert np.allclose(block, expected)
    left, right = one_local_vectors(block)
    assert np.allclose(left, [0.0, 0.0, 1.0])
    assert np.allclose(right, 0.0)
    with pytest.raises(HamforgeError):
        InteractionSet.from_pauli([{"XXX": 1.0}])
    with pytest.raises(HamforgeError):
        InteractionSet.from_pauli([{}])


def test_interaction_set_rejects_bad_blocks():
    """Блок не того размера и неэрмитов блок."""
    with pytest.raises(HamforgeError):
        InteractionSet((np.eye(3),))
    with pytest.raises(HamforgeError):
        InteractionSet((np.array([[0, 1], [0, 0]]),))


# ---------------------------------------------------------------------------
# Бюджет
# ---------------------------------------------------------------------------

def test_budget_split_one_pass():
    """Одна стадия получает половину бюджета."""
    assert budget_split(0.2, 0.1, 1) == [(0.1, 0.05)]


def test_budget_split_two_passes():
    """Две стадии: внешняя (последняя) получает большую долю."""
    split = budget_split(0.2, 0.2, 2)
    assert split[0] == pytest.approx((0.05, 0.05))
    assert split[1] == pytest.approx((0.1, 0.1))
    assert sum(e for e, _ in split) < 0.2


def test_budget_split_rejects_nonpositive():
    with pytest.raises(HamforgeError):
        budget_split(0.0, 0.1, 1)


# ---------------------------------------------------------------------------
# Компиляция
# ---------------------------------------------------------------------------

def test_compile_yy_to_no_y():
    """Одна строка YY -> 3 кубита без Y, сертифицировано при ε = 0.1."""
    h = Hamiltonian(2, 2, (PauliTerm((0, 1), "YY", 1.0),))
    h_out, encoding, plan = compile_hamiltonian(h, 'no_y_pauli', 0.1, 0.1, certify=True)
    assert h_out.n == 3
    assert not any('Y' in t.letters for t in h_out.terms)
    assert [p.name for p in plan.applied] == ['y_elimination']
    assert plan.certified
    assert plan.eps_end_to_end <= 0.1
    assert plan.site_map[0] == (0, 2) or plan.site_map[1] == (1, 2)


@pytest.mark.parametrize("family", ['heisenberg', 'xy'])
def test_compile_real_pair_to_logical_qubits(family):
    """Вещественный 2-кубитный гамильтониан -> 8 кубитов в семействе, спектр в пределах ε."""
    h = _make_real_pair()
    h_out, encoding, plan = compile_hamiltonian(h, family, 0.15, 0.15, certify=True)
    assert h_out.n == 8
    audit_family(h_out, family)
    assert encoding.multiplicity == 1
    target = _lowest(h, 4)
    assert np.max(np.abs(_lowest(h_out, 4) - target)) <= 0.15
    assert plan.certified
    assert plan.eps_end_to_end <= 0.15
    assert [p.name for p in plan.applied] == ['logical_qubit']


def test_compile_complex_chain():
    """Комплексный гамильтониан: complex_to_real + y_elimination, p = q = 1."""
    h = Hamiltonian(2, 2, (
        PauliTerm((0,), "Z", 1.0), PauliTerm((0, 1), "XX", 0.5), PauliTerm((0, 1), "XY", 0.3),
    ))
    h_out, encoding, plan = compile_hamiltonian(h, 'no_y_pauli', 0.1, 0.1, certify=True)
    assert [p.name for p in plan.applied] == ['complex_to_real', 'y_elimination']
    assert not any('Y' in t.letters for t in h_out.terms)
    assert encoding.p == 1 and encoding.q == 1
    doubled = np.repeat(_lowest(h, 4), 2)
    assert np.max(np.abs(_lowest(h_out, 8) - doubled)) <= 0.1
    assert plan.certified


def test_compile_identity_plan():
    """Гамильтониан уже в семействе: проходов нет, кодирование тождественное."""
    h = Hamiltonian(2, 2, tuple(PauliTerm((0, 1), p, 1.0) for p in ("XX", "YY", "ZZ")))
    h_out, encoding, plan = compile_hamiltonian(h, 'heisenberg', 0.1, 0.1)
    assert plan.is_identity
    assert h_out.family_tag == 'heisenberg'
    assert h_out.terms == h.terms
    assert np.allclose(encoding.v, np.eye(4))


def test_compile_rejects_unsupported_family():
    """Стокастическая цепочка к TIM не реализуется."""
    with pytest.raises(UnsupportedFamily):
        PassManager('tim', 0.1, 0.1)
    with pytest.raises(UnsupportedFamily):
        PassManager('heisenberg', 0.1, 0.1, lattice=True)
    with pytest.raises(HamforgeError):
        PassManager('no_y_pauli', 0.0, 0.1)


def test_compile_locality_reduction_compile_only():
    """4-локальная строка без сертификации: выход 2-локальный, предупреждение об оценке Δ."""
    h = Hamiltonian(4, 2, (PauliTerm((0, 1, 2, 3), "ZZZZ", 1.0), PauliTerm((0,), "X", 0.5)))
    h_out, encoding, plan = compile_hamiltonian(h, 'real_2local_with_fields', 0.1, 0.1)
    assert h_out.k_max <= 2
    audit_family(h_out, 'real_2local_with_fields')
    assert not plan.certified
    assert [p.name for p in plan.applied] == ['locality_reduction']
    assert len(plan.stages) == 2
    assert all(not s.certified for s in plan.stages)


def test_plan_text_is_deterministic():
    """Повторная компиляция даёт тот же текст плана."""
    h = Hamiltonian(2, 2, (PauliTerm((0, 1), "YY", 1.0), PauliTerm((0,), "Z", 0.5)))
    first = compile_hamiltonian(h, 'no_y_pauli', 0.1, 0.1)[2].to_text()
    second = compile_hamiltonian(h, 'no_y_pauli', 0.1, 0.1)[2].to_text()
    assert first == second
    assert "pass[2].name = y_elimination" in first
    assert "pass[0].applied = false" in first


# ---------------------------------------------------------------------------
# Решётка
# ---------------------------------------------------------------------------

def test_lattice_k5_is_grid_subgraph():
    """K5: все взаимодействия симулятора соседние на решётке."""
    terms = tuple(PauliTerm((i, j), "XX", 1.0) for i in range(5) for j in range(i + 1, 5))
    h = Hamiltonian(5, 2, terms)
    h_out, plan = layout_square_lattice(h, 0.1, 0.1)
    embedding = plan.embedding
    assert embedding.mode == 'tracks'
    assert embedding.crossings
    assert embedding.inventory.get('crossing', 0) == len(embedding.crossings)
    assert is_grid_subgraph(h_out.interaction_graph(), embedding)
    assert set(h_out.geometry) == set(range(h_out.n))


def test_lattice_high_degree_uses_forks():
    """Звезда степени 6: изоляция и fork понижают степень до 4."""
    h = Hamiltonian(7, 2, tuple(PauliTerm((0, j), "ZZ", 1.0) for j in range(1, 7)))
    router = LatticeRouter(h, 0.1, 0.1)
    result = router.run()
    assert result.embedding.inventory.get('fork', 0) >= 1
    assert is_grid_subgraph(result.h.interaction_graph(), result.embedding)


def test_lattice_crossing_leaves_no_diagonal_terms():
    """После раундов crossing ни одна пара углов лево-право или верх-низ не связана."""
    terms = tuple(PauliTerm((i, j), "XX", 1.0) for i in range(5) for j in range(i + 1, 5))
    router = LatticeRouter(Hamiltonian(5, 2, terms), 0.1, 0.1)
    result = router.run()
    pairs = {t.sites for t in result.h.terms if len(t.sites) == 2}
    crossings = [item for rnd in router.schedule if rnd.kind == 'crossing' for item in rnd.items]
    assert crossings
    for item in crossings:
        up, right, down, left = item.corners
        assert tuple(sorted((up, down))) not in pairs
        assert tuple(sorted((left, right))) not in pairs


def test_drop_rounding_noise_relative_to_largest_weight():
    """Остатки на уровне машинного эпсилон удаляются, малые настоящие веса остаются."""
    h = Hamiltonian(3, 2, (
        PauliTerm((), "", 5.0),
        PauliTerm((0, 1), "XX", 9e10),
        PauliTerm((0, 2), "XX", 1.5e-5),
        PauliTerm((2,), "Z", 0.5),
    ))
    cleaned, dropped = drop_rounding_noise(h)
    assert dropped == 1
    assert {t.label() for t in cleaned.terms} == {t.label() for t in h.terms if t.sites != (0, 2)}
    same, none = drop_rounding_noise(Hamiltonian(2, 2, (PauliTerm((0, 1), "ZZ", 1e-9),)))
    assert none == 0
    assert len(same.terms) == 1


def test_capped_delta_is_recorded_in_plan(caplog):
    """Затравка Δ выше delta_cap: стадия и план помечают ограничение."""
    ctx = PassContext("square_lattice", tol=DEFAULT_TOLERANCES.with_overrides(delta_cap=1.0))
    g = crossing_gadget(0, 1, 2, 3)
    with caplog.at_level(logging.WARNING, logger="pipeline.passes"):
        _, _, stage, report = run_gadget_stage(g, 0.1, 0.1, ctx, {'crossing': 1}, "crossing")
    assert report is None
    assert stage.capped
    assert stage.delta == 1.0
    assert stage.delta_uncapped > 1.0
    assert any("delta_cap" in rec.getMessage() for rec in caplog.records)
    plan = CompilationPlan("square_lattice")
    plan.passes.append(PassRecord("square_lattice", True, "", 4, 5, False, [stage]))
    text = plan.to_text()
    assert "delta_capped = crossing" in text.splitlines()
    assert f"pass[0].stage[0].delta_uncapped = {stage.delta_uncapped:.12g}" in text.splitlines()
    assert "ограничен delta_cap" in str(stage)


def test_uncapped_stage_reports_none():
    """Без ограничения поле delta_uncapped пусто."""
    ctx = PassContext("square_lattice")
    _, _, stage, _ = run_gadget_stage(crossing_gadget(0, 1, 2, 3), 0.1, 0.1, ctx, {'crossing': 1},
                                      "crossing", estimate=50.0)
    assert not stage.capped
    assert stage.delta == 50.0
    plan = CompilationPlan("square_lattice")
    plan.passes.append(PassRecord("square_lattice", True, "", 4, 5, False, [stage]))
    assert "delta_capped = none" in plan.to_text().splitlines()


def test_lattice_sparse_constant_rounds():
    """Подрешётки 3x3: одно и то же число раундов, Λ_sim растёт полиномиально."""
    sizes = list(range(4, 10))
    lambdas = []
    for n in sizes:
        h_out, plan = layout_square_lattice(_make_lattice(n), 0.2, 0.2, spacing=2)
        assert plan.embedding.mode == 'geometry'
        assert plan.embedding.rounds == 1
        assert is_grid_subgraph(h_out.interaction_graph(), plan.embedding)
        lambdas.append(plan.weight_stats['lambda_sim'])
    assert all(b >= a for a, b in zip(lambdas, lambdas[1:]))
    slope = np.polyfit(np.log(sizes), np.log(lambdas), 1)[0]
    assert slope < 6


def test_lattice_sparse_square_certified():
    """Квадрат 2x2 с шагом 2: сертифицированная раскладка при ε = 0.2."""
    h = _make_lattice(4, cols=2)
    h_out, plan = layout_square_lattice(h, 0.2, 0.2, spacing=2, certify=True)
    assert h_out.n == 8
    assert plan.certified
    assert plan.eps_end_to_end <= 0.2
    assert np.max(np.abs(_lowest(h_out, 16) - _lowest(h, 16))) <= 0.2


def test_lattice_single_edge():
    """Одно ребро: ни fork, ни crossing, O(log длины) раундов разбиения."""
    h = Hamiltonian(2, 2, (PauliTerm((0, 1), "XX", 1.0),))
    h_out, plan = layout_square_lattice(h, 0.1, 0.1)
    embedding = plan.embedding
    assert set(embedding.inventory) == {'subdivision'}
    length = len(embedding.paths[0]) - 1
    assert embedding.rounds <= math.ceil(math.log2(length))
    assert is_grid_subgraph(h_out.interaction_graph(), embedding)


def test_lattice_spacing_one_is_identity():
    """Гамильтониан уже на решётке с шагом 1: раундов нет."""
    h = _make_lattice(4)
    h_out, plan = layout_square_lattice(h, 0.1, 0.1)
    assert plan.embedding.rounds == 0
    assert h_out.n == 4
    assert h_out.geometry == {0: (0, 0), 1: (0, 1), 2: (0, 2), 3: (1, 0)}


def test_lattice_rejects_three_local():
    with pytest.raises(UnsupportedFamily):
        LatticeRouter(Hamiltonian(3, 2, (PauliTerm((0, 1, 2), "ZZZ", 1.0),)), 0.1, 0.1)
