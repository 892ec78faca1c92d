"""
tests/test_gadgets.py

Тесты гаджетов:
- расписание Δ и сборка симулятора
- эффективные гамильтонианы гаджетов с медиаторами
- логический кубит K4 (таблицы первого и второго порядка)
- гаджеты-подпространства
- сертифицированный поиск Δ
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import networkx as nx
import numpy as np
import pytest

from hamcore import Hamiltonian, LocalTerm, PauliTerm, assemble, audit_family
from hamcore.errors import (
    BadForm, BadKind, BadOperand, BadPair, BadTopology, HamforgeError, OddYCount,
    OverlapViolation,
)
from hamcore.linalg import operator_norm
from hamcore.terms import pauli_matrix
from gadgets import (
    LogicalQubitGadget, build_simulator, crossing_gadget, delta_for, effective_hamiltonian,
    effective_mismatch, fork_gadget, gadget_report, heisenberg_compile, heisenberg_first_order,
    heisenberg_second_order, logical_coefficients, one_local_deletion_gadget, parallel_merge,
    schedule, second_order_closed_form, subdivision_gadget, subspace3_gadget,
    first_order_table, second_order_table, three_to_two_gadget, xy_variant, y_elimination_gadget,
    DeltaSearch,
)
from gadgets.heisenberg import FIRST_ORDER_EXPECTED, physical_projection
from simcheck import verify_simulation


def _make_zz_subdivision(**kwargs):
    return subdivision_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"), **kwargs)


def _make_yy():
    return y_elimination_gadget(PauliTerm((0, 1), "YY"))


def _make_fork():
    return fork_gadget(0, 1, 2)


def _make_crossing():
    return crossing_gadget(0, 1, 2, 3)


def _make_zzz():
    return three_to_two_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"), PauliTerm((2,), "Z"))


def _has_y(h: Hamiltonian) -> bool:
    return any('Y' in t.letters for t in h.pauli_terms())


def _site_pauli(letter: str, site: int, n: int = 4) -> np.ndarray:
    word = ['I'] * n
    word[site] = letter
    return pauli_matrix("".join(word))


# ---------------------------------------------------------------------------
# Расписание и сборка
# ---------------------------------------------------------------------------

def test_schedule_second_order():
    """Δ = 100, порядок 2: (100, 10, 1) при (H0, H2, H1)."""
    s = schedule(2, 100.0)
    assert s['h0'] == pytest.approx(100.0)
    assert s['h2'] == pytest.approx(10.0)
    assert s['h1'] == pytest.approx(1.0)


def test_schedule_third_order():
    """Δ = 1000, порядок 3: (1000, 100, 10, 1)."""
    s = schedule(3, 1000.0)
    assert [s['h0'], s['h2'], s['h1prime'], s['h1']] == pytest.approx([1000.0, 100.0, 10.0, 1.0])


def test_build_simulator_tags_provenance():
    """Каждый терм симулятора помечен гаджетом и слагаемым."""
    g = _make_zz_subdivision()
    h_sim = build_simulator(g, 100.0)
    assert h_sim.n == 3
    origins = {t.origin for t in h_sim.terms}
    assert origins <= {"subdivision:h0", "subdivision:h2", "subdivision:h1"}
    assert "subdivision:h2" in origins


def test_build_simulator_rejects_nonpositive_delta():
    """Δ <= 0 отклоняется."""
    with pytest.raises(HamforgeError):
        build_simulator(_make_zz_subdivision(), 0.0)


def test_subdivision_low_spectrum_at_large_delta():
    """Δ = 10⁴: нижние собственные значения симулятора близки к спектру ZZ."""
    g = _make_zz_subdivision()
    h_sim = build_simulator(g, 1e4)
    low = np.sort(np.linalg.eigvalsh(assemble(h_sim).entries))[:4]
    assert np.allclose(low, [-1.0, -1.0, 1.0, 1.0], atol=0.05)


# ---------------------------------------------------------------------------
# Гаджеты с медиаторами
# ---------------------------------------------------------------------------

def test_subdivision_effective_is_product():
    """A = B = Z: второй порядок 1 − ZZ, с H1 = 1 эффективный ZZ."""
    g = _make_zz_subdivision()
    eff = effective_hamiltonian(g).entries
    assert np.allclose(eff, pauli_matrix("ZZ"), atol=1e-9)
    assert effective_mismatch(g) < 1e-9


def test_subdivision_of_two_qubit_operand():
    """A = X⊗X на двух узлах, B = Z: симулятор 3-локальный, эффективный A⊗B."""
    g = subdivision_gadget(PauliTerm((0, 1), "XX"), PauliTerm((2,), "Z"))
    assert g.n_sim == 4
    assert build_simulator(g, 10.0).k_max == 3
    assert effective_mismatch(g) < 1e-9


def test_subdivision_of_one_local_operands_is_two_local():
    """1-локальные A, B дают 2-локальный симулятор."""
    g = subdivision_gadget(PauliTerm((0,), "X"), PauliTerm((1,), "Z"))
    assert build_simulator(g, 10.0).k_max == 2


def test_subdivision_overlap_raises():
    """Пересекающиеся носители A и B."""
    with pytest.raises(OverlapViolation):
        subdivision_gadget(PauliTerm((0, 1), "ZZ"), PauliTerm((1,), "X"))


def test_y_elimination_yy():
    """YY: эффективный YY, в симуляторе нет Y."""
    g = _make_yy()
    assert g.n_sim == 3
    assert effective_mismatch(g) < 1e-9
    assert not _has_y(build_simulator(g, 100.0))


def test_y_elimination_with_extra_letters():
    """YYXZ на 4 узлах: 5-кубитный симулятор без Y."""
    g = y_elimination_gadget(PauliTerm((0, 1, 2, 3), "YYXZ", -0.7))
    assert g.n_sim == 5
    assert effective_mismatch(g) < 1e-9
    assert not _has_y(build_simulator(g, 100.0))


def test_y_elimination_rejects_odd_and_zero_counts():
    """Нечётное или нулевое число Y."""
    with pytest.raises(OddYCount):
        y_elimination_gadget(PauliTerm((0, 1), "YX"))
    with pytest.raises(OddYCount):
        y_elimination_gadget(PauliTerm((0, 1), "ZX"))


def test_y_elimination_group_with_common_support():
    """Y0Y1 + 0.5·Y0Y1X2 − 0.3·Y0Y1Z2 одним медиатором."""
    group = [
        PauliTerm((0, 1), "YY", 1.0),
        PauliTerm((0, 1, 2), "YYX", 0.5),
        PauliTerm((0, 1, 2), "YYZ", -0.3),
    ]
    g = y_elimination_gadget(group)
    assert g.mediators == (3,)
    assert effective_mismatch(g) < 1e-9
    assert not _has_y(build_simulator(g, 100.0))


def test_y_elimination_group_needs_common_support():
    """Разные носители букв Y в одной группе."""
    with pytest.raises(BadOperand):
        y_elimination_gadget([PauliTerm((0, 1), "YY"), PauliTerm((1, 2), "YY")])


def test_three_to_two_zzz():
    """ZZZ третьего порядка: точный эффективный гамильтониан, без Y."""
    g = _make_zzz()
    assert g.order == 3
    assert effective_mismatch(g) < 1e-9
    assert not _has_y(build_simulator(g, 1000.0))
    assert build_simulator(g, 1000.0).k_max == 2


def test_three_to_two_mixed_axes():
    """A = X, B = 0.5(X + Z), C = −Z: эффективный A⊗B⊗C."""
    b = LocalTerm((1,), 0.5 * (pauli_matrix("X") + pauli_matrix("Z")))
    g = three_to_two_gadget(PauliTerm((0,), "X"), b, PauliTerm((2,), "Z", -1.0))
    assert effective_mismatch(g) < 1e-9


def test_three_to_two_zero_weight():
    """Нулевой C: эффективный гамильтониан равен нулю."""
    g = three_to_two_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"), PauliTerm((2,), "Z", 0.0))
    assert operator_norm(effective_hamiltonian(g).entries) < 1e-9


def test_three_to_two_rejects_bad_operands():
    """Y в операнде и совпадающие узлы."""
    with pytest.raises(BadOperand):
        three_to_two_gadget(PauliTerm((0,), "Y"), PauliTerm((1,), "Z"), PauliTerm((2,), "Z"))
    with pytest.raises(OverlapViolation):
        three_to_two_gadget(PauliTerm((0,), "X"), PauliTerm((0,), "Z"), PauliTerm((2,), "Z"))


def test_fork_reduces_degree():
    """fork: эффективный X0X1 + X0X2, у узла 0 одно ребро в симуляторе."""
    g = _make_fork()
    assert effective_mismatch(g) < 1e-9
    graph = build_simulator(g, 100.0).interaction_graph()
    assert graph.degree[0] == 1
    assert graph.has_edge(0, g.mediators[0])


def test_crossing_is_planar():
    """crossing: эффективный X0X2 + X1X3, граф симулятора планарен."""
    g = _make_crossing()
    assert effective_mismatch(g) < 1e-9
    graph = build_simulator(g, 100.0).interaction_graph()
    planar, _ = nx.check_planarity(graph)
    assert planar
    assert not graph.has_edge(0, 2)
    assert not graph.has_edge(1, 3)


def test_crossing_with_unequal_weights():
    """Разные веса диагоналей."""
    g = crossing_gadget(0, 1, 2, 3, w1=0.5, w2=-0.3)
    assert effective_mismatch(g) < 1e-9


def test_crossing_with_mixed_letters():
    """Z0X2 и X1Z3 через одну звезду; диагонали в симуляторе отсутствуют."""
    g = crossing_gadget(0, 1, 2, 3, w1=0.8, w2=-1.2, letters={0: 'Z', 1: 'X', 2: 'X', 3: 'Z'})
    assert effective_mismatch(g) < 1e-9
    graph = build_simulator(g, 100.0).interaction_graph()
    assert not graph.has_edge(0, 2)
    assert not graph.has_edge(1, 3)


def test_crossing_h1_has_no_diagonals_at_large_weights():
    """При весах ~1e11 в H1 нет диагональных строк: сокращать нечего."""
    g = crossing_gadget(0, 1, 2, 3, w1=-8.944271909999e10, w2=3.7)
    pairs = {t.sites for t in g.h1.terms if len(t.sites) == 2}
    assert pairs == {(0, 1), (1, 2), (2, 3), (0, 3)}
    sim = build_simulator(g, 1e12)
    assert not sim.interaction_graph().has_edge(0, 2)
    assert not sim.interaction_graph().has_edge(1, 3)
    small = crossing_gadget(0, 1, 2, 3, w1=-0.9, w2=3.7)
    assert effective_mismatch(small) < 1e-9


def test_topology_errors():
    """Совпадающие узлы fork и crossing."""
    with pytest.raises(BadTopology):
        fork_gadget(0, 0, 1)
    with pytest.raises(BadTopology):
        crossing_gadget(0, 1, 2, 2)


def test_gadget_report():
    """Сводка по гаджету."""
    r = gadget_report(_make_zz_subdivision())
    assert r.order == 2
    assert r.n_sim == 3
    assert r.mediators == 1
    assert r.lambda_norm == pytest.approx(np.sqrt(2.0), rel=1e-9)


# ---------------------------------------------------------------------------
# parallel_merge
# ---------------------------------------------------------------------------

def test_parallel_merge_sums_effective():
    """Два subdivision на непересекающихся парах: эффективный Z0Z1 + X2X3."""
    g1 = subdivision_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"), n_target=4, mediator=4)
    g2 = subdivision_gadget(PauliTerm((2,), "X"), PauliTerm((3,), "X"), n_target=4, mediator=5)
    merged = parallel_merge([g1, g2])
    assert merged.n_sim == 6
    expected = pauli_matrix("ZZII") + pauli_matrix("IIXX")
    assert np.allclose(effective_hamiltonian(merged).entries, expected, atol=1e-9)
    assert effective_mismatch(merged) < 1e-9


def test_parallel_merge_single_and_empty():
    """Один гаджет возвращается как есть, пустой список отклоняется."""
    g = _make_zz_subdivision()
    assert parallel_merge([g]) is g
    with pytest.raises(BadForm):
        parallel_merge([])


def test_parallel_merge_overlapping_mediators():
    """Общий медиатор."""
    g1 = subdivision_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"), n_target=4, mediator=4)
    g2 = subdivision_gadget(PauliTerm((2,), "X"), PauliTerm((3,), "X"), n_target=4, mediator=4)
    with pytest.raises(OverlapViolation):
        parallel_merge([g1, g2])


def test_parallel_merge_rejects_mixed_orders():
    """Гаджеты разных порядков."""
    with pytest.raises(BadForm):
        parallel_merge([_make_zz_subdivision(n_target=3), _make_zzz()])


# ---------------------------------------------------------------------------
# Логический кубит K4
# ---------------------------------------------------------------------------

def test_k4_heisenberg_spectrum():
    """H0 = Σ(XX+YY+ZZ) + 6: собственные значения {0, 4, 12} с кратностями {2, 9, 5}."""
    values = np.linalg.eigvalsh(LogicalQubitGadget().local_h0())
    for level, count in ((0.0, 2), (4.0, 9), (12.0, 5)):
        assert int(np.sum(np.abs(values - level) < 1e-9)) == count


def test_k4_xy_ground_space_and_gap():
    """XY: то же основное пространство, щель 2."""
    gadget = LogicalQubitGadget(interaction='xy')
    values = np.sort(np.linalg.eigvalsh(gadget.local_h0()))
    assert np.allclose(values[:2], 0.0, atol=1e-9)
    assert values[2] == pytest.approx(2.0, abs=1e-9)
    assert gadget.defect() < 1e-10
    assert LogicalQubitGadget().defect() < 1e-10


def test_k4_rejects_bad_sites():
    """Повторяющиеся узлы блока."""
    with pytest.raises(BadTopology):
        LogicalQubitGadget((0, 1, 1, 2))


def test_first_order_table():
    """Все шесть пар K4 совпадают с таблицей первого порядка."""
    for row in first_order_table():
        x, z, c = FIRST_ORDER_EXPECTED[row.pair]
        assert row.x == pytest.approx(x, abs=1e-9)
        assert row.z == pytest.approx(z, abs=1e-9)
        assert row.identity == pytest.approx(c, abs=1e-9)


def test_first_order_table_row_text():
    """Строка (1,3) печатается как −2/3 Z_L − 1/3 I."""
    row = [r for r in first_order_table() if r.pair == (1, 3)][0]
    assert str(row) == f"(1,3): {-2 / 3:+.12g} Z_L {-1 / 3:+.12g} I"


def test_xy_first_order_scaled():
    """XY: первый порядок равен 2/3 гейзенберговского."""
    xy_first = xy_variant(heisenberg_first_order)
    for pair in FIRST_ORDER_EXPECTED:
        heis = heisenberg_first_order(pair).entries
        assert np.allclose(xy_first(pair).entries, 2.0 / 3.0 * heis, atol=1e-10)


def test_pauli_projections_equal():
    """Π XX Π = Π YY Π = Π ZZ Π, перекрёстные проекции равны нулю."""
    for pair in FIRST_ORDER_EXPECTED:
        xx = physical_projection('XX', pair)
        assert np.allclose(physical_projection('YY', pair), xx, atol=1e-10)
        assert np.allclose(physical_projection('ZZ', pair), xx, atol=1e-10)
        for letters in ('XY', 'XZ', 'YZ'):
            assert operator_norm(physical_projection(letters, pair)) < 1e-10


def test_single_pauli_maps_into_level_four():
    """σ_i переводит основное пространство в собственное пространство 4."""
    gadget = LogicalQubitGadget()
    h0 = gadget.local_h0()
    basis = gadget.logical_basis
    for site in range(4):
        for letter in 'XYZ':
            image = _site_pauli(letter, site) @ basis
            assert np.allclose(h0 @ image, 4.0 * image, atol=1e-9)
            assert np.linalg.matrix_rank(image, tol=1e-9) == 2


def test_first_order_bad_pair():
    """Неверные пары вершин."""
    for pair in ((1, 1), (0, 2), (1, 5)):
        with pytest.raises(BadPair):
            heisenberg_first_order(pair)


def test_second_order_signs_and_residuals():
    """Строки таблицы второго порядка: правильный знак, остаток <= 1e-8."""
    rows = second_order_table()
    assert len(rows) == 6
    for row in rows:
        assert row.sign_ok, str(row)
        assert row.scale > 0
        assert row.residual <= 1e-8
    assert rows[0].scale == pytest.approx(1.0 / 3.0, rel=1e-9)
    assert rows[4].scale == pytest.approx(1.0, rel=1e-9)


def test_second_order_xy_scale():
    """XY: масштабы второго порядка в 4/3 раза больше."""
    heis = second_order_table()
    xy = second_order_table('xy')
    for a, b in zip(heis, xy):
        assert b.sign_ok
        assert b.scale == pytest.approx(4.0 / 3.0 * a.scale, rel=1e-9)


@pytest.mark.parametrize("interaction", ['heisenberg', 'xy'])
def test_second_order_closed_form_matches_oracle(interaction):
    """Замкнутая формула совпадает с 8-кубитным расчётом."""
    rng = np.random.default_rng(3)
    weights = rng.normal(size=(4, 4)) * 0.5
    oracle = heisenberg_second_order(weights, interaction).entries
    closed = second_order_closed_form(weights, interaction).entries
    assert np.allclose(oracle, closed, atol=1e-9)


def test_second_order_overlapping_blocks():
    """Пересекающиеся блоки K4."""
    with pytest.raises(OverlapViolation):
        heisenberg_second_order(np.eye(4), sites=((0, 1, 2, 3), (3, 4, 5, 6)))


def test_heisenberg_compile_effective_and_family():
    """Компиляция 2-кубитного вещественного гамильтониана в гейзенберговский симулятор."""
    g = heisenberg_compile(2, {(0, 1): [[0.3, 0.0], [0.1, 0.2]]}, {0: (0.1, 0.2), 1: (0.0, -0.1)})
    assert g.n_sim == 8
    assert effective_mismatch(g) < 1e-8
    audit_family(build_simulator(g, 100.0), 'heisenberg')


def test_heisenberg_compile_bad_pair():
    """Пара вне диапазона логических узлов."""
    with pytest.raises(BadPair):
        heisenberg_compile(2, {(0, 2): [[1.0, 0.0], [0.0, 0.0]]})


# ---------------------------------------------------------------------------
# Гаджеты-подпространства
# ---------------------------------------------------------------------------

def test_one_local_deletion_heisenberg_with_field():
    """XX + YY + ZZ + Z⊗1 + 1⊗Z: остаётся гейзенберговская часть."""
    h = sum(pauli_matrix(p) for p in ('XX', 'YY', 'ZZ', 'ZI', 'IZ'))
    g = one_local_deletion_gadget(h)
    assert g.order == 1
    assert g.n_sim == 10
    coeffs = logical_coefficients(effective_hamiltonian(g), 2)
    for word in ('XX', 'YY', 'ZZ'):
        assert coeffs[word] == pytest.approx(1.0, abs=1e-9)
    for word in ('ZI', 'IZ', 'XI', 'IX'):
        assert abs(coeffs[word]) < 1e-6


def test_one_local_deletion_without_field():
    """A = 0: эффективный гамильтониан совпадает с h."""
    h = sum(pauli_matrix(p) for p in ('XX', 'YY', 'ZZ'))
    g = one_local_deletion_gadget(h)
    assert np.allclose(effective_hamiltonian(g).entries, h, atol=1e-9)


def test_one_local_deletion_rejects_mixed_form():
    """Несимметричная локальная часть."""
    h = pauli_matrix('XX') + pauli_matrix('ZI')
    with pytest.raises(BadForm):
        one_local_deletion_gadget(h)


def test_subspace3_kind_one_ground_space():
    """Тип 1, α = 0.5: основное пространство тройки двумерно."""
    result = subspace3_gadget(1, alpha=0.5)
    basis = result.basis
    assert basis.shape == (8, 2)
    assert np.allclose(basis.conj().T @ basis, np.eye(2), atol=1e-10)
    assert result.gap > 0
    allowed = {'II', 'XX', 'YY', 'ZZ'}
    for word, value in result.coefficients.items():
        if word not in allowed:
            assert abs(value) < 1e-10


def test_subspace3_kind_three_is_u1_symmetric():
    """Тип 3: эффективная связь сохраняет Z_L⊗1 + 1⊗Z_L, XX = YY."""
    result = subspace3_gadget(3)
    m = result.effective.entries
    total = pauli_matrix('ZI') + pauli_matrix('IZ')
    assert operator_norm(m @ total - total @ m) < 1e-9
    assert result.coefficients['XX'] == pytest.approx(result.coefficients['YY'], abs=1e-9)


def test_subspace3_kind_two_records_alpha_prime():
    """Тип 2 (гейзенберговский случай): связь изотропна, XX = YY = ZZ."""
    result = subspace3_gadget(2, alpha=1.0, beta=1.0)
    assert effective_mismatch(result.gadget) < 1e-9
    c = result.coefficients
    assert c['XX'] == pytest.approx(c['YY'], abs=1e-9)
    assert c['XX'] == pytest.approx(c['ZZ'], abs=1e-9)


def test_subspace3_bad_kind():
    """Неизвестная строка и α = 0."""
    with pytest.raises(BadKind):
        subspace3_gadget(4)
    with pytest.raises(BadKind):
        subspace3_gadget(1, alpha=0.0)


# ---------------------------------------------------------------------------
# Поиск Δ
# ---------------------------------------------------------------------------

SWEEP = {
    'subdivision': _make_zz_subdivision,
    'y_elimination': _make_yy,
    'fork': _make_fork,
    'crossing': _make_crossing,
    'three_to_two': _make_zzz,
}


@pytest.mark.parametrize("eps", [0.2, 0.1])
@pytest.mark.parametrize("name", sorted(SWEEP))
def test_delta_for_certifies(name, eps):
    """delta_for находит Δ, при котором проверка (Δ/2, η, ε) проходит."""
    g = SWEEP[name]()
    search = DeltaSearch(g, eps, eps)
    delta = search.run()
    assert search.report is not None and search.report.passed
    report = verify_simulation(g.target, build_simulator(g, delta), g.simulator_encoding(),
                               delta / 2, eps, eps)
    assert report.passed
    assert max(report.per_eigenvalue_errors or [0.0]) <= eps


def test_delta_for_monotone_in_eps():
    """Меньшее ε не даёт меньшего Δ."""
    g = _make_zz_subdivision()
    assert delta_for(g, 0.1, 0.1) >= delta_for(g, 0.2, 0.2)
    assert delta_for(g, 0.1, 0.1) <= 1e7


def test_delta_for_rejects_nonpositive():
    """ε <= 0."""
    with pytest.raises(HamforgeError):
        delta_for(_make_zz_subdivision(), 0.0, 0.1)
