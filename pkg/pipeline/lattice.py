"""
pipeline/lattice.py

Раскладка 2-локального кубитного гамильтониана на квадратную решётку.

Каждое 2-локальное слагаемое (strand) прокладывается путём по решётке,
затем пути разбиваются гаджетами subdivision, пока соседние узлы пути не
станут соседями на решётке. Два режима:

geometry — у гамильтониана есть geometry и все strand соединяют соседей;
    координаты растягиваются в spacing раз, пути — прямые отрезки;
tracks — вершины стоят в строке 2 через 16 столбцов, у каждого strand
    своя горизонтальная дорожка; пересечения дорожек с вертикалями
    снимаются гаджетом crossing, вершины степени > 4 заранее
    разветвляются гаджетами fork.

Сначала строится символьное расписание раундов (какие гаджеты, на каких
узлах), потом раунды исполняются с весами текущего симулятора.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import HamforgeError, RoutingFailure, UnsupportedFamily
from hamcore.hamiltonian import Hamiltonian, norm_bound
from hamcore.terms import PauliTerm, pauli_matrix
from encoding.core import Encoding, identity_encoding
from gadgets.base import PerturbativeGadget, place_block, with_passthrough
from gadgets.mediator import crossing_gadget, subdivision_gadget
from gadgets.merge import parallel_merge
from gadgets.search import seed_delta
from simcheck.report import SimulationReport

from .passes import (
    PassContext, chain_groups, compose_all, dense_fits, mediator_groups, pauli_form,
    run_gadget_stage,
)
from .plan import StageRecord, budget_split

logger = logging.getLogger(__name__)

Node = Tuple[int, int]
Key = Tuple[Tuple[int, ...], str]

VERTEX_ROW = 2
VERTEX_STEP = 16
VERTEX_OFFSET = 6
TRACK_TOP = 8
TRACK_STEP = 4
PORTS = ('down', 'left', 'right', 'up')
MAX_DEGREE = 4
MAX_FORK_ROUNDS = 64

# буквы, сохраняющие семейство при раскладке (медиаторы добавляют X и Z)
PRESERVED_FAMILIES = ('tim', 'no_y_pauli', 'real_2local_with_fields')
# остатки округления: |w| не больше NOISE_ULPS машинных эпсилон от max|w|
NOISE_ULPS = 64


def term_key(a: int, la: str, b: int, lb: str) -> Key:
    """Ключ 2-локальной строки (узлы по возрастанию, буквы в том же порядке)."""
    if a < b:
        return (a, b), la + lb
    return (b, a), lb + la


def drop_rounding_noise(h: Hamiltonian, ulps: float = NOISE_ULPS) -> Tuple[Hamiltonian, int]:
    """
    Убирает слагаемые с |w| ≤ ulps·eps_machine·max|w| (остатки округления
    после сборки раунда). Константа сохраняется.

    Returns:
        (гамильтониан без шумовых слагаемых, число удалённых)
    """
    scale = max((abs(t.weight) for t in h.terms if isinstance(t, PauliTerm)), default=0.0)
    cut = ulps * np.finfo(float).eps * scale
    kept = [t for t in h.terms
            if not isinstance(t, PauliTerm) or not t.sites or abs(t.weight) > cut]
    dropped = len(h.terms) - len(kept)
    if not dropped:
        return h, 0
    return h.with_terms(kept, h.family_tag), dropped


@dataclass
class Segment:
    """Strand между узлами a и b с буквами la, lb и путём от a к b."""
    a: int
    la: str
    b: int
    lb: str
    path: List[Node]

    @property
    def key(self) -> Key:
        return term_key(self.a, self.la, self.b, self.lb)


@dataclass
class SubdivideItem:
    key: Key
    a: int
    la: str
    b: int
    lb: str
    mediator: int


@dataclass
class ForkItem:
    vertex: int
    letter: str
    ends: Tuple[Tuple[int, str, Key], Tuple[int, str, Key]]
    mediator: int


@dataclass
class CrossItem:
    corners: Tuple[int, int, int, int]
    letters: Dict[int, str]
    key_vertical: Key
    key_horizontal: Key
    mediator: int


Item = Union[SubdivideItem, ForkItem, CrossItem]


@dataclass
class RoundSpec:
    """Один раунд: параллельно применяемые гаджеты одного вида."""
    name: str
    kind: str
    items: List[Item] = field(default_factory=list)


@dataclass
class GridEmbedding:
    """
    Вложение в решётку.

    graph: nx.grid_2d_graph; positions: узел симулятора -> (строка, столбец);
    paths: исходные пути strand; crossings: узлы-пересечения.
    """
    graph: nx.Graph
    positions: Dict[int, Node]
    paths: List[List[Node]]
    crossings: List[Node]
    inventory: Dict[str, int]
    rounds: int
    mode: str

    @property
    def shape(self) -> Tuple[int, int]:
        rows = 1 + max((r for r, _ in self.graph.nodes), default=0)
        cols = 1 + max((c for _, c in self.graph.nodes), default=0)
        return rows, cols

    def __str__(self) -> str:
        rows, cols = self.shape
        return (
            f"GridEmbedding({self.mode}: {rows}x{cols}, узлов {len(self.positions)}, "
            f"пересечений {len(self.crossings)}, раундов {self.rounds})"
        )


@dataclass
class LatticeResult:
    h: Hamiltonian
    encoding: Optional[Encoding]
    groups: Dict[int, Tuple[int, ...]]
    stages: List[StageRecord]
    reports: List[SimulationReport]
    embedding: GridEmbedding


def is_grid_subgraph(g: nx.Graph, embedding: GridEmbedding) -> bool:
    """Все рёбра g переходят в рёбра решётки при инъективной расстановке узлов."""
    pos = embedding.positions
    if len(set(pos.values())) != len(pos):
        return False
    for u, v in g.edges():
        if u not in pos or v not in pos:
            return False
        if not embedding.graph.has_edge(pos[u], pos[v]):
            return False
    return True


def _straight(p: Node, q: Node) -> List[Node]:
    (r0, c0), (r1, c1) = p, q
    steps = abs(r1 - r0) + abs(c1 - c0)
    dr = (r1 > r0) - (r1 < r0)
    dc = (c1 > c0) - (c1 < c0)
    return [(r0 + k * dr, c0 + k * dc) for k in range(steps + 1)]


class LatticeRouter:
    """
    Маршрутизатор на квадратную решётку.

    plan() строит расписание раундов и расстановку узлов; run() исполняет
    раунды: сертифицированный Δ (certify) или локальная оценка по
    худшему гаджету раунда с бюджетом ε_r/m.
    """

    def __init__(self, h: Hamiltonian, eps: float, eta: float, spacing: int = 1,
                 certify: bool = False, tol: Tolerances = DEFAULT_TOLERANCES,
                 verbose: bool = False):
        if h.d != 2:
            raise UnsupportedFamily(f"Раскладка определена только для кубитов (d = {h.d})")
        if spacing < 1:
            raise HamforgeError(f"Шаг решётки должен быть >= 1: {spacing}")
        self.source = h
        self.h = pauli_form(h)
        if self.h.k_max > 2:
            raise UnsupportedFamily(f"Раскладка требует 2-локальный гамильтониан (k_max = {self.h.k_max})")
        self.eps = eps
        self.eta = eta
        self.spacing = spacing
        self.ctx = PassContext("square_lattice", certify=certify, tol=tol, verbose=verbose)
        self.verbose = verbose
        self.n_sites = h.n
        self.positions: Dict[int, Node] = {}
        self._occupied: set = set()
        self.schedule: List[RoundSpec] = []
        self.crossings: List[Node] = []
        self.paths: List[List[Node]] = []
        self.mode = ""

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"  [{self.__class__.__name__}] {message}")

    def _new_site(self, node: Optional[Node] = None) -> int:
        site = self.n_sites
        self.n_sites += 1
        if node is not None:
            if node in self._occupied:
                raise RoutingFailure(f"Узел решётки {node} уже занят")
            self._place(site, node)
        return site

    def _place(self, site: int, node: Node) -> None:
        self.positions[site] = node
        self._occupied.add(node)

    def strands(self) -> List[Tuple[int, str, int, str]]:
        return [
            (t.sites[0], t.letters[0], t.sites[1], t.letters[1])
            for t in self.h.terms if len(t.sites) == 2
        ]

    # ------------------------------------------------------------------
    # Планирование
    # ------------------------------------------------------------------

    def plan(self) -> None:
        strands = self.strands()
        segments = self._geometry_segments(strands)
        if segments is not None:
            self.mode = 'geometry'
        else:
            self.mode = 'tracks'
            strands = self._plan_fanout(strands)
            segments = self._track_layout(strands)
        self.paths = [list(s.path) for s in segments]
        segments = self._plan_halving(segments)
        if self.crossings:
            self._plan_crossings(segments)
        keys = [s.key for s in segments]
        if len(set(keys)) != len(keys):
            raise RoutingFailure("Два strand совпали по носителю и буквам")
        self._log(f"режим {self.mode}: раундов {len(self.schedule)}, пересечений {len(self.crossings)}")

    def _geometry_segments(self, strands) -> Optional[List[Segment]]:
        geometry = self.source.geometry
        if not geometry or any(i not in geometry for i in range(self.source.n)):
            return None
        coords = {i: tuple(int(x) for x in geometry[i]) for i in range(self.source.n)}
        if len(set(coords.values())) != len(coords):
            return None
        supports = [(a, b) for a, _, b, _ in strands]
        if self.spacing > 1 and len(set(supports)) != len(supports):
            return None
        for a, _, b, _ in strands:
            (ra, ca), (rb, cb) = coords[a], coords[b]
            if abs(ra - rb) + abs(ca - cb) != 1:
                return None
        r_min = min(r for r, _ in coords.values())
        c_min = min(c for _, c in coords.values())
        for i, (r, c) in coords.items():
            self._place(i, (self.spacing * (r - r_min), self.spacing * (c - c_min)))
        return [
            Segment(a, la, b, lb, _straight(self.positions[a], self.positions[b]))
            for a, la, b, lb in strands
        ]

    def _plan_fanout(self, strands):
        """Изолирующее разбиение и раунды fork для вершин степени > 4."""
        degree = Counter(s for a, _, b, _ in strands for s in (a, b))
        high = sorted(v for v, d in degree.items() if d > MAX_DEGREE)
        if not high:
            return strands
        items: List[Item] = []
        out = []
        for a, la, b, lb in strands:
            if a in high or b in high:
                m = self._new_site()
                items.append(SubdivideItem(term_key(a, la, b, lb), a, la, b, lb, m))
                out.extend([(a, la, m, 'X'), (m, 'X', b, lb)])
            else:
                out.append((a, la, b, lb))
        self.schedule.append(RoundSpec("isolate", 'subdivision', items))
        strands = out

        for k in range(MAX_FORK_ROUNDS):
            degree = Counter(s for a, _, b, _ in strands for s in (a, b))
            over = [v for v in high if degree[v] > MAX_DEGREE]
            if not over:
                return strands
            items = []
            used = set()
            added = []
            for v in over:
                by_letter: Dict[str, List[int]] = {}
                for idx, (a, la, b, lb) in enumerate(strands):
                    if idx in used or v not in (a, b):
                        continue
                    by_letter.setdefault(la if a == v else lb, []).append(idx)
                for letter, idxs in sorted(by_letter.items()):
                    for p in range(0, len(idxs) - 1, 2):
                        ends = []
                        for idx in idxs[p:p + 2]:
                            a, la, b, lb = strands[idx]
                            x, lx = (b, lb) if a == v else (a, la)
                            ends.append((x, lx, term_key(a, la, b, lb)))
                        if ends[0][0] == ends[1][0]:
                            raise RoutingFailure(f"fork у вершины {v}: оба ребра ведут в {ends[0][0]}")
                        f = self._new_site()
                        items.append(ForkItem(v, letter, (ends[0], ends[1]), f))
                        used.update(idxs[p:p + 2])
                        (x, lx, _), (y, ly, _) = ends
                        added.extend([(v, letter, f, 'X'), (f, 'X', x, lx), (f, 'X', y, ly), (x, lx, y, ly)])
            if not items:
                break
            strands = [s for idx, s in enumerate(strands) if idx not in used] + added
            self.schedule.append(RoundSpec(f"fork[{k}]", 'fork', items))
        raise RoutingFailure(f"Не удалось понизить степени вершин {high} до {MAX_DEGREE}")

    @staticmethod
    def _port_path(col: int, port: str, bottom: int) -> List[Node]:
        """Путь от вершины (строка 2, col) через порт до строки bottom."""
        top = VERTEX_ROW
        if port == 'down':
            return [(r, col) for r in range(top, bottom + 1)]
        if port in ('left', 'right'):
            step = -1 if port == 'left' else 1
            side = col + 4 * step
            return [(top, col + k * step) for k in range(5)] + [(r, side) for r in range(top + 1, bottom + 1)]
        far = col + 8
        return ([(top, col), (1, col), (0, col)] + [(0, col + k) for k in range(1, 9)]
                + [(r, far) for r in range(1, bottom + 1)])

    def _track_layout(self, strands) -> List[Segment]:
        cols = {k: VERTEX_STEP * k + VERTEX_OFFSET for k in range(self.n_sites)}
        for k, c in cols.items():
            self._place(k, (VERTEX_ROW, c))
        vertex_nodes = set(self.positions.values())
        ports: Counter = Counter()
        segments: List[Segment] = []
        usage: Dict[Node, List[Tuple[int, str]]] = {}
        for s_idx, (a, la, b, lb) in enumerate(strands):
            if a > b:
                a, la, b, lb = b, lb, a, la
            if ports[a] >= len(PORTS) or ports[b] >= len(PORTS):
                raise RoutingFailure(f"У вершины strand ({a}, {b}) не осталось свободных портов")
            bottom = TRACK_TOP + TRACK_STEP * s_idx
            down_a = self._port_path(cols[a], PORTS[ports[a]], bottom)
            down_b = self._port_path(cols[b], PORTS[ports[b]], bottom)
            ports[a] += 1
            ports[b] += 1
            track = _straight(down_a[-1], down_b[-1])
            path = down_a + track[1:] + list(reversed(down_b))[1:]
            for i in range(1, len(path) - 1):
                node = path[i]
                if node in vertex_nodes:
                    raise RoutingFailure(f"Путь strand {s_idx} проходит через вершину {node}")
                prev, nxt = path[i - 1], path[i + 1]
                if prev[1] == nxt[1]:
                    direction = 'v'
                elif prev[0] == nxt[0]:
                    direction = 'h'
                else:
                    direction = 'turn'
                usage.setdefault(node, []).append((s_idx, direction))
            segments.append(Segment(a, la, b, lb, path))

        for node, users in sorted(usage.items()):
            if len(users) == 1:
                continue
            kinds = sorted(d for _, d in users)
            if len(users) != 2 or kinds != ['h', 'v']:
                raise RoutingFailure(f"Узел {node} занят несовместимо: {users}")
            self.crossings.append(node)
        crossing_set = set(self.crossings)
        for r, c in self.crossings:
            for node in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if node in crossing_set:
                    raise RoutingFailure(f"Пересечения {(r, c)} и {node} соседствуют")
            for node in ((r - 1, c - 1), (r - 1, c + 1), (r + 1, c - 1), (r + 1, c + 1)):
                if node in usage or node in vertex_nodes:
                    raise RoutingFailure(f"Диагональная клетка {node} пересечения {(r, c)} занята")
        return segments

    def _plan_halving(self, segments: List[Segment]) -> List[Segment]:
        crossing_set = set(self.crossings)
        k = 0
        while True:
            items: List[Item] = []
            out: List[Segment] = []
            for seg in segments:
                stops = [i for i in range(1, len(seg.path) - 1) if seg.path[i] not in crossing_set]
                if not stops:
                    out.append(seg)
                    continue
                idx = stops[len(stops) // 2]
                m = self._new_site(seg.path[idx])
                items.append(SubdivideItem(seg.key, seg.a, seg.la, seg.b, seg.lb, m))
                out.append(Segment(seg.a, seg.la, m, 'X', seg.path[:idx + 1]))
                out.append(Segment(m, 'X', seg.b, seg.lb, seg.path[idx:]))
            if not items:
                return out
            self.schedule.append(RoundSpec(f"halving[{k}]", 'subdivision', items))
            segments = out
            k += 1

    def _plan_crossings(self, segments: List[Segment]) -> None:
        site_at = {node: site for site, node in self.positions.items()}
        through: Dict[Node, List[Segment]] = {}
        for seg in segments:
            if len(seg.path) == 3:
                through.setdefault(seg.path[1], []).append(seg)
        crossing_items: List[Item] = []
        side_items: List[Item] = []
        for r, c in self.crossings:
            segs = through.get((r, c), [])
            vertical = [s for s in segs if s.path[0][1] == s.path[2][1]]
            horizontal = [s for s in segs if s.path[0][0] == s.path[2][0]]
            if len(vertical) != 1 or len(horizontal) != 1:
                raise RoutingFailure(f"Пересечение {(r, c)}: ожидались одна вертикаль и одна горизонталь")
            v_seg, h_seg = vertical[0], horizontal[0]
            corners = tuple(site_at.get(node) for node in ((r - 1, c), (r, c + 1), (r + 1, c), (r, c - 1)))
            if None in corners:
                raise RoutingFailure(f"Пересечение {(r, c)}: не все углы заняты")
            up, right, down, left = corners
            if {up, down} != {v_seg.a, v_seg.b} or {left, right} != {h_seg.a, h_seg.b}:
                raise RoutingFailure(f"Пересечение {(r, c)}: углы не совпадают с концами strand")
            letters = {v_seg.a: v_seg.la, v_seg.b: v_seg.lb, h_seg.a: h_seg.la, h_seg.b: h_seg.lb}
            e = self._new_site((r, c))
            crossing_items.append(CrossItem(corners, letters, v_seg.key, h_seg.key, e))
            for i, j, diag in ((up, right, (r - 1, c + 1)), (right, down, (r + 1, c + 1)),
                               (down, left, (r + 1, c - 1)), (left, up, (r - 1, c - 1))):
                m = self._new_site(diag)
                side_items.append(SubdivideItem(term_key(i, letters[i], j, letters[j]),
                                                i, letters[i], j, letters[j], m))
        self.schedule.append(RoundSpec("crossing", 'crossing', crossing_items))
        self.schedule.append(RoundSpec("crossing_sides", 'subdivision', side_items))

    # ------------------------------------------------------------------
    # Исполнение
    # ------------------------------------------------------------------

    @staticmethod
    def _weight(coeffs: Dict[Key, float], key: Key) -> float:
        if key not in coeffs:
            raise RoutingFailure(f"Строка {key} отсутствует в текущем симуляторе")
        return coeffs[key]

    def _gadget(self, item: Item, n: int, coeffs: Dict[Key, float]) -> Tuple[PerturbativeGadget, List[Key]]:
        if isinstance(item, SubdivideItem):
            w = self._weight(coeffs, item.key)
            root = math.sqrt(abs(w))
            a = PauliTerm((item.a,), item.la, math.copysign(root, w))
            b = PauliTerm((item.b,), item.lb, root)
            return subdivision_gadget(a, b, n_target=n, mediator=item.mediator), [item.key]
        if isinstance(item, ForkItem):
            (x, lx, kx), (y, ly, ky) = item.ends
            wx, wy = self._weight(coeffs, kx), self._weight(coeffs, ky)
            block = wx * np.kron(pauli_matrix(lx), np.eye(2)) + wy * np.kron(np.eye(2), pauli_matrix(ly))
            a = PauliTerm((item.vertex,), item.letter, 1.0)
            g = subdivision_gadget(a, place_block(block, (x, y)), n_target=n,
                                   mediator=item.mediator, name="fork")
            return g, [kx, ky]
        w1 = self._weight(coeffs, item.key_vertical)
        w2 = self._weight(coeffs, item.key_horizontal)
        g = crossing_gadget(*item.corners, w1=w1, w2=w2, n_target=n, mediator=item.mediator,
                            letters=item.letters)
        return g, [item.key_vertical, item.key_horizontal]

    def _local_estimate(self, gadgets: Sequence[PerturbativeGadget], eps: float, eta: float) -> float:
        """Δ раунда без сертификации: худший гаджет с бюджетом ε/m, η/m."""
        m = len(gadgets)
        c0 = self.ctx.tol.delta_seed_constant
        return max(seed_delta(g, eps / m, eta / m, c0, exact_norm=False) for g in gadgets)

    def run(self) -> LatticeResult:
        self.plan()
        current = self.h
        groups = {i: (i,) for i in range(current.n)}
        stages: List[StageRecord] = []
        reports: List[SimulationReport] = []
        encodings: List[Optional[Encoding]] = []
        inventory: Counter = Counter()
        split = budget_split(self.eps, self.eta, len(self.schedule)) if self.schedule else []
        for r, spec in enumerate(self.schedule):
            eps_r, eta_r = split[r]
            coeffs = {(t.sites, t.letters): t.weight for t in current.terms}
            gadgets: List[PerturbativeGadget] = []
            consumed = set()
            for item in spec.items:
                g, keys = self._gadget(item, current.n, coeffs)
                gadgets.append(g)
                consumed.update(keys)
            rest = [t for t in current.terms if (t.sites, t.letters) not in consumed]
            merged = with_passthrough(parallel_merge(gadgets, name=spec.name), rest)
            estimate = None if self.ctx.certify else self._local_estimate(gadgets, eps_r, eta_r)
            current, enc, stage, report = run_gadget_stage(
                merged, eps_r, eta_r, self.ctx, {spec.kind: len(gadgets)}, spec.name, estimate,
            )
            current, dropped = drop_rounding_noise(current)
            if dropped:
                logger.info("%s: удалено %d слагаемых на уровне округления", spec.name, dropped)
            self._log(str(stage))
            inventory[spec.kind] += len(gadgets)
            groups = chain_groups(groups, mediator_groups(merged))
            stages.append(stage)
            encodings.append(enc)
            if report is not None:
                reports.append(report)

        if current.n != self.n_sites:
            raise RoutingFailure(f"Симулятор на {current.n} узлах, расставлено {self.n_sites}")
        graph = self._grid_graph()
        for t in current.terms:
            if len(t.sites) == 2:
                p, q = (self.positions[s] for s in t.sites)
                if not graph.has_edge(p, q):
                    raise RoutingFailure(f"Строка {t.label()} соединяет несоседние узлы {p}, {q}")
        family = self.source.family_tag if self.source.family_tag in PRESERVED_FAMILIES else None
        h_out = Hamiltonian(current.n, 2, current.terms, family, dict(self.positions))
        if self.schedule:
            encoding = compose_all(encodings)
        else:
            encoding = identity_encoding(h_out.dim, h_out.n, 2) if dense_fits(h_out.n) else None
        embedding = GridEmbedding(
            graph, dict(self.positions), self.paths, list(self.crossings), dict(inventory),
            len(self.schedule), self.mode,
        )
        self._log(str(embedding))
        return LatticeResult(h_out, encoding, groups, stages, reports, embedding)

    def _grid_graph(self) -> nx.Graph:
        nodes = list(self.positions.values())
        rows = 2 + max((r for r, _ in nodes), default=0)
        cols = 2 + max((c for _, c in nodes), default=0)
        return nx.grid_2d_graph(rows, cols)


def layout_square_lattice(h: Hamiltonian, eps: float, eta: float, spacing: int = 1,
                          certify: bool = False, tol: Tolerances = DEFAULT_TOLERANCES,
                          verbose: bool = False):
    """
    Раскладка h на квадратную решётку.

    Returns:
        (гамильтониан с geometry, CompilationPlan с одним проходом square_lattice;
        plan.embedding — GridEmbedding)

    Raises:
        RoutingFailure: раскладка не удалась
        UnsupportedFamily: h не кубитный или не 2-локальный
    """
    # импорт здесь: manager импортирует этот модуль
    from .manager import finish_plan
    from .plan import CompilationPlan, PassRecord

    router = LatticeRouter(h, eps, eta, spacing, certify, tol, verbose)
    result = router.run()
    plan = CompilationPlan(target_family=h.family_tag or 'unrestricted', certify=certify)
    plan.passes.append(PassRecord(
        "square_lattice", True, "запрошена квадратная решётка", h.n, result.h.n,
        stages=result.stages,
    ))
    plan.site_map = result.groups
    plan.budget = {'eps': eps, 'eta': eta, 'split': [(s.eps_budget, s.eta_budget) for s in result.stages]}
    plan.embedding = result.embedding
    finish_plan(plan, h, result.h, result.encoding, result.reports, eps, eta, tol)
    return result.h, plan
