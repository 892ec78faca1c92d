"""
gadgets/merge.py

Параллельное применение гаджетов.

Гаджеты с медиаторами складываются, если их H0 живут на непересекающихся
множествах медиаторов: перекрёстные члены второго порядка тогда
исчезают, и эффективный гамильтониан равен сумме. Гаджеты-подпространства
разделяют блоки логических кубитов (общий H0), а их H2 связывают разные
пары блоков.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from hamcore.errors import BadForm, OverlapViolation
from hamcore.hamiltonian import Hamiltonian
from hamcore.terms import PauliTerm

from .base import PerturbativeGadget, sorted_state


def _supports(h: Hamiltonian):
    return [set(t.sites) for t in h.terms]


def _check_mediator_gadget(g: PerturbativeGadget) -> None:
    own = set(g.mediators)
    targets = set(range(g.n_target))
    for sites in _supports(g.h0):
        if not sites <= own:
            raise OverlapViolation(f"{g.name}: H0 действует вне своих медиаторов ({sorted(sites)})")
    for part in (g.h2, g.h1) + ((g.h1prime,) if g.h1prime is not None else ()):
        for sites in _supports(part):
            if not sites <= own | targets:
                raise OverlapViolation(
                    f"{g.name}: терм на {sorted(sites)} задевает чужие медиаторы"
                )


def _term_signature(h: Hamiltonian) -> Tuple:
    out = []
    for t in h.terms:
        if isinstance(t, PauliTerm):
            out.append((t.sites, t.letters, round(t.weight, 12)))
        else:
            out.append((t.sites, np.round(t.block * t.weight, 12).tobytes()))
    return tuple(sorted(out, key=repr))


def _merge_ancillas(gs: Sequence[PerturbativeGadget]) -> Dict[int, Tuple[Tuple[int, ...], np.ndarray]]:
    parts: Dict[int, List[Tuple[Tuple[int, ...], np.ndarray]]] = {}
    for g in gs:
        for site, (anc, state) in g.blocks.items():
            parts.setdefault(site, []).append((tuple(anc), np.asarray(state, dtype=complex)))
    merged = {}
    for site, items in parts.items():
        sites: List[int] = []
        state = np.ones(1, dtype=complex)
        for anc, vec in items:
            sites.extend(anc)
            state = np.kron(state, vec)
        merged[site] = sorted_state(sites, state)
    return merged


def parallel_merge(gs: Sequence[PerturbativeGadget], name: str = "parallel") -> PerturbativeGadget:
    """
    Объединяет гаджеты одного порядка в один.

    Raises:
        BadForm: пустой список, разные порядки или типы гаджетов
        OverlapViolation: пересекающиеся медиаторы (или пары логических
            кубитов), либо термы, задевающие чужие медиаторы
    """
    gs = list(gs)
    if not gs:
        raise BadForm("parallel_merge: пустой список гаджетов")
    if len(gs) == 1:
        return gs[0]
    first = gs[0]
    if any(g.order != first.order for g in gs):
        raise BadForm(f"Гаджеты разных порядков: {[g.order for g in gs]}")
    if any(g.kind != first.kind for g in gs):
        raise BadForm(f"Гаджеты разных типов: {[g.kind for g in gs]}")
    if any(g.n_target != first.n_target for g in gs):
        raise BadForm(f"Гаджеты для разного числа целевых узлов: {[g.n_target for g in gs]}")

    n_sim = max(g.n_sim for g in gs)
    if first.kind == 'mediator':
        seen: set = set()
        for g in gs:
            _check_mediator_gadget(g)
            if seen & set(g.mediators):
                raise OverlapViolation(
                    f"{g.name}: медиаторы {sorted(seen & set(g.mediators))} уже заняты"
                )
            seen |= set(g.mediators)
        h0_terms = [t for g in gs for t in g.h0.terms]
        blocks = _merge_ancillas(gs)
        couplings: Tuple = ()
    else:
        signature = _term_signature(first.h0)
        if any(g.n_sim != first.n_sim or _term_signature(g.h0) != signature for g in gs):
            raise OverlapViolation("Гаджеты-подпространства должны разделять одни и те же блоки H0")
        pairs = [p for g in gs for p in g.couplings]
        if len(set(pairs)) != len(pairs):
            raise OverlapViolation(f"Пара логических кубитов связана дважды: {pairs}")
        h0_terms = list(first.h0.terms)
        blocks = dict(first.blocks)
        couplings = tuple(pairs)

    def joined(attr: str) -> Hamiltonian:
        return Hamiltonian(n_sim, 2, tuple(t for g in gs for t in getattr(g, attr).terms))

    h1prime = None
    if first.order == 3:
        h1prime = joined('h1prime')
    return PerturbativeGadget(
        name=name,
        order=first.order,
        n_target=first.n_target,
        n_sim=n_sim,
        h0=Hamiltonian(n_sim, 2, tuple(h0_terms)),
        h1=joined('h1'),
        h2=joined('h2'),
        target=Hamiltonian(first.n_target, 2, tuple(t for g in gs for t in g.target.terms)),
        h1prime=h1prime,
        kind=first.kind,
        blocks=blocks,
        mediators=tuple(m for g in gs for m in g.mediators),
        couplings=couplings,
        h1_block_diagonal=all(g.h1_block_diagonal for g in gs),
        notes={'merged': float(len(gs))},
    )
