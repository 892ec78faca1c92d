"""
encoding/axioms.py

Выборочная проверка аксиом кодирования и свойств локальности.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Sequence, Dict

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES
from hamcore.errors import NotLocalEncoding, BadSupport
from hamcore.linalg import embed_operator, operator_norm
from hamcore.spectrum import as_matrix

from .core import Encoding, assemble_isometry


CONVEX_WEIGHTS = (0.0, 0.25, 0.5, 1.0)


@dataclass
class AxiomReport:
    """Итог проверки аксиом кодирования."""
    passed: bool = True
    worst_deviation: float = 0.0
    flags: List[str] = field(default_factory=list)
    deviations: Dict[str, float] = field(default_factory=dict)

    def record(self, name: str, deviation: float, tol: float) -> None:
        self.deviations[name] = max(self.deviations.get(name, 0.0), deviation)
        self.worst_deviation = max(self.worst_deviation, deviation)
        if deviation > tol and name not in self.flags:
            self.flags.append(name)
            self.passed = False

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL " + ",".join(self.flags)
        return f"{status} (worst deviation {self.worst_deviation:.3g})"


def isometry_defect(e: Encoding) -> float:
    """‖B†V†VB − 1‖, где B — базис носителя P + Q."""
    b = e.support_basis()
    vb = e.v @ b
    return operator_norm(vb.conj().T @ vb - np.eye(b.shape[1]))


def projector_defect(e: Encoding) -> float:
    """Отклонение P, Q от ортогональных проекторов с PQ = 0."""
    p, q = e.proj_p, e.proj_q
    defects = [
        operator_norm(p @ p - p), operator_norm(q @ q - q),
        operator_norm(p - p.conj().T), operator_norm(q - q.conj().T),
        operator_norm(p @ q),
        abs(np.trace(p).real - e.p), abs(np.trace(q).real - e.q),
    ]
    return max(defects)


def locality_defect(e: Encoding) -> float:
    """Отклонение V от ⊗V_i и проверка (P_{E_i} ⊗ 1)P = P, (Q_{E_i} ⊗ 1)Q = Q."""
    if e.locality is None:
        return 0.0
    blocks = e.locality
    v = assemble_isometry(blocks, e.d_in, e.d_out, range(e.n_out))
    worst = operator_norm((v - e.v) @ e.support_basis())
    dims = [b.anc_dim for b in blocks]
    for i, b in enumerate(blocks):
        before = int(np.prod(dims[:i])) if i else 1
        after = int(np.prod(dims[i + 1:])) if i + 1 < len(dims) else 1
        lp = np.kron(np.kron(np.eye(before), b.proj_p), np.eye(after))
        lq = np.kron(np.kron(np.eye(before), b.proj_q), np.eye(after))
        worst = max(worst, operator_norm(lp @ e.proj_p - e.proj_p))
        worst = max(worst, operator_norm(lq @ e.proj_q - e.proj_q))
    return worst


def verify_encoding_axioms(e: Encoding, samples: Sequence, tol: float = DEFAULT_TOLERANCES.tol_eig) -> AxiomReport:
    """
    Проверяет аксиомы кодирования на выборке эрмитовых матриц.

    Для каждой A: эрмитовость E(A) и совпадение спектра на закодированном
    подпространстве с p+q копиями spec(A). Для каждой пары (A, B):
    выпуклость на весах 0, 1/4, 1/2, 1 и мультипликативность E'(AB) = E'(A)E'(B)
    на закодированном подпространстве.

    Returns:
        AxiomReport с флагами IsometryViolation, ProjectorViolation,
        HermiticityViolation, SpectrumViolation, ConvexityViolation,
        MultiplicativityViolation, LocalityViolation
    """
    report = AxiomReport()
    report.record("IsometryViolation", isometry_defect(e), tol)
    report.record("ProjectorViolation", projector_defect(e), tol)
    report.record("LocalityViolation", locality_defect(e), tol)

    basis = e.encoded_basis()
    mats = [as_matrix(a) for a in samples]
    images = [e.extended_apply(a) for a in mats]
    mult = e.multiplicity

    for a, ea in zip(mats, images):
        scale = max(1.0, operator_norm(a))
        report.record("HermiticityViolation", operator_norm(ea - ea.conj().T) / scale, tol)
        restricted = basis.conj().T @ ea @ basis
        restricted = (restricted + restricted.conj().T) / 2
        got = np.linalg.eigvalsh(restricted)
        want = np.sort(np.repeat(np.linalg.eigvalsh((a + a.conj().T) / 2), mult))
        if len(got) != len(want):
            dev = np.inf
        else:
            dev = float(np.max(np.abs(got - want), initial=0.0)) / scale
        report.record("SpectrumViolation", dev, tol)

    for (a, ea), (b, eb) in combinations(list(zip(mats, images)), 2):
        scale = max(1.0, operator_norm(a), operator_norm(b))
        for t in CONVEX_WEIGHTS:
            mix = e.extended_apply(t * a + (1 - t) * b)
            report.record("ConvexityViolation", operator_norm(mix - t * ea - (1 - t) * eb) / scale, tol)
        prod = e.extended_apply(a @ b) - ea @ eb
        report.record(
            "MultiplicativityViolation",
            operator_norm(basis.conj().T @ prod @ basis) / scale ** 2, tol,
        )
    return report


def channel_check(e: Encoding, kraus: Sequence) -> float:
    """
    ‖Σ E'(K)†E'(K) − 1‖ на закодированном подпространстве.

    Для канала с Σ K†K = 1 результат должен быть порядка машинной точности.
    """
    basis = e.encoded_basis()
    total = np.zeros((e.dim_out, e.dim_out), dtype=complex)
    for k in kraus:
        ek = e.extended_apply(as_matrix(k))
        total += ek.conj().T @ ek
    restricted = basis.conj().T @ total @ basis
    return operator_norm(restricted - np.eye(basis.shape[1]))


def local_image(e: Encoding, site: int, a) -> np.ndarray:
    """A'_i = V_i(A ⊗ P_i + Ā ⊗ Q_i)V_i†, продолженное на все узлы симулятора."""
    if e.locality is None:
        raise NotLocalEncoding("Кодирование не несёт локальной структуры")
    a = as_matrix(a)
    block = e.locality[site]
    lifted = np.kron(a, block.proj_p) + np.kron(a.conj(), block.proj_q)
    local = block.v @ lifted @ block.v.conj().T
    return embed_operator(local, block.sim_sites, e.n_out, e.d_out)


def local_action_residual(e: Encoding, site: int, a) -> float:
    """
    ‖E(A_site ⊗ 1) − (A'_site ⊗ 1)E(1)‖.

    Ноль означает, что образ однотельного оператора действует только на
    узлах симулятора, объявленных для site.
    """
    if e.locality is None:
        raise NotLocalEncoding("Кодирование не несёт локальной структуры")
    if not 0 <= site < len(e.locality):
        raise BadSupport(f"Нет блока для узла {site}")
    full = embed_operator(as_matrix(a), [site], e.n_in, e.d_in)
    lhs = e.extended_apply(full)
    rhs = local_image(e, site, a) @ e.encoded_projector()
    return operator_norm(lhs - rhs)
