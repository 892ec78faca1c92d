"""
ham_io/hamfile.py

Файл гамильтониана (JSON, schema_version = 1).

{
  "schema_version": 1, "n": 2, "d": 2,
  "terms": [{"sites": [0, 1], "pauli": "XX", "weight": 1.0},
            {"sites": [0], "matrix": [[[re, im], ...], ...], "weight": 0.5}],
  "geometry": {"0": [0, 0], ...},        (необязательно)
  "family_tag": "heisenberg"             (необязательно)
}

Запись — с отсортированными ключами и отступом 2; числа пишутся через
repr, поэтому load(store(h)) воспроизводит h побитно.
"""

import json
import math
from typing import Any, Dict, List

import numpy as np

from hamcore.errors import HamforgeError, ParseError
from hamcore.hamiltonian import Hamiltonian
from hamcore.terms import LocalTerm, PauliTerm

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Комплексные матрицы
# ---------------------------------------------------------------------------

def matrix_to_pairs(m) -> List[List[List[float]]]:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(raw: Any, location: str) -> np.ndarray:
    """[[[re, im], ...], ...] -> комплексная матрица."""
    if not isinstance(raw, list) or not raw or not all(isinstance(row, list) for row in raw):
        raise ParseError("ожидалась непустая матрица из строк", location)
    size = len(raw[0])
    out = np.empty((len(raw), size), dtype=complex)
    for i, row in enumerate(raw):
        if len(row) != size:
            raise ParseError(f"строка {i} длины {len(row)}, ожидалось {size}", location)
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(_is_number(x) for x in entry)):
                raise ParseError(f"элемент [{i}][{j}] должен быть парой [re, im]", location)
            out[i, j] = complex(entry[0], entry[1])
    return out


def _is_number(x: Any) -> bool:
    if not isinstance(x, (int, float)) or isinstance(x, bool):
        return False
    try:
        return math.isfinite(x)
    except OverflowError:
        return False


def _require_int(raw: Dict[str, Any], key: str, location: str, minimum: int = 0) -> int:
    value = raw.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParseError(f"поле '{key}' должно быть целым >= {minimum}, получено {value!r}", location)
    return value


# ---------------------------------------------------------------------------
# Гамильтониан
# ---------------------------------------------------------------------------

def term_to_dict(t) -> Dict[str, Any]:
    if isinstance(t, PauliTerm):
        return {'sites': list(t.sites), 'pauli': t.letters, 'weight': t.weight}
    return {'sites': list(t.support), 'matrix': matrix_to_pairs(t.block), 'weight': t.weight}


def hamiltonian_to_dict(h: Hamiltonian) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        'schema_version': SCHEMA_VERSION,
        'n': h.n,
        'd': h.d,
        'terms': [term_to_dict(t) for t in h.terms],
    }
    if h.geometry is not None:
        data['geometry'] = {str(site): [int(r), int(c)] for site, (r, c) in sorted(h.geometry.items())}
    if h.family_tag is not None:
        data['family_tag'] = h.family_tag
    return data


def _term_from_dict(raw: Any, idx: int, d: int):
    location = f"terms[{idx}]"
    if not isinstance(raw, dict):
        raise ParseError("терм должен быть объектом", location)
    sites = raw.get('sites')
    if not isinstance(sites, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in sites):
        raise ParseError("поле 'sites' должно быть списком целых", f"{location}.sites")
    weight = raw.get('weight', 1.0)
    if not _is_number(weight):
        raise ParseError(f"вес должен быть конечным числом, получено {weight!r}", f"{location}.weight")
    has_pauli, has_matrix = 'pauli' in raw, 'matrix' in raw
    if has_pauli == has_matrix:
        raise ParseError("нужно ровно одно из полей 'pauli' и 'matrix'", location)
    try:
        if has_pauli:
            letters = raw['pauli']
            if not isinstance(letters, str):
                raise ParseError("поле 'pauli' должно быть строкой", f"{location}.pauli")
            if d != 2:
                raise ParseError(f"строка Паули допустима только при d = 2 (d = {d})", f"{location}.pauli")
            return PauliTerm(tuple(sites), letters, float(weight))
        block = pairs_to_matrix(raw['matrix'], f"{location}.matrix")
        expected = d ** len(sites)
        if block.shape != (expected, expected):
            raise ParseError(
                f"матрица {block.shape[0]}x{block.shape[1]}, ожидалось {expected}x{expected}",
                f"{location}.matrix",
            )
        return LocalTerm(tuple(sites), block, float(weight))
    except ParseError:
        raise
    except HamforgeError as exc:
        raise ParseError(str(exc), location) from exc


def hamiltonian_from_dict(data: Any) -> Hamiltonian:
    """
    Разбирает словарь файла гамильтониана.

    Raises:
        ParseError: с указанием поля или индекса терма
    """
    if not isinstance(data, dict):
        raise ParseError("корень файла должен быть объектом", "root")
    version = data.get('schema_version')
    if version != SCHEMA_VERSION:
        raise ParseError(f"неподдерживаемая schema_version {version!r}", "schema_version")
    n = _require_int(data, 'n', "n")
    d = _require_int(data, 'd', "d", minimum=2)
    raw_terms = data.get('terms')
    if not isinstance(raw_terms, list):
        raise ParseError("поле 'terms' должно быть списком", "terms")
    terms = [_term_from_dict(raw, idx, d) for idx, raw in enumerate(raw_terms)]

    geometry = None
    if data.get('geometry') is not None:
        raw_geometry = data['geometry']
        if not isinstance(raw_geometry, dict):
            raise ParseError("поле 'geometry' должно быть объектом", "geometry")
        geometry = {}
        for key, node in raw_geometry.items():
            location = f"geometry[{key}]"
            if not str(key).isdigit():
                raise ParseError("ключ должен быть номером узла", location)
            if (not isinstance(node, list) or len(node) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in node)):
                raise ParseError("координаты должны быть парой целых [строка, столбец]", location)
            geometry[int(key)] = (node[0], node[1])

    family_tag = data.get('family_tag')
    if family_tag is not None and not isinstance(family_tag, str):
        raise ParseError("поле 'family_tag' должно быть строкой", "family_tag")
    try:
        return Hamiltonian(n, d, tuple(terms), family_tag, geometry)
    except ParseError:
        raise
    except HamforgeError as exc:
        location = "family_tag" if family_tag is not None else "terms"
        raise ParseError(str(exc), location) from exc


def dumps_hamiltonian(h: Hamiltonian) -> str:
    return json.dumps(hamiltonian_to_dict(h), sort_keys=True, indent=2) + "\n"


def loads_hamiltonian(text: str) -> Hamiltonian:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"некорректный JSON: {exc.msg}", f"строка {exc.lineno}") from exc
    return hamiltonian_from_dict(data)


def save_hamiltonian(h: Hamiltonian, path: str) -> None:
    """Записывает гамильтониан в файл (UTF-8)."""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_hamiltonian(h))


def load_hamiltonian(path: str) -> Hamiltonian:
    """
    Читает файл гамильтониана.

    Raises:
        ParseError: файл не читается или нарушает формат
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"не удалось прочитать файл: {exc}", path) from exc
    return loads_hamiltonian(text)
