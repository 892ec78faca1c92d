"""
ham_io/encfile.py

Файл кодирования (JSON): V хранится плотно, вместе с проекторами и
блоками локальности.

{schema_version, dim_in, anc_dim, p, q, v, proj_p, proj_q, locality,
 n_in, d_in, n_out, d_out}; комплексные числа — пары [re, im].
"""

import json
from typing import Any, Dict, Optional

from hamcore.config import get_dim_cap
from hamcore.errors import DimensionCap, HamforgeError, ParseError
from encoding.core import Encoding, LocalBlock

from .hamfile import SCHEMA_VERSION, matrix_to_pairs, pairs_to_matrix


def _block_to_dict(b: LocalBlock) -> Dict[str, Any]:
    return {
        'orig_site': b.orig_site,
        'sim_sites': list(b.sim_sites),
        'v': matrix_to_pairs(b.v),
        'anc_dim': b.anc_dim,
        'proj_p': matrix_to_pairs(b.proj_p),
        'proj_q': matrix_to_pairs(b.proj_q),
    }


def encoding_to_dict(e: Encoding) -> Dict[str, Any]:
    """
    Raises:
        DimensionCap: dim_out больше dim_cap
    """
    cap = get_dim_cap()
    if e.dim_out > cap:
        raise DimensionCap(f"Кодирование с dim_out = {e.dim_out} не сохраняется (dim_cap = {cap})")
    return {
        'schema_version': SCHEMA_VERSION,
        'dim_in': e.dim_in,
        'anc_dim': e.anc_dim,
        'p': e.p,
        'q': e.q,
        'v': matrix_to_pairs(e.v),
        'proj_p': matrix_to_pairs(e.proj_p),
        'proj_q': matrix_to_pairs(e.proj_q),
        'locality': None if e.locality is None else [_block_to_dict(b) for b in e.locality],
        'n_in': e.n_in,
        'd_in': e.d_in,
        'n_out': e.n_out,
        'd_out': e.d_out,
    }


def _optional_int(data: Dict[str, Any], key: str) -> Optional[int]:
    value = data.get(key)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"ожидалось целое, получено {value!r}", key)
    return value


def _block_from_dict(raw: Any, idx: int) -> LocalBlock:
    location = f"locality[{idx}]"
    if not isinstance(raw, dict):
        raise ParseError("блок должен быть объектом", location)
    try:
        return LocalBlock(
            int(raw['orig_site']), tuple(int(s) for s in raw['sim_sites']),
            pairs_to_matrix(raw['v'], f"{location}.v"), int(raw['anc_dim']),
            pairs_to_matrix(raw['proj_p'], f"{location}.proj_p"),
            pairs_to_matrix(raw['proj_q'], f"{location}.proj_q"),
        )
    except ParseError:
        raise
    except KeyError as exc:
        raise ParseError(f"нет поля {exc}", location) from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), location) from exc


def encoding_from_dict(data: Any) -> Encoding:
    if not isinstance(data, dict):
        raise ParseError("корень файла должен быть объектом", "root")
    if data.get('schema_version') != SCHEMA_VERSION:
        raise ParseError(f"неподдерживаемая schema_version {data.get('schema_version')!r}", "schema_version")
    for key in ('dim_in', 'anc_dim', 'v', 'proj_p', 'proj_q'):
        if key not in data:
            raise ParseError("обязательное поле отсутствует", key)
    dim_in, anc_dim = _optional_int(data, "dim_in"), _optional_int(data, "anc_dim")
    if dim_in is None or dim_in < 1 or anc_dim is None or anc_dim < 1:
        raise ParseError("dim_in и anc_dim должны быть положительными целыми", "dim_in")
    locality = data.get('locality')
    if locality is not None and not isinstance(locality, list):
        raise ParseError("поле 'locality' должно быть списком", "locality")
    blocks = None if locality is None else tuple(_block_from_dict(b, i) for i, b in enumerate(locality))
    try:
        e = Encoding(
            pairs_to_matrix(data['v'], "v"), dim_in, anc_dim,
            pairs_to_matrix(data['proj_p'], "proj_p"), pairs_to_matrix(data['proj_q'], "proj_q"),
            blocks, _optional_int(data, 'n_in'), _optional_int(data, 'd_in'),
            _optional_int(data, 'n_out'), _optional_int(data, 'd_out'),
        )
    except ParseError:
        raise
    except HamforgeError as exc:
        raise ParseError(str(exc), "v") from exc
    for key in ('p', 'q'):
        if key in data and data[key] != getattr(e, key):
            raise ParseError(f"ранг проектора {getattr(e, key)} не совпадает с {data[key]!r}", key)
    return e


def save_encoding(e: Encoding, path: str) -> None:
    """Записывает кодирование; DimensionCap, если V слишком велика."""
    data = encoding_to_dict(e)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, sort_keys=True, indent=2)
        f.write("\n")


def load_encoding(path: str) -> Encoding:
    """
    Raises:
        ParseError: файл не читается или нарушает формат
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"некорректный JSON: {exc.msg}", f"строка {exc.lineno}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"не удалось прочитать файл: {exc}", path) from exc
    return encoding_from_dict(data)
