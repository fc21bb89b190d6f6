"""JSON file formats for complexes, simplicial maps, analytic map specs and reports."""
import json
from pathlib import Path

import numpy as np

from .complex import Complex
from .errors import FormatError
from .plmap import SimplicialMap

FORMAT_VERSION = 1


def _check_version(data, what):
    if not isinstance(data, dict):
        raise FormatError(f"{what} file must hold a JSON object")
    if data.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{what} file has format_version {data.get('format_version')!r}, expected 1")


def complex_to_dict(c):
    return {
        "format_version": FORMAT_VERSION,
        "ambient_dim": c.ambient_dim,
        "vertices": c.vertices.tolist(),
        "maximal_simplices": [list(t) for t in c.maximal_simplices],
    }


def complex_from_dict(data):
    _check_version(data, "complex")
    try:
        return Complex(
            int(data["ambient_dim"]),
            np.asarray(data["vertices"], dtype=float).reshape(-1, int(data["ambient_dim"])),
            tuple(tuple(t) for t in data["maximal_simplices"]),
        )
    except KeyError as exc:
        raise FormatError(f"complex file is missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed complex file: {exc}") from exc


def load_complex(path):
    return complex_from_dict(read_json(path))


def save_complex(c, path):
    write_json(complex_to_dict(c), path)


def map_to_dict(m, source_path, target_path):
    return {
        "format_version": FORMAT_VERSION,
        "source": str(source_path),
        "target": str(target_path),
        "vertex_images": list(m.vertex_images),
    }


def load_map(path):
    """Load a simplicial map; complex paths are resolved relative to the map file."""
    path = Path(path)
    data = read_json(path)
    _check_version(data, "map")
    try:
        src = load_complex(path.parent / data["source"])
        tgt = load_complex(path.parent / data["target"])
        return SimplicialMap(src, tgt, tuple(data["vertex_images"]))
    except KeyError as exc:
        raise FormatError(f"map file is missing field {exc}") from exc


def save_map(m, path, source_path, target_path):
    write_json(map_to_dict(m, source_path, target_path), path)


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def write_json(data, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")

