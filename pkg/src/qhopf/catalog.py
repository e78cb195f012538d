"""Built-in algebra definitions, shipped as definition-source files.

Entries are parsed on load so that every suite run exercises the parser;
parsed specs are cached per process.
"""

from __future__ import annotations

from importlib import resources

from .algspec import AlgebraSpec
from .errors import UnknownCatalogEntry
from .parser import parse_spec

ALGEBRAS = ("su2_standard", "su2_nonstandard", "su3")
MODES = ("quantum", "poisson")

_cache: dict = {}


def catalog_names() -> list:
    return [f"{a}_{m}" for a in ALGEBRAS for m in MODES]


def catalog_source(name: str, mode: str | None = None) -> str:
    name, mode = _resolve(name, mode)
    path = resources.files("qhopf").joinpath("catalog").joinpath(f"{name}_{mode}.alg")
    return path.read_text(encoding="utf-8")


def catalog_load(name: str, mode: str | None = None) -> AlgebraSpec:
    name, mode = _resolve(name, mode)
    key = (name, mode)
    if key not in _cache:
        _cache[key] = parse_spec(catalog_source(name, mode))
    return _cache[key]


def _resolve(name: str, mode: str | None):
    if mode is None:
        for m in MODES:
            if name.endswith("_" + m):
                return _resolve(name[: -len(m) - 1], m)
        raise UnknownCatalogEntry(name)
    if name not in ALGEBRAS or mode not in MODES:
        raise UnknownCatalogEntry(f"{name}_{mode}")
    return name, mode
