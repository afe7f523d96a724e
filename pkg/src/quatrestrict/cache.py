"""Checksummed on-disk cache of class sets, representation counts and degeneracy maps."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from fractions import Fraction
from pathlib import Path

from .decomposition import HECKE_WINDOW, ComputeStore
from .quaternion.classes import ClassSet
from .quaternion.lattice import Lattice
from .quaternion.orders import OrderLattice

FORMAT_VERSION = 1
CACHE_ENV = "QUATRESTRICT_CACHE_DIR"

log = logging.getLogger(__name__)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "quatrestrict"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def lattice_digest(lat: Lattice) -> str:
    return hashlib.sha256(canonical_json([lat.denom, lat.hnf]).encode()).hexdigest()[:24]


def _encode_class_set(cs: ClassSet) -> dict:
    return {
        "ideals": [[lat.denom, [list(r) for r in lat.hnf]] for lat in cs.ideals],
        "norms": [str(n) for n in cs.norms],
        "units": cs.units,
        "neighbour_prime": cs.neighbour_prime,
        "norm_classes": cs.norm_classes,
    }


def _decode_class_set(order: OrderLattice, data: dict) -> ClassSet:
    ideals = [Lattice(tuple(tuple(r) for r in hnf), denom) for denom, hnf in data["ideals"]]
    return ClassSet(
        order,
        ideals,
        [Fraction(n) for n in data["norms"]],
        list(data["units"]),
        data["neighbour_prime"],
        data["norm_classes"],
    )


class DiskStore(ComputeStore):
    """ComputeStore whose results persist as canonical JSON files with a SHA-256 checksum."""

    def __init__(self, root: Path | str | None = None, window: int = HECKE_WINDOW):
        super().__init__(window)
        self.root = Path(root) if root is not None else default_cache_dir()
        self.hits = 0
        self.misses = 0

    def _path(self, p: int, kind: str, key: str) -> Path:
        return self.root / f"v{FORMAT_VERSION}" / f"p{p}" / f"{kind}-{key}.json"

    def _read(self, path: Path, key: str):
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
        except (OSError, ValueError):
            log.warning("unreadable cache file %s; recomputing", path)
            return None
        if doc.get("version") != FORMAT_VERSION or doc.get("key") != key:
            log.warning("cache version or key mismatch in %s; recomputing", path)
            return None
        payload = doc.get("payload")
        if hashlib.sha256(canonical_json(payload).encode()).hexdigest() != doc.get("sha256"):
            log.warning("checksum mismatch in %s; recomputing", path)
            return None
        self.hits += 1
        return payload

    def _write(self, path: Path, key: str, payload) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {
            "version": FORMAT_VERSION,
            "key": key,
            "payload": payload,
            "sha256": hashlib.sha256(canonical_json(payload).encode()).hexdigest(),
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(canonical_json(doc))
        tmp.replace(path)

    def _class_key(self, order: OrderLattice) -> str:
        return lattice_digest(order.lattice)

    def has_cached(self, order: OrderLattice) -> bool:
        key = self._class_key(order)
        return (self._path(order.alg.p, "classes", key).exists()
                and self._path(order.alg.p, f"counts{self.window}", key).exists())

    def load_class_set(self, order: OrderLattice) -> ClassSet:
        key = self._class_key(order)
        path = self._path(order.alg.p, "classes", key)
        data = self._read(path, key)
        if data is not None:
            return _decode_class_set(order, data)
        self.misses += 1
        cs = super().load_class_set(order)
        self._write(path, key, _encode_class_set(cs))
        return cs

    def load_counts(self, order: OrderLattice):
        key = self._class_key(order)
        path = self._path(order.alg.p, f"counts{self.window}", key)
        data = self._read(path, key)
        if data is not None:
            return data
        self.misses += 1
        table = super().load_counts(order)
        self._write(path, key, table)
        return table

    def load_degeneracy(self, small: OrderLattice, big: OrderLattice) -> list[int]:
        key = f"{self._class_key(small)}-{self._class_key(big)}"
        path = self._path(small.alg.p, "map", key)
        data = self._read(path, key)
        if data is not None:
            return data
        self.misses += 1
        pi = super().load_degeneracy(small, big)
        self._write(path, key, pi)
        return pi

    def store_class_data(self, order: OrderLattice, cs: ClassSet, table) -> None:
        super().store_class_data(order, cs, table)
        key = self._class_key(order)
        self._write(self._path(order.alg.p, "classes", key), key, _encode_class_set(cs))
        self._write(self._path(order.alg.p, f"counts{self.window}", key), key, table)
