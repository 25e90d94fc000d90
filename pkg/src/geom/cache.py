"""
On-disk cache of orbit tables, keyed by content hash
"""

import base64
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import GeometrySettings, get_settings
from src.geom.bundles import BundleCell, bundle_cell
from src.geom.orbits import ENUMERATION_VERSION, Orbit, OrbitTable, enumerate_orbits
from src.rootdata.root_datum import Coweight, RootDatum


logger = logging.getLogger(__name__)


def cache_key(cell: BundleCell) -> str:
    payload = json.dumps(
        {"group": cell.group, "dominant": list(cell.dominant), "q": cell.q, "version": ENUMERATION_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _encode_assignment(assignment: np.ndarray) -> str:
    return base64.b64encode(assignment.astype("<i4").tobytes()).decode("ascii")


def _decode_assignment(text: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(text), dtype="<i4").astype(np.int32)


class GeometryCache:
    """JSON files named by the hash of (group, dominant, q, enumeration version)"""

    def __init__(self, settings: Optional[GeometrySettings] = None):
        self.settings = settings or get_settings().geometry
        self.root = Path(self.settings.cache_dir)

    def path_for(self, cell: BundleCell) -> Path:
        return self.root / f"{cache_key(cell)}.json"

    def load(self, cell: BundleCell) -> Optional[OrbitTable]:
        path = self.path_for(cell)
        if not self.settings.use_cache or not path.exists():
            return None
        try:
            with open(path, "r") as f:
                data = json.load(f)
            orbits = [
                Orbit(o["index"], tuple(o["representative"]), o["size"], o["stabilizer"], o["label"])
                for o in data["orbits"]
            ]
            table = OrbitTable(cell, data["n_flags"], orbits, _decode_assignment(data["assignment"]))
            logger.debug(f"Cache hit for {cell.key}")
            return table
        except (OSError, KeyError, ValueError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None

    def save(self, table: OrbitTable) -> Optional[Path]:
        if not self.settings.use_cache:
            return None
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path_for(table.cell)
        data = table.to_dict()
        data["version"] = ENUMERATION_VERSION
        data["assignment"] = _encode_assignment(table.assignment)
        with open(path, "w") as f:
            json.dump(data, f)
        logger.info(f"Cached {table.cell.key} at {path}")
        return path

    def table(self, cell: BundleCell, budget: Optional[int] = None) -> OrbitTable:
        """Cached table, enumerating on a miss"""
        cached = self.load(cell)
        if cached is not None:
            return cached
        table = enumerate_orbits(cell, budget or self.settings.budget)
        self.save(table)
        return table

    def entries(self) -> List[Dict[str, Any]]:
        if not self.root.exists():
            return []
        out = []
        for path in sorted(self.root.glob("*.json")):
            try:
                with open(path, "r") as f:
                    data = json.load(f)
                out.append(
                    {
                        "file": path.name,
                        "cell": data["cell"],
                        "orbits": len(data["orbits"]),
                        "version": data.get("version"),
                        "bytes": path.stat().st_size,
                    }
                )
            except (OSError, KeyError, ValueError) as e:
                logger.warning(f"Unreadable cache entry {path}: {e}")
        return out

    def clear(self) -> int:
        if not self.root.exists():
            return 0
        removed = 0
        for path in self.root.glob("*.json"):
            path.unlink()
            removed += 1
        logger.info(f"Removed {removed} cache entries from {self.root}")
        return removed

    def warm(self, datum: RootDatum, cells: Sequence[Tuple[Coweight, Sequence[int]]]) -> List[str]:
        """Enumerate and store every (dominant, q) pair not cached yet"""
        warmed = []
        for dominant, q_values in cells:
            for q in q_values:
                cell = bundle_cell(datum, dominant, q)
                if self.path_for(cell).exists():
                    continue
                self.save(enumerate_orbits(cell, self.settings.budget))
                warmed.append(cell.key)
        return warmed
