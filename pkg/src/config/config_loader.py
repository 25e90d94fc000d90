"""
Configuration loader for YAML-based group and golden-table configuration
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, Field

from src.models.data_models import cell_key


logger = logging.getLogger(__name__)


class GeometryCellConfig(BaseModel):
    """A bundle cell enumerated by the geometric oracle"""
    dominant: List[int] = Field(..., description="Dominant coweight of the split bundle")
    q_values: List[int] = Field(default_factory=list, description="Field sizes for this cell")


class MembershipConfig(BaseModel):
    """Search limits for quotient membership"""
    max_j_sites: int = Field(default=1, description="Sites carrying a translation shift")
    window: Optional[int] = Field(default=None, description="Membership window; EISV_VERIFY_WINDOW when unset")


class GroupConfig(BaseModel):
    """Per-group verification configuration"""
    key: str = Field(..., description="Root datum key")
    q_values: List[int] = Field(default_factory=list, description="Field sizes; EISV_GEOM_Q_VALUES when empty")
    cells: List[List[int]] = Field(default_factory=list, description="Dominant coweights for cell dimensions")
    geometry: List[GeometryCellConfig] = Field(default_factory=list)
    membership: MembershipConfig = Field(default_factory=MembershipConfig)
    rank_evidence_radius: int = Field(default=3)


class GoldenTables(BaseModel):
    """Golden values the claims are checked against"""
    dimensions: Dict[str, Dict[str, int]] = Field(default_factory=dict, description="group -> cell -> dim")
    orbit_counts: Dict[str, Dict[str, Dict[int, int]]] = Field(default_factory=dict)
    finite_products: Dict[str, List[Dict[str, str]]] = Field(default_factory=dict)
    cusp: Dict[int, int] = Field(default_factory=dict)
    triples: Dict[str, List[List[str]]] = Field(default_factory=dict, description="group -> relative-position triples")

    def dimension(self, group: str, dominant: tuple) -> Optional[int]:
        return self.dimensions.get(group, {}).get(cell_key(dominant))


class ConfigLoader:
    """Loads and manages YAML-based configurations"""

    def __init__(self, config_dir: str = "config"):
        self.config_dir = Path(config_dir)
        self._groups_config: Optional[Dict[str, Any]] = None
        self._golden_config: Optional[Dict[str, Any]] = None

    def _read_yaml(self, name: str) -> Optional[Dict[str, Any]]:
        config_file = self.config_dir / name
        if not config_file.exists():
            logger.warning(f"Config file not found: {config_file}")
            return None
        with open(config_file, "r") as f:
            return yaml.safe_load(f) or {}

    def load_groups(self) -> Dict[str, GroupConfig]:
        """Load per-group configuration from YAML"""
        try:
            config_data = self._read_yaml("groups.yaml")
            if config_data is None:
                return {}
            self._groups_config = config_data
            groups = {}
            for key, raw in (config_data.get("groups") or {}).items():
                try:
                    groups[key] = GroupConfig(key=key, **raw)
                    logger.info(f"Loaded group config: {key}")
                except Exception as e:
                    logger.error(f"Error parsing group config {key}: {e}")
            return groups
        except Exception as e:
            logger.error(f"Error loading groups configuration: {e}")
            return {}

    def get_group(self, key: str) -> GroupConfig:
        """Group configuration, falling back to defaults for unlisted keys"""
        groups = self.load_groups()
        if key in groups:
            return groups[key]
        logger.warning(f"No configuration for group {key}, using defaults")
        return GroupConfig(key=key)

    def load_golden(self) -> GoldenTables:
        """Load golden tables from YAML"""
        try:
            config_data = self._read_yaml("golden.yaml")
            if config_data is None:
                return GoldenTables()
            self._golden_config = config_data
            golden = GoldenTables(**config_data)
            logger.info("Loaded golden tables")
            return golden
        except Exception as e:
            logger.error(f"Error loading golden tables: {e}")
            return GoldenTables()

    def save_golden(self, golden: GoldenTables) -> Path:
        """Write golden tables back to YAML"""
        config_file = self.config_dir / "golden.yaml"
        self.config_dir.mkdir(parents=True, exist_ok=True)
        with open(config_file, "w") as f:
            yaml.safe_dump(golden.model_dump(), f, sort_keys=True)
        logger.info(f"Golden tables written to {config_file}")
        self._golden_config = None
        return config_file

    def validate_configuration(self) -> Dict[str, List[str]]:
        """Validate all configurations and return any errors"""
        errors: Dict[str, List[str]] = {"groups": [], "golden": []}
        try:
            groups = self.load_groups()
            if not groups:
                errors["groups"].append("No groups configured")
            for key, group in groups.items():
                if group.membership.max_j_sites < 0 or group.membership.max_j_sites > 3:
                    errors["groups"].append(f"{key}: max_j_sites must lie in 0..3")
            golden = self.load_golden()
            if not golden.dimensions:
                errors["golden"].append("No golden dimensions configured")
            for key, triples in golden.triples.items():
                if any(len(t) != 3 for t in triples):
                    errors["golden"].append(f"{key}: every relative-position triple needs three entries")
        except Exception as e:
            errors["general"] = [f"Configuration validation error: {e}"]
        return errors
