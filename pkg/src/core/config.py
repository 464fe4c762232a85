"""
Run configuration for staba2.
"""
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import ConfigError
from .settings import SettingsManager

logger = logging.getLogger(__name__)


def get_project_root() -> Path:
    """Get the repository root directory.

    Returns:
        Path: Directory containing ``main.py``
    """
    return Path(__file__).parent.parent.parent


def get_default_config_path() -> Path:
    """Get the path of the bundled TOML configuration.

    Returns:
        Path: Path to ``config/staba2.toml``
    """
    return get_project_root() / "config" / "staba2.toml"


@dataclass(frozen=True)
class Config:
    """Numerical and output settings shared by all commands.

    Attributes:
        quadrature_nodes: Gauss-Legendre nodes per segment period
        cont_step: Largest continuation step near the singular fibres
        clearance: Minimal distance of a continuation path from u = 0 and u = 1
        tie_tol: Width tie tolerance in half turns
        int_tol: Tolerance for measured matrices to count as integral
        output_dir: Where artifacts are written
        descent_cap: Maximal number of tilts in a chamber descent
        ball_radius_guard: Largest allowed exchange graph ball
        workers: Thread pool size for sweeps and checks
        near_wall_tol: Width gap, in half turns, under which samples count as near a wall
    """
    quadrature_nodes: int = 256
    cont_step: float = 0.05
    clearance: float = 0.02
    tie_tol: float = 1e-9
    int_tol: float = 1e-6
    output_dir: str = "output"
    descent_cap: int = 64
    ball_radius_guard: int = 12
    workers: int = 4
    near_wall_tol: float = 1e-3

    def validate(self) -> "Config":
        """Check ranges and return self.

        Raises:
            ConfigError: On the first invalid value
        """
        if self.quadrature_nodes < 16:
            raise ConfigError(f"quadrature_nodes must be at least 16, got {self.quadrature_nodes}")
        for name in ("cont_step", "clearance", "tie_tol", "int_tol", "near_wall_tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.clearance >= 0.5:
            raise ConfigError("clearance must be below 0.5 so paths can pass between 0 and 1")
        if self.descent_cap < 1 or self.ball_radius_guard < 0 or self.workers < 1:
            raise ConfigError("descent_cap, ball_radius_guard and workers must be positive")
        return self

    @classmethod
    def from_settings(cls, settings: SettingsManager) -> "Config":
        try:
            config = cls(
                quadrature_nodes=int(settings.get("numerics.quadrature_nodes")),
                cont_step=float(settings.get("numerics.continuation_step")),
                clearance=float(settings.get("numerics.clearance")),
                tie_tol=float(settings.get("stability.tie_tolerance")),
                int_tol=float(settings.get("numerics.integer_tolerance")),
                output_dir=str(settings.get("output.directory")),
                descent_cap=int(settings.get("stability.descent_cap")),
                ball_radius_guard=int(settings.get("graph.radius_guard")),
                workers=int(settings.get("numerics.workers")),
                near_wall_tol=float(settings.get("stability.near_wall_tolerance")),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid setting value: {e}") from e
        return config.validate()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_settings(
    config_file: Optional[Union[str, Path]] = None,
    env_file: Optional[Union[str, Path]] = ".env",
) -> SettingsManager:
    """Settings layered over the bundled TOML file when no file is given."""
    if config_file is None and get_default_config_path().exists():
        config_file = get_default_config_path()
    return SettingsManager(config_file=config_file, env_file=env_file)


def load_config(
    config_file: Optional[Union[str, Path]] = None,
    env_file: Optional[Union[str, Path]] = ".env",
) -> Config:
    """Build a validated Config from the settings layers.

    Args:
        config_file: TOML file; None means the bundled default if present
        env_file: .env file read when it exists

    Returns:
        Config: The merged configuration
    """
    return Config.from_settings(load_settings(config_file, env_file))
