import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv
from pydantic import BaseModel

# .envファイルから環境変数を読み込む / Load environment variables from the .env file
load_dotenv()

ENV_PREFIX = "LKS_"


class Settings(BaseModel):
    """Caps and defaults for every search in the package.

    Each field can be overridden with an environment variable named
    ``LKS_<FIELD>`` (e.g. ``LKS_GRAPH_ENUM_CAP=6``).
    """

    max_vertices: int = 64
    graph_enum_cap: int = 7
    tree_enum_cap: int = 9
    exact_path_cap: int = 16
    coloring_cap: int = 7
    max_rotations: int = 3
    heuristic_restarts: int = 64
    output_dir: Path = Path("output")


def _read_environment() -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = os.getenv(f"{ENV_PREFIX}{name.upper()}")
        if raw is not None:
            values[name] = raw
    return values


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    return Settings(**_read_environment())
