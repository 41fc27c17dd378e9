import os
from pathlib import Path
from typing import Optional
from utils.logger import get_logger

logger = get_logger(__name__)

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def write_output(content: str, output_file: str) -> str:
    """
    Write formatted command output to a file, creating parent directories.

    Args:
        content: Text to write
        output_file: Destination path

    Returns:
        The absolute path written
    """
    path = os.path.abspath(output_file)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    logger.info(f"Results saved to {path}")
    return path


def fixture_path(name: str, fixtures_dir: Optional[Path] = None) -> Path:
    return (fixtures_dir or FIXTURES_DIR) / name


def read_fixture(name: str, fixtures_dir: Optional[Path] = None) -> str:
    """Golden file contents, read as bytes-exact text."""
    path = fixture_path(name, fixtures_dir)
    if not path.exists():
        logger.error(f"Fixture not found: {path}")
        raise FileNotFoundError(str(path))
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.read()
