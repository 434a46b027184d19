import asyncio
import csv
import io
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pathvalidate import sanitize_filename

from causevo.io.schema import dumps
from ..config import CONFIG


class ObjectStoreBackend(ABC):
    """Abstract base class for object store backends."""

    @abstractmethod
    async def save_content(self, content: str, path: str) -> str:
        """Save content and return the storage path."""
        pass

    @abstractmethod
    async def read_content(self, path: str) -> Optional[str]:
        """Read content from storage path."""
        pass


class LocalFileSystemBackend(ObjectStoreBackend):
    """Local filesystem backend for object storage."""

    def __init__(self, base_path: str):
        self.base_path = Path(base_path)

    async def save_content(self, content: str, path: str) -> str:
        file_path = self.base_path / path
        file_path.parent.mkdir(parents=True, exist_ok=True)

        loop = asyncio.get_event_loop()
        await loop.run_in_executor(
            None,
            lambda: file_path.write_text(content, encoding='utf-8')
        )
        return str(file_path)

    async def read_content(self, path: str) -> Optional[str]:
        try:
            full_path = self.base_path / path
            loop = asyncio.get_event_loop()
            return await loop.run_in_executor(
                None,
                lambda: full_path.read_text(encoding='utf-8')
            )
        except (FileNotFoundError, IOError):
            return None


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ObjectStore:
    """
    Artifact store for JSON documents and CSV reports of one run.

    JSON is written with sorted keys and two-space indentation; CSV cells hold the
    repr of floats, so identical runs produce identical bytes.
    """

    def __init__(self, base_path: Optional[str] = None):
        self.backend = LocalFileSystemBackend(base_path or CONFIG.OUTPUT_BASE_PATH)

    def sanitize_filename(self, filename: str) -> str:
        """Sanitize filename to be safe for file systems."""
        sanitized = sanitize_filename(filename, replacement_text="_")
        sanitized = sanitized.replace(' ', '_')
        sanitized = ''.join(char for char in sanitized if ord(char) < 128)
        if len(sanitized) > 200:
            sanitized = sanitized[:200]
        return sanitized.strip('_')

    def _filename(self, name: str, extension: str) -> str:
        stem = name[:-len(extension) - 1] if name.endswith(f".{extension}") else name
        return f"{self.sanitize_filename(stem)}.{extension}"

    async def save_json(self, content: Dict[str, Any], filename: str) -> str:
        document = {"schema": CONFIG.REPORT_SCHEMA, **content}
        return await self.backend.save_content(dumps(document) + "\n", self._filename(filename, "json"))

    async def save_csv(self, rows: Sequence[Dict[str, Any]], columns: Sequence[str], filename: str) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["schema", *columns])
        for row in rows:
            writer.writerow([CONFIG.REPORT_SCHEMA, *(format_cell(row.get(c)) for c in columns)])
        return await self.backend.save_content(buffer.getvalue(), self._filename(filename, "csv"))

    async def read_json_text(self, filename: str) -> Optional[str]:
        return await self.backend.read_content(self._filename(filename, "json"))
