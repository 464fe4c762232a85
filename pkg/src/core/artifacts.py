"""Atomic artifact output: JSON reports, CSV sweeps, SVG figures and DOT graphs."""
import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

# Configure logging
logger = logging.getLogger(__name__)


class ArtifactWriter:
    """Writes artifacts into one output directory.

    Every file is written to a temporary file in the same directory and moved into
    place with ``os.replace``, so readers never see a partial artifact.
    """

    def __init__(self, output_dir: Union[str, Path]):
        """Initialize the writer.

        Args:
            output_dir: Directory for the artifacts, created on first write
        """
        self.output_dir = Path(output_dir)
        self.written: List[Path] = []

    def _target(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def write_bytes(self, name: str, data: bytes) -> Path:
        """Atomically write ``data`` to ``output_dir/name``.

        Returns:
            Path: Final path of the artifact
        """
        target = self._target(name)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=self.output_dir)
        try:
            with os.fdopen(fd, 'wb') as f:
                f.write(data)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        self.written.append(target)
        logger.info("Wrote %s", target)
        return target

    def write_text(self, name: str, text: str) -> Path:
        return self.write_bytes(name, text.encode('utf-8'))

    def write_json(self, name: str, data: Any) -> Path:
        return self.write_text(name, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def write_csv(self, name: str, rows: Sequence[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None) -> Path:
        """Write dict rows; the columns default to the keys in first-seen order."""
        if fieldnames is None:
            fieldnames = list(dict.fromkeys(key for row in rows for key in row))
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return self.write_text(name, buffer.getvalue())

    def write_svg(self, name: str, figure) -> Path:
        """Render a matplotlib figure as SVG."""
        buffer = io.BytesIO()
        figure.savefig(buffer, format='svg', bbox_inches='tight', metadata={'Date': None})
        return self.write_bytes(name, buffer.getvalue())

    def write_dot(self, name: str, dot: str) -> Path:
        return self.write_text(name, dot)
