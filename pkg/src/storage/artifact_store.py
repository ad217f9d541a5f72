import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from src.config.settings import settings
from src.models.documents import dump_document

logger = logging.getLogger(__name__)


class ArtifactStore:
    def __init__(self, workdir: Optional[str] = None):
        self.workdir = Path(workdir or settings.AINFTY_WORKDIR)
        self.workdir.mkdir(parents=True, exist_ok=True)

    def _generate_filename(self, pipeline: str, kind: str = "certificate") -> str:
        """Stable names so that repeated runs overwrite the same artifact"""
        return f"{kind}s/{pipeline}.json"

    def write_text(self, relative: str, text: str) -> Path:
        """Write to a temporary sibling, then rename over the target"""
        target = self.workdir / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
        try:
            with os.fdopen(fd, 'w', encoding='utf-8') as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, target)
        except Exception as e:
            logger.error(f"Error writing {target}: {str(e)}")
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.info(f"Artifact written: {target}")
        return target

    def save_document(self, document: BaseModel, pipeline: str, kind: str = "certificate") -> Path:
        return self.write_text(self._generate_filename(pipeline, kind), dump_document(document))

    def read_text(self, relative: str) -> str:
        return (self.workdir / relative).read_text(encoding='utf-8')
