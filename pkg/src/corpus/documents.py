"""Document records and corpus readers."""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from src.common.artifacts import require_file
from src.common.errors import OutOfRangeYearError, StageInputError

logger = logging.getLogger(__name__)


class GenderFlag(str, Enum):
    """Whether a research team includes at least one woman."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class Document(BaseModel):
    """One article with its metadata covariates."""

    id: str = Field(..., min_length=1, description="Unique document identifier")
    title: str = Field("", description="Article title")
    abstract: str = Field("", description="Article abstract")
    year: int = Field(..., description="Publication year")
    journal: str = Field(..., min_length=1, description="Journal key")
    n_authors: int = Field(..., ge=1, description="Number of authors")
    has_woman: GenderFlag = Field(
        GenderFlag.UNKNOWN, description="Team includes a woman"
    )
    has_top_tier: bool = Field(False, description="Team has a top-tier affiliation")
    pos_tags: Optional[List[Tuple[str, str]]] = Field(
        None, description="(token, tag) pairs aligned to the normalized text"
    )

    @field_validator("has_woman", mode="before")
    @classmethod
    def parse_gender(cls, v: object) -> object:
        if isinstance(v, bool):
            return GenderFlag.YES if v else GenderFlag.NO
        if v is None:
            return GenderFlag.UNKNOWN
        if isinstance(v, str):
            lowered = v.strip().lower()
            aliases = {"true": GenderFlag.YES, "false": GenderFlag.NO}
            return aliases.get(lowered, lowered)
        return v

    @property
    def text(self) -> str:
        """Title and abstract concatenated."""
        return f"{self.title} {self.abstract}"

    @property
    def has_tags(self) -> bool:
        return self.pos_tags is not None


def validate_corpus(
    documents: Iterable[Document], year_min: int, year_max: int
) -> None:
    """Check corpus-level invariants.

    Args:
        documents: The corpus.
        year_min: Earliest admissible year.
        year_max: Latest admissible year.

    Raises:
        StageInputError: If an id repeats.
        OutOfRangeYearError: If a year lies outside [year_min, year_max].
    """
    seen: Dict[str, int] = {}
    for i, doc in enumerate(documents):
        if doc.id in seen:
            raise StageInputError(
                f"Duplicate document id {doc.id!r} at records {seen[doc.id]} and {i}"
            )
        seen[doc.id] = i
        if not year_min <= doc.year <= year_max:
            raise OutOfRangeYearError(
                f"Document {doc.id!r} has year {doc.year} "
                f"outside [{year_min}, {year_max}]"
            )


def load_corpus(path: Union[str, Path]) -> List[Document]:
    """Read a JSON-lines corpus.

    Args:
        path: File with one JSON object per line; lines starting with # are
            skipped.

    Returns:
        List[Document]: The documents in file order.

    Raises:
        StageInputError: If the file is missing or a record is invalid.
    """
    p = require_file(path)
    documents: List[Document] = []
    with open(p, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                documents.append(Document.model_validate(json.loads(line)))
            except (json.JSONDecodeError, ValidationError) as e:
                raise StageInputError(
                    f"{p}:{line_no}: invalid document record: {e}", path=str(p)
                ) from e
    logger.info(f"Loaded {len(documents)} documents from {p}")
    return documents


def write_corpus(
    documents: Iterable[Document],
    path: Union[str, Path],
    config_hash: Optional[str] = None,
) -> Path:
    """Write documents as JSON lines, after a `# config_hash=` line if hashed."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as f:
        if config_hash:
            f.write(f"# config_hash={config_hash}\n")
        for doc in documents:
            record = doc.model_dump(mode="json", exclude_none=True)
            f.write(json.dumps(record, sort_keys=True))
            f.write("\n")
    return p


def load_lemma_table(path: Optional[Union[str, Path]]) -> Dict[str, str]:
    """Read a two-column tab-separated token/root table.

    Args:
        path: The table file; None gives an empty table.

    Returns:
        Dict[str, str]: token -> root.
    """
    if path is None:
        return {}
    p = require_file(path)
    table: Dict[str, str] = {}
    with open(p, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise StageInputError(
                    f"{p}:{line_no}: expected 'token<TAB>root'", path=str(p)
                )
            table[parts[0].lower()] = parts[1].lower()
    logger.info(f"Loaded {len(table)} lemma entries from {p}")
    return table
