"""
JSON documents carrying named states and/or one POVM.

    {"schema_version": "1",
     "states": {"psi": {"r": [0, 0, 1]}},
     "povm": {"elements": [{"a": 1, "v": [0, 0, 1]}, {"a": 1, "v": [0, 0, -1]}]}}
"""
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import ValidationError

from src.core.config import settings
from src.core.exceptions import DocumentValidationError, ParseError, SchemaError
from src.models import BlochState, PovmSet, UsdDesign
from src.schemas import Document
from src.services.bloch_core import validate_element

logger = logging.getLogger(__name__)

# pydantic error types raised by model invariants rather than by shape checks
INVARIANT_ERROR_TYPES = frozenset({"bloch_norm"})


def _describe(errors: List[dict]) -> str:
    parts = []
    for err in errors:
        location = ".".join(str(p) for p in err["loc"]) or "<document>"
        parts.append(f"{location}: {err['msg']}")
    return "; ".join(parts)


def parse_document(text: Union[str, bytes]) -> Document:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"document is not UTF-8: {e.reason}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno) from None
    if not isinstance(data, dict):
        raise SchemaError("document must be a JSON object")

    try:
        doc = Document.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        if all(err["type"] in INVARIANT_ERROR_TYPES for err in errors):
            raise DocumentValidationError(_describe(errors)) from None
        raise SchemaError(_describe(errors)) from None

    if doc.schema_version != settings.SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {doc.schema_version!r}; expected {settings.SCHEMA_VERSION!r}"
        )
    if doc.povm is not None:
        for i, element in enumerate(doc.povm.elements):
            report = validate_element(element)
            if not report.valid:
                raise DocumentValidationError(f"povm.elements.{i}: {'; '.join(report.issues)}")
    logger.debug(
        "parsed document: %d state(s), %s",
        len(doc.states or {}),
        f"{len(doc.povm)} element(s)" if doc.povm else "no povm",
    )
    return doc


def serialize_document(d: Document) -> str:
    """Canonical form: two-space indent, absent fields omitted."""
    return d.model_dump_json(indent=2, exclude_none=True)


def read_text(path: Union[str, Path]) -> str:
    """Read a document from a file path, or from stdin when path is '-'."""
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_document(path: Union[str, Path]) -> Document:
    return parse_document(read_text(path))


def make_document(
    povm: Optional[PovmSet] = None,
    states: Optional[Dict[str, BlochState]] = None,
) -> Document:
    return Document(schema_version=settings.SCHEMA_VERSION, states=states, povm=povm)


def usd_document(design: UsdDesign) -> Document:
    return make_document(
        povm=design.povm,
        states={"psi": BlochState(r=design.r_psi), "phi": BlochState(r=design.r_phi)},
    )
