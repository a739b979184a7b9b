"""
Reading and writing module files in the JSON exchange format.

A module file holds one ``ModuleDocument``; action matrices are stored
row-major so a file round-trips bit-exactly.
"""

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from app.algebra.modrep import ModuleRep
from app.errors import UsageError
from app.models import ModuleDocument, module_from_document, module_to_document


def parse_module_text(text: str) -> ModuleRep:
    """Parse a module document from JSON text.

    Malformed JSON, a wrong shape or an unreduced entry is a usage error;
    actions that break xy = yx = 0 raise ``ModuleInvariantError``.
    """
    try:
        doc = ModuleDocument.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise UsageError(f"invalid module document at {where}: {first['msg']}") from None
    return module_from_document(doc)


def read_module(path: Union[str, Path]) -> ModuleRep:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read module file {path}: {exc.strerror}") from None
    return parse_module_text(text)


def module_json(m: ModuleRep) -> str:
    return json.dumps(module_to_document(m).model_dump(mode="json"), indent=2) + "\n"


def write_module(m: ModuleRep, path: Union[str, Path]) -> None:
    Path(path).write_text(module_json(m), encoding="utf-8")
