from fastapi import APIRouter, HTTPException

from app.algebra.classify import arno_split, classify_word
from app.algebra.strings import (
    PeriodicWord,
    canonical_band,
    canonical_form,
    inverse_band,
    inverse_word,
    parse_any,
    parse_word,
    serialize_band,
    serialize_word,
    truncate_end,
    validate,
)
from app.errors import MatlisError
from app.models import ClassificationDocument, SplitDocument, ValidationDocument, WordRequest
from app.routers.common import http_error

router = APIRouter(prefix="/words", tags=["words"])


def _spell(word) -> str:
    return serialize_band(word) if isinstance(word, PeriodicWord) else serialize_word(word)


@router.post("/validate", response_model=ValidationDocument)
async def validate_word(req: WordRequest):
    """Grammar and forbidden-pair check; never fails, the verdict is in the body."""
    report = validate(req.word)
    return ValidationDocument(
        ok=report.ok,
        canonical=report.canonical,
        error=report.error,
        kind=report.kind,
        position=report.position,
        pair=list(report.pair) if report.pair else None,
    )


@router.post("/classify", response_model=ClassificationDocument)
async def classify(req: WordRequest):
    try:
        w = parse_word(req.word)
    except MatlisError as exc:
        raise http_error(exc)
    return ClassificationDocument(word=serialize_word(w), classification=classify_word(w).value)


@router.post("/canon")
async def canon(req: WordRequest):
    try:
        word = parse_any(req.word)
    except MatlisError as exc:
        raise http_error(exc)
    result = canonical_band(word) if isinstance(word, PeriodicWord) else canonical_form(word)
    return {"word": _spell(word), "canonical": _spell(result)}


@router.post("/dual")
async def dual_word(req: WordRequest):
    try:
        word = parse_any(req.word)
    except MatlisError as exc:
        raise http_error(exc)
    result = inverse_band(word) if isinstance(word, PeriodicWord) else inverse_word(word)
    return {"word": _spell(word), "dual": _spell(result)}


@router.post("/split", response_model=SplitDocument)
async def split(req: WordRequest):
    try:
        w = parse_word(req.word)
    except MatlisError as exc:
        raise http_error(exc)
    result = arno_split(w)
    return SplitDocument(
        word=serialize_word(w),
        sub=serialize_word(result.sub),
        quot=serialize_word(result.quot),
        split_index=result.split_index,
        connector=result.connector.value if result.connector else None,
        sub_classification=classify_word(result.sub).value,
        quot_classification=classify_word(result.quot).value,
    )


@router.post("/truncate")
async def truncate(req: WordRequest, depth: int):
    if depth < 0:
        raise HTTPException(status_code=422, detail="depth must be nonnegative")
    try:
        w = truncate_end(parse_word(req.word), depth)
    except MatlisError as exc:
        raise http_error(exc)
    return {"word": req.word, "depth": depth, "truncated": serialize_word(w)}
