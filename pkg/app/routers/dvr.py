from fastapi import APIRouter

from app.algebra.classify import (
    DvrCatalogObject,
    dvr_add,
    dvr_classify,
    dvr_dual,
    dvr_is_injective,
    dvr_is_projective,
)
from app.errors import MatlisError
from app.models import DvrDocument
from app.routers.common import http_error
from app.utils.dvr_text import format_dvr, parse_dvr

router = APIRouter(prefix="/dvr", tags=["dvr"])


def _object(doc: DvrDocument) -> DvrCatalogObject:
    try:
        return doc.to_object()
    except MatlisError as exc:
        raise http_error(exc)


def _describe(o: DvrCatalogObject) -> dict:
    return {
        "object": DvrDocument.from_object(o).model_dump(),
        "text": format_dvr(o),
        "classification": dvr_classify(o).value,
        "projective": dvr_is_projective(o),
        "injective": dvr_is_injective(o),
    }


@router.get("/parse")
async def parse(text: str):
    """Parse ``"A^a + Q^b + E^c + [d1,...]"`` and describe the object."""
    try:
        return _describe(parse_dvr(text))
    except MatlisError as exc:
        raise http_error(exc)


@router.post("/dual", response_model=DvrDocument)
async def dual(doc: DvrDocument):
    return DvrDocument.from_object(dvr_dual(_object(doc)))


@router.post("/classify")
async def classify(doc: DvrDocument):
    return _describe(_object(doc))


@router.post("/add", response_model=DvrDocument)
async def add(docs: list[DvrDocument]):
    total = DvrCatalogObject()
    for doc in docs:
        total = dvr_add(total, _object(doc))
    return DvrDocument.from_object(total)
