from fastapi import APIRouter

from app.algebra.ksdecomp import decompose
from app.algebra.linalg import FieldSpec
from app.algebra.modrep import (
    BandParam,
    dual,
    hom_dim,
    is_isomorphic,
    materialize_band,
    materialize_string,
    radical_series,
    socle_series,
)
from app.algebra.strings import parse_band, parse_word
from app.errors import MatlisError
from app.models import (
    BandRequest,
    DecomposeRequest,
    DecompositionDocument,
    HomDimDocument,
    IsoDocument,
    ModuleDocument,
    ModulePairRequest,
    WordRequest,
    decode_entry,
    decomposition_document,
    matrix_rows,
    module_from_document,
    module_to_document,
)
from app.routers.common import http_error

router = APIRouter(prefix="/modules", tags=["modules"])


@router.post("/materialize", response_model=ModuleDocument)
async def materialize(req: WordRequest, field: str = "32003"):
    """String module of a finite word over ``field``."""
    try:
        return module_to_document(materialize_string(parse_word(req.word), FieldSpec.parse(field)))
    except MatlisError as exc:
        raise http_error(exc)


@router.post("/band", response_model=ModuleDocument)
async def band(req: BandRequest):
    try:
        field = FieldSpec.parse(req.field)
        text = req.band if req.band.startswith("band(") else f"band({req.band})"
        if req.kind == "companion":
            param = BandParam.companion([decode_entry(field, c) for c in req.poly], req.power)
        else:
            param = BandParam.jordan(decode_entry(field, req.eigenvalue if req.eigenvalue is not None else 1), req.size)
        return module_to_document(materialize_band(parse_band(text), param, field))
    except MatlisError as exc:
        raise http_error(exc)


@router.post("/dual", response_model=ModuleDocument)
async def dual_module(doc: ModuleDocument):
    try:
        return module_to_document(dual(module_from_document(doc)))
    except MatlisError as exc:
        raise http_error(exc)


@router.post("/soc-series")
async def soc_series(doc: ModuleDocument):
    try:
        m = module_from_document(doc)
    except MatlisError as exc:
        raise http_error(exc)
    return {"dim": m.dim, "socle_series": socle_series(m), "radical_series": radical_series(m)}


@router.post("/hom-dim", response_model=HomDimDocument)
async def hom_dimension(req: ModulePairRequest):
    try:
        return HomDimDocument(hom_dim=hom_dim(module_from_document(req.source), module_from_document(req.target)))
    except MatlisError as exc:
        raise http_error(exc)


@router.post("/iso", response_model=IsoDocument)
async def iso(req: ModulePairRequest):
    try:
        result = is_isomorphic(
            module_from_document(req.source),
            module_from_document(req.target),
            seed=req.seed,
            budget=req.mc_budget,
        )
    except MatlisError as exc:
        raise http_error(exc)
    return IsoDocument(
        isomorphic=result.isomorphic,
        certain=result.certain,
        failure_bound=result.failure_bound,
        reason=result.reason,
        witness=matrix_rows(result.witness) if result.witness is not None else None,
    )


@router.post("/decompose", response_model=DecompositionDocument)
async def decompose_module(req: DecomposeRequest):
    try:
        result = decompose(module_from_document(req.module), seed=req.seed, budget=req.mc_budget)
    except MatlisError as exc:
        raise http_error(exc)
    return decomposition_document(result)
