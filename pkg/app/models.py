from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from app.algebra.classify import DvrCatalogObject
from app.algebra.ksdecomp import Certificate, DecompositionResult
from app.algebra.linalg import FieldSpec, Matrix
from app.algebra.modrep import ModuleRep
from app.errors import UsageError

Entry = Union[int, str]


class PrimeField(BaseModel):
    """``{"Fp": p}`` in the module exchange format."""
    Fp: int


class ModuleDocument(BaseModel):
    """Module exchange format: row-major action matrices, rationals as ``"num/den"``."""
    field: Union[Literal["Q"], PrimeField]
    dim: int = Field(ge=0)
    x: list[list[Entry]]
    y: list[list[Entry]]

    @model_validator(mode="after")
    def _check_shape(self):
        for name in ("x", "y"):
            rows = getattr(self, name)
            if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
                raise ValueError(f"matrix {name} must be {self.dim}x{self.dim}")
        return self

    def field_spec(self) -> FieldSpec:
        return FieldSpec.rationals() if self.field == "Q" else FieldSpec.prime(self.field.Fp)


def _encode(field: FieldSpec, value) -> Entry:
    if not field.is_rational:
        return int(value)
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def decode_entry(field: FieldSpec, entry: Entry):
    if isinstance(entry, str):
        try:
            value = Fraction(entry.strip())
        except ValueError:
            raise UsageError(f"matrix entry {entry!r} is not an integer or num/den") from None
    else:
        value = Fraction(entry)
    if not field.is_rational and value.denominator != 1:
        raise UsageError(f"entry {entry!r} is not an integer residue for {field}")
    if not field.is_rational and not 0 <= value < field.p:
        raise UsageError(f"entry {entry!r} is not a reduced residue modulo {field.p}")
    return field.scalar(value)


def field_document(field: FieldSpec) -> Union[str, PrimeField]:
    return "Q" if field.is_rational else PrimeField(Fp=field.p)


def matrix_rows(m: Matrix) -> list[list[Entry]]:
    return [[_encode(m.field, v) for v in row] for row in m.to_lists()]


def module_to_document(m: ModuleRep) -> ModuleDocument:
    return ModuleDocument(
        field=field_document(m.field),
        dim=m.dim,
        x=matrix_rows(m.act_x),
        y=matrix_rows(m.act_y),
    )


def module_from_document(doc: ModuleDocument) -> ModuleRep:
    field = doc.field_spec()
    x = [[decode_entry(field, v) for v in row] for row in doc.x]
    y = [[decode_entry(field, v) for v in row] for row in doc.y]
    return ModuleRep.from_rows(field, x, y, doc.dim)


# ── request / response documents ───────────────────────────────────────────

class WordRequest(BaseModel):
    word: str


class ValidationDocument(BaseModel):
    ok: bool
    canonical: Optional[str] = None
    error: Optional[str] = None
    kind: Optional[str] = None
    position: Optional[int] = None
    pair: Optional[list[str]] = None


class ClassificationDocument(BaseModel):
    word: str
    classification: str


class SplitDocument(BaseModel):
    word: str
    sub: str
    quot: str
    split_index: Optional[int] = None
    connector: Optional[str] = None
    sub_classification: str
    quot_classification: str


class BandRequest(BaseModel):
    """A band module M(C, V); V is a Jordan block or the companion of f^power."""
    band: str
    field: str = "32003"
    kind: Literal["jordan", "companion"] = "jordan"
    eigenvalue: Optional[Entry] = None
    size: int = Field(default=1, ge=1)
    poly: list[Entry] = []
    power: int = Field(default=1, ge=1)


class ModulePairRequest(BaseModel):
    source: ModuleDocument
    target: ModuleDocument
    seed: int = 0
    mc_budget: int = Field(default=20, ge=1)


class HomDimDocument(BaseModel):
    hom_dim: int


class IsoDocument(BaseModel):
    isomorphic: bool
    certain: bool
    failure_bound: Optional[float] = None
    reason: str
    witness: Optional[list[list[Entry]]] = None


class DecomposeRequest(BaseModel):
    module: ModuleDocument
    seed: int = 0
    mc_budget: int = Field(default=20, ge=1)


class CertificateDocument(BaseModel):
    kind: str
    method: str
    endo_dim: int
    radical_dim: int
    samples: int
    failure_bound: float


class PartDocument(BaseModel):
    module: ModuleDocument
    multiplicity: int
    certificate: CertificateDocument


class DecompositionDocument(BaseModel):
    dim: int
    parts: list[PartDocument]
    witness: list[list[Entry]]


def certificate_document(cert: Certificate) -> CertificateDocument:
    return CertificateDocument(
        kind=cert.kind,
        method=cert.method,
        endo_dim=cert.endo_dim,
        radical_dim=cert.radical_dim,
        samples=cert.samples,
        failure_bound=cert.failure_bound,
    )


def decomposition_document(result: DecompositionResult) -> DecompositionDocument:
    return DecompositionDocument(
        dim=result.original.dim,
        parts=[
            PartDocument(
                module=module_to_document(p.module),
                multiplicity=p.multiplicity,
                certificate=certificate_document(p.certificate),
            )
            for p in result.parts
        ],
        witness=matrix_rows(result.witness),
    )


class DvrDocument(BaseModel):
    a: int = Field(default=0, ge=0)
    b: int = Field(default=0, ge=0)
    c: int = Field(default=0, ge=0)
    finite: list[int] = []

    def to_object(self) -> DvrCatalogObject:
        return DvrCatalogObject(self.a, self.b, self.c, tuple(self.finite))

    @classmethod
    def from_object(cls, o: DvrCatalogObject) -> "DvrDocument":
        return cls(a=o.a, b=o.b, c=o.c, finite=list(o.finite))
