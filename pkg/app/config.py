import os
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.algebra.linalg import DEFAULT_PRIME, FieldSpec
from app.errors import UsageError


class CliConfig(BaseModel):
    """Run-wide settings shared by every subcommand and route."""

    model_config = ConfigDict(validate_default=True)

    field: str = str(DEFAULT_PRIME)
    seed: int = Field(default=0, ge=0, lt=2**64)
    mc_budget: int = Field(default=20, ge=1)
    output: Literal["pretty", "json"] = "pretty"

    @field_validator("field")
    @classmethod
    def _check_field(cls, value: str) -> str:
        return FieldSpec.parse(value).name

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)

    @property
    def json_output(self) -> bool:
        return self.output == "json"


def env_defaults() -> dict:
    """Defaults taken from MATLIS_FIELD, MATLIS_SEED and MATLIS_MC_BUDGET."""
    values = {}
    for key, env in (("field", "MATLIS_FIELD"), ("seed", "MATLIS_SEED"), ("mc_budget", "MATLIS_MC_BUDGET")):
        raw = os.getenv(env)
        if raw is not None and raw.strip():
            values[key] = raw.strip()
    return values


def get_config(
    field: Optional[str] = None,
    seed: Optional[int] = None,
    mc_budget: Optional[int] = None,
    output: Optional[str] = None,
) -> CliConfig:
    """Environment defaults overridden by explicit values; bad values are usage errors."""
    values = env_defaults()
    explicit = {"field": field, "seed": seed, "mc_budget": mc_budget, "output": output}
    values.update({k: v for k, v in explicit.items() if v is not None})
    try:
        return CliConfig(**values)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
        raise UsageError(f"invalid configuration: {problems}") from None
