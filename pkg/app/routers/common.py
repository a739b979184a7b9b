from fastapi import HTTPException

from app.errors import MatlisError, UsageError


def http_error(exc: MatlisError) -> HTTPException:
    """Usage errors are 422, every other domain error 400; the detail names the rule."""
    status = 422 if isinstance(exc, UsageError) else 400
    return HTTPException(status_code=status, detail=str(exc))
