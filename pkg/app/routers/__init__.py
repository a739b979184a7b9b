# Router package exports
from app.routers import dvr, modules, words

__all__ = ["dvr", "modules", "words"]
