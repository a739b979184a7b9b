from fastapi import FastAPI

from app.routers import dvr, modules, words

app = FastAPI(title="matlis-ks")

# Include routers
app.include_router(words.router)
app.include_router(modules.router)
app.include_router(dvr.router)


@app.get("/")
async def root():
    """List the route groups."""
    return {"name": "matlis-ks", "routes": ["/words", "/modules", "/dvr"]}
