from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from gaussent.config import get_settings
from gaussent.exceptions import GaussentError
from gaussent.log import setup_logging
from gaussent.multimode.router import router as multimode_router
from gaussent.phasespace.router import router as phasespace_router
from gaussent.sharing.router import router as sharing_router
from gaussent.teleport.router import router as teleport_router
from gaussent.twomode.router import router as twomode_router
from gaussent.version import __version__

settings = get_settings()
setup_logging(settings.log_level)

app = FastAPI(
    title="gaussent API",
    description="Entanglement analysis of Gaussian states",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins.split(","),
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(phasespace_router)
app.include_router(twomode_router)
app.include_router(multimode_router)
app.include_router(sharing_router)
app.include_router(teleport_router)


@app.exception_handler(GaussentError)
async def gaussent_error_handler(request: Request, exc: GaussentError):
    return JSONResponse(status_code=422, content={"error": exc.name, "detail": str(exc)})


@app.get("/health")
async def health():
    return {"status": "healthy"}


def run():
    import uvicorn
    uvicorn.run("gaussent.main:app", host=settings.host, port=settings.port)


if __name__ == "__main__":
    run()
