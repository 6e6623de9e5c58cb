from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.routes import invariants
from app.services.config import configure_logging

# Create FastAPI instance
app = FastAPI(
    title="SecInv API",
    description="Secondary invariants of permutation groups by evaluation at roots of unity",
    version="1.0.0"
)

# Allow local front ends and notebooks
app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:4200", "http://localhost:8888"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(invariants.router, prefix="/api", tags=["invariants"])


@app.on_event("startup")
async def startup_event():
    configure_logging()


# Health check endpoint
@app.get("/")
async def root():
    return {"message": "SecInv API is running!"}


@app.get("/health")
async def health_check():
    return {"status": "healthy"}
