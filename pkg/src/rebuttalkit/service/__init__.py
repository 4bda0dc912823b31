"""HTTP service: FastAPI app, run records, progress events, wire schemas."""

from .app import DocumentRegistry, create_app
from .events import EventBus, format_sse
from .runs import RunMeta, RunStore, new_run_id

__all__ = [
    "DocumentRegistry",
    "EventBus",
    "RunMeta",
    "RunStore",
    "create_app",
    "format_sse",
    "new_run_id",
]
