"""HTTP API for the review workflow plus static hosting of the UI bundle."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .packet import ReviewPacket, packet_to_json, read_packet
from .store import InvalidResponse, NoResponses, ResponseStore, aggregate, validate_response


def create_app(packet_path, store_path, ui_dir=None) -> FastAPI:
    packet = read_packet(packet_path)
    store = ResponseStore(store_path)
    app = FastAPI(title="meterbench review", docs_url=None, redoc_url=None)
    app.state.packet = packet
    app.state.store = store

    @app.get("/api/packet/{packet_id}")
    def get_packet(packet_id: str):
        if packet_id != packet.packet_id:
            raise HTTPException(status_code=404, detail=f"unknown packet {packet_id!r}")
        return packet_to_json(packet)

    @app.post("/api/responses")
    async def post_response(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="body must be JSON")
        if not isinstance(body, dict):
            raise HTTPException(status_code=400, detail="body must be a JSON object")
        try:
            response = validate_response(body, packet)
        except InvalidResponse as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        store.append(response)
        return {"status": "stored", "entry_id": response["entry_id"],
                "reviewer_token": response["reviewer_token"]}

    @app.get("/api/aggregate/{packet_id}")
    def get_aggregate(packet_id: str):
        if packet_id != packet.packet_id:
            raise HTTPException(status_code=404, detail=f"unknown packet {packet_id!r}")
        try:
            return aggregate(packet, store)
        except NoResponses as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.exception_handler(InvalidResponse)
    def invalid_response_handler(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def default_ui_dir() -> Optional[Path]:
    """frontend/dist next to the repository root, if the UI has been built."""
    here = Path(__file__).resolve()
    for parent in here.parents:
        candidate = parent / "frontend" / "dist"
        if candidate.is_dir():
            return candidate
    return None
