"""FastAPI application wrapping the core package.

Local-first design tool: binds loopback, no auth, no server-side state.
Every request re-reads the scenario source, so identical requests return
identical bodies and dropping a new scenario file into the data
directory shows up on the next /scenarios call.  The optional frontend
bundle is served from / when built.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles

from .. import __version__
from ..data import DataContext
from ..errors import (
    ConvergenceError,
    CryoplanError,
    MaterialError,
    ParseError,
    ScenarioError,
    SolverError,
    UnreachableTargetError,
    ValidationError,
    ZeroOccupationError,
)
from ..noise import (
    NoiseChain,
    NoiseElement,
    OccupationState,
    bose_einstein_occupation,
    chain_floor,
    effective_temperature,
    infer_source_temperature,
)
from ..report import render_machine, run_report
from ..scenario import Overrides, apply_overrides, assumption_flags
from ..units import dbm_to_watts
from . import schemas


def _to_core_overrides(ov: schemas.SolveOverrides) -> Overrides:
    return Overrides(
        control_count=ov.control_count,
        readout_count=ov.readout_count,
        duty_cycle=ov.duty_cycle,
        optical_power_w=None if ov.optical_power_uw is None else ov.optical_power_uw * 1e-6,
        photodiode_stage=ov.photodiode_stage,
        control_attenuators=None if ov.control_attenuators is None else tuple(
            (a.stage, a.db) for a in ov.control_attenuators
        ),
        power_at_mxc_w=None if ov.power_at_mxc_dbm is None else dbm_to_watts(ov.power_at_mxc_dbm),
    )


def create_app(data_dir: str | None = None, frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="cryoplan service", version=__version__)
    app.state.data_dir = data_dir
    # local single-user tool; lets a frontend dev server on another port talk to it
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    def data() -> DataContext:
        # re-open per request: stateless, picks up new scenario files
        return DataContext.open(app.state.data_dir)

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
        return JSONResponse(status_code=400, content=schemas.ErrorBody(
            detail=f"{field}: {first.get('msg', 'invalid request')}", field=field).model_dump())

    @app.exception_handler(CryoplanError)
    async def _core_errors(request: Request, exc: CryoplanError):
        if isinstance(exc, UnreachableTargetError):
            return JSONResponse(status_code=409, content=schemas.ErrorBody(
                detail=str(exc), floor_temperature_k=exc.floor_temperature_k).model_dump())
        if isinstance(exc, ConvergenceError):
            return JSONResponse(status_code=422, content=schemas.ErrorBody(
                detail=str(exc), residuals_w=exc.residuals).model_dump())
        if isinstance(exc, (ParseError, ValidationError, MaterialError, ScenarioError)):
            field = getattr(exc, "field", None)
            return JSONResponse(status_code=400, content=schemas.ErrorBody(
                detail=str(exc), field=field).model_dump())
        if isinstance(exc, SolverError):
            return JSONResponse(status_code=422, content=schemas.ErrorBody(detail=str(exc)).model_dump())
        return JSONResponse(status_code=400, content=schemas.ErrorBody(detail=str(exc)).model_dump())

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/scenarios", response_model=schemas.ScenarioListResponse)
    def scenarios():
        ctx = data()
        infos = []
        for name in ctx.list_scenarios():
            sc = ctx.load_scenario(name)
            control = next((l for l in sc.transmission_lines if l.role == "control"), None)
            readout = next((l for l in sc.transmission_lines if l.role == "readout"), None)
            optical = sc.optical_links[0] if sc.optical_links else None
            title = sc.provenance.splitlines()[0] if sc.provenance else ""
            infos.append(schemas.ScenarioInfo(
                name=name,
                title=title,
                control_count=control.count if control else None,
                readout_count=readout.count if readout else None,
                optical_count=optical.count if optical else None,
                photodiode_stage=optical.photodiode_stage if optical else None,
                noise_chains=sorted(sc.noise_chains),
            ))
        return schemas.ScenarioListResponse(
            scenarios=infos,
            override_schema=schemas.SolveOverrides.model_json_schema(),
        )

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve(req: schemas.SolveRequest):
        ctx = data()
        if req.scenario is not None:
            sc = ctx.load_scenario(req.scenario)
        else:
            if len(req.scenario_text or "") > 1 << 20:
                return JSONResponse(status_code=400, content=schemas.ErrorBody(
                    detail="inline scenario exceeds 1 MiB").model_dump())
            sc = ctx.parse_scenario(req.scenario_text)
        sc = apply_overrides(sc, _to_core_overrides(req.overrides))
        bundle = run_report(sc, ctx)
        stages = {
            name: schemas.StageResult(
                conductive_w=s.conductive_w, rf_w=s.rf_w, optical_w=s.optical_w,
                static_w=s.static_w, total_w=s.total_w,
                temperature_k=s.solved_temperature_k,
            )
            for name, s in bundle.thermal.stages.items()
        }
        noise = {
            name: schemas.NoiseChainResult(
                frequency_hz=r.frequency_hz,
                floor_occupation=r.floor_occupation,
                floor_temperature_k=r.floor_temperature_k,
                forward_output_k=r.forward_output_k,
                inferred_source_k=r.inferred_source_k,
                target_temperature_k=r.target_temperature_k,
                source_temperature_k=r.source_temperature_k,
                error=r.error,
            )
            for name, r in bundle.noise.items()
        }
        return schemas.SolveResponse(
            scenario_name=bundle.scenario_name,
            scenario_hash=bundle.scenario_hash,
            tool_version=bundle.tool_version,
            stages=stages,
            still_heater_required_w=bundle.thermal.still_heater_required_w,
            convergence=schemas.ConvergenceResult(
                iterations=bundle.thermal.convergence.iterations,
                residual_w=bundle.thermal.convergence.residual_w,
                tolerance_w=bundle.thermal.convergence.tolerance_w,
            ),
            noise=noise,
            assumption_flags=bundle.assumption_flags,
            effective_parameters=req.overrides,
            machine_report=render_machine(bundle),
        )

    @app.post("/noise/infer", response_model=schemas.NoiseInferResponse)
    def noise_infer(req: schemas.NoiseInferRequest):
        flags: list[str] = []
        if req.elements is not None:
            chain = NoiseChain(
                elements=tuple(
                    NoiseElement(e.db, e.temperature_k, label=e.label, assumed=e.assumed)
                    for e in req.elements
                ),
                frequency_hz=req.frequency_ghz * 1e9,
                name="inline",
            )
        else:
            sc = data().load_scenario(req.scenario)
            if req.chain_name not in sc.noise_chains:
                return JSONResponse(status_code=400, content=schemas.ErrorBody(
                    detail=f"no chain {req.chain_name!r} in scenario {req.scenario!r}",
                    field="chain_name").model_dump())
            chain = sc.noise_chains[req.chain_name].chain
        for el in chain.elements:
            if el.assumed:
                flags.append(f"element '{el.label}' loss assumed "
                             f"({el.attenuation_db:g} dB at {el.temperature_k:g} K)")
        target = OccupationState(
            bose_einstein_occupation(req.target_temperature_k, chain.frequency_hz),
            chain.frequency_hz,
        )
        source_k = infer_source_temperature(target, chain)
        floor = chain_floor(chain)
        try:
            floor_k = effective_temperature(floor)
        except ZeroOccupationError:
            floor_k = None
        return schemas.NoiseInferResponse(
            inferred_source_k=source_k,
            target_temperature_k=req.target_temperature_k,
            frequency_hz=chain.frequency_hz,
            floor_temperature_k=floor_k,
            floor_occupation=floor.occupation,
            assumption_flags=flags,
        )

    _mount_frontend(app, frontend_dir)
    return app


def _mount_frontend(app: FastAPI, frontend_dir: str | None) -> None:
    candidates = [frontend_dir] if frontend_dir else []
    here = os.path.dirname(os.path.abspath(__file__))
    candidates.append(os.path.normpath(os.path.join(here, "..", "..", "..", "frontend", "dist")))
    for cand in candidates:
        if cand and os.path.isfile(os.path.join(cand, "index.html")):
            app.mount("/app", StaticFiles(directory=cand, html=True), name="frontend")

            @app.get("/", include_in_schema=False)
            def index():
                return RedirectResponse(url="/app/")

            return
