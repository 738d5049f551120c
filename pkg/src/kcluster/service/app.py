from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException

from .. import harness, ktheorem
from ..model import ConfigError
from .schemas import (
    CompareRequest,
    CompareResponse,
    PairRowOut,
    SimConfigIn,
    SimulateRequest,
    SimulateResponse,
    Table1Response,
)

app = FastAPI(title="kcluster", version="0.1.0")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/config/schema")
def config_schema():
    return SimConfigIn.model_json_schema()


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest):
    try:
        config = req.config.to_core().with_overrides(seed=req.seed, max_rounds=req.rounds, scheme=req.scheme)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    result = harness.run(config, req.replication)
    return SimulateResponse(
        scheme=config.scheme,
        rounds=len(result.metrics),
        first_node_death_round=result.first_node_death_round,
        last_node_death_round=result.last_node_death_round,
        total_messages=result.total_messages,
        final_residuals=list(result.final_residuals),
        csv=harness.metrics_to_csv(result.metrics),
    )


@app.post("/compare", response_model=CompareResponse)
def compare(req: CompareRequest):
    try:
        config = req.config.to_core()
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    comp = harness.compare(config, req.replications, schemes=req.schemes)
    return CompareResponse(
        schemes=comp.schemes,
        mean_first_node_death=comp.mean_fnd,
        mean_checkpoint_variance=comp.mean_variance,
        fraction_first_lower_variance=comp.fraction_a_lower,
        rows=[PairRowOut(**asdict(r)) for r in comp.rows],
        csv=harness.comparison_to_csv(comp),
    )


@app.get("/table1", response_model=Table1Response)
def table1():
    lists = [ktheorem.NeighborList(o, nb) for o, nb in ktheorem.TABLE_I_LISTS.items()]
    freq = ktheorem.frequency_of_occurrence(lists)
    threshold = ktheorem.selection_threshold(freq)
    cands = ktheorem.candidate_set(freq, threshold, 3)
    return Table1Response(
        k=3,
        lists={o: list(nb) for o, nb in ktheorem.TABLE_I_LISTS.items()},
        frequencies=freq,
        ordered={f: list(ids) for f, ids in ktheorem.ordered_by_frequency(freq).items()},
        threshold=threshold,
        candidates=sorted(cands),
    )
