"""In-memory Beacon v2 endpoint over a cohort fixture.

Serves the same wire surface the SDK talks to: ``POST /{scope}`` with a
bearer token, a request body in the standard payload shape, and an
``exists``/``count``/``records`` response per requested granularity.
Variant range predicates and disease filters combine conjunctively.
"""
from __future__ import annotations

import re
from typing import Any, Optional

import jsonschema
from fastapi import FastAPI, Header, HTTPException, Request

from ..payload import parse_payload, payload_schema
from ..types import BeaconQueryError, Filter, Granularity, Scope, VariantParams
from .fixture import CohortFixture, load_default_fixture

SERVED_SCOPES = (Scope.INDIVIDUALS, Scope.BIOSAMPLES, Scope.G_VARIANTS)

_SEX_TERMS = {
    "XX": {"id": "NCIT:C16576", "label": "female"},
    "XY": {"id": "NCIT:C20197", "label": "male"},
}
_SAMPLE_ORIGINS = (
    {"id": "UBERON:0000178", "label": "blood"},
    {"id": "UBERON:0001836", "label": "saliva"},
    {"id": "UBERON:0002107", "label": "liver tissue"},
    {"id": "NCIT:C18009", "label": "tumor tissue"},
)


def _like_pattern(pattern: str) -> re.Pattern[str]:
    parts = [re.escape(chunk) for chunk in pattern.split("%")]
    return re.compile("^" + ".*".join(parts) + "$", re.IGNORECASE)


def _normalize_code(code: str) -> str:
    return code.replace(" ", "").lower()


def _individual_matches(individual: dict[str, Any], flt: Filter) -> bool:
    labels = [d["label"] for d in individual.get("diseases", [])]
    if flt.id:
        wanted = _normalize_code(flt.id)
        if any(_normalize_code(d["id"]) == wanted for d in individual.get("diseases", [])):
            return True
    if flt.value:
        if "%" in flt.value:
            pattern = _like_pattern(flt.value)
            return any(pattern.match(label) for label in labels)
        return any(flt.value.lower() in label.lower() for label in labels)
    if flt.term and not flt.id:
        return any(flt.term.lower() in label.lower() for label in labels)
    return False


def _variant_matches(variant: dict[str, Any], params: VariantParams) -> bool:
    if params.reference_name is not None and variant["chrom"] != params.reference_name:
        return False
    if params.start or params.end:
        low = params.start[0] if params.start else 0
        high = params.end[-1] if params.end else None
        position = variant["position"]
        if position < low:
            return False
        if high is not None and position > high:
            return False
    if params.gene_id is not None:
        gene = variant.get("gene") or ""
        if "%" in params.gene_id:
            if not _like_pattern(params.gene_id).match(gene):
                return False
        elif params.gene_id.lower() != gene.lower():
            return False
    return True


def _individual_record(individual: dict[str, Any]) -> dict[str, Any]:
    return {
        "id": individual["id"],
        "sex": _SEX_TERMS[individual["karyotypic_sex"]],
        "karyotypic_sex": individual["karyotypic_sex"],
        "diseases": individual.get("diseases", []),
    }


def _biosample_record(individual: dict[str, Any], index: int) -> dict[str, Any]:
    return {
        "id": f"BS-{individual['id']}",
        "individualId": individual["id"],
        "sampleOriginType": _SAMPLE_ORIGINS[index % len(_SAMPLE_ORIGINS)],
    }


def _matching(fixture: CohortFixture, query) -> tuple[list[dict[str, Any]], list[dict[str, Any]]]:
    """Conjunctive matching; returns (matched individuals, matched variants)."""
    individuals = list(fixture.individuals)
    if query.filters:
        individuals = [ind for ind in individuals
                       if all(_individual_matches(ind, f) for f in query.filters)]
    filter_matched = {ind["id"] for ind in individuals}

    variants = list(fixture.variants)
    if query.variant is not None:
        variants = [v for v in variants if _variant_matches(v, query.variant)]
        carrier_ids = {cid for v in variants for cid in v["carriers"]}
        individuals = [ind for ind in individuals if ind["id"] in carrier_ids]
    if query.filters:
        variants = [v for v in variants if any(c in filter_matched for c in v["carriers"])]
    return individuals, variants


def answer(fixture: CohortFixture, scope: Scope, payload: dict[str, Any]) -> dict[str, Any]:
    """Evaluate one request body against the fixture."""
    query = parse_payload(scope, payload)
    individuals, variants = _matching(fixture, query)

    if scope is Scope.G_VARIANTS:
        records = [
            {"site_id": v["site_id"], "chrom": v["chrom"], "position": v["position"],
             "gene": v["gene"], "carriers": list(v["carriers"])}
            for v in variants
        ]
    elif scope is Scope.BIOSAMPLES:
        index_by_id = {ind["id"]: i for i, ind in enumerate(fixture.individuals)}
        records = [_biosample_record(ind, index_by_id[ind["id"]]) for ind in individuals]
    else:
        records = [_individual_record(ind) for ind in individuals]

    if query.granularity is Granularity.RECORD:
        return {"records": records}
    if query.granularity is Granularity.COUNT:
        return {"count": len(records)}
    return {"exists": bool(records)}


def create_mock_app(fixture: Optional[CohortFixture] = None,
                    required_token: Optional[str] = None) -> FastAPI:
    """Build the endpoint app.

    Any non-empty bearer token is accepted unless ``required_token`` pins
    one; the fixture is immutable, so concurrent reads need no locking.
    """
    fixture = fixture or load_default_fixture()
    schema = payload_schema()
    app = FastAPI(title="mock beacon", docs_url=None, redoc_url=None)

    @app.post("/{scope_name}")
    async def query_scope(scope_name: str, request: Request,
                          authorization: Optional[str] = Header(default=None)):
        if not authorization or not authorization.startswith("Bearer ") \
                or not authorization.removeprefix("Bearer ").strip():
            raise HTTPException(status_code=401, detail="missing bearer token")
        if required_token is not None and authorization != f"Bearer {required_token}":
            raise HTTPException(status_code=401, detail="invalid token")
        try:
            scope = Scope(scope_name)
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown scope {scope_name!r}")
        if scope not in SERVED_SCOPES:
            raise HTTPException(status_code=404, detail=f"scope {scope_name!r} not served")
        payload = await request.json()
        try:
            jsonschema.validate(payload, schema)
        except jsonschema.ValidationError as exc:
            raise HTTPException(status_code=400, detail=f"invalid payload: {exc.message}")
        try:
            return answer(fixture, scope, payload)
        except BeaconQueryError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    return app
