"""Problem files: JSON schema, parsing and conversion to :class:`LogRingSpec`."""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ParseError, SchemaError
from .fields import field as make_field
from .grobner import Budget
from .logring import LogRingSpec
from .monoids import AffineMonoid
from .polys import PolyRing, parse_poly

TASKS = ("hh", "hc", "omega", "derham", "hkr", "sbi", "adams", "theta_complex", "oracle")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FieldSpec(_Strict):
    characteristic: int = 0


class MonoidSpec(_Strict):
    ambient_rank: int = Field(ge=0)
    generators: list[list[int]] = []

    @model_validator(mode="after")
    def _lengths(self):
        for i, g in enumerate(self.generators):
            if len(g) != self.ambient_rank:
                raise ValueError(f"generator {i} has length {len(g)}, expected {self.ambient_rank}")
        return self


class RingSpec(_Strict):
    variables: list[str] = []
    inverted: list[str] = []
    relations: list[str] = []


class BaseBlock(_Strict):
    monoid: MonoidSpec = MonoidSpec(ambient_rank=0)
    ring: RingSpec = RingSpec()
    chart: list[str] = []


class TotalBlock(_Strict):
    monoid: MonoidSpec
    theta: list[list[int]] = []
    ring: RingSpec = RingSpec()
    chart: list[str]


class TaskSpec(_Strict):
    task: Literal["hh", "hc", "omega", "derham", "hkr", "sbi", "adams", "theta_complex", "oracle"]
    backend: Optional[Literal["bar", "koszul", "resolution", "theta"]] = None
    route: Optional[Literal["bicomplex", "de_rham"]] = None
    N: Optional[int] = Field(default=None, ge=0)
    m_max: Optional[int] = Field(default=None, ge=0)
    W: Optional[int] = Field(default=None, ge=1)
    n: Optional[int] = Field(default=None, ge=0)
    k: Optional[list[int]] = None
    n_max: Optional[int] = Field(default=None, ge=0)
    degree_box: Optional[list[int]] = None
    regular_sequence: Optional[list[str]] = None
    cross_check: bool = True

    @field_validator("degree_box")
    @classmethod
    def _box(cls, v):
        if v is not None and (len(v) != 2 or v[0] > v[1]):
            raise ValueError("degree_box must be [low, high] with low <= high")
        return v


class ProblemFile(_Strict):
    name: Optional[str] = None
    field: FieldSpec = FieldSpec()
    base: BaseBlock = BaseBlock()
    total: TotalBlock
    grading: Optional[dict[str, int]] = None
    budget: dict[str, int] = {}
    tasks: list[TaskSpec] = []

    def serialize(self):
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


def _schema_message(err):
    parts = []
    for e in err.errors():
        loc = ".".join(str(x) for x in e["loc"])
        parts.append(f"{loc}: {e['msg']}")
    return "; ".join(parts)


def parse_problem(text):
    """Parse and validate a problem file; raises ParseError or SchemaError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, ("valid JSON",), "problem file") from None
    try:
        prob = ProblemFile.model_validate(data)
    except ValidationError as exc:
        raise SchemaError(_schema_message(exc)) from None
    try:
        make_field(prob.field.characteristic)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    budget = Budget()
    try:
        budget.update(**prob.budget)
    except KeyError as exc:
        raise SchemaError(str(exc)) from None
    # every polynomial string must parse in its ring
    spec = to_spec(prob)
    for i, t in enumerate(prob.tasks):
        if t.regular_sequence:
            from .hochschild import level_ring
            R = level_ring(spec, 1).ring
            for j, s in enumerate(t.regular_sequence):
                parse_poly(s, R, f"tasks.{i}.regular_sequence.{j}")
    return prob


def to_spec(prob, budget=None):
    """Build the :class:`LogRingSpec` described by a problem file."""
    F = make_field(prob.field.characteristic)
    if budget is None:
        budget = Budget().update(**prob.budget)
    Q = AffineMonoid(prob.base.monoid.ambient_rank, prob.base.monoid.generators)
    P = AffineMonoid(prob.total.monoid.ambient_rank, prob.total.monoid.generators)
    try:
        return LogRingSpec(
            F, Q, prob.base.ring.variables, prob.base.ring.relations, prob.base.chart,
            P, prob.total.theta, prob.total.ring.variables, prob.total.ring.relations, prob.total.chart,
            base_inverted=prob.base.ring.inverted, total_inverted=prob.total.ring.inverted,
            grading=prob.grading, budget=budget, name=prob.name)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def input_digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


FIXTURES = ("logpoint", "node", "node_refined", "node_redundant", "kummer2_f2", "kummer2_q", "kummer3_q",
            "dual_numbers", "qxq", "polyline", "point")


def fixture_text(name):
    return resources.files("loghh.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name):
    return parse_problem(fixture_text(name))


def fixture_spec(name, budget=None):
    return to_spec(load_fixture(name), budget)
