"""Semantic task structure: interface objects, task elements, plans.

A task model is authored data (no plan inference); parsing resolves every
cross-reference eagerly so downstream code works with object instances, and
the model is immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import DanglingIdError, NoPlanForGoalError, SchemaError, UnknownGoalError

GOAL = "goal"
FUNCTION = "function"
CONSTRAINT = "constraint"
RESULT = "result"
SUBSTEP = "substep"

# canonical ordering used for quotas and table rows
ELEMENT_KINDS = (GOAL, FUNCTION, CONSTRAINT, RESULT, SUBSTEP)
ACTION_KINDS = (GOAL, FUNCTION, SUBSTEP)
STATE_KINDS = (CONSTRAINT, RESULT)

OBJECT_KINDS = ("menu-item", "window", "button", "dialog", "document", "other")


@dataclass(frozen=True)
class InterfaceObject:
    id: str
    name_fr: str
    name_en: str
    kind: str

    def __post_init__(self):
        if self.kind not in OBJECT_KINDS:
            raise SchemaError(f"object {self.id!r} has unknown kind {self.kind!r}")
        if not self.name_fr or not self.name_en:
            raise SchemaError(f"object {self.id!r} needs non-empty names in both languages")


@dataclass(frozen=True)
class ActionSpec:
    """An action: verb lexeme, optional patient (object or lexeme), modifiers."""

    verb: str
    patient: InterfaceObject | str | None = None
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class StateSpec:
    """A state: carrier (object or lexeme) and a predicate lexeme.

    achievable_by_planning distinguishes preconditions (True) from hard
    constraints (False); downstream modules see only the merged kind.
    """

    carrier: InterfaceObject | str
    predicate: str
    achievable_by_planning: bool = False


@dataclass(frozen=True)
class TaskElement:
    id: str
    kind: str
    payload: ActionSpec | StateSpec
    plan: str | None = None

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise SchemaError(f"element {self.id!r} has unknown kind {self.kind!r}")


@dataclass(frozen=True)
class Plan:
    id: str
    achieves: str
    preconditions: tuple[str, ...] = ()
    substeps: tuple[str, ...] = ()
    results: tuple[str, ...] = ()


@dataclass(frozen=True)
class TaskModel:
    objects: tuple[InterfaceObject, ...]
    elements: tuple[TaskElement, ...]
    plans: tuple[Plan, ...]
    functions: tuple[tuple[str, str], ...] = ()  # (function element id, object id)

    object_index: dict[str, InterfaceObject] = field(init=False, repr=False)
    element_index: dict[str, TaskElement] = field(init=False, repr=False)
    plan_index: dict[str, Plan] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "object_index", {o.id: o for o in self.objects})
        object.__setattr__(self, "element_index", {e.id: e for e in self.elements})
        object.__setattr__(self, "plan_index", {p.id: p for p in self.plans})

    def elements_of_kind(self, kind: str) -> list[TaskElement]:
        return [e for e in self.elements if e.kind == kind]

    def plan_for_goal(self, goal_id: str) -> Plan | None:
        for plan in self.plans:
            if plan.achieves == goal_id:
                return plan
        return None

    def function_object(self, function_id: str) -> InterfaceObject | None:
        for fid, oid in self.functions:
            if fid == function_id:
                return self.object_index.get(oid)
        return None


_ELEMENT_FIELDS = {"id", "kind", "payload", "plan"}
_ACTION_FIELDS = {"verb", "patient", "modifiers"}
_STATE_FIELDS = {"carrier", "predicate", "achievable_by_planning"}
_PLAN_FIELDS = {"id", "achieves", "preconditions", "substeps", "results"}
_OBJECT_FIELDS = {"id", "name_fr", "name_en", "kind"}
_TOP_FIELDS = {"objects", "elements", "plans", "functions"}


def _check_fields(raw: dict, allowed: set[str], required: set[str], what: str) -> None:
    extra = set(raw) - allowed
    if extra:
        raise SchemaError(f"{what}: unexpected field(s) {sorted(extra)}")
    missing = required - set(raw)
    if missing:
        raise SchemaError(f"{what}: missing field(s) {sorted(missing)}")


def _parse_ref(raw, objects: dict[str, InterfaceObject], where: str):
    """A payload reference: {"object": id} resolves, {"lexeme": name} stays symbolic."""
    if raw is None:
        return None
    if not isinstance(raw, dict) or len(raw) != 1:
        raise SchemaError(f"{where}: reference must be {{'object': id}} or {{'lexeme': name}}")
    if "object" in raw:
        oid = raw["object"]
        if oid not in objects:
            raise DanglingIdError(oid, where)
        return objects[oid]
    if "lexeme" in raw:
        return str(raw["lexeme"])
    raise SchemaError(f"{where}: reference must be {{'object': id}} or {{'lexeme': name}}")


def parse_task_model(document: str) -> TaskModel:
    """Parse and fully validate a task-model JSON document.

    Raises json.JSONDecodeError for malformed JSON, SchemaError for
    missing/extra fields, DanglingIdError for unresolved ids (the offending
    id is named in the error).
    """
    raw = json.loads(document)
    if not isinstance(raw, dict):
        raise SchemaError("top level must be a JSON object")
    _check_fields(raw, _TOP_FIELDS, {"objects", "elements", "plans"}, "task model")

    objects: dict[str, InterfaceObject] = {}
    for item in raw["objects"]:
        _check_fields(item, _OBJECT_FIELDS, _OBJECT_FIELDS, f"object {item.get('id')!r}")
        obj = InterfaceObject(item["id"], item["name_fr"], item["name_en"], item["kind"])
        if obj.id in objects:
            raise SchemaError(f"duplicate object id {obj.id!r}")
        objects[obj.id] = obj

    elements: dict[str, TaskElement] = {}
    for item in raw["elements"]:
        where = f"element {item.get('id')!r}"
        _check_fields(item, _ELEMENT_FIELDS, {"id", "kind", "payload"}, where)
        kind = item["kind"]
        payload_raw = item["payload"]
        if kind in ACTION_KINDS:
            _check_fields(payload_raw, _ACTION_FIELDS, {"verb"}, where)
            payload = ActionSpec(
                verb=payload_raw["verb"],
                patient=_parse_ref(payload_raw.get("patient"), objects, where),
                modifiers=tuple(payload_raw.get("modifiers", ())),
            )
        elif kind in STATE_KINDS:
            _check_fields(payload_raw, _STATE_FIELDS, {"carrier", "predicate"}, where)
            carrier = _parse_ref(payload_raw["carrier"], objects, where)
            if carrier is None:
                raise SchemaError(f"{where}: carrier may not be null")
            payload = StateSpec(
                carrier=carrier,
                predicate=payload_raw["predicate"],
                achievable_by_planning=bool(payload_raw.get("achievable_by_planning", False)),
            )
        else:
            raise SchemaError(f"{where}: unknown kind {kind!r}")
        element = TaskElement(item["id"], kind, payload, item.get("plan"))
        if element.id in elements or element.id in objects:
            raise SchemaError(f"duplicate id {element.id!r}")
        elements[element.id] = element

    plans: dict[str, Plan] = {}
    for item in raw["plans"]:
        where = f"plan {item.get('id')!r}"
        _check_fields(item, _PLAN_FIELDS, {"id", "achieves", "substeps"}, where)
        plan = Plan(
            id=item["id"],
            achieves=item["achieves"],
            preconditions=tuple(item.get("preconditions", ())),
            substeps=tuple(item["substeps"]),
            results=tuple(item.get("results", ())),
        )
        if plan.id in plans:
            raise SchemaError(f"duplicate plan id {plan.id!r}")
        plans[plan.id] = plan

    functions = tuple(
        (pair[0], pair[1]) for pair in raw.get("functions", ())
    )

    model = TaskModel(
        objects=tuple(objects.values()),
        elements=tuple(elements.values()),
        plans=tuple(plans.values()),
        functions=functions,
    )
    _check_references(model)
    return model


def _check_references(model: TaskModel) -> None:
    """Referential integrity; raises DanglingIdError naming the offending id."""
    for plan in model.plans:
        if plan.achieves not in model.element_index:
            raise DanglingIdError(plan.achieves, f"plan {plan.id!r} achieves")
        for pid in plan.preconditions:
            if pid not in model.element_index:
                raise DanglingIdError(pid, f"plan {plan.id!r} preconditions")
        for sid in plan.substeps:
            if sid not in model.element_index:
                raise DanglingIdError(sid, f"plan {plan.id!r} substeps")
        for rid in plan.results:
            if rid not in model.element_index:
                raise DanglingIdError(rid, f"plan {plan.id!r} results")
    for element in model.elements:
        if element.plan is not None and element.plan not in model.plan_index:
            raise DanglingIdError(element.plan, f"element {element.id!r} plan")
    for fid, oid in model.functions:
        if fid not in model.element_index:
            raise DanglingIdError(fid, "functions pairing")
        if oid not in model.object_index:
            raise DanglingIdError(oid, "functions pairing")


def validate_task_model(model: TaskModel, lexicon=None) -> list[dict]:
    """Check model invariants; each record names the invariant and offending id.

    Passing a lexicon additionally checks that every verb/predicate/lexeme
    reference resolves in it for both configured languages.
    """
    violations: list[dict] = []

    def record(invariant: str, offender: str) -> None:
        violations.append({"invariant": invariant, "id": offender})

    for plan in model.plans:
        goal = model.element_index.get(plan.achieves)
        if goal is not None and goal.kind != GOAL:
            record("plan.achieves must name a goal", plan.id)
        if not plan.substeps:
            record("plan.substeps non-empty", plan.id)
        for pid in plan.preconditions:
            el = model.element_index.get(pid)
            if el is not None and el.kind != CONSTRAINT:
                record("plan.preconditions must name constraints", pid)
        for sid in plan.substeps:
            el = model.element_index.get(sid)
            if el is not None and el.kind != SUBSTEP:
                record("plan.substeps must name substeps", sid)
        for rid in plan.results:
            el = model.element_index.get(rid)
            if el is not None and el.kind != RESULT:
                record("plan.results must name results", rid)

    goals_with_plans: dict[str, int] = {}
    for plan in model.plans:
        goals_with_plans[plan.achieves] = goals_with_plans.get(plan.achieves, 0) + 1
    for gid, n in goals_with_plans.items():
        if n > 1:
            record("at most one plan per goal", gid)

    paired = {fid for fid, _ in model.functions}
    for element in model.elements:
        if element.kind in ACTION_KINDS and not isinstance(element.payload, ActionSpec):
            record("kind/payload agreement", element.id)
        if element.kind in STATE_KINDS and not isinstance(element.payload, StateSpec):
            record("kind/payload agreement", element.id)
        if element.kind == SUBSTEP and element.plan is None:
            record("substep.plan mandatory", element.id)
        if element.kind == FUNCTION and element.id not in paired:
            record("function accessed through an interface object", element.id)
        if element.kind == GOAL and element.plan is not None:
            plan = model.plan_index.get(element.plan)
            if plan is not None and plan.achieves != element.id:
                record("goal.plan must be the plan it motivates", element.id)
    counts: dict[str, int] = {}
    for fid, _ in model.functions:
        counts[fid] = counts.get(fid, 0) + 1
    for fid, n in counts.items():
        if n > 1:
            record("function paired with exactly one interface object", fid)

    if lexicon is not None:
        for element in model.elements:
            payload = element.payload
            names: list[str] = []
            if isinstance(payload, ActionSpec):
                names.append(payload.verb)
                if isinstance(payload.patient, str):
                    names.append(payload.patient)
                names.extend(payload.modifiers)
            else:
                names.append(payload.predicate)
                if isinstance(payload.carrier, str):
                    names.append(payload.carrier)
            for name in names:
                if not lexicon.has(name):
                    record("lexeme resolves in the lexicon", f"{element.id}:{name}")

    return violations


def plan_elements(model: TaskModel, goal_id: str) -> list[TaskElement]:
    """The goal followed by its plan's constraints, substeps and results, in plan order."""
    goal = model.element_index.get(goal_id)
    if goal is None or goal.kind != GOAL:
        raise UnknownGoalError(f"unknown goal {goal_id!r}")
    plan = model.plan_for_goal(goal_id)
    if plan is None:
        raise NoPlanForGoalError(f"goal {goal_id!r} has no plan")
    ordered = [goal]
    for pid in plan.preconditions:
        ordered.append(model.element_index[pid])
    for sid in plan.substeps:
        ordered.append(model.element_index[sid])
    for rid in plan.results:
        ordered.append(model.element_index[rid])
    return ordered


def _ref_to_json(ref) -> dict | None:
    if ref is None:
        return None
    if isinstance(ref, InterfaceObject):
        return {"object": ref.id}
    return {"lexeme": ref}


def serialize_task_model(model: TaskModel) -> str:
    """Inverse of parse_task_model on valid models."""
    doc = {
        "objects": [
            {"id": o.id, "name_fr": o.name_fr, "name_en": o.name_en, "kind": o.kind}
            for o in model.objects
        ],
        "elements": [],
        "plans": [
            {
                "id": p.id,
                "achieves": p.achieves,
                "preconditions": list(p.preconditions),
                "substeps": list(p.substeps),
                "results": list(p.results),
            }
            for p in model.plans
        ],
        "functions": [list(pair) for pair in model.functions],
    }
    for e in model.elements:
        item: dict = {"id": e.id, "kind": e.kind}
        if isinstance(e.payload, ActionSpec):
            item["payload"] = {
                "verb": e.payload.verb,
                "patient": _ref_to_json(e.payload.patient),
                "modifiers": list(e.payload.modifiers),
            }
        else:
            item["payload"] = {
                "carrier": _ref_to_json(e.payload.carrier),
                "predicate": e.payload.predicate,
                "achievable_by_planning": e.payload.achievable_by_planning,
            }
        if e.plan is not None:
            item["plan"] = e.plan
        doc["elements"].append(item)
    return json.dumps(doc, ensure_ascii=False, indent=2)


def default_task_model() -> TaskModel:
    """The sample task model shipped with the package."""
    text = resources.files("genretext").joinpath("data/macwrite-sample.json").read_text("utf-8")
    return parse_task_model(text)
