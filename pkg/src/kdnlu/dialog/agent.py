"""The reservation agent: template responses driven by an FSM policy.

Response strings come from the template table and are the byte-exact
contract with the dialog datasets. The policy consumes the engine-derived
understanding of each utterance; slot filling, missing-parameter listing,
and cuisine suggestions all run as rule queries.
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from ..errors import IncompleteSlots, NoMoreOptions, UnknownInfoRequest
from .nlu import (
    Understanding,
    missing_parameters,
    suggest_cuisines,
    understand,
)
from .state import (
    CLOSE,
    COLLECT,
    CONFIRM,
    EXTRA,
    GREET,
    OPTIONS,
    SLOT_NAMES,
    SUGGESTED_ACCEPTED,
    UPDATES,
    USER_STATED,
    DialogState,
    SlotTable,
    legal_transition,
)

_PROMPTS = {
    "cuisine": "ask_cuisine",
    "location": "ask_location",
    "party_size": "ask_party_size",
    "price": "ask_price",
}


@lru_cache(maxsize=2)
def templates(path: str | None = None) -> dict[str, str]:
    file = (
        Path(path)
        if path
        else Path(str(resources.files("kdnlu") / "resources" / "dialog" / "templates.tsv"))
    )
    table = {}
    for raw in file.read_text().splitlines():
        line = raw.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        key, _, template = line.partition("\t")
        table[key] = template
    return table


def render_template(key: str, **kwargs) -> str:
    return templates()[key].format(**kwargs)


def format_api_call(slots: SlotTable) -> str:
    """`api_call <cuisine> <location> <party_size> <price>`, dataset format."""
    missing = slots.missing()
    if missing:
        raise IncompleteSlots(missing)
    return render_template(
        "api_call",
        cuisine=slots.cuisine,
        location=slots.location,
        party_size=slots.party_size,
        price=slots.price,
    )


def _restaurant_attr(state: DialogState, restaurant: str, attribute: str) -> Optional[str]:
    for fact in state.kb_facts:
        if fact.restaurant == restaurant and fact.attribute == attribute:
            return fact.value
    return None


def matching_restaurants(state: DialogState) -> list[str]:
    """Restaurants matching the slot table, best rating first."""
    slots = state.slots
    wanted = {
        "R_cuisine": slots.cuisine,
        "R_location": slots.location,
        "R_number": slots.party_size,
        "R_price": slots.price,
    }
    names = sorted({f.restaurant for f in state.kb_facts})
    out = []
    for name in names:
        ok = True
        for attr, want in wanted.items():
            if want is None:
                continue
            have = _restaurant_attr(state, name, attr)
            if have is not None and have != want:
                ok = False
                break
        if ok:
            out.append(name)

    def rating(name: str) -> int:
        value = _restaurant_attr(state, name, "R_rating")
        return int(value) if value and value.isdigit() else 0

    out.sort(key=lambda n: (-rating(n), n))
    return out


def present_option(state: DialogState) -> tuple[str, DialogState]:
    """Best-rated unrejected match; the offer is remembered on the state."""
    for name in matching_restaurants(state):
        if name not in state.rejected_options:
            return name, replace(state, current_offer=name)
    raise NoMoreOptions("every matching restaurant was rejected")


def provide_info(state: DialogState, request: str) -> str:
    if state.accepted is None:
        raise UnknownInfoRequest("no restaurant accepted yet")
    attr = {"phone": "R_phone", "address": "R_address"}.get(request)
    if attr is None:
        raise UnknownInfoRequest(f"no such detail: {request}")
    value = _restaurant_attr(state, state.accepted, attr)
    if value is None:
        raise UnknownInfoRequest(f"{attr} unknown for {state.accepted}")
    return value


def suggest_cuisine(state: DialogState) -> Optional[str]:
    """First engine-suggested cuisine, or None."""
    candidates = suggest_cuisines(state)
    return candidates[0] if candidates else None


def _fill_slots(state: DialogState, understanding: Understanding) -> DialogState:
    slots = state.slots
    for name in SLOT_NAMES:
        value = understanding.slots.get(name)
        if value is None:
            continue
        source = USER_STATED
        if name == "cuisine" and value in state.pending_suggestion:
            source = SUGGESTED_ACCEPTED
        slots = slots.set(name, value, source)
    new = replace(state, slots=slots)
    if understanding.exclusions:
        new = replace(
            new, excluded_cuisines=new.excluded_cuisines | set(understanding.exclusions)
        )
    if understanding.ingredients:
        new = replace(
            new, wanted_ingredients=new.wanted_ingredients | set(understanding.ingredients)
        )
    if understanding.slots.get("cuisine"):
        new = replace(new, pending_suggestion=())
    return new


def _collect_followup(state: DialogState) -> tuple[str, DialogState]:
    """After new information arrived: suggest, prompt, or announce options."""
    missing = missing_parameters(state)
    if not missing:
        return render_template("ready_options"), replace(state, options_announced=True)
    if missing[0] == "cuisine" and (
        state.excluded_cuisines or state.wanted_ingredients
    ):
        candidates = suggest_cuisines(state)
        if len(candidates) >= 2 and state.wanted_ingredients:
            pair = candidates[:2]
            new = replace(state, pending_suggestion=tuple(pair))
            return (
                render_template("suggest_two", first=pair[0], second=pair[1]),
                new,
            )
        if candidates:
            new = replace(state, pending_suggestion=(candidates[0],))
            return render_template("suggest_one", cuisine=candidates[0]), new
    return render_template(_PROMPTS[missing[0]]), state


def next_turn(state: DialogState, user_utterance: str) -> tuple[str, DialogState]:
    """One exchange: returns the response and the successor state."""
    understanding = understand(state, user_utterance)
    before = state.fsm
    state = replace(state, history=state.history + (("user", user_utterance),))
    response, after = _policy(state, understanding)
    trace = [f"intent: {understanding.intent}"]
    if understanding.justification:
        trace.append(understanding.justification)
    missing = after.slots.missing()
    trace.append(f"slots filled: {after.slots.filled() or '{}'}")
    trace.append(f"slots missing: {missing}")
    after = replace(
        after,
        history=after.history + (("bot", response),),
        last_justification="\n".join(trace),
    )
    if not legal_transition(before, after.fsm):
        raise AssertionError(f"illegal FSM transition {before} -> {after.fsm}")
    return response, after


def _policy(state: DialogState, u: Understanding) -> tuple[str, DialogState]:
    fsm = state.fsm

    if fsm == GREET:
        if u.intent == "greeting":
            return render_template("greet"), replace(state, fsm=COLLECT)
        if u.intent in ("request", "inform", "exception"):
            return _handle_request(replace(state, fsm=COLLECT), u)
        return render_template("clarify"), state

    if fsm == COLLECT:
        if u.intent in ("request", "inform", "exception"):
            return _handle_request(state, u)
        if u.intent == "silence":
            missing = missing_parameters(state)
            if missing or not state.options_announced:
                # Prompt for what is missing, or announce the lookup first;
                # the api call itself waits for the next nudge.
                reply, state = _collect_followup(state)
                return reply, state
            if state.kb_facts and not state.api_called:
                # Results arrived without an explicit call (options task).
                return _offer_next(replace(state, fsm=OPTIONS))
            call = format_api_call(state.slots)
            return call, replace(state, fsm=CONFIRM, api_called=True)
        return render_template("clarify"), state

    if fsm == CONFIRM:
        if u.intent == "update":
            state = _fill_slots(state, u)
            return render_template("anything_else_update"), replace(state, fsm=UPDATES)
        if u.intent == "silence":
            if state.kb_facts:
                return _offer_next(replace(state, fsm=OPTIONS))
            return render_template("clarify"), state
        if u.intent in ("inform", "request"):
            state = _fill_slots(state, u)
            return render_template("anything_else_update"), replace(state, fsm=UPDATES)
        return render_template("clarify"), state

    if fsm == UPDATES:
        if u.intent in ("update", "inform"):
            state = _fill_slots(state, u)
            return render_template("anything_else_update"), state
        if u.intent == "deny":
            return render_template("ready_options"), state
        if u.intent == "silence":
            call = format_api_call(state.slots)
            return call, replace(state, fsm=CONFIRM, api_called=True)
        return render_template("clarify"), state

    if fsm == OPTIONS:
        if u.intent == "reject":
            rejected = state.rejected_options | (
                {state.current_offer} if state.current_offer else set()
            )
            state = replace(state, rejected_options=frozenset(rejected), current_offer=None)
            return render_template("next_option"), state
        if u.intent == "silence":
            return _offer_next(state)
        if u.intent == "accept":
            state = replace(state, accepted=state.current_offer)
            return render_template("reserve"), replace(state, fsm=EXTRA)
        if u.intent == "info" and state.accepted:
            return _answer_info(replace(state, fsm=EXTRA), u)
        if u.intent == "thanks":
            return render_template("anything_else"), replace(state, fsm=EXTRA)
        return render_template("clarify"), state

    if fsm == EXTRA:
        if u.intent == "info":
            return _answer_info(state, u)
        if u.intent == "thanks":
            return render_template("anything_else"), state
        if u.intent == "bye":
            return render_template("welcome"), replace(state, fsm=CLOSE)
        return render_template("clarify"), state

    if fsm == CLOSE:
        return render_template("welcome"), state

    raise AssertionError(f"unknown FSM state {fsm}")


def _handle_request(state: DialogState, u: Understanding) -> tuple[str, DialogState]:
    if u.restaurant is not None:
        # Direct booking of a named restaurant: skip collection entirely.
        state = replace(state, accepted=u.restaurant, current_offer=u.restaurant)
        return render_template("reserve"), replace(state, fsm=OPTIONS)
    state = _fill_slots(state, u)
    if u.intent == "request":
        return render_template("on_it"), state
    reply, state = _collect_followup(state)
    return reply, state


def _offer_next(state: DialogState) -> tuple[str, DialogState]:
    try:
        name, state = present_option(state)
    except NoMoreOptions:
        return render_template("no_options"), state
    return render_template("offer", restaurant=name), state


def _answer_info(state: DialogState, u: Understanding) -> tuple[str, DialogState]:
    try:
        value = provide_info(state, u.info_kind or "other")
    except UnknownInfoRequest:
        return render_template("clarify"), state
    return render_template("give_info", value=value), state
