"""Dialog agent: FSM policy, slot filling, suggestions, api calls."""

from __future__ import annotations

import pytest

from kdnlu.dialog import (
    COLLECT,
    CONFIRM,
    EDGES,
    EXTRA,
    GREET,
    OPTIONS,
    SILENCE,
    DialogState,
    RestaurantFact,
    SlotTable,
    format_api_call,
    legal_transition,
    matching_restaurants,
    missing_parameters,
    next_turn,
    present_option,
    provide_info,
    suggest_cuisines,
    understand,
)
from kdnlu.errors import IncompleteSlots, NoMoreOptions, UnknownInfoRequest

REFERENCE_TRANSCRIPT = [
    ("Good morning", "hello what can i help you with today"),
    (
        "Can you make a restaurant reservation in London in a cheap price range",
        "i'm on it",
    ),
    ("<SILENCE>", "any preference on a type of cuisine"),
    ("anything, except Lebanese food", "do you want to have chinese food"),
    ("I want to have curry", "do you like indian or thai"),
    ("Thai", "how many people would be in your party"),
]


def fresh(session="t") -> DialogState:
    return DialogState(session_id=session)


def play(state: DialogState, turns: list[str]) -> tuple[list[str], DialogState]:
    out = []
    for user in turns:
        response, state = next_turn(state, user)
        out.append(response)
    return out, state


def _facts(name: str, cuisine="italian", location="paris", size="six",
           price="cheap", rating="8") -> list[RestaurantFact]:
    values = {
        "R_phone": f"{name}_phone",
        "R_cuisine": cuisine,
        "R_address": f"{name}_address",
        "R_location": location,
        "R_number": size,
        "R_price": price,
        "R_rating": rating,
    }
    return [RestaurantFact(name, a, v) for a, v in values.items()]


# --- the reference conversation --------------------------------------------------

def test_reference_transcript_replays_exactly():
    state = fresh()
    for user, expected in REFERENCE_TRANSCRIPT:
        response, state = next_turn(state, user)
        assert response == expected, (user, response)
    assert state.slots.cuisine == "thai"
    assert state.slots.location == "london"
    assert state.slots.price == "cheap"
    assert dict(state.slots.provenance)["cuisine"] == "suggested-accepted"


def test_reference_transcript_continues_to_api_call():
    state = fresh()
    responses, state = play(
        state, [u for u, _ in REFERENCE_TRANSCRIPT] + ["we will be six", SILENCE]
    )
    assert responses[-2] == "ok let me look into some options for you"
    assert responses[-1] == "api_call thai london six cheap"
    assert state.fsm == CONFIRM


# --- slot machinery ----------------------------------------------------------------

def test_missing_parameters_order_and_oracle():
    state = fresh()
    assert missing_parameters(state) == ["cuisine", "location", "party_size", "price"]
    state = state.__class__(
        session_id="t", slots=SlotTable().set("cuisine", "thai", "user-stated")
    )
    assert missing_parameters(state) == ["location", "party_size", "price"]
    # brute-force set difference over every fill combination
    from itertools import combinations

    for k in range(5):
        for combo in combinations(("cuisine", "location", "party_size", "price"), k):
            slots = SlotTable()
            values = {"cuisine": "thai", "location": "rome",
                      "party_size": "two", "price": "cheap"}
            for name in combo:
                slots = slots.set(name, values[name], "user-stated")
            state = DialogState(session_id="x", slots=slots)
            want = [n for n in ("cuisine", "location", "party_size", "price")
                    if n not in combo]
            assert missing_parameters(state) == want


def test_format_api_call_and_incomplete():
    slots = SlotTable()
    for name, value in [("cuisine", "italian"), ("location", "paris"),
                        ("party_size", "six"), ("price", "cheap")]:
        slots = slots.set(name, value, "user-stated")
    assert format_api_call(slots) == "api_call italian paris six cheap"
    with pytest.raises(IncompleteSlots) as err:
        format_api_call(SlotTable().set("cuisine", "thai", "user-stated"))
    assert err.value.missing == ["location", "party_size", "price"]


def test_party_size_vocabulary_enforced():
    with pytest.raises(ValueError):
        SlotTable().set("party_size", "eleven", "user-stated")


def test_update_replaces_slot_nonmonotonically():
    state = fresh()
    _, state = play(state, [
        "hello",
        "can you book a table with italian food in paris for six people in a cheap price range",
        SILENCE,  # ok let me look
        SILENCE,  # api_call
    ])
    assert state.fsm == CONFIRM
    responses, state = play(state, [
        "instead could it be with french food",
        "no",
        SILENCE,
    ])
    assert responses == [
        "sure is there anything else to update",
        "ok let me look into some options for you",
        "api_call french paris six cheap",
    ]
    assert state.slots.cuisine == "french"
    # the old value survives only in the history
    assert any("italian" in text for _, text in state.history)


# --- suggestions --------------------------------------------------------------------

def test_suggestion_avoids_exceptions():
    state = fresh()
    _, state = play(state, ["hello", "anything, except lebanese food"])
    assert "lebanese" not in suggest_cuisines(state)


def test_ingredient_narrows_candidates():
    state = fresh()
    _, state = play(state, ["hello", "i want to have curry"])
    assert suggest_cuisines(state) == ["indian", "thai"]


def test_yesterday_rule_excludes_cuisine():
    state = DialogState(
        session_id="y", profile_facts=("time(yesterday, user, chinese).",)
    )
    suggestions = suggest_cuisines(state)
    assert "chinese" not in suggestions
    assert suggestions  # others remain


def test_rejected_cuisine_never_resuggested():
    state = DialogState(session_id="r", rejected_cuisines=frozenset({"chinese"}))
    assert "chinese" not in suggest_cuisines(state)


# --- options and info ------------------------------------------------------------------

def _options_state() -> DialogState:
    state = fresh()
    slots = SlotTable()
    for name, value in [("cuisine", "italian"), ("location", "paris"),
                        ("party_size", "six"), ("price", "cheap")]:
        slots = slots.set(name, value, "user-stated")
    facts = (
        _facts("resto_paris_cheap_italian_8stars", rating="8")
        + _facts("resto_paris_cheap_italian_5stars", rating="5")
        + _facts("resto_paris_cheap_italian_3stars", rating="3")
    )
    return DialogState(
        session_id="o", fsm=OPTIONS, slots=slots, kb_facts=tuple(facts),
        api_called=True, options_announced=True,
    )


def test_options_ranked_by_rating_and_rejections_stick():
    state = _options_state()
    name, state = present_option(state)
    assert name == "resto_paris_cheap_italian_8stars"
    responses, state = play(state, ["no this does not work for me", SILENCE])
    assert responses[0] == "sure let me find an other option for you"
    assert responses[1] == "what do you think of this option: resto_paris_cheap_italian_5stars"
    assert "resto_paris_cheap_italian_8stars" in state.rejected_options


def test_all_rejected_no_more_options():
    state = _options_state()
    state = state.__class__(
        session_id="o", fsm=OPTIONS, slots=state.slots, kb_facts=state.kb_facts,
        rejected_options=frozenset(matching_restaurants(state)),
    )
    with pytest.raises(NoMoreOptions):
        present_option(state)


def test_provide_info_phone_address_unknown():
    state = _options_state()
    _, state = play(state, [SILENCE, "let's do it"])
    assert state.fsm == EXTRA
    assert provide_info(state, "phone") == "resto_paris_cheap_italian_8stars_phone"
    assert provide_info(state, "address") == "resto_paris_cheap_italian_8stars_address"
    with pytest.raises(UnknownInfoRequest):
        provide_info(state, "dress_code")


def test_info_turns_and_closing():
    state = _options_state()
    responses, state = play(state, [
        SILENCE,
        "let's do it",
        "may i have the phone number of the restaurant",
        "thank you",
        "no thank you",
    ])
    assert responses[1] == "great let me do the reservation"
    assert responses[2] == "here it is resto_paris_cheap_italian_8stars_phone"
    assert responses[3] == "is there anything i can help you with"
    assert responses[4] == "you're welcome"
    assert state.fsm == "Close"


# --- out-of-vocabulary entities ----------------------------------------------------------

def test_oov_entities_fill_slots():
    state = fresh()
    u = understand(state, "can you book a table with dothraki cuisine in qarth")
    assert u.slots["cuisine"] == "dothraki"
    assert u.slots["location"] == "qarth"


def test_oov_full_flow_api_call():
    state = fresh()
    responses, state = play(state, [
        "hello",
        "can you book a table with klingon food in quxville for two people in a cheap price range",
        SILENCE,
        SILENCE,
    ])
    assert responses[-1] == "api_call klingon quxville two cheap"


# --- FSM safety ------------------------------------------------------------------------------

def test_unrecognized_utterance_leaves_state_unchanged():
    state = fresh()
    response, after = next_turn(state, "zblorg frumple")
    assert response == "sorry i did not catch that"
    assert after.fsm == state.fsm
    assert after.history[-2:] == (("user", "zblorg frumple"),
                                  ("bot", "sorry i did not catch that"))


def test_every_edge_in_declared_set():
    assert legal_transition(GREET, COLLECT)
    assert legal_transition(COLLECT, COLLECT)
    assert not legal_transition(GREET, OPTIONS)
    assert not legal_transition(CONFIRM, GREET)
    # the full scripted flows only use declared edges (checked by replay
    # in the harness tests); here spot-check the added edges
    assert (COLLECT, OPTIONS) in EDGES
    assert ("AwaitUpdates", "AwaitUpdates") in EDGES


def test_state_serialization_round_trip():
    state = _options_state()
    _, state = play(state, [SILENCE, "let's do it"])
    doc = state.to_json()
    back = DialogState.from_json(doc)
    assert back == state
