"""Dialog session state: FSM position, slot table, history, restaurant KB.

States and the legal transition edges are module constants so the runner
can assert edge safety on every turn. DialogState serializes to a JSON
document per session and back, surviving service restarts.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

GREET = "Greet"
COLLECT = "CollectParams"
CONFIRM = "ConfirmApiCall"
UPDATES = "AwaitUpdates"
OPTIONS = "PresentOptions"
EXTRA = "ProvideExtraInfo"
CLOSE = "Close"

STATES = (GREET, COLLECT, CONFIRM, UPDATES, OPTIONS, EXTRA, CLOSE)

# A clarification keeps the state put; EDGES lists real moves. Direct
# restaurant bookings jump CollectParams -> PresentOptions, and several
# update turns in a row loop on AwaitUpdates.
EDGES = {
    (GREET, COLLECT),
    (COLLECT, COLLECT),
    (COLLECT, CONFIRM),
    (COLLECT, OPTIONS),
    (CONFIRM, UPDATES),
    (CONFIRM, OPTIONS),
    (UPDATES, UPDATES),
    (UPDATES, CONFIRM),
    (UPDATES, OPTIONS),
    (OPTIONS, OPTIONS),
    (OPTIONS, EXTRA),
    (EXTRA, EXTRA),
    (EXTRA, CLOSE),
}

SLOT_NAMES = ("cuisine", "location", "party_size", "price")
PARTY_SIZES = ("two", "four", "six", "eight")

USER_STATED = "user-stated"
SUGGESTED_ACCEPTED = "suggested-accepted"


@dataclass(frozen=True)
class RestaurantFact:
    restaurant: str
    attribute: str        # R_cuisine, R_location, R_price, R_rating, ...
    value: str


@dataclass(frozen=True)
class SlotTable:
    cuisine: Optional[str] = None
    location: Optional[str] = None
    party_size: Optional[str] = None
    price: Optional[str] = None
    provenance: tuple[tuple[str, str], ...] = ()

    def get(self, name: str) -> Optional[str]:
        return getattr(self, name)

    def filled(self) -> dict:
        return {n: self.get(n) for n in SLOT_NAMES if self.get(n) is not None}

    def missing(self) -> list[str]:
        return [n for n in SLOT_NAMES if self.get(n) is None]

    def set(self, name: str, value: str, source: str) -> "SlotTable":
        if name == "party_size" and value not in PARTY_SIZES:
            raise ValueError(f"party size {value!r} outside dataset vocabulary")
        prov = tuple(p for p in self.provenance if p[0] != name) + ((name, source),)
        return replace(self, **{name: value, "provenance": prov})


@dataclass(frozen=True)
class DialogState:
    session_id: str
    fsm: str = GREET
    slots: SlotTable = field(default_factory=SlotTable)
    history: tuple[tuple[str, str], ...] = ()
    kb_facts: tuple[RestaurantFact, ...] = ()
    rejected_options: frozenset = frozenset()
    rejected_cuisines: frozenset = frozenset()
    excluded_cuisines: frozenset = frozenset()
    wanted_ingredients: frozenset = frozenset()
    profile_facts: tuple[str, ...] = ()          # extra rule-text facts, e.g. time(yesterday,...)
    pending_suggestion: tuple[str, ...] = ()
    current_offer: Optional[str] = None
    accepted: Optional[str] = None
    api_called: bool = False
    options_announced: bool = False
    last_justification: str = ""

    def with_fact_lines(self, facts: list[RestaurantFact]) -> "DialogState":
        return replace(self, kb_facts=self.kb_facts + tuple(facts))

    def to_json(self) -> str:
        doc = asdict(self)
        doc["rejected_options"] = sorted(self.rejected_options)
        doc["rejected_cuisines"] = sorted(self.rejected_cuisines)
        doc["excluded_cuisines"] = sorted(self.excluded_cuisines)
        doc["wanted_ingredients"] = sorted(self.wanted_ingredients)
        return json.dumps(doc, indent=1, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "DialogState":
        doc = json.loads(text)
        slots = doc.pop("slots")
        provenance = tuple(tuple(p) for p in slots.pop("provenance"))
        kb = tuple(RestaurantFact(**f) for f in doc.pop("kb_facts"))
        return DialogState(
            slots=SlotTable(provenance=provenance, **slots),
            kb_facts=kb,
            history=tuple(tuple(h) for h in doc.pop("history")),
            rejected_options=frozenset(doc.pop("rejected_options")),
            rejected_cuisines=frozenset(doc.pop("rejected_cuisines")),
            excluded_cuisines=frozenset(doc.pop("excluded_cuisines")),
            wanted_ingredients=frozenset(doc.pop("wanted_ingredients")),
            profile_facts=tuple(doc.pop("profile_facts")),
            pending_suggestion=tuple(doc.pop("pending_suggestion")),
            **doc,
        )


def legal_transition(old: str, new: str) -> bool:
    # Staying put (clarifications) is always fine; moves must be declared.
    return (old == new and old in STATES) or (old, new) in EDGES
