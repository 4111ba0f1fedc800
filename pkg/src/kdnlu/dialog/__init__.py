"""The reservation dialog agent: FSM, slot filling, rule-driven NLU."""

from .agent import (
    format_api_call,
    matching_restaurants,
    next_turn,
    present_option,
    provide_info,
    render_template,
    suggest_cuisine,
    templates,
)
from .nlu import SILENCE, missing_parameters, suggest_cuisines, understand
from .state import (
    CLOSE,
    COLLECT,
    CONFIRM,
    EDGES,
    EXTRA,
    GREET,
    OPTIONS,
    SLOT_NAMES,
    STATES,
    UPDATES,
    DialogState,
    RestaurantFact,
    SlotTable,
    legal_transition,
)

__all__ = [
    "CLOSE", "COLLECT", "CONFIRM", "EDGES", "EXTRA", "GREET", "OPTIONS",
    "SILENCE", "SLOT_NAMES", "STATES", "UPDATES", "DialogState",
    "RestaurantFact", "SlotTable", "format_api_call", "legal_transition",
    "matching_restaurants", "missing_parameters", "next_turn",
    "present_option", "provide_info", "render_template", "suggest_cuisine",
    "suggest_cuisines", "templates", "understand",
]
