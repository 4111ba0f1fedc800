#!/usr/bin/env python3
"""Regenerate the vendored story-QA and dialog subsets.

Gold answers come from a direct world simulation, independent of the NLU
pipeline that will be scored against them. Output is the public dataset
line format, 50 stories per QA task and 20 dialogs per dialog task
(plain and OOV variants).

Usage: python scripts/make_smoke_data.py [--seed N] [--out DIR]
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

PERSONS = ["Mary", "John", "Daniel", "Sandra"]
EXTRA_PERSONS = ["Fred", "Bill", "Jeff", "Julie"]
LOCATIONS = ["bathroom", "hallway", "bedroom", "garden", "kitchen", "office"]
PLACES_BE = ["school", "park", "cinema", "office", "kitchen"]
OBJECTS = ["football", "milk", "apple"]

MOVE_FORMS = [
    "{p} moved to the {l}.",
    "{p} went to the {l}.",
    "{p} journeyed to the {l}.",
    "{p} travelled to the {l}.",
    "{p} went back to the {l}.",
]
TAKE_FORMS = [
    "{p} took the {o}{there}.",
    "{p} got the {o}{there}.",
    "{p} grabbed the {o}{there}.",
    "{p} picked up the {o}{there}.",
]
DROP_FORMS = [
    "{p} dropped the {o}.",
    "{p} discarded the {o}.",
    "{p} put down the {o}.",
    "{p} left the {o}.",
]
GIVE_FORMS = [
    "{p} gave the {o} to {q}.",
    "{p} passed the {o} to {q}.",
    "{p} handed the {o} to {q}.",
]
COREF_FORMS = [
    "Then {pro} {verb} to the {l}.",
    "After that {pro} {verb} to the {l}.",
    "Afterwards {pro} {verb} to the {l}.",
    "Following that {pro} {verb} to the {l}.",
]
COREF_VERBS = ["went", "moved", "journeyed", "travelled"]
GENDER = {"Mary": "f", "Sandra": "f", "Julie": "f", "John": "m", "Daniel": "m",
          "Fred": "m", "Bill": "m", "Jeff": "m"}
NUMBER_WORDS = ["none", "one", "two", "three", "four", "five", "six"]


class Story:
    """bAbI line assembly plus the simulated world."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.lines: list[str] = []
        self.n = 0
        self.loc: dict[str, str] = {}
        self.move_line: dict[str, int] = {}
        self.holdings: dict[str, list[str]] = {}
        self.take_line: dict[str, int] = {}
        self.object_loc: dict[str, str | None] = {}
        self.object_known: dict[str, bool] = {}
        self.object_lines: dict[str, list[int]] = {}
        self.gives: list[tuple[str, str, str, int]] = []  # giver, object, recipient, line
        self.possible: dict[str, tuple[str, ...]] = {}
        self.negated: dict[str, set[str]] = {}

    def stmt(self, text: str) -> int:
        self.n += 1
        self.lines.append(f"{self.n} {text}")
        return self.n

    def ask(self, text: str, gold: str, support: list[int]) -> None:
        self.n += 1
        sup = " ".join(str(s) for s in support)
        self.lines.append(f"{self.n} {text}\t{gold}\t{sup}")

    # -- world actions ----------------------------------------------------

    def move(self, p: str, mention_there_ok: bool = True) -> None:
        l = self.rng.choice([x for x in LOCATIONS if x != self.loc.get(p)])
        form = self.rng.choice(MOVE_FORMS)
        if "back" in form and p not in self.loc:
            form = MOVE_FORMS[0]
        line = self.stmt(form.format(p=p, l=l))
        self.loc[p] = l
        self.move_line[p] = line
        self.possible.pop(p, None)
        self.negated.pop(p, None)
        for o in self.holdings.get(p, []):
            self.object_loc[o] = l
            self.object_known[o] = True
            self.object_lines.setdefault(o, []).append(line)

    def take(self, p: str, o: str) -> None:
        there = " there" if self.loc.get(p) and self.rng.random() < 0.5 else ""
        form = self.rng.choice(TAKE_FORMS)
        line = self.stmt(form.format(p=p, o=o, there=there))
        self.holdings.setdefault(p, [])
        if o in self.holdings[p]:
            self.holdings[p].remove(o)
        self.holdings[p].append(o)
        self.take_line[o] = line
        self.object_loc[o] = self.loc.get(p)
        self.object_known[o] = p in self.loc
        self.object_lines[o] = [line] + ([self.move_line[p]] if p in self.move_line else [])

    def drop(self, p: str, o: str) -> None:
        form = self.rng.choice(DROP_FORMS)
        line = self.stmt(form.format(p=p, o=o))
        self.holdings[p].remove(o)
        self.object_loc[o] = self.loc.get(p)
        self.object_known[o] = p in self.loc
        self.object_lines.setdefault(o, []).append(line)

    def give(self, p: str, o: str, q: str) -> None:
        form = self.rng.choice(GIVE_FORMS)
        line = self.stmt(form.format(p=p, o=o, q=q))
        self.holdings[p].remove(o)
        self.holdings.setdefault(q, [])
        self.holdings[q].append(o)
        self.gives.append((p, o, q, line))
        self.object_loc[o] = self.loc.get(q)
        self.object_known[o] = q in self.loc

    def holder_of(self, o: str) -> str | None:
        for p, held in self.holdings.items():
            if o in held:
                return p
        return None


def _located_person(story: Story, rng: random.Random, persons: list[str]) -> str | None:
    known = [p for p in persons if p in story.loc]
    return rng.choice(known) if known else None


# --- task generators ------------------------------------------------------------

def gen_task1(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS + EXTRA_PERSONS, 4)
    for _ in range(5):
        for _ in range(2):
            s.move(rng.choice(persons))
        p = _located_person(s, rng, persons)
        s.ask(f"Where is {p}?", s.loc[p], [s.move_line[p]])
    return s


def gen_task2(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS, 3)
    objects = rng.sample(OBJECTS, 2)
    asked = 0
    while asked < 5:
        action = rng.random()
        p = rng.choice(persons)
        if action < 0.45:
            s.move(p)
        elif action < 0.75:
            free = [
                o for o in objects
                if s.holder_of(o) is None
                and (s.object_loc.get(o) is None or s.object_loc.get(o) == s.loc.get(p))
            ]
            if free and len(s.holdings.get(p, [])) < 2:
                s.take(p, rng.choice(free))
            else:
                s.move(p)
        else:
            held = s.holdings.get(p, [])
            if held:
                s.drop(p, rng.choice(held))
            else:
                s.move(p)
        determinate = [o for o in objects if s.object_known.get(o) and s.object_loc.get(o)]
        if determinate and s.n >= 3 and rng.random() < 0.6:
            o = rng.choice(determinate)
            s.ask(f"Where is the {o}?", s.object_loc[o], s.object_lines.get(o, [])[:2])
            asked += 1
    return s


def gen_task5(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS + EXTRA_PERSONS, 3)
    objects = rng.sample(OBJECTS, 2)
    asked = 0
    while asked < 5:
        p = rng.choice(persons)
        roll = rng.random()
        if roll < 0.3:
            s.move(p)
        elif roll < 0.6:
            free = [o for o in objects if s.holder_of(o) is None]
            if free:
                s.take(p, rng.choice(free))
            else:
                s.move(p)
        else:
            held = s.holdings.get(p, [])
            if held:
                q = rng.choice([x for x in persons if x != p])
                s.give(p, rng.choice(held), q)
            else:
                s.move(p)
        if s.gives and rng.random() < 0.55:
            giver, obj, recipient, line = s.gives[-1]
            kind = rng.randrange(4)
            if kind == 0:
                latest = max(
                    (g for g in s.gives if g[0] == giver and g[2] == recipient),
                    key=lambda g: g[3],
                )
                s.ask(f"What did {giver} give to {recipient}?", latest[1], [latest[3]])
            elif kind == 1:
                latest = max(
                    (g for g in s.gives if g[1] == obj and g[2] == recipient),
                    key=lambda g: g[3],
                )
                s.ask(f"Who gave the {obj} to {recipient}?", latest[0], [latest[3]])
            elif kind == 2:
                latest = max(
                    (g for g in s.gives if g[0] == giver and g[1] == obj),
                    key=lambda g: g[3],
                )
                s.ask(f"Who did {giver} give the {obj} to?", latest[2], [latest[3]])
            else:
                latest = max((g for g in s.gives if g[1] == obj), key=lambda g: g[3])
                s.ask(f"Who received the {obj}?", latest[2], [latest[3]])
            asked += 1
    return s


def gen_task6(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS + EXTRA_PERSONS, 4)
    for _ in range(5):
        for _ in range(2):
            s.move(rng.choice(persons))
        p = _located_person(s, rng, persons)
        actual = s.loc[p]
        if rng.random() < 0.5:
            s.ask(f"Is {p} in the {actual}?", "yes", [s.move_line[p]])
        else:
            other = rng.choice([l for l in LOCATIONS if l != actual])
            s.ask(f"Is {p} in the {other}?", "no", [s.move_line[p]])
    return s


def _gen_holdings_task(rng: random.Random, question: str) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS, 2)
    objects = list(OBJECTS)
    asked = 0
    while asked < 5:
        p = rng.choice(persons)
        roll = rng.random()
        if roll < 0.3:
            s.move(p)
        elif roll < 0.7:
            free = [
                o for o in objects
                if s.holder_of(o) is None
                and (s.object_loc.get(o) is None or s.object_loc.get(o) == s.loc.get(p))
            ]
            if free and len(s.holdings.get(p, [])) < 3:
                s.take(p, rng.choice(free))
            else:
                s.move(p)
        else:
            held = s.holdings.get(p, [])
            if held:
                if rng.random() < 0.3 and len(persons) > 1:
                    q = rng.choice([x for x in persons if x != p])
                    s.give(p, rng.choice(held), q)
                else:
                    s.drop(p, rng.choice(held))
            else:
                s.move(p)
        if rng.random() < 0.55:
            who = rng.choice(persons)
            held = s.holdings.get(who, [])
            if question == "count":
                s.ask(
                    f"How many objects is {who} carrying?",
                    NUMBER_WORDS[len(held)],
                    [s.take_line[o] for o in held][:3],
                )
            else:
                gold = ",".join(held) if held else "nothing"
                s.ask(
                    f"What is {who} carrying?",
                    gold,
                    [s.take_line[o] for o in held][:3],
                )
            asked += 1
    return s


def gen_task7(rng: random.Random) -> Story:
    return _gen_holdings_task(rng, "count")


def gen_task8(rng: random.Random) -> Story:
    return _gen_holdings_task(rng, "list")


def gen_task9(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS + EXTRA_PERSONS, 3)
    places = PLACES_BE

    def assert_loc(p: str) -> None:
        l = rng.choice(places)
        line = s.stmt(f"{p} is in the {l}.")
        s.loc[p] = l
        s.move_line[p] = line
        s.possible.pop(p, None)
        s.negated.pop(p, None)

    def negate(p: str) -> None:
        form = rng.choice(["{p} is no longer in the {l}.", "{p} is not in the {l}."])
        if p in s.loc and rng.random() < 0.7:
            l = s.loc[p]
            line = s.stmt(form.format(p=p, l=l))
            del s.loc[p]
            s.negated.setdefault(p, set()).add(l)
        else:
            l = rng.choice([x for x in places if x != s.loc.get(p)])
            line = s.stmt(form.format(p=p, l=l))
            s.negated.setdefault(p, set()).add(l)
        s.move_line[p] = line

    for _ in range(5):
        for _ in range(2):
            p = rng.choice(persons)
            roll = rng.random()
            if roll < 0.4:
                s.move(p)
            elif roll < 0.7:
                assert_loc(p)
            else:
                negate(p)
        candidates = []
        for p in persons:
            if p in s.loc:
                candidates.append((p, s.loc[p], "yes"))
                other = rng.choice([x for x in LOCATIONS + places if x != s.loc[p]])
                candidates.append((p, other, "no"))
            for l in s.negated.get(p, ()):
                if s.loc.get(p) != l:
                    candidates.append((p, l, "no"))
        p, l, gold = rng.choice(candidates)
        s.ask(f"Is {p} in the {l}?", gold, [s.move_line[p]])
    return s


def gen_task10(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample(PERSONS + EXTRA_PERSONS, 3)
    places = PLACES_BE

    def assert_loc(p: str) -> None:
        l = rng.choice(places)
        line = s.stmt(f"{p} is in the {l}.")
        s.loc[p] = l
        s.possible.pop(p, None)
        s.move_line[p] = line

    def either(p: str) -> None:
        a, b = rng.sample(places, 2)
        line = s.stmt(f"{p} is either in the {a} or the {b}.")
        s.loc.pop(p, None)
        s.possible[p] = (a, b)
        s.move_line[p] = line

    for _ in range(5):
        p = rng.choice(persons)
        roll = rng.random()
        if roll < 0.3:
            s.move(p)
        elif roll < 0.6:
            assert_loc(p)
        else:
            either(p)
        candidates = []
        for q in persons:
            if q in s.loc:
                candidates.append((q, s.loc[q], "yes"))
                candidates.append(
                    (q, rng.choice([x for x in places if x != s.loc[q]]), "no")
                )
            elif q in s.possible:
                a, b = s.possible[q]
                candidates.append((q, rng.choice([a, b]), "maybe"))
                others = [x for x in places if x not in (a, b)]
                if others:
                    candidates.append((q, rng.choice(others), "no"))
        q, l, gold = rng.choice(candidates)
        s.ask(f"Is {q} in the {l}?", gold, [s.move_line[q]])
    return s


def gen_task11(rng: random.Random) -> Story:
    s = Story(rng)
    persons = rng.sample([p for p in PERSONS + EXTRA_PERSONS if p in GENDER], 3)
    for _ in range(5):
        p = rng.choice(persons)
        s.move(p)
        pro = "he" if GENDER[p] == "m" else "she"
        l = rng.choice([x for x in LOCATIONS if x != s.loc[p]])
        form = rng.choice(COREF_FORMS)
        line = s.stmt(form.format(pro=pro, verb=rng.choice(COREF_VERBS), l=l))
        s.loc[p] = l
        s.move_line[p] = line
        who = _located_person(s, rng, persons)
        s.ask(f"Where is {who}?", s.loc[who], [s.move_line[who]])
    return s


QA_GENERATORS = {
    1: gen_task1, 2: gen_task2, 5: gen_task5, 6: gen_task6, 7: gen_task7,
    8: gen_task8, 9: gen_task9, 10: gen_task10, 11: gen_task11,
}


# --- dialog generation ----------------------------------------------------------------

CUISINES = ["british", "cantonese", "french", "indian", "italian",
            "japanese", "korean", "spanish", "thai", "vietnamese"]
DIALOG_LOCATIONS = ["bangkok", "beijing", "bombay", "hanoi", "london",
                    "madrid", "paris", "rome", "seoul", "tokyo"]
OOV_CUISINES = ["ethiopian", "peruvian", "hungarian", "cajun"]
OOV_LOCATIONS = ["reykjavik", "lagos", "quito", "tbilisi"]
SIZES = ["two", "four", "six", "eight"]
PRICES = ["cheap", "moderate", "expensive"]

GREETINGS = ["hi", "hello", "good morning", "good afternoon"]
REQUEST_FORMS = [
    "can you book a table {frags}",
    "can you make a restaurant reservation {frags}",
    "may i have a table {frags}",
    "i'd like to book a table {frags}",
]
CUISINE_ANSWERS = ["i love {c} food", "with {c} food"]
LOCATION_ANSWERS = ["in {l}"]
SIZE_ANSWERS = ["we will be {n}", "for {n} people please"]
PRICE_ANSWERS = ["in a {p} price range please", "i am looking for a {p} restaurant"]
REJECTS = ["no this does not work for me", "i don't like that", "do you have something else"]
ACCEPTS = ["let's do it", "it's perfect", "i love that"]
PHONE_ASKS = ["may i have the phone number of the restaurant", "do you have its phone number"]
ADDRESS_ASKS = ["do you have its address", "may i have the address of the restaurant"]
THANKS = ["thank you", "thanks"]
BYES = ["no thank you", "no thanks"]

PROMPTS = {
    "cuisine": "any preference on a type of cuisine",
    "location": "where should it be",
    "party_size": "how many people would be in your party",
    "price": "which price range are looking for",
}
SLOT_ORDER = ["cuisine", "location", "party_size", "price"]


class Dialog:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.n = 0

    def turn(self, user: str, bot: str) -> None:
        self.n += 1
        self.lines.append(f"{self.n} {user}\t{bot}")

    def fact(self, restaurant: str, attribute: str, value: str) -> None:
        self.n += 1
        self.lines.append(f"{self.n} {restaurant} {attribute} {value}")


def _pick_slots(rng: random.Random, oov: bool) -> dict[str, str]:
    return {
        "cuisine": rng.choice(OOV_CUISINES if oov else CUISINES),
        "location": rng.choice(OOV_LOCATIONS if oov else DIALOG_LOCATIONS),
        "party_size": rng.choice(SIZES),
        "price": rng.choice(PRICES),
    }


def _request_fragments(rng: random.Random, slots: dict[str, str], given: list[str]) -> str:
    frags = []
    for name in given:
        if name == "cuisine":
            frags.append(
                rng.choice([f"with {slots['cuisine']} food", f"with {slots['cuisine']} cuisine"])
            )
        elif name == "location":
            frags.append(f"in {slots['location']}")
        elif name == "party_size":
            frags.append(rng.choice([f"for {slots['party_size']} people", f"for {slots['party_size']}"]))
        else:
            frags.append(f"in a {slots['price']} price range")
    return " ".join(frags)


def _slot_answer(rng: random.Random, name: str, value: str) -> str:
    if name == "cuisine":
        return rng.choice(CUISINE_ANSWERS).format(c=value)
    if name == "location":
        return rng.choice(LOCATION_ANSWERS).format(l=value)
    if name == "party_size":
        return rng.choice(SIZE_ANSWERS).format(n=value)
    return rng.choice(PRICE_ANSWERS).format(p=value)


def _collect_phase(d: Dialog, rng: random.Random, slots: dict[str, str]) -> None:
    given = [n for n in SLOT_ORDER if rng.random() < 0.5]
    frags = _request_fragments(rng, slots, given)
    request = rng.choice(REQUEST_FORMS).format(frags=frags).rstrip()
    d.turn(rng.choice(GREETINGS), "hello what can i help you with today")
    d.turn(request, "i'm on it")
    missing = [n for n in SLOT_ORDER if n not in given]
    if not missing:
        d.turn("<SILENCE>", "ok let me look into some options for you")
        return
    d.turn("<SILENCE>", PROMPTS[missing[0]])
    for i, name in enumerate(missing):
        answer = _slot_answer(rng, name, slots[name])
        if i + 1 < len(missing):
            d.turn(answer, PROMPTS[missing[i + 1]])
        else:
            d.turn(answer, "ok let me look into some options for you")


def _api_call(slots: dict[str, str]) -> str:
    return (
        f"api_call {slots['cuisine']} {slots['location']} "
        f"{slots['party_size']} {slots['price']}"
    )


def _restaurants_for(rng: random.Random, slots: dict[str, str], k: int) -> list[tuple[str, int]]:
    ratings = rng.sample(range(1, 9), k)
    out = []
    for rating in ratings:
        name = (
            f"resto_{slots['location']}_{slots['price']}_{slots['cuisine']}_{rating}stars"
        )
        out.append((name, rating))
    out.sort(key=lambda pair: (-pair[1], pair[0]))
    return out


def _emit_facts(d: Dialog, restaurants: list[tuple[str, int]], slots: dict[str, str]) -> None:
    for name, rating in restaurants:
        d.fact(name, "R_phone", f"{name}_phone")
        d.fact(name, "R_cuisine", slots["cuisine"])
        d.fact(name, "R_address", f"{name}_address")
        d.fact(name, "R_location", slots["location"])
        d.fact(name, "R_number", slots["party_size"])
        d.fact(name, "R_price", slots["price"])
        d.fact(name, "R_rating", str(rating))


def _options_phase(d: Dialog, rng: random.Random, restaurants: list[tuple[str, int]]) -> str:
    rejections = rng.randrange(min(3, len(restaurants)))
    d.turn("<SILENCE>", f"what do you think of this option: {restaurants[0][0]}")
    for i in range(rejections):
        d.turn(rng.choice(REJECTS), "sure let me find an other option for you")
        d.turn("<SILENCE>", f"what do you think of this option: {restaurants[i + 1][0]}")
    accepted = restaurants[rejections][0]
    d.turn(rng.choice(ACCEPTS), "great let me do the reservation")
    return accepted


def _extra_phase(d: Dialog, rng: random.Random, accepted: str) -> None:
    asks = rng.randrange(1, 3)
    kinds = rng.sample(["phone", "address"], asks)
    for kind in kinds:
        if kind == "phone":
            d.turn(rng.choice(PHONE_ASKS), f"here it is {accepted}_phone")
        else:
            d.turn(rng.choice(ADDRESS_ASKS), f"here it is {accepted}_address")
    d.turn(rng.choice(THANKS), "is there anything i can help you with")
    d.turn(rng.choice(BYES), "you're welcome")


def gen_dialog(task: int, rng: random.Random, oov: bool) -> Dialog:
    d = Dialog()
    slots = _pick_slots(rng, oov)
    if task == 4:
        restaurants = _restaurants_for(rng, slots, 1)
        _emit_facts(d, restaurants, slots)
        name = restaurants[0][0]
        d.turn(rng.choice(GREETINGS), "hello what can i help you with today")
        booking = rng.choice(
            [f"can you make a restaurant reservation at {name}",
             f"i'd like to book a table at {name}"]
        )
        d.turn(booking, "great let me do the reservation")
        _extra_phase(d, rng, name)
        return d
    if task == 3:
        restaurants = _restaurants_for(rng, slots, rng.randrange(2, 5))
        _emit_facts(d, restaurants, slots)
        _collect_phase(d, rng, slots)
        accepted = _options_phase(d, rng, restaurants)
        d.turn(rng.choice(THANKS), "is there anything i can help you with")
        d.turn(rng.choice(BYES), "you're welcome")
        return d

    _collect_phase(d, rng, slots)
    d.turn("<SILENCE>", _api_call(slots))
    if task == 1:
        return d
    if task == 2 or (task == 5 and rng.random() < 0.35):
        for _ in range(rng.randrange(1, 3)):
            name = rng.choice(SLOT_ORDER)
            value = rng.choice(
                {
                    "cuisine": OOV_CUISINES if oov else CUISINES,
                    "location": OOV_LOCATIONS if oov else DIALOG_LOCATIONS,
                    "party_size": SIZES,
                    "price": PRICES,
                }[name]
            )
            slots[name] = value
            frag = {
                "cuisine": f"with {value} food",
                "location": f"in {value}",
                "party_size": f"for {value} people",
                "price": f"in a {value} price range",
            }[name]
            prefix = rng.choice(["instead could it be", "actually i would prefer"])
            d.turn(f"{prefix} {frag}", "sure is there anything else to update")
        d.turn("no", "ok let me look into some options for you")
        d.turn("<SILENCE>", _api_call(slots))
        if task == 2:
            return d
    # task 5 tail: results, options, extra info, closing
    restaurants = _restaurants_for(rng, slots, rng.randrange(2, 5))
    _emit_facts(d, restaurants, slots)
    accepted = _options_phase(d, rng, restaurants)
    _extra_phase(d, rng, accepted)
    return d


# --- entry point ------------------------------------------------------------------------

def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "src" / "kdnlu" / "resources" / "data"),
    )
    parser.add_argument("--stories", type=int, default=50)
    parser.add_argument("--dialogs", type=int, default=20)
    args = parser.parse_args()

    out = Path(args.out)
    (out / "qa").mkdir(parents=True, exist_ok=True)
    (out / "dialog").mkdir(parents=True, exist_ok=True)

    for task, gen in sorted(QA_GENERATORS.items()):
        rng = random.Random(args.seed * 1000 + task)
        lines: list[str] = []
        for _ in range(args.stories):
            lines.extend(gen(rng).lines)
        path = out / "qa" / f"qa{task}_test.txt"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")

    for task in (1, 2, 3, 4, 5):
        for oov in (False, True):
            rng = random.Random(args.seed * 2000 + task * 10 + int(oov))
            chunks = []
            for _ in range(args.dialogs):
                chunks.append("\n".join(gen_dialog(task, rng, oov).lines))
            suffix = "OOV-test" if oov else "test"
            path = out / "dialog" / f"dialog_task{task}_{suffix}.txt"
            path.write_text("\n\n".join(chunks) + "\n")
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
