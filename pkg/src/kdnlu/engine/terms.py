"""First-order terms and unification for the rule engine.

Terms are immutable. Variables are written with a leading uppercase letter
(or underscore) in text form; anonymous variables (`_`) get a fresh identity
per occurrence and are marked so negation can treat them existentially.

Substitutions are plain dicts mapping Var -> Term. `unify` never mutates its
input substitution; it returns an extended copy or None. No occurs-check:
the programs we run are range-restricted over ground facts and cannot build
cyclic terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterator, Optional, Union

_fresh_ids = count(1)


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Int:
    value: int

    def __repr__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str
    ordinal: int = 0          # >0 for renamed-apart copies
    anonymous: bool = False   # true for `_`; existential under negation

    def __repr__(self) -> str:
        return self.name if self.ordinal == 0 else f"{self.name}_{self.ordinal}"


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple["Term", ...]

    def __repr__(self) -> str:
        return f"{self.functor}({','.join(map(repr, self.args))})"


@dataclass(frozen=True)
class PList:
    items: tuple["Term", ...]

    def __repr__(self) -> str:
        return f"[{','.join(map(repr, self.items))}]"


Term = Union[Atom, Int, Var, Struct, PList]
Subst = dict


def fresh_var(base: str = "_G", anonymous: bool = True) -> Var:
    return Var(base, next(_fresh_ids), anonymous)


def walk(term: Term, subst: Subst) -> Term:
    """Follow variable bindings one level (the classic walk)."""
    while isinstance(term, Var):
        bound = subst.get(term)
        if bound is None:
            return term
        term = bound
    return term


def resolve(term: Term, subst: Subst) -> Term:
    """Apply the substitution all the way down."""
    term = walk(term, subst)
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(resolve(a, subst) for a in term.args))
    if isinstance(term, PList):
        return PList(tuple(resolve(a, subst) for a in term.items))
    return term


def unify(a: Term, b: Term, subst: Subst) -> Optional[Subst]:
    a = walk(a, subst)
    b = walk(b, subst)
    if a == b:
        return subst
    if isinstance(a, Var):
        out = dict(subst)
        out[a] = b
        return out
    if isinstance(b, Var):
        out = dict(subst)
        out[b] = a
        return out
    if isinstance(a, Struct) and isinstance(b, Struct):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            subst = unify(x, y, subst)
            if subst is None:
                return None
        return subst
    if isinstance(a, PList) and isinstance(b, PList):
        if len(a.items) != len(b.items):
            return None
        for x, y in zip(a.items, b.items):
            subst = unify(x, y, subst)
            if subst is None:
                return None
        return subst
    return None


def is_ground(term: Term, subst: Subst | None = None, *, ignore_anonymous: bool = False) -> bool:
    term = walk(term, subst) if subst is not None else term
    if isinstance(term, Var):
        return ignore_anonymous and term.anonymous
    if isinstance(term, Struct):
        return all(is_ground(a, subst, ignore_anonymous=ignore_anonymous) for a in term.args)
    if isinstance(term, PList):
        return all(is_ground(a, subst, ignore_anonymous=ignore_anonymous) for a in term.items)
    return True


def variables(term: Term) -> Iterator[Var]:
    if isinstance(term, Var):
        yield term
    elif isinstance(term, Struct):
        for a in term.args:
            yield from variables(a)
    elif isinstance(term, PList):
        for a in term.items:
            yield from variables(a)


def rename(term: Term, mapping: dict) -> Term:
    """Rename variables apart using (and extending) the given mapping."""
    if isinstance(term, Var):
        if term not in mapping:
            mapping[term] = Var(term.name, next(_fresh_ids), term.anonymous)
        return mapping[term]
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(rename(a, mapping) for a in term.args))
    if isinstance(term, PList):
        return PList(tuple(rename(a, mapping) for a in term.items))
    return term


def variant_key(term: Term) -> tuple:
    """Structural key identifying a goal up to variable renaming.

    Variables are numbered in left-to-right order of first occurrence, so
    p(X,Y,X) and p(A,B,A) map to the same key while p(X,X,Y) does not.
    """
    numbering: dict = {}

    def key(t: Term) -> tuple:
        if isinstance(t, Var):
            if t not in numbering:
                numbering[t] = len(numbering)
            return ("v", numbering[t])
        if isinstance(t, Atom):
            return ("a", t.name)
        if isinstance(t, Int):
            return ("i", t.value)
        if isinstance(t, PList):
            return ("l",) + tuple(key(x) for x in t.items)
        return ("s", t.functor) + tuple(key(x) for x in t.args)

    return key(term)


def render(term: Term) -> str:
    """Compact text form: pred(t3,during(grab),agent(john))."""
    if isinstance(term, Struct):
        return f"{term.functor}({','.join(render(a) for a in term.args)})"
    if isinstance(term, PList):
        return f"[{','.join(render(a) for a in term.items)}]"
    return repr(term)
