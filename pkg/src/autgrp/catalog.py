"""Built-in automata, exercised through the same file format users write.

``get(name)`` returns a parsed automaton; ``load(name_or_path)`` falls back to
reading a file when the argument is not a registry name.
"""

from __future__ import annotations

import functools
import os

from .automata import MealyAutomaton, parse_automaton
from .errors import UnknownLetter

GRIGORCHUK = """\
# Grigorchuk group generators: a swaps the top branches, b, c, d walk a
# three-cycle and keep one branch active each.
alphabet: 0 1
states: e a b c d
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
trans: a 0 -> e 1
trans: a 1 -> e 0
trans: b 0 -> a 0
trans: b 1 -> c 1
trans: c 0 -> a 0
trans: c 1 -> d 1
trans: d 0 -> e 0
trans: d 1 -> b 1
"""

BASILICA = """\
# Basilica group: a and b feed each other, a twists the top level.
alphabet: 0 1
states: e a b
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
trans: a 0 -> e 1
trans: a 1 -> b 0
trans: b 0 -> e 0
trans: b 1 -> a 1
"""

POLY1 = """\
# Linear-activity example: a is a binary odometer, b keeps itself alive on
# one branch while spawning a on the other.
alphabet: 0 1
states: e a b
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
trans: a 0 -> e 1
trans: a 1 -> a 0
trans: b 0 -> a 0
trans: b 1 -> b 1
"""

ADDING = """\
# Binary odometer (adds 1, least-significant digit first) with its inverse,
# so the state set generates Z symmetrically.
alphabet: 0 1
states: e a A
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
trans: a 0 -> e 1
trans: a 1 -> a 0
trans: A 0 -> A 1
trans: A 1 -> e 0
"""

TRIVIAL = """\
alphabet: 0 1
states: e
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
"""

FLIP = """\
# Synthetic: s flips every letter at every level, so both of its self-loops
# are live simple cycles through one state (exponential activity).
alphabet: 0 1
states: e s
identity: e
trans: e 0 -> e 0
trans: e 1 -> e 1
trans: s 0 -> s 1
trans: s 1 -> s 0
"""

_REGISTRY = {
    "grigorchuk": GRIGORCHUK,
    "basilica": BASILICA,
    "poly1": POLY1,
    "adding": ADDING,
    "trivial": TRIVIAL,
    "flip": FLIP,
}


def names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


@functools.lru_cache(maxsize=None)
def get(name: str) -> MealyAutomaton:
    if name not in _REGISTRY:
        raise UnknownLetter(name, "built-in automaton")
    return parse_automaton(_REGISTRY[name])


def load(name_or_path: str) -> MealyAutomaton:
    if name_or_path in _REGISTRY:
        return get(name_or_path)
    if os.path.exists(name_or_path):
        with open(name_or_path, encoding="utf-8") as fh:
            return parse_automaton(fh.read())
    raise UnknownLetter(name_or_path, "automaton name or file")
