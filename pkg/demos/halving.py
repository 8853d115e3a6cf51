"""Trace the halving solver on rank-1 and Heisenberg instance groups.

Run:  python3 demos/halving.py
"""

import random

from autgrp import (
    build_instance,
    coset_scan,
    halve,
    random_trivial_word,
    solve_nilpotent,
)


def trace(inst, word) -> None:
    word = tuple(word)
    print(f"[{inst.name}] input ({len(word)} letters): {inst.word_str(word)}")
    while True:
        coset = coset_scan(inst, word)
        live = sum(1 for t in word if t != "e")
        print(f"  coset {coset}, {live} non-identity letters")
        if coset != "e":
            print("  -> reject (outside the image, triviality is ruled out)")
            return
        if live == 0:
            print("  -> accept")
            return
        word = halve(inst, word)
        print(f"  halved: {inst.word_str(word)}")


def main() -> None:
    z4 = build_instance("z4")
    print("rank-1 instance: letters", " ".join(sorted(z4.letter_names)))
    print()
    trace(z4, "aaaaAAAA")
    print()
    trace(z4, "aaaa")  # value 4 = one stretch of the generator, not trivial
    print()

    heis = build_instance("heis")
    print(f"Heisenberg instance: {heis.n_letters} letters, {heis.n_reps} cosets")
    print()
    trace(heis, "ABabC")  # the defining relation: [a,b] cancels c
    print()

    rng = random.Random(7)
    word = random_trivial_word(heis, 48, rng)
    trace(heis, word)
    print()

    n = 2**13
    rep = solve_nilpotent(z4, random_trivial_word(z4, n, random.Random(1)))
    print(
        f"scale check: {n} letters -> {'accept' if rep.accepted else 'reject'} in "
        f"{rep.stages} stages, {rep.steps} steps "
        f"({rep.steps / (n * 13):.2f} steps per letter per log)"
    )


if __name__ == "__main__":
    main()
