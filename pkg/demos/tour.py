"""Walk the built-in automata: shape, activity class, certificates, verdicts.

Run:  python3 demos/tour.py
"""

from autgrp import (
    activity_count,
    best_certificate,
    catalog,
    classify_activity,
    section_of_word,
    solve_auto,
)


def main() -> None:
    for name in catalog.names():
        A = catalog.get(name)
        cls = classify_activity(A)
        cert = best_certificate(A, 4, 2)
        print(f"{name}: {len(A.states)} states over {{{' '.join(A.letters)}}}, {cls}")
        if cert is not None:
            print(
                f"  certificate: {cert.mode} at block {cert.block}, power {cert.power}, "
                f"table ratio {cert.shrink_ratio}"
            )
        else:
            print("  certificate: none up to block 4, power 2")
        counts = [activity_count(A, A.states[-1], n) for n in range(6)]
        print(f"  active sections of {A.states[-1]!r} by depth: {counts}")

    print()
    print("a few verdicts, dispatched automatically:")
    for name, word in (
        ("grigorchuk", "cdb"),
        ("grigorchuk", "ab" * 16),
        ("grigorchuk", "ab" * 8),
        ("basilica", "aabBAA"),
        ("poly1", "BbAa"),
    ):
        A = catalog.get(name)
        rep = solve_auto(A, word)
        shown = word if len(word) <= 16 else f"{word[:13]}...({len(word)} letters)"
        print(
            f"  {name} {shown}: {'accept' if rep.accepted else 'reject'} "
            f"via {rep.method}, {rep.stages} stages, {rep.steps} steps"
        )

    g = catalog.get("grigorchuk")
    print()
    print("sections of 'ad' below each first-level vertex:")
    for x in g.letters:
        sec = section_of_word(g, "ad", x)
        print(f"  at {x}: {' '.join(sec) if sec else '-'}")


if __name__ == "__main__":
    main()
