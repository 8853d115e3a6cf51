"""Step-count scaling of the solvers against candidate complexity shapes.

Runs two benchmark families, fits models to the measured step counts, and
prints the growth-implied single-tape time floor for the odometer.

Run:  python3 demos/scaling.py
"""

from autgrp import (
    catalog,
    csv_text,
    fit_complexity,
    growth,
    lower_bound_curve,
    run_bench,
)


def show_family(name: str, m_range: range) -> None:
    rows = run_bench(name, m_range, seed=0)
    print(f"== {name} (m = {m_range.start}..{m_range.stop - 1}) ==")
    print(csv_text(rows, ("m", "n", "stages", "steps"), seed=0), end="")
    fit = fit_complexity(rows)
    print(f"best shape: {fit.winner} (constant {fit.constant:.3g})")
    for model, residual in sorted(fit.residuals.items(), key=lambda kv: kv[1]):
        marker = " <-- winner" if model == fit.winner else ""
        print(f"  residual {model:>10} = {residual:.5f}{marker}")
    print()


def main() -> None:
    show_family("basilica-ab", range(4, 13))
    show_family("z4-halving", range(4, 12))

    adding = catalog.get("adding")
    gt = growth(adding, 16)
    print("single-tape floor for the odometer, n * log2(gamma(n)):")
    curve = lower_bound_curve(gt, range(0, 17, 4))
    print(csv_text(curve, ("n", "floor")), end="")
    print()
    print("the halving solver's measured steps sit a constant factor above")
    print("this curve; a plain quadratic would pull away from it quickly.")


if __name__ == "__main__":
    main()
