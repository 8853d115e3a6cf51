"""Word-problem solvers for automaton groups and nilpotent instance groups."""

from .automata import (
    InverseClosure,
    MealyAutomaton,
    Permutation,
    Word,
    alphabet_power,
    apply,
    inverse_closure,
    invert,
    minimize,
    parse_automaton,
    perm_of_word,
    section_of_word,
    serialize_automaton,
)
from .words import (
    CayleyBall,
    GrowthTable,
    SectionTable,
    are_equal,
    canonical_key,
    cayley_ball,
    growth,
    is_identity_oracle,
    sections_closure,
    word_length,
)
from .contraction import (
    ActivityClass,
    ContractionCertificate,
    ItemCheck,
    activity_count,
    build_certificate,
    check_item,
    check_item_sampled,
    classify_activity,
    find_certificate,
    load_certificate,
    loopify,
    serialize_certificate,
)
from .solvers import (
    StepReport,
    TapeWord,
    best_certificate,
    mx_step,
    solve_auto,
    solve_bounded,
    solve_contracting,
    solve_oracle,
    solve_polynomial,
)
from .nilpotent import (
    NilpotentInstance,
    TableCheck,
    build_instance,
    coset_scan,
    halve,
    instance_with_letters,
    random_trivial_word,
    random_word,
    solve_nilpotent,
    verify_table_closure,
)
from .bench import (
    FAMILIES,
    BenchFamily,
    BenchRow,
    FitResult,
    bench_report,
    csv_text,
    fit_complexity,
    get_family,
    lower_bound_curve,
    report_json,
    run_bench,
    write_csv,
)
from .cli import cli_main
from . import catalog, errors

__all__ = [
    "InverseClosure",
    "MealyAutomaton",
    "Permutation",
    "Word",
    "alphabet_power",
    "apply",
    "inverse_closure",
    "invert",
    "minimize",
    "parse_automaton",
    "perm_of_word",
    "section_of_word",
    "serialize_automaton",
    "CayleyBall",
    "GrowthTable",
    "SectionTable",
    "are_equal",
    "canonical_key",
    "cayley_ball",
    "growth",
    "is_identity_oracle",
    "sections_closure",
    "word_length",
    "ActivityClass",
    "ContractionCertificate",
    "ItemCheck",
    "activity_count",
    "build_certificate",
    "check_item",
    "check_item_sampled",
    "classify_activity",
    "find_certificate",
    "load_certificate",
    "loopify",
    "serialize_certificate",
    "StepReport",
    "TapeWord",
    "best_certificate",
    "mx_step",
    "solve_auto",
    "solve_bounded",
    "solve_contracting",
    "solve_oracle",
    "solve_polynomial",
    "NilpotentInstance",
    "TableCheck",
    "build_instance",
    "coset_scan",
    "halve",
    "instance_with_letters",
    "random_trivial_word",
    "random_word",
    "solve_nilpotent",
    "verify_table_closure",
    "FAMILIES",
    "BenchFamily",
    "BenchRow",
    "FitResult",
    "bench_report",
    "csv_text",
    "report_json",
    "fit_complexity",
    "get_family",
    "lower_bound_curve",
    "run_bench",
    "write_csv",
    "cli_main",
    "catalog",
    "errors",
]
