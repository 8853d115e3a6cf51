"""Halving solver over finitely generated nilpotent groups."""

import itertools
import random

import numpy as np
import pytest

from autgrp import (
    NilpotentInstance,
    build_instance,
    coset_scan,
    halve,
    instance_with_letters,
    random_trivial_word,
    random_word,
    solve_nilpotent,
    verify_table_closure,
)
from autgrp.errors import UnknownLetter


Z4_LETTERS = [(j,) for j in range(-3, 4)]


# ------------------------------------------------------------------ building

def test_instance_shapes(z4, z2, heis):
    assert (z4.name, z4.n_letters, z4.n_reps) == ("z4", 7, 4)
    assert (z2.name, z2.n_letters, z2.n_reps) == ("z2", 49, 16)
    assert (heis.name, heis.n_letters, heis.n_reps) == ("heis", 25, 256)
    assert sorted(z4.letter_names) == ["A", "a", "a-2", "a-3", "a2", "a3", "e"]


def test_kind_aliases():
    assert build_instance("z").name == "z4"
    assert build_instance("z2x4").name == "z2"
    assert build_instance("heisenberg").name == "heis"
    with pytest.raises(ValueError):
        build_instance("zz")


def test_letters_closed_under_inversion(z4):
    with pytest.raises(ValueError):
        NilpotentInstance(z4.ops, [(0,), (1,)])


def test_parse_rejects_unknown(z4):
    with pytest.raises(UnknownLetter):
        z4.parse("aq")


# -------------------------------------------------------------------- tables

def test_rewrite_table_entries(z4):
    # x * a * b = phi(c) * y, checked on the three smallest cells
    ia = int(z4.parse("a")[0])
    ie = z4.e_index
    r2 = int(z4.ops.rep_index(np.array([[2]]))[0])
    assert z4.rep_name(z4.rep_e) == "e"
    assert [z4.rep_name(i) for i in range(4)] == ["e", "a", "a2", "a3"]

    def cell(a, b, x):
        return z4.letter_names[z4.c_tab[a, b, x]], z4.rep_name(z4.y_tab[a, b, x])

    assert cell(ia, ia, z4.rep_e) == ("e", "a2")
    assert cell(ia, ia, r2) == ("a", "e")
    assert cell(ie, ie, z4.rep_e) == ("e", "e")


def test_table_closure_all_instances(z4, z2, heis):
    for inst in (z4, z2, heis):
        chk = verify_table_closure(inst)
        assert chk
        assert chk.passed
        assert chk.witnesses == []


def test_shrunken_letter_set_is_caught():
    # drop the +-2 powers: squares of the extreme letters fall outside
    shrunk = [c for c in Z4_LETTERS if c not in ((2,), (-2,))]
    bad = instance_with_letters("z4", shrunk)
    chk = verify_table_closure(bad)
    assert not chk
    assert ("a-3", "a-3", "e") in chk.witnesses


# ------------------------------------------------------------------- scans

def test_coset_scan_values(z4):
    assert coset_scan(z4, "aaa") == "a3"
    assert coset_scan(z4, "aaaa") == "e"
    assert coset_scan(z4, "ee") == "e"
    assert coset_scan(z4, "") == "e"


def test_coset_scan_matches_direct_arithmetic(z4, heis):
    # the letter-by-letter action table against one closed-form product
    rng = random.Random(3)
    for inst in (z4, heis):
        ops = inst.ops
        for _ in range(80):
            w = random_word(inst, rng.randint(0, 40), rng)
            total = np.asarray([inst.word_value(w)], dtype=np.int64)
            want = inst.rep_name(int(ops.rep_index(ops.rep_coords(total))[0]))
            assert coset_scan(inst, w) == want


def test_heisenberg_values_do_not_commute(heis):
    assert heis.word_value("ab") == (1, 1, 1)
    assert heis.word_value("ba") == (1, 1, 0)


# ------------------------------------------------------------------- halving

def test_halve_examples(z4):
    assert halve(z4, "aaaa") == ("e", "e", "e", "a")
    assert halve(z4, "eee") == ("e", "e", "e")
    assert halve(z4, "aA") == ("e", "e")
    with pytest.raises(ValueError):
        halve(z4, "aaa")  # not a multiple of the image


def test_halve_is_semantic_exhaustive_small(z4):
    # every {a, A, e} word up to length 7: in-image words quarter their value,
    # everything else is refused
    phi_inv = z4.ops.phi_inv
    for n in range(8):
        for w in itertools.product("aAe", repeat=n):
            total = z4.word_value(w)
            if total[0] % 4 == 0:
                out = z4.word_value(halve(z4, w))
                assert out[0] * 4 == total[0]
            else:
                with pytest.raises(ValueError):
                    halve(z4, w)
    assert phi_inv(np.array([[8]]))[0, 0] == 2


def _heis_padding(inst, w):
    """Letters sending w's value into the image of the scaling map."""
    x, y, z = inst.ops.rep_coords(np.asarray([inst.word_value(w)]))[0]
    k = int(z) - int(x) * int(y)
    pad = ("c" if k < 0 else "C") * abs(k)
    pad += "B" * int(y) + "A" * int(x)
    return tuple(w) + tuple(pad)


def test_halve_is_semantic_heisenberg_sampled(heis):
    rng = random.Random(17)
    ops = heis.ops
    for _ in range(300):
        w = _heis_padding(heis, random_word(heis, rng.randint(0, 240), rng))
        assert coset_scan(heis, w) == "e"
        got = np.asarray([heis.word_value(halve(heis, w))])
        want = ops.phi_inv(np.asarray([heis.word_value(w)]))
        assert (got == want).all()


# ------------------------------------------------------------------- solving

def test_solve_frozen_reports(z4):
    r = solve_nilpotent(z4, "aaaa")  # a^4 = phi(a), not the identity
    assert not r.accepted
    assert (r.stages, r.steps) == (1, 24)
    assert r.detail == {"group": "z4", "stage_nontrivial": [4, 1], "coset": "a"}

    r = solve_nilpotent(z4, "aaa")
    assert (r.accepted, r.stages, r.detail["coset"]) == (False, 0, "a3")

    r = solve_nilpotent(z4, "a" * 8 + "A" * 8)
    assert r.accepted
    assert (r.stages, r.steps) == (2, 132)
    assert r.detail["stage_nontrivial"] == [16, 4, 0]

    r = solve_nilpotent(z4, "")
    assert (r.accepted, r.steps) == (True, 0)


def test_solve_heisenberg_commutator(heis):
    # [a, b] = c, so the commutator times C vanishes
    assert solve_nilpotent(heis, "ABabC").accepted
    r = solve_nilpotent(heis, "ABab")
    assert not r.accepted
    assert r.detail["coset"] == "c"


def test_solve_agrees_with_value_oracle(z4, heis):
    rng = random.Random(29)
    for inst in (z4, heis):
        for _ in range(150):
            w = random_word(inst, rng.randint(0, 60), rng)
            assert solve_nilpotent(inst, w).accepted == inst.is_trivial(w)


def test_stage_population_halves(z4, heis):
    # non-identity letters at stage k, at most n / 2^k plus slack
    rng = random.Random(41)
    for inst in (z4, heis):
        for n in (64, 200, 500):
            w = random_trivial_word(inst, n, rng)
            r = solve_nilpotent(inst, w)
            assert r.accepted
            for k, live in enumerate(r.detail["stage_nontrivial"]):
                assert live <= n / 2**k + 2


def test_word_generators(z4, heis):
    w1 = random_word(z4, 20, random.Random(5))
    w2 = random_word(z4, 20, random.Random(5))
    assert w1 == w2
    assert len(w1) == 20
    tw = random_trivial_word(heis, 30, random.Random(9))
    assert len(tw) == 30
    assert heis.is_trivial(tw)
    assert solve_nilpotent(heis, tw).accepted
