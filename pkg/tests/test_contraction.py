"""Block-shrink checks, certificates, and activity classification."""

from fractions import Fraction

import pytest

from autgrp import (
    activity_count,
    best_certificate,
    build_certificate,
    check_item,
    check_item_sampled,
    classify_activity,
    find_certificate,
    load_certificate,
    loopify,
    mx_step,
    serialize_certificate,
)
from autgrp.errors import (
    AutomatonFormatError,
    CertificateNotFound,
    NotPolynomial,
)


# ---------------------------------------------------------------- check_item

def test_grig_shrinks_every_pair(grig):
    r = check_item(grig, 2, 1, "item1")
    assert r.passed
    assert (r.mode, r.block, r.power) == ("item1", 2, 1)
    assert r.words_checked == 16  # 4 non-identity states, squared
    assert r.max_section == 1
    assert r.witness is None


def test_grig_pair_fails_total_sum(grig):
    # the same cell under the harsher total-length reading has a witness
    r = check_item(grig, 2, 1, "item3")
    assert not r.passed
    assert r.witness == ("a", "b")


def test_basilica_strong_cell(basilica):
    r = check_item(basilica, 3, 2, "item1")
    assert r.passed
    assert r.max_section == 2  # 2/3 shrink
    assert r.words_checked == 64


def test_basilica_weak_cell(basilica):
    # single letters never grow, but 'a' maps to 'b' with no progress
    assert check_item(basilica, 1, 1, "item2").passed
    r = check_item(basilica, 1, 1, "item1")
    assert not r.passed
    assert r.witness == ("a",)
    assert r.witness_branch == "1"


def test_poly1_never_shrinks(poly1):
    assert check_item(poly1, 3, 1, "item1").witness == ("a", "b", "b")
    assert check_item(poly1, 3, 1, "item2").witness == ("a", "a", "b")


def test_sampled_check_agrees_with_exhaustive(grig):
    r = check_item_sampled(grig, 2, 1, "item1", samples=500, seed=7)
    assert r.passed
    assert r.words_checked == 500


# -------------------------------------------------------------- certificates

def test_find_certificate_grig(grig_cert):
    assert (grig_cert.mode, grig_cert.block, grig_cert.power) == ("item1", 2, 1)
    assert grig_cert.shrink_ratio == Fraction(1, 2)
    assert grig_cert.stage_ratio == Fraction(3, 4)


def test_find_certificate_scans_cheapest_cell_first(basilica):
    c = find_certificate(basilica, 4, 2)
    assert (c.mode, c.block, c.power) == ("item2", 1, 1)


def test_best_certificate_avoids_weak_mode(grig, basilica, poly1):
    c = best_certificate(basilica, 4, 2)
    assert (c.mode, c.block, c.power) == ("item1", 3, 2)
    assert c.shrink_ratio == Fraction(2, 3)
    assert c.stage_ratio == Fraction(5, 6)
    g = best_certificate(grig, 4, 2)
    assert (g.mode, g.block, g.power) == ("item1", 2, 1)
    assert best_certificate(poly1, 4, 2) is None


def test_find_certificate_poly1_fails(poly1):
    with pytest.raises(CertificateNotFound) as exc:
        find_certificate(poly1, 4, 2)
    assert exc.value.max_block == 4
    assert exc.value.max_power == 2


def test_mx_step_rewrites_blocks(grig_cert, basilica_cert, basilica_weak_cert):
    assert mx_step(basilica_weak_cert, 0, "ab") == ("a",)
    assert mx_step(basilica_weak_cert, 1, "ab") == ("b",)
    assert mx_step(basilica_cert, 0, "abbaab") == ("b",)
    assert mx_step(grig_cert, 0, "abab") == ("c", "a")
    assert mx_step(grig_cert, 1, "abab") == ("a", "c")


def test_serialize_round_trip(grig, grig_cert):
    text = serialize_certificate(grig_cert)
    assert text.splitlines()[0] == "item1 2 1 1/2"
    assert text.splitlines()[1].startswith("sect: ")
    back = load_certificate(text, grig)
    assert serialize_certificate(back) == text
    assert (back.mode, back.block, back.power) == ("item1", 2, 1)
    assert back.shrink_ratio == Fraction(1, 2)
    assert back.eager
    # the reloaded table rewrites identically
    assert mx_step(back, 0, "abab") == ("c", "a")


def test_load_validates_against_automaton(basilica, grig_cert):
    text = serialize_certificate(grig_cert)
    with pytest.raises(AutomatonFormatError):
        load_certificate(text, basilica)


# ------------------------------------------------------------ classification

def test_activity_grig(grig):
    assert [activity_count(grig, "a", n) for n in range(6)] == [1, 0, 0, 0, 0, 0]
    assert [activity_count(grig, "b", n) for n in range(6)] == [1, 2, 2, 1, 2, 2]


def test_activity_basilica(basilica):
    assert [activity_count(basilica, "a", n) for n in range(6)] == [1] * 6


def test_activity_poly1(poly1):
    assert [activity_count(poly1, "b", n) for n in range(6)] == [1, 2, 3, 4, 5, 6]


def test_classify_catalog(grig, basilica, poly1, flip, adding):
    for A, kind, degree, bound in (
        (grig, "bounded", 0, 2),
        (basilica, "bounded", 0, 1),
        (adding, "bounded", 0, 1),
        (poly1, "polynomial", 1, None),
        (flip, "exponential", None, None),
    ):
        c = classify_activity(A)
        assert (c.kind, c.degree, c.bound) == (kind, degree, bound)


def test_loopify_flattens_cycles(grig, basilica, poly1):
    for A, k, n_states in ((grig, 3, 5), (basilica, 2, 3), (poly1, 1, 3)):
        flat, power = loopify(A)
        assert power == k
        assert len(flat.states) == n_states
        assert len(flat.letters) == len(A.letters) ** k


def test_loopify_rejects_exponential(flip):
    with pytest.raises(NotPolynomial):
        loopify(flip)
