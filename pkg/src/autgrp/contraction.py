"""Contraction certificates and activity classification.

A certificate fixes a block length and an alphabet power and witnesses, by
exhaustive enumeration, that sections of every block are short in one of
three senses:

* ``item1``: every single section is strictly shorter than the block;
* ``item2``: the sections of a block have total length at most the block;
* ``item3``: the sections of a block have total length strictly below it.

Section lengths are geodesic lengths over the inverse-closed state set,
looked up in a Cayley ball of radius equal to the block length.  Enumeration
runs over words without the identity letter, in the merged automaton's state
order, and a failing check always reports the lexicographically least
witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Optional

from .automata import (
    MealyAutomaton,
    Word,
    WordLike,
    _power_tables,
    alphabet_power,
    inverse_closure,
)
from .errors import (
    AutomatonFormatError,
    BudgetExceeded,
    CertificateNotFound,
    NoIdentityState,
    NotPolynomial,
    UnknownLetter,
)
from .words import DEFAULT_BALL_BUDGET, CayleyBall, cayley_ball

MODES = ("item1", "item2", "item3")
DEFAULT_TABLE_BUDGET = 250_000


# ---- scan machinery ----

class _ScanContext:
    """Precomputed walk tables for one (automaton, block, power) cell.

    A branch is tracked as a single code ``x * ball_size + element``: the
    current branch letter of the power alphabet together with the ball
    element accumulated by the section letters seen so far.
    """

    def __init__(self, A: MealyAutomaton, block: int, power: int, ball_budget: int):
        ic = inverse_closure(A)
        B = ic.automaton
        self.closure = ic
        self.automaton = B
        self.block = block
        self.power = power
        self.enum = [s for s in range(len(B.states)) if s != B.identity]
        self.ball = cayley_ball(B, block, ball_budget)
        self.seck, self.outk = _power_tables(B, power)
        self.branches = len(B.letters) ** power
        nb = self.ball.size
        ident = B.identity
        pos = self.ball.gen_pos
        edges = self.ball.edges
        self.trans = {}
        for s in range(len(B.states)):
            row = [-1] * (self.branches * nb)
            sec_row, out_row = self.seck[s], self.outk[s]
            for x in range(self.branches):
                nx = out_row[x] * nb
                g = sec_row[x]
                base = x * nb
                if g == ident:
                    for el in range(nb):
                        row[base + el] = nx + el
                else:
                    gp = pos[g]
                    for el in range(nb):
                        e_row = edges[el]
                        if e_row is not None:
                            row[base + el] = nx + e_row[gp]
            self.trans[s] = row
        self.len_code = [self.ball.length[c % nb] for c in range(self.branches * nb)]

    def start_codes(self) -> list[int]:
        return [x * self.ball.size for x in range(self.branches)]

    def walk_word(self, word) -> list[int]:
        codes = self.start_codes()
        for s in word:
            row = self.trans[s]
            codes = [row[c] for c in codes]
        return codes

    def rep_of_code(self, code: int) -> Word:
        return self.ball.reps[code % self.ball.size]

    def branch_of_code(self, code: int) -> int:
        return code // self.ball.size


def _leaf_eval(mode: str, block: int, lengths) -> tuple[bool, Optional[int]]:
    """(passes, offending branch index or None)."""
    if mode == "item1":
        for x, l in enumerate(lengths):
            if l >= block:
                return False, x
        return True, None
    total = sum(lengths)
    if mode == "item2":
        return total <= block, None
    return total < block, None


@dataclass(frozen=True)
class ItemCheck:
    """Outcome of one exhaustive or sampled block scan."""

    passed: bool
    mode: str
    block: int
    power: int
    words_checked: int
    max_section: int
    max_section_sum: int
    witness: Optional[tuple[str, ...]] = None
    witness_branch: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


def _branch_str(B: MealyAutomaton, power: int, xcode: int) -> str:
    m = len(B.letters)
    digits = []
    for _ in range(power):
        digits.append(xcode % m)
        xcode //= m
    digits.reverse()
    return B.letters_str(digits)


def _validate_cell(block: int, power: int) -> None:
    if block < 1 or power < 1:
        raise AutomatonFormatError("block length and alphabet power must be >= 1")


def check_item(
    A: MealyAutomaton,
    block: int,
    power: int,
    mode: str,
    ball_budget: int = DEFAULT_BALL_BUDGET,
) -> ItemCheck:
    """Exhaustively scan every identity-free block of the given length.

    Returns the lexicographically least failing witness (in the merged
    automaton's state order) or a passing summary carrying the maximal
    single-section length and section-length sum seen anywhere.
    """
    if mode not in MODES:
        raise AutomatonFormatError(f"unknown mode {mode!r}")
    _validate_cell(block, power)
    ctx = _ScanContext(A, block, power, ball_budget)
    return _scan_exhaustive(ctx, mode)


def _scan_exhaustive(ctx: _ScanContext, mode: str, collect: Optional[dict] = None) -> ItemCheck:
    B = ctx.automaton
    enum = ctx.enum
    block = ctx.block
    n_enum = len(enum)
    if n_enum == 0:
        return ItemCheck(True, mode, block, ctx.power, 0, 0, 0)

    trans = [ctx.trans[s] for s in enum]
    len_code = ctx.len_code
    nb = ctx.ball.size
    reps = ctx.ball.reps

    digits = [0] * block
    rows = [ctx.start_codes()] + [None] * block
    max_sec = 0
    max_sum = 0
    words = 0
    refill_from = 0
    while True:
        for d in range(refill_from, block):
            row = trans[digits[d]]
            rows[d + 1] = [row[c] for c in rows[d]]
        leaf = rows[block]
        lengths = [len_code[c] for c in leaf]
        words += 1
        top = max(lengths)
        tot = sum(lengths)
        if top > max_sec:
            max_sec = top
        if tot > max_sum:
            max_sum = tot
        ok, bad_x = _leaf_eval(mode, block, lengths)
        if not ok:
            word = tuple(B.states[enum[d]] for d in digits)
            branch = None if bad_x is None else _branch_str(B, ctx.power, bad_x)
            return ItemCheck(False, mode, block, ctx.power, words, max_sec, max_sum, word, branch)
        if collect is not None:
            word = tuple(enum[d] for d in digits)
            for x, c in enumerate(leaf):
                collect[(word, x)] = (reps[c % nb], c // nb)
        d = block - 1
        while d >= 0 and digits[d] == n_enum - 1:
            digits[d] = 0
            d -= 1
        if d < 0:
            return ItemCheck(True, mode, block, ctx.power, words, max_sec, max_sum)
        digits[d] += 1
        refill_from = d


def check_item_sampled(
    A: MealyAutomaton,
    block: int,
    power: int,
    mode: str,
    samples: int = 10_000,
    seed: int = 0,
    ball_budget: int = DEFAULT_BALL_BUDGET,
) -> ItemCheck:
    """Same predicate on seeded random identity-free blocks (CI-scale variant)."""
    if mode not in MODES:
        raise AutomatonFormatError(f"unknown mode {mode!r}")
    _validate_cell(block, power)
    ctx = _ScanContext(A, block, power, ball_budget)
    enum = ctx.enum
    if not enum:
        return ItemCheck(True, mode, block, power, 0, 0, 0)
    rng = Random(seed)
    len_code = ctx.len_code
    max_sec = max_sum = 0
    for i in range(samples):
        word = [rng.choice(enum) for _ in range(block)]
        codes = ctx.walk_word(word)
        lengths = [len_code[c] for c in codes]
        max_sec = max(max_sec, max(lengths))
        max_sum = max(max_sum, sum(lengths))
        ok, bad_x = _leaf_eval(mode, block, lengths)
        if not ok:
            names = tuple(ctx.automaton.states[s] for s in word)
            branch = None if bad_x is None else _branch_str(ctx.automaton, power, bad_x)
            return ItemCheck(False, mode, block, power, i + 1, max_sec, max_sum, names, branch)
    return ItemCheck(True, mode, block, power, samples, max_sec, max_sum)


# ---- certificates ----

class ContractionCertificate:
    """Verified block-rewrite tables for one contraction mode.

    ``entries`` maps (identity-free block, branch code) to the shortest
    representative of the block's section and the branch code it hands to the
    next block.  Tables above the eager budget stay lazy: entries are then
    computed through the Cayley ball on demand and memoized, and such
    certificates cannot be serialized.  Blocks containing identity letters
    are never part of the enumerated table but are answered the same way.
    """

    def __init__(self, source, ctx: _ScanContext, mode: str, shrink_num: int, entries, eager: bool):
        self.source = source
        self.closure = ctx.closure
        self.automaton = ctx.automaton
        self.mode = mode
        self.block = ctx.block
        self.power = ctx.power
        self.shrink_ratio = Fraction(shrink_num, ctx.block)
        self.eager = eager
        self._ctx = ctx
        self._entries = entries if entries is not None else {}
        self.table_reads = 0

    @property
    def ball(self) -> CayleyBall:
        return self._ctx.ball

    @property
    def branches(self) -> int:
        return self._ctx.branches

    @property
    def stage_ratio(self) -> Fraction:
        """Per-stage length bound: halfway between the table ratio and 1."""
        lam = self.shrink_ratio
        return lam + Fraction(1 - lam, 2)

    def entry(self, word: Word, xcode: int) -> tuple[Word, int]:
        """Rewrite one block: (shortest section word, next branch code)."""
        self.table_reads += 1
        key = (word, xcode)
        hit = self._entries.get(key)
        if hit is None:
            codes = self._ctx.walk_word(word)
            code = codes[xcode]
            hit = (self._ctx.rep_of_code(code), self._ctx.branch_of_code(code))
            self._entries[key] = hit
        return hit

    def tail_section(self, word, xcode: int) -> tuple[list[int], int]:
        """Literal section of a short tail (identity letters retained)."""
        seck, outk = self._ctx.seck, self._ctx.outk
        out = []
        x = xcode
        for s in word:
            out.append(seck[s][x])
            x = outk[s][x]
        return out, x

    def branch_perm_fixes_all(self, word) -> bool:
        """True iff the word permutes no branch of the power alphabet."""
        outk = self._ctx.outk
        for x in range(self.branches):
            cur = x
            for s in word:
                cur = outk[s][cur]
            if cur != x:
                return False
        return True

    def is_trivial_short(self, word) -> bool:
        """Ball decision for segments shorter than the block."""
        return self.ball.walk(word) == 0

    def __repr__(self):
        return (
            f"ContractionCertificate({self.mode}, block={self.block}, power={self.power}, "
            f"ratio={self.shrink_ratio})"
        )


def build_certificate(
    A: MealyAutomaton,
    block: int,
    power: int,
    mode: str,
    ball_budget: int = DEFAULT_BALL_BUDGET,
    table_budget: int = DEFAULT_TABLE_BUDGET,
) -> ContractionCertificate:
    """Scan one cell and package the result; raises if the scan fails."""
    if mode not in MODES:
        raise AutomatonFormatError(f"unknown mode {mode!r}")
    _validate_cell(block, power)
    ctx = _ScanContext(A, block, power, ball_budget)
    n_enum = len(ctx.enum)
    eager = n_enum**block * ctx.branches <= table_budget
    collect = {} if eager else None
    res = _scan_exhaustive(ctx, mode, collect=collect)
    if not res.passed:
        raise CertificateNotFound(block, power)
    shrink = res.max_section if mode == "item1" else res.max_section_sum
    return ContractionCertificate(A, ctx, mode, shrink, collect, eager)


def find_certificate(
    A: MealyAutomaton,
    max_block: int,
    max_power: int,
    ball_budget: int = DEFAULT_BALL_BUDGET,
    table_budget: int = DEFAULT_TABLE_BUDGET,
) -> ContractionCertificate:
    """Search all cells in (power, block) lexicographic order.

    The strict total-shrink mode is hunted across the whole grid first,
    since it carries the strongest runtime guarantee.  If it passes nowhere,
    the scan restarts cell by cell and takes the first cell certifying
    anything, preferring the per-section bound over the weak total bound at
    the same cell.
    """
    _validate_cell(max_block, max_power)
    for power in range(1, max_power + 1):
        for block in range(1, max_block + 1):
            if check_item(A, block, power, "item3", ball_budget).passed:
                return build_certificate(A, block, power, "item3", ball_budget, table_budget)
    for power in range(1, max_power + 1):
        for block in range(1, max_block + 1):
            for mode in ("item1", "item2"):
                if check_item(A, block, power, mode, ball_budget).passed:
                    return build_certificate(A, block, power, mode, ball_budget, table_budget)
    raise CertificateNotFound(max_block, max_power)


# ---- certificate files ----

def serialize_certificate(cert: ContractionCertificate) -> str:
    """Text form: header ``mode block power num/den``, then one ``sect:`` line
    per table entry.  Words are '.'-joined state names, '-' when empty."""
    if not cert.eager:
        raise AutomatonFormatError("table is lazy (above the eager budget); cannot serialize")
    B = cert.automaton
    lam = cert.shrink_ratio
    lines = [f"{cert.mode} {cert.block} {cert.power} {lam.numerator}/{lam.denominator}"]
    for (word, xcode) in sorted(cert._entries):
        out_word, _ = cert._entries[(word, xcode)]
        w = ".".join(B.states[s] for s in word)
        wx = ".".join(B.states[s] for s in out_word) or "-"
        lines.append(f"sect: {w} {_branch_str(B, cert.power, xcode)} -> {wx}")
    return "\n".join(lines) + "\n"


def _parse_branch(B: MealyAutomaton, power: int, text: str) -> int:
    if "." in text:
        parts = text.split(".")
    elif all(len(x) == 1 for x in B.letters):
        parts = list(text)
    else:
        parts = [text]
    if len(parts) != power:
        raise AutomatonFormatError(f"branch {text!r} is not {power} letters")
    code = 0
    for p in parts:
        if p not in B._lix:
            raise UnknownLetter(p)
        code = code * len(B.letters) + B._lix[p]
    return code


def load_certificate(text: str, A: MealyAutomaton, validate: bool = True,
                     ball_budget: int = DEFAULT_BALL_BUDGET) -> ContractionCertificate:
    """Parse and (by default) re-verify a serialized certificate against A."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise AutomatonFormatError("empty certificate")
    head = lines[0].split()
    if len(head) != 4 or head[0] not in MODES:
        raise AutomatonFormatError("certificate header must be 'mode block power num/den'")
    mode, block, power = head[0], int(head[1]), int(head[2])
    num, _, den = head[3].partition("/")
    lam = Fraction(int(num), int(den))
    _validate_cell(block, power)

    ctx = _ScanContext(A, block, power, ball_budget)
    B = ctx.automaton
    six = {s: i for i, s in enumerate(B.states)}
    entries = {}
    for ln in lines[1:]:
        if not ln.startswith("sect:"):
            raise AutomatonFormatError(f"unexpected line {ln!r}")
        toks = ln[5:].split()
        if len(toks) != 4 or toks[2] != "->":
            raise AutomatonFormatError(f"expected 'sect: w x -> w_x', got {ln!r}")
        wtoks = toks[0].split(".")
        if any(t not in six for t in wtoks):
            raise UnknownLetter(toks[0], "block word")
        word = tuple(six[t] for t in wtoks)
        if len(word) != block:
            raise AutomatonFormatError(f"block {toks[0]!r} is not {block} letters")
        xcode = _parse_branch(B, power, toks[1])
        out_word = () if toks[3] == "-" else tuple(six[t] for t in toks[3].split("."))
        codes = ctx.walk_word(word)
        next_x = ctx.branch_of_code(codes[xcode])
        if validate and out_word != ctx.rep_of_code(codes[xcode]):
            raise AutomatonFormatError(
                f"entry for ({toks[0]}, {toks[1]}) does not match the recomputed section"
            )
        entries[(word, xcode)] = (out_word, next_x)

    expected = len(ctx.enum) ** block * ctx.branches
    if len(entries) != expected:
        raise AutomatonFormatError(
            f"certificate has {len(entries)} entries; expected {expected}"
        )
    shrink = int(lam * block)
    cert = ContractionCertificate(A, ctx, mode, shrink, entries, eager=True)
    return cert


# ---- activity classification ----

@dataclass(frozen=True)
class ActivityClass:
    """Growth class of per-level nontrivial-section counts.

    ``bounded`` carries the uniform bound; ``polynomial`` carries the degree
    (bounded is exactly degree 0 and is reported as bounded).
    """

    kind: str
    degree: Optional[int] = None
    bound: Optional[int] = None

    @property
    def is_bounded(self) -> bool:
        return self.kind == "bounded"

    def __str__(self):
        if self.kind == "bounded":
            return f"bounded (C={self.bound})"
        if self.kind == "polynomial":
            return f"polynomial (degree {self.degree})"
        return "exponential"


def _nontrivial_graph(A: MealyAutomaton):
    """Adjacency with letter multiplicity among nontrivial states."""
    ident = A.identity
    nodes = [s for s in range(len(A.states)) if s != ident]
    adj = {s: [] for s in nodes}
    for s in nodes:
        for t in A._next[s]:
            if t != ident:
                adj[s].append(t)
    return nodes, adj


def _sccs(nodes, adj):
    """Iterative Tarjan; returns list of components (each a list of nodes)."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    comps = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _cycle_structure(A: MealyAutomaton):
    """(exponential?, cyclic component sizes, max cyclic components on a path)."""
    nodes, adj = _nontrivial_graph(A)
    comps = _sccs(nodes, adj)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    cyclic = [False] * len(comps)
    sizes = []
    for i, comp in enumerate(comps):
        members = set(comp)
        internal = {v: sum(1 for t in adj[v] if t in members) for v in comp}
        total_internal = sum(internal.values())
        if any(c >= 2 for c in internal.values()):
            return True, [], 0
        if total_internal:
            # strongly connected with out-degree <= 1 inside: a single cycle
            cyclic[i] = True
            sizes.append(len(comp))
    # condensation is a DAG; Tarjan emits components in reverse topological
    # order, so children are already finished when a component is processed
    best = [0] * len(comps)
    for i, comp in enumerate(comps):
        children = set()
        for v in comp:
            for t in adj[v]:
                j = comp_of[t]
                if j != i:
                    children.add(j)
        down = max((best[j] for j in children), default=0)
        best[i] = down + (1 if cyclic[i] else 0)
    return False, sizes, max(best, default=0)


def classify_activity(A: MealyAutomaton) -> ActivityClass:
    """Bounded / polynomial / exponential per-level section counts.

    Expects a minimal automaton with an identity state: cycle structure is
    read off the literal transition graph of the nontrivial states.
    """
    if A.identity is None:
        raise NoIdentityState("classification needs an identity state")
    exponential, sizes, max_cycles = _cycle_structure(A)
    if exponential:
        return ActivityClass("exponential")
    if max_cycles >= 2:
        return ActivityClass("polynomial", degree=max_cycles - 1)
    horizon = len(A.states) * math.lcm(*sizes) if sizes else len(A.states)
    bound = 0
    for s in range(len(A.states)):
        if s == A.identity:
            continue
        for n in range(horizon + 1):
            bound = max(bound, activity_count(A, s, n))
    return ActivityClass("bounded", degree=0, bound=bound)


def activity_count(A: MealyAutomaton, s, n: int) -> int:
    """Number of depth-n branches below which the state still acts."""
    if isinstance(s, str):
        if s not in A._six:
            raise UnknownLetter(s, "state")
        s = A._six[s]
    if n < 0:
        raise AutomatonFormatError("level must be >= 0")
    ident = A.identity
    vec = {s: 1}
    for _ in range(n):
        new = {}
        for st, cnt in vec.items():
            for t in A._next[st]:
                if t != ident:
                    new[t] = new.get(t, 0) + cnt
        vec = new
    return sum(cnt for st, cnt in vec.items() if st != ident)


def loopify(A: MealyAutomaton) -> tuple[MealyAutomaton, int]:
    """Power the alphabet so every nontrivial simple cycle is a self-loop.

    The power is the lcm of the simple-cycle lengths among nontrivial states;
    raises NotPolynomial when cycles share a state (exponential activity).
    """
    if A.identity is None:
        raise NoIdentityState("loopification needs an identity state")
    exponential, sizes, _ = _cycle_structure(A)
    if exponential:
        raise NotPolynomial("simple cycles share a state; no flattening power exists")
    k = math.lcm(*sizes) if sizes else 1
    return alphabet_power(A, k), k
