"""Exception types shared across the package.

Budget overruns and malformed inputs always raise; no solver ever returns a
guessed verdict.
"""


class AutgrpError(Exception):
    """Base class for all errors raised by this package."""


class AutomatonFormatError(AutgrpError, ValueError):
    """Malformed automaton description or invalid structural data."""


class MissingTransition(AutomatonFormatError):
    def __init__(self, state: str, letter: str):
        super().__init__(f"no transition declared for state {state!r} on letter {letter!r}")
        self.state = state
        self.letter = letter


class NonInvertibleState(AutomatonFormatError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} does not permute the alphabet")
        self.state = state


class DuplicateState(AutomatonFormatError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} declared twice")
        self.state = state


class UnknownLetter(AutomatonFormatError):
    def __init__(self, name, kind: str = "letter"):
        super().__init__(f"unknown {kind}: {name!r}")
        self.name = name


class NoIdentityState(AutgrpError):
    """An operation needed a trivial state and the automaton declares none."""


class BudgetExceeded(AutgrpError):
    """A search (section closure, ball BFS, ...) outgrew its configured cap."""

    def __init__(self, budget: int, what: str = "section closure"):
        super().__init__(f"{what} exceeded budget of {budget} entries")
        self.budget = budget
        self.what = what


class NotInBall(AutgrpError):
    def __init__(self, radius: int):
        super().__init__(f"element not represented by any word of length <= {radius}")
        self.radius = radius


class CertificateNotFound(AutgrpError):
    def __init__(self, max_block: int, max_power: int):
        super().__init__(
            f"no contraction certificate up to block length {max_block} and alphabet power {max_power}"
        )
        self.max_block = max_block
        self.max_power = max_power


class CertificateMismatch(AutgrpError):
    """Certificate was built for a different automaton than the one supplied."""


class NotPolynomial(AutgrpError):
    """Cycle structure admits no flattening (exponential activity)."""


class NonTermination(AutgrpError):
    """Stage count exceeded the guard; the certificate or classification is suspect."""

    def __init__(self, stages: int, cap: int):
        super().__init__(f"solver still running after {stages} stages (cap {cap})")
        self.stages = stages
        self.cap = cap


class StageGuardExceeded(NonTermination):
    """Polynomial-mode stage guard tripped; the automaton is likely misclassified."""


class ClosureFailure(AutgrpError):
    """Letter set of a nilpotent instance did not close under the rewrite rule."""
