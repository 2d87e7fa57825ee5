"""Exception hierarchy.  Every error carries the witnesses needed to reproduce it."""


class LaminaryError(Exception):
    code = "Error"


class Crossing(LaminaryError):
    code = "Crossing"

    def __init__(self, first, second):
        super().__init__(f"leaves {first!r} and {second!r} are linked")
        self.first = first
        self.second = second


class NotLaminar(LaminaryError):
    code = "NotLaminar"

    def __init__(self, first, second):
        super().__init__(f"classes {sorted(first)} and {sorted(second)} are linked")
        self.first = first
        self.second = second


class NotMonotone(LaminaryError):
    code = "NotMonotone"


class DuplicateX(LaminaryError):
    code = "DuplicateX"


class EmptySelection(LaminaryError):
    code = "EmptySelection"


class HypothesisViolated(LaminaryError):
    code = "HypothesisViolated"

    def __init__(self, x, y, detail=""):
        super().__init__(f"cores of {x!r} and {y!r} are linked{': ' + detail if detail else ''}")
        self.x = x
        self.y = y


class TooFewPoints(LaminaryError):
    code = "TooFewPoints"


class UnknownLeaf(LaminaryError):
    code = "UnknownLeaf"

    def __init__(self, leaf):
        super().__init__(f"unknown leaf {leaf!r}")
        self.leaf = leaf


class LeafSpaceError(LaminaryError):
    """Structural problem with a leaf space description."""

    code = "InvalidLeafSpace"


class NotOrderPreserving(LaminaryError):
    code = "NotOrderPreserving"

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class ScenarioError(LaminaryError):
    """A scenario failed validation; ``code`` names the violated rule."""

    def __init__(self, code, message, witness=()):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.witness = tuple(witness)


class NoCommonComparableLeaf(LaminaryError):
    code = "NoCommonComparableLeaf"


class InvariantViolation(LaminaryError):
    """An internal consistency check failed; indicates a bug or corrupted input."""

    code = "InvariantViolation"


class NotMinimal(LaminaryError):
    code = "NotMinimal"


class EmptySide(LaminaryError):
    code = "EmptySide"


class NoGenerators(LaminaryError):
    code = "NoGenerators"
