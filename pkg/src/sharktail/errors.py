"""Exception hierarchy shared by all sharktail modules."""


class SharktailError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SharktailError):
    """A point or interval lies outside the domain of a map."""


class NotInvertible(SharktailError):
    """Branch inversion requested on a zero-slope (plateau) branch."""


class RangeError(SharktailError):
    """A value lies outside the image of the selected branch."""


class EmptyInput(SharktailError):
    """An operation received an empty collection where members are required."""


class NoCycle(SharktailError):
    """No periodic orbit of the requested period exists."""


class SearchExhausted(SharktailError):
    """A bounded parameter search ran out of candidates."""


class NotHyperbolic(SharktailError):
    """The cycle has a multiplier of modulus one (or is not smooth enough)."""


class BreakpointTooClose(SharktailError):
    """No neighborhood radius separates the cycle from a map breakpoint."""


class NoConvergence(SharktailError):
    """The radius shrink schedule was exhausted without certification."""


class EmptyTail(SharktailError):
    """A budget was requested for an empty collection of tail cycles."""


class BoundaryCycle(SharktailError):
    """A cycle touches the boundary of the phase interval."""


class BudgetError(SharktailError):
    """The robustness budget invariants cannot be satisfied as posed."""


class PreconditionFailed(SharktailError):
    """A stated hypothesis of a certified computation does not hold."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)


class ConditionFailed(SharktailError):
    """A membership condition failed; carries the clause index and a witness."""

    def __init__(self, condition: int, witness, detail: str = ""):
        self.condition = condition
        self.witness = witness
        self.detail = detail
        super().__init__(f"condition {condition} failed at {witness!r}"
                         + (f" ({detail})" if detail else ""))


class ItineraryBroken(SharktailError):
    """An iterate left its prescribed neighborhood component."""

    def __init__(self, step: int, component: int, state=None):
        self.step = step
        self.component = component
        self.state = state
        super().__init__(f"iterate at step {step} left component {component}")


class DomainEscape(SharktailError):
    """A simulated trajectory left the phase interval beyond tolerance."""
