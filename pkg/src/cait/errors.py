"""Exception hierarchy shared by every module of the toolkit."""


class CaitError(Exception):
    pass


class MetricViolation(CaitError):
    """The declared distance table is not a metric."""


class DanglingName(CaitError):
    """A name is used but never declared in the universe."""


class DomainViolation(CaitError):
    """A value falls outside the declared domain of a sensor, actuator or channel."""


class IllFormed(CaitError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotTimeGuarded(CaitError):
    pass


class ConfigViolation(CaitError):
    pass


class UnobservableAction(CaitError):
    pass


class ParseError(CaitError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class StateSpaceBudgetExceeded(CaitError):
    """Raised when an exploration visits more states than allowed.

    ``frontier`` holds the states that were still waiting to be expanded.
    """

    def __init__(self, budget, explored, frontier=()):
        self.budget = budget
        self.explored = explored
        self.frontier = list(frontier)
        super().__init__(
            f"state budget of {budget} exceeded after {explored} states "
            f"({len(self.frontier)} left in frontier)")
