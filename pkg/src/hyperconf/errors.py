"""Exception hierarchy shared by every module."""


class HyperconfError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(HyperconfError):
    pass


class InternalError(HyperconfError):
    """A self-check failed; always a bug, never a verdict."""


class UnknownState(HyperconfError):
    def __init__(self, state):
        super().__init__(f"unknown state {state!r}")
        self.state = state


class UnknownAction(HyperconfError):
    def __init__(self, action):
        super().__init__(f"unknown action {action!r}")
        self.action = action


class NotApplicable(HyperconfError):
    def __init__(self, state, action):
        super().__init__(f"action {action!r} is not applicable in state {state!r}")
        self.state = state
        self.action = action


class EmptyEffect(HyperconfError):
    """Precondition holds but no conditional effect fires."""

    def __init__(self, state, action):
        super().__init__(f"no conditional effect of {action!r} fires in state {state!r}")
        self.state = state
        self.action = action


class Undefined(HyperconfError):
    """Plan execution hit an action that is not applicable in some member state."""

    def __init__(self, step, state):
        super().__init__(f"plan execution undefined at step {step} in state {state!r}")
        self.step = step
        self.state = state


class Deadlock(HyperconfError):
    def __init__(self, state):
        super().__init__(f"reachable state {state!r} has no successor")
        self.state = state


class NotCoSafety(HyperconfError):
    def __init__(self, path, node=None):
        super().__init__(f"formula is outside the co-safety fragment at {path}")
        self.path = path
        self.node = node


class AtomUniverseTooLarge(HyperconfError):
    def __init__(self, count, cap):
        super().__init__(f"{count} atoms exceed the configured cap of {cap}")
        self.count = count
        self.cap = cap


class ResourceLimit(HyperconfError):
    def __init__(self, explored):
        super().__init__(f"resource limit exceeded after exploring {explored} beliefs")
        self.explored = explored


class ParseError(HyperconfError):
    def __init__(self, line, col, expected, found=None):
        msg = f"{line}:{col}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


class UnsupportedFeature(HyperconfError):
    def __init__(self, name, line=None, col=None):
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(f"unsupported feature {name!r}{where}")
        self.name = name


class PrefixShapeError(HyperconfError):
    """Quantifier prefix is not of the form exists* forall*."""


class SchemaError(HyperconfError):
    def __init__(self, pointer, reason):
        super().__init__(f"{pointer or '/'}: {reason}")
        self.pointer = pointer
        self.reason = reason


class PddlTypeError(HyperconfError):
    pass
