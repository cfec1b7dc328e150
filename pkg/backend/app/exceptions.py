"""
Exception hierarchy shared by the checking library, the simulator and the CLI.

The CLI maps every ``ConsistencyCheckError`` subclass to a non-zero exit code;
anything else is treated as a bug and re-raised.
"""

from typing import Optional


class ConsistencyCheckError(Exception):
    """Base class for all domain errors"""


class ClockError(ConsistencyCheckError, ValueError):
    """Invalid vector clock construction or comparison of clocks of different width"""


class ConstraintSyntaxError(ConsistencyCheckError, ValueError):
    """Constraint text does not match the grammar"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)


class ConstraintError(ConsistencyCheckError, ValueError):
    """Constraint is well-formed text but violates a membership rule"""


class ProtocolError(ConsistencyCheckError, RuntimeError):
    """A non-checker process received a transition that breaks the up/down alternation"""


class RoutingError(ProtocolError):
    """A message was delivered to a process that must never receive it"""


class CheckerError(ConsistencyCheckError, ValueError):
    """Checking message refers to an unknown activity/member or repeats a sequence number"""


class DelayModelError(ConsistencyCheckError, ValueError):
    """Delay model parameters are out of range"""


class TraceFormatError(ConsistencyCheckError, ValueError):
    """A trace line could not be decoded"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class WorkloadError(ConsistencyCheckError, ValueError):
    """Scenario parameters or a sensor model are out of range"""


class SafetyViolation(ConsistencyCheckError, AssertionError):
    """A detected ordering has no physically preceding cycle to match"""
