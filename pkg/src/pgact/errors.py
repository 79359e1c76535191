class PgactError(Exception):
    """Base class for all library errors."""


class InstanceError(PgactError):
    """Malformed input: bad scalars, unknown labels, schema violations."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class StructuralError(PgactError):
    """Data whose shape is inconsistent (wrong domains, undefined products)."""


class PreconditionError(PgactError):
    """A hypothesis required by the requested construction does not hold."""

    def __init__(self, message: str, hypothesis: str | None = None, witness=None):
        self.hypothesis = hypothesis
        self.witness = witness
        super().__init__(message)


class InternalConsistencyError(PgactError):
    """A construction produced an object violating an invariant it must satisfy."""


class DomainError(PgactError, ValueError):
    """An argument outside the domain of an operation (e.g. a non-identity)."""


class AxiomError(PgactError):
    """Eager validation found violated axioms; ``report`` carries the witnesses."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)
