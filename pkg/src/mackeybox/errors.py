"""Exception hierarchy shared by all modules."""


class MackeyboxError(Exception):
    """Base class for all library errors."""


class NotPrime(MackeyboxError):
    pass


class IllFormedHom(MackeyboxError):
    """Matrix does not send source relations into the target relation span."""


class NotAnAction(MackeyboxError):
    """Supplied endomorphism is not an order-p action."""


class InfiniteGroup(MackeyboxError):
    """Operation requires finite groups but a level has positive free rank."""


class NotAComplex(MackeyboxError):
    """Differentials do not square to zero."""


class PrimeMismatch(MackeyboxError):
    pass


class IncompatiblePairing(MackeyboxError):
    def __init__(self, condition, message=""):
        self.condition = condition
        super().__init__(f"pairing condition {condition} violated" + (f": {message}" if message else ""))


class NotAModule(MackeyboxError):
    pass


class NotAnAlgebra(MackeyboxError):
    pass


class NotCommutative(MackeyboxError):
    pass


class ZeroFunctor(MackeyboxError):
    pass


class UnclassifiableShape(MackeyboxError):
    """A Mackey field matched neither classification shape; bug or counterexample."""


class UnclassifiedField(MackeyboxError):
    pass


class SizeLimit(MackeyboxError):
    """Intermediate presentation exceeded the configured generator bound."""


class WindowOverflow(MackeyboxError):
    pass


class InsufficientTruncation(MackeyboxError):
    pass


class NotFreeAction(MackeyboxError):
    pass


class NotEquivariant(MackeyboxError):
    pass


class NotInjective(MackeyboxError):
    pass


class BidegreeMismatch(MackeyboxError):
    pass


class SchemaError(MackeyboxError):
    """Problem-file validation failure; carries a JSON-pointer location."""

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")
