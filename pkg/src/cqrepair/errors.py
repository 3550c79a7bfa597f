"""Exception hierarchy shared by all modules."""


class CQRepairError(Exception):
    """Base class for every error raised by this package."""


class ParseError(CQRepairError):
    pass


class ConstantNotSupported(ParseError):
    pass


class SafetyViolation(CQRepairError):
    """A head variable (or distinguished value) occurs in no atom (fact)."""


class UnknownRelation(CQRepairError):
    pass


class ArityMismatch(CQRepairError):
    pass


class SchemaMismatch(CQRepairError):
    pass


class EmptyList(CQRepairError):
    pass


class EmptySchema(CQRepairError):
    pass


class EmptyPositives(CQRepairError):
    pass


class RepeatedHeadVariables(CQRepairError):
    pass


class InvalidDistribution(CQRepairError):
    pass


class NoFittingExists(CQRepairError):
    pass


class SearchTimeout(CQRepairError, TimeoutError):
    pass
