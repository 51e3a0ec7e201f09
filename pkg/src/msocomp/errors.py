"""Exception types shared by every module.

DomainError covers violated preconditions (CLI exit code 1).
BudgetExceeded covers resource limits (CLI exit code 2).
"""


class DomainError(Exception):
    pass


class ParseError(DomainError):
    def __init__(self, message, offset=None, line=None):
        self.offset = offset
        self.line = line
        where = ""
        if line is not None and offset is not None:
            where = f" at line {line}, column {offset}"
        elif offset is not None:
            where = f" at offset {offset}"
        super().__init__(f"{message}{where}")


class CoherenceError(DomainError):
    pass


class BudgetExceeded(Exception):
    pass
