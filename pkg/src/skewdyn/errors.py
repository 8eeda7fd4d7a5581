"""Exception types shared across the package.

Computational failures derive from ``ComputationError`` (CLI exit code 1),
configuration problems from ``ConfigError`` (CLI exit code 2).
"""


class SkewdynError(Exception):
    code = "Error"

    def payload(self):
        return {"error": self.code, "message": str(self)}


class ComputationError(SkewdynError):
    code = "ComputationError"


class ConfigError(SkewdynError):
    code = "ConfigError"


class ParseError(ConfigError):
    code = "ParseError"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column

    def payload(self):
        out = super().payload()
        out.update(line=self.line, column=self.column)
        return out


class RegularityError(ConfigError):
    """Raised with every violated invariant listed in ``violations``."""

    code = "RegularityError"

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(f"{kind}: {msg}" for kind, msg in self.violations)
        super().__init__(text)

    @property
    def kinds(self):
        return [kind for kind, _ in self.violations]

    def payload(self):
        out = super().payload()
        out["violations"] = [{"kind": k, "detail": m} for k, m in self.violations]
        return out


class DegreeBudgetExceeded(ComputationError):
    code = "DegreeBudgetExceeded"


class NonConvergence(ComputationError):
    code = "NonConvergence"


class HypothesisViolated(ComputationError):
    code = "HypothesisViolated"


class RelationFails(ComputationError):
    code = "RelationFails"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index

    def payload(self):
        out = super().payload()
        out["index"] = self.index
        return out


class NotRootOfUnity(ComputationError):
    code = "NotRootOfUnity"


class NotMonicizable(ComputationError):
    code = "NotMonicizable"
