"""Exception hierarchy.

Pipeline errors carry a stable ``code`` (used as the machine-readable error
name) and an ``exit_status`` used by the command line front end.
"""


class ProjLyapError(Exception):
    code = "Error"
    exit_status = 1

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class NonInvertible(ProjLyapError, ValueError):
    code = "NonInvertible"


class NotSl2(ProjLyapError, ValueError):
    code = "NotSl2"


class DegeneratePair(ProjLyapError, ValueError):
    code = "DegeneratePair"


class BadParam(ProjLyapError, ValueError):
    code = "BadParam"


class ConfigError(ProjLyapError, ValueError):
    code = "ConfigError"
    exit_status = 2

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)

    def to_dict(self):
        out = super().to_dict()
        out["field"] = self.field
        out["line"] = self.line
        return out


class NoContraction(ProjLyapError, RuntimeError):
    code = "NoContraction"
    exit_status = 3


class NotMixing(ProjLyapError, RuntimeError):
    code = "NotMixing"
    exit_status = 4

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)

    def to_dict(self):
        out = super().to_dict()
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


class CapExceeded(ProjLyapError, RuntimeError):
    code = "CapExceeded"
    exit_status = 5

    def __init__(self, required, cap):
        self.required = required
        self.cap = cap
        super().__init__(f"iterated cocycle needs {required} matrices, cap is {cap}")

    def to_dict(self):
        out = super().to_dict()
        out.update(required=self.required, cap=self.cap)
        return out


class NoConvergence(ProjLyapError, RuntimeError):
    code = "NoConvergence"

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")
