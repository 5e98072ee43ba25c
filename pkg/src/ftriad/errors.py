"""Exception hierarchy shared by all ftriad modules."""


class FtriadError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ShapeMismatch(FtriadError, ValueError):
    code = "shape_mismatch"


class SingularMatrix(FtriadError, ValueError):
    code = "singular_matrix"


class ParseError(FtriadError, ValueError):
    code = "parse_error"

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d["position"] = self.position
        return d


class UnknownAlgebra(ParseError):
    code = "unknown_algebra"


class PortMismatch(FtriadError, ValueError):
    code = "port_mismatch"


class ForeignNode(FtriadError, ValueError):
    code = "foreign_node"


class UnverifiedAlgebra(FtriadError):
    code = "unverified_algebra"


class NotStronglyMaximal(FtriadError):
    code = "not_strongly_maximal"


class ZeroOverlap(FtriadError, ValueError):
    code = "zero_overlap"

    def __init__(self, which):
        self.which = which
        super().__init__(f"<2|{which}> is zero; pre-rotate the input")

    def to_dict(self):
        d = super().to_dict()
        d["which"] = self.which
        return d


class SynthesisResidualExceeded(FtriadError):
    code = "synthesis_residual_exceeded"


class UnknownName(FtriadError, KeyError):
    code = "unknown_name"

    def __str__(self):
        return str(self.args[0]) if self.args else ""
