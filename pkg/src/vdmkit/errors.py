"""Exception hierarchy.

``DataError`` covers bad inputs (malformed files, degenerate neighborhoods,
disconnected graphs); ``NumericalError`` covers failures of the numerical
machinery itself. The CLI maps them to exit codes 2 and 3.
"""


class VdmError(Exception):
    pass


class DataError(VdmError, ValueError):
    pass


class NumericalError(VdmError, RuntimeError):
    pass


class InsufficientNeighborsError(DataError):
    """A point has too few neighbors for the requested frame dimension."""

    def __init__(self, index, count, needed):
        self.index = index
        self.count = count
        self.needed = needed
        super().__init__(
            f"point {index} has {count} neighbor(s), needs at least {needed}"
        )


class IllConditionedEdgeError(NumericalError):
    """Some O_i^T O_j is (numerically) rank deficient: nearly orthogonal tangent planes."""

    def __init__(self, edges, min_singular_values):
        self.edges = list(edges)
        self.min_singular_values = list(min_singular_values)
        shown = ", ".join(f"({i},{j})" for i, j in self.edges[:5])
        more = "" if len(self.edges) <= 5 else f" and {len(self.edges) - 5} more"
        super().__init__(f"ill-conditioned alignment on edge(s) {shown}{more}")


class EigensolverError(NumericalError):
    def __init__(self, message, residuals=None):
        self.residuals = residuals
        super().__init__(message)


class SchemaVersionError(DataError):
    pass
