"""Exception types shared across the package."""


class DegenerateGeometryError(ValueError):
    """Two atoms closer than the minimum separation guard.

    ``indices`` holds the offending (i, j) pairs.
    """

    def __init__(self, indices):
        self.indices = list(indices)
        pairs = ", ".join(f"({i}, {j})" for i, j in self.indices[:10])
        more = "" if len(self.indices) <= 10 else f" and {len(self.indices) - 10} more"
        super().__init__(f"coincident atom pairs: {pairs}{more}")


class TruncationError(ValueError):
    """Excitation-number cutoff too small for the requested tail bound.

    ``required_m_max`` is the smallest cutoff that satisfies the bound.
    """

    def __init__(self, m_max, tail, bound, required_m_max):
        self.required_m_max = required_m_max
        super().__init__(
            f"m_max={m_max} leaves a probability tail of {tail:.3e} > {bound:.1e}; "
            f"m_max >= {required_m_max} is required"
        )


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested accuracy.

    ``achieved`` is the error estimate that was actually reached.
    """

    def __init__(self, message, achieved):
        self.achieved = achieved
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")


class ConfigError(ValueError):
    """Experiment configuration failed validation.

    ``fields`` lists every violated field with a message.
    """

    def __init__(self, fields):
        self.fields = list(fields)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.fields))
