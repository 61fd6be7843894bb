"""Exception hierarchy.

Input problems derive from :class:`SpecError`; a code that cannot reach the
requested reliability raises an :class:`Infeasible` subclass.
"""


class QECostError(Exception):
    pass


class SpecError(QECostError, ValueError):
    """A spec or config document failed validation."""


class InvalidValue(SpecError):
    def __init__(self, key, message: str):
        self.key = str(key)
        super().__init__(f"{self.key}: {message}")


class MissingGate(SpecError):
    def __init__(self, kind):
        self.kind = kind
        self.key = f"gate_times_ns.{kind}"
        super().__init__(f"missing gate time for {kind}")


class Infeasible(QECostError):
    """No code parameter meets the requested logical error."""


class AboveThreshold(Infeasible):
    def __init__(self, p: float, threshold: float, code: str = ""):
        self.p = p
        self.threshold = threshold
        prefix = f"{code}: " if code else ""
        super().__init__(f"{prefix}physical error {p:.3g} is not below threshold {threshold:.3g}")


class LevelCapExceeded(Infeasible):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"required concatenation level exceeds cap {cap}")


class DistanceCapExceeded(Infeasible):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"required code distance exceeds cap {cap}")


class NonTransversal(QECostError, ValueError):
    def __init__(self, kind):
        self.kind = kind
        super().__init__(f"{kind} is not transversal; cost it through magic-state gadgets")


class DistillationDiverges(Infeasible):
    pass


class RoundCapExceeded(Infeasible):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"distillation needs more than {cap} rounds")


class InsufficientData(QECostError, ValueError):
    pass
