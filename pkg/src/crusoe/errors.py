"""Exception hierarchy.

Every error carries the name of the module that raised it so the CLI can print
module-qualified messages.
"""


class CrusoeError(ValueError):
    module = "crusoe"

    def qualified(self) -> str:
        return f"{self.module}: {type(self).__name__}: {self}"


# core
class CoreError(CrusoeError):
    module = "core"


class NonPositiveParameter(CoreError):
    def __init__(self, name: str, value=None):
        self.name = name
        super().__init__(f"{name} must be finite and > 0 (got {value!r})")


class NegativeInitialQuantity(CoreError):
    def __init__(self, name: str, value=None):
        self.name = name
        super().__init__(f"{name} must be finite and >= 0 (got {value!r})")


class MissingGood(CoreError):
    def __init__(self, good: str):
        self.good = good
        super().__init__(f"bundle has no quantity for good {good!r}")


class InvalidTrajectory(CoreError):
    pass


class UnsupportedUtility(CoreError):
    pass


# statics
class NoInteriorOptimum(CrusoeError):
    module = "statics"


# dynamics
class StepTooLarge(CrusoeError):
    module = "dynamics"


class InvalidIntegratorConfig(CrusoeError):
    module = "dynamics"


# mechanics
class MechanicsError(CrusoeError):
    module = "mechanics"


class TooFewSamples(MechanicsError):
    pass


class EndpointMismatch(MechanicsError):
    pass


class DegenerateGrid(MechanicsError):
    pass


# exchange
class ExchangeError(CrusoeError):
    module = "exchange"


class InvalidScenario(ExchangeError):
    pass


class DegenerateEndowment(ExchangeError):
    pass


class NoGainsFromTrade(ExchangeError):
    pass


class InfeasibleRatio(ExchangeError):
    pass


# inference
class InferenceError(CrusoeError):
    module = "inference"


class ConstantSignal(InferenceError):
    pass


class NonMonotoneTime(InferenceError):
    pass


class GridMismatch(InferenceError):
    pass


class UnconvergedFit(InferenceError):
    pass


# cli / config
class ConfigError(CrusoeError):
    module = "config"


class UnknownKey(ConfigError):
    pass


class MalformedLine(ConfigError):
    pass


class InvalidNumber(ConfigError):
    def __init__(self, key: str, raw: str = ""):
        self.key = key
        super().__init__(f"{key}: cannot parse {raw!r} as a finite decimal")
