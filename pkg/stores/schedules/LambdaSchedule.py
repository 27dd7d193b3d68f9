from enum import Enum

from pydantic import BaseModel, model_validator


class ScheduleKind(Enum):
    GREEDY = "greedy"
    FIXED = "fixed"
    DECAY = "decay"
    ORACLE = "oracle"


class OffPolicyInit(Enum):
    # w_err = 0, w_sq = (r_max / (1 - gamma))^2
    SQUARED = "squared"
    # w_err = 0, w_sq = r_max / (1 - gamma)
    LINEAR = "linear"


class AdapterFeatures(Enum):
    # the adapter reads the main learner's features
    SHARED = "shared"
    # the adapter keeps one weight per state, whatever the main features are
    TABULAR = "tabular"


class LambdaSchedule(BaseModel):
    kind: ScheduleKind
    value: float | None = None
    k: float | None = None

    @model_validator(mode="after")
    def check_parameters(self):
        if self.kind is ScheduleKind.FIXED:
            if self.value is None or not 0.0 <= self.value <= 1.0:
                raise ValueError("fixed schedule needs a value in [0, 1]")
        if self.kind is ScheduleKind.DECAY:
            if self.k is None or self.k <= 0.0:
                raise ValueError("decay schedule needs k > 0")
        return self

    @classmethod
    def fixed(cls, value: float) -> "LambdaSchedule":
        return cls(kind=ScheduleKind.FIXED, value=value)

    @classmethod
    def decay(cls, k: float) -> "LambdaSchedule":
        return cls(kind=ScheduleKind.DECAY, k=k)

    @classmethod
    def greedy(cls) -> "LambdaSchedule":
        return cls(kind=ScheduleKind.GREEDY)

    @classmethod
    def oracle(cls) -> "LambdaSchedule":
        return cls(kind=ScheduleKind.ORACLE)

    @property
    def label(self) -> str:
        if self.kind is ScheduleKind.FIXED:
            return f"fixed_{self.value:g}"
        if self.kind is ScheduleKind.DECAY:
            return f"decay_{self.k:g}"
        return self.kind.value
