from enum import Enum, IntEnum


class Action(IntEnum):
    LEFT = 0
    RIGHT = 1


class Regime(Enum):
    ON_POLICY = "on_policy"
    OFF_POLICY = "off_policy"


class FeatureMode(Enum):
    TABULAR = "tabular"
    ALIASED = "aliased"
