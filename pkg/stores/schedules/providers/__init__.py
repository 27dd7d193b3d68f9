from .DecaySchedule import DecaySchedule
from .FixedSchedule import FixedSchedule
from .GreedySchedule import GreedySchedule
from .OracleSchedule import OracleSchedule
