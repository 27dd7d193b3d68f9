from enum import Enum


class VtdMode(Enum):
    BOOTSTRAP = "bootstrap"
    LMS = "lms"


class TraceKind(Enum):
    ACCUMULATING = "accumulating"
    # true online; with lambda = 1 each episode ends on the Monte-Carlo updates
    DUTCH = "dutch"
