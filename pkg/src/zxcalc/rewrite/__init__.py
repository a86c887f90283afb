"""Sound graph rewriting: the executable rule set, strategies, and replays."""

from .rules import (
    FORWARD,
    BACKWARD,
    RULE_NAMES,
    Match,
    RewriteRule,
    StaleMatchError,
    get_rule,
)
from .simplify import Trace, TraceStep, simplify
from .soundness import SoundnessReport, check_soundness, random_diagram
from .derivations import DERIVATION_NAMES, ReplayError, replay_derivation

__all__ = [
    "FORWARD",
    "BACKWARD",
    "RULE_NAMES",
    "Match",
    "RewriteRule",
    "StaleMatchError",
    "get_rule",
    "Trace",
    "TraceStep",
    "simplify",
    "SoundnessReport",
    "check_soundness",
    "random_diagram",
    "DERIVATION_NAMES",
    "ReplayError",
    "replay_derivation",
]
