"""Action vocabulary shared by the env, edge agents, and meta-controller.

Telecom actions are integer-coded: 0 = Stay, 1..B = handover to TBS b-1,
B+1 = request the HAPS link. Semantic directives and meta-actions carry a
one-line wire grammar so scripted and remote policies speak the same format:

    DIRECTIVE <token> [<magnitude>]
    ACTION <Offload|Recall|Idle> [id ...]
"""

from dataclasses import dataclass, field

import numpy as np

DIRECTIVE_TOKENS = (
    "FORWARD", "BACK", "LEFT", "RIGHT", "ASCEND", "DESCEND",
    "HOVER", "ACCELERATE", "DECELERATE",
)
MAGNITUDE_TAGS = ("GENTLE", "NORMAL", "AGGRESSIVE")

STAY = 0


class DirectiveParseError(ValueError):
    pass


@dataclass(frozen=True)
class SemanticDirective:
    token: str
    magnitude: str = "NORMAL"

    def __post_init__(self):
        if self.token not in DIRECTIVE_TOKENS:
            raise DirectiveParseError(f"unknown directive token: {self.token!r}")
        if self.magnitude not in MAGNITUDE_TAGS:
            raise DirectiveParseError(f"unknown magnitude tag: {self.magnitude!r}")

    def serialize(self):
        return f"DIRECTIVE {self.token} {self.magnitude}"

    @classmethod
    def parse(cls, text):
        """Parse the first DIRECTIVE line found in a reply."""
        for line in text.strip().splitlines():
            parts = line.strip().split()
            if not parts or parts[0].upper() != "DIRECTIVE":
                continue
            if len(parts) == 2:
                return cls(parts[1].upper())
            if len(parts) == 3:
                return cls(parts[1].upper(), parts[2].upper())
            raise DirectiveParseError(f"malformed directive line: {line!r}")
        raise DirectiveParseError(f"no DIRECTIVE line in reply: {text!r}")


HOVER = SemanticDirective("HOVER")

META_KINDS = ("Offload", "Recall", "Idle")


@dataclass(frozen=True)
class MetaAction:
    """Strategic network reconfiguration: which UAVs to move off/onto the HAPS."""

    kind: str
    uav_ids: tuple = ()

    def __post_init__(self):
        if self.kind not in META_KINDS:
            raise DirectiveParseError(f"unknown meta action kind: {self.kind!r}")
        if self.kind == "Idle" and self.uav_ids:
            raise DirectiveParseError("Idle carries no UAV ids")

    def serialize(self):
        ids = " ".join(str(i) for i in self.uav_ids)
        return f"ACTION {self.kind}" + (f" {ids}" if ids else "")

    @classmethod
    def parse(cls, text):
        for line in text.strip().splitlines():
            parts = line.strip().split()
            if not parts or parts[0].upper() != "ACTION":
                continue
            if len(parts) < 2:
                raise DirectiveParseError(f"malformed action line: {line!r}")
            kind = parts[1].capitalize()
            if kind not in META_KINDS:
                raise DirectiveParseError(f"unknown meta action kind: {parts[1]!r}")
            try:
                ids = tuple(int(p) for p in parts[2:])
            except ValueError as exc:
                raise DirectiveParseError(f"non-integer UAV id in: {line!r}") from exc
            return cls(kind, ids)
        raise DirectiveParseError(f"no ACTION line in reply: {text!r}")


IDLE = MetaAction("Idle")


@dataclass
class JointAction:
    """Per-UAV hybrid action: four rotor RPM commands plus a telecom command."""

    rotor_rpm: np.ndarray = field(default_factory=lambda: np.zeros(4))
    telecom: int = STAY


def telecom_action_count(num_tbs):
    return num_tbs + 2


def haps_request_action(num_tbs):
    return num_tbs + 1


def telecom_action_name(action, num_tbs):
    if action == STAY:
        return "Stay"
    if 1 <= action <= num_tbs:
        return f"HO-to-TBS{action - 1}"
    if action == num_tbs + 1:
        return "RequestHAPS"
    raise ValueError(f"telecom action {action} out of range for B={num_tbs}")
