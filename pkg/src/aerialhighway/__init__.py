"""aerialhighway: deterministic multi-UAV corridor simulator over an
integrated terrestrial/HAPS network, with a two-tier control stack
(slow semantic directives + fast DDQN link selection) and a rule-based or
LLM-backed network meta-controller."""

__version__ = "0.1.0"
