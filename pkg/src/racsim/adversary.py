"""Scripted malicious behaviors.

Adversaries broadcast one identical, possibly forged, message to all
out-neighbors each round. During compliant periods they run the
honest update so that later forgeries are arithmetically plausible.
Ledger tampering is realized by perturbing the adversary's own view
of the targeted in-neighbor's running sums, which keeps the rest of
its arithmetic self-consistent; every other action rewrites the
outgoing message directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from .graph import AdversaryKind, AdversaryModel, ConditionReport, DirectedGraph, Violation, is_f_local
from .protocol import InformationSet, Pair

RANDOM_VALUE_RANGE = (-100.0, 100.0)


class ActionKind(Enum):
    COMPLY = "Comply"
    CRASH = "Crash"
    SET_SELF_VALUE = "SetSelfValue"
    TAMPER_RELAYED = "TamperRelayed"
    INJECT_FAKE_ID = "InjectFakeId"
    DROP_RELAYED_ENTRY = "DropRelayedEntry"
    FALSELY_ACCUSE = "FalselyAccuse"
    LIE_DECLARED_DEGREE = "LieDeclaredDegree"


class TamperMode(Enum):
    SET = "set"
    OFFSET = "offset"


@dataclass(frozen=True)
class AttackAction:
    kind: ActionKind
    target: Optional[int] = None
    mode: TamperMode = TamperMode.OFFSET
    amount: float = 0.0
    value: Optional[float] = None  # None means seeded random draw
    fake_values: Optional[Pair] = None

    def __post_init__(self) -> None:
        needs_target = {
            ActionKind.TAMPER_RELAYED,
            ActionKind.INJECT_FAKE_ID,
            ActionKind.DROP_RELAYED_ENTRY,
            ActionKind.FALSELY_ACCUSE,
        }
        if self.kind in needs_target and self.target is None:
            raise ValueError(f"{self.kind.value} requires a target id")


@dataclass(frozen=True)
class AttackScript:
    node: int
    schedule: tuple[tuple[int, AttackAction], ...] = ()
    collusion_partner: Optional[int] = None

    def __post_init__(self) -> None:
        rounds = [r for r, _ in self.schedule]
        if rounds != sorted(rounds):
            raise ValueError("schedule must be sorted by from_round")

    def active_actions(self, k: int) -> tuple[AttackAction, ...]:
        """All actions whose start round has been reached."""
        return tuple(a for r, a in self.schedule if k >= r)


def comply_script(node: int) -> AttackScript:
    return AttackScript(node=node, schedule=())


def make_colluding_tamper(
    node_a: int, node_b: int, from_round: int, amount: float
) -> tuple[AttackScript, AttackScript]:
    """Two scripts that tamper each other's relayed entries with
    mirrored amounts, keeping the pair's mutual story consistent."""
    a = AttackScript(
        node=node_a,
        schedule=(
            (from_round, AttackAction(ActionKind.TAMPER_RELAYED, target=node_b, amount=amount)),
        ),
        collusion_partner=node_b,
    )
    b = AttackScript(
        node=node_b,
        schedule=(
            (from_round, AttackAction(ActionKind.TAMPER_RELAYED, target=node_a, amount=-amount)),
        ),
        collusion_partner=node_a,
    )
    return a, b


def _draw(rng: random.Random) -> float:
    lo, hi = RANDOM_VALUE_RANGE
    return rng.uniform(lo, hi)


def forge_information_set(
    truth: InformationSet,
    script: AttackScript,
    k: int,
    rng: random.Random,
    skip_ledger_tamper: bool = False,
) -> Optional[InformationSet]:
    """Apply the active actions for round k to an honest message.

    Returns None when the node crashes (no emission). When the caller
    already evolved the sender's state with tampered inputs, relayed
    entries carry the forgery and skip_ledger_tamper avoids applying
    it twice.
    """
    actions = script.active_actions(k)
    if any(a.kind is ActionKind.CRASH for a in actions):
        return None
    detected = set(truth.detected)
    self_next = truth.self_next
    relayed = dict(truth.relayed)
    declared_out_degree = truth.declared_out_degree
    declared_removed_out = truth.declared_removed_out
    for a in actions:
        if a.kind is ActionKind.COMPLY:
            continue
        if a.kind is ActionKind.SET_SELF_VALUE:
            if a.value is None:
                self_next = (_draw(rng), _draw(rng))
            else:
                self_next = (a.value, self_next[1])
        elif a.kind is ActionKind.TAMPER_RELAYED:
            if skip_ledger_tamper:
                continue
            base = relayed.get(a.target, (0.0, 0.0))
            if a.mode is TamperMode.SET:
                relayed[a.target] = (a.amount, base[1])
            else:
                relayed[a.target] = (base[0] + a.amount, base[1])
        elif a.kind is ActionKind.INJECT_FAKE_ID:
            values = a.fake_values if a.fake_values is not None else (_draw(rng), _draw(rng))
            relayed[a.target] = values
        elif a.kind is ActionKind.DROP_RELAYED_ENTRY:
            relayed.pop(a.target, None)
        elif a.kind is ActionKind.FALSELY_ACCUSE:
            detected.add(a.target)
        elif a.kind is ActionKind.LIE_DECLARED_DEGREE:
            declared_out_degree = int(a.value if a.value is not None else 0)
    if truth.sender not in relayed:
        # a dropped self entry would crash receivers' bookkeeping; the
        # message type requires it, so restore the honest value
        relayed[truth.sender] = truth.relayed[truth.sender]
    return InformationSet(
        sender=truth.sender,
        round=truth.round,
        detected=frozenset(detected),
        self_next=self_next,
        relayed=relayed,
        declared_out_degree=declared_out_degree,
        declared_removed_out=declared_removed_out,
    )


def tampered_inbox(
    inbox: dict[int, InformationSet],
    script: AttackScript,
    k: int,
) -> dict[int, InformationSet]:
    """Perturb the adversary's own view of tampered targets' running
    sums so its internal arithmetic stays consistent with the forged
    relayed entries it will broadcast."""
    out = dict(inbox)
    for a in script.active_actions(k):
        if a.kind is not ActionKind.TAMPER_RELAYED:
            continue
        msg = out.get(a.target)
        if msg is None:
            continue
        lam, gam = msg.self_next
        if a.mode is TamperMode.SET:
            forged = (a.amount, gam)
        else:
            forged = (lam + a.amount, gam)
        out[a.target] = replace(msg, self_next=forged)
    return out


def scripted_self_value(script: AttackScript, k: int) -> Optional[float]:
    """The fixed self value an active SetSelfValue action announces,
    if any; used by the trace to record what the adversary broadcast."""
    value = None
    for a in script.active_actions(k):
        if a.kind is ActionKind.SET_SELF_VALUE and a.value is not None:
            value = a.value
    return value


def validate_adversary_placement(
    g: DirectedGraph, scripts: Iterable[AttackScript], model: AdversaryModel
) -> ConditionReport:
    """Check the scripted adversary set against the adversary model.

    Full access nodes (in-neighbors of every other node's broadcasts,
    i.e. receivers from all) can verify everyone directly, so they are
    exempt from the local bound.
    """
    adversaries = {s.node for s in scripts}
    violations = []
    for v in adversaries:
        if not (1 <= v <= g.n):
            violations.append(Violation((v,), "unknown_node"))
    if violations:
        return ConditionReport.from_violations(violations)
    if model.kind is AdversaryKind.TOTAL:
        if len(adversaries) > model.f:
            violations.append(
                Violation(tuple(sorted(adversaries)), "total_bound", (model.f,))
            )
    else:
        for i in g.nodes:
            if i in adversaries:
                continue
            if g.in_neighbors(i) == frozenset(set(g.nodes) - {i}):
                continue  # full access node
            bad = g.in_neighbors(i) & adversaries
            if len(bad) > model.f:
                violations.append(Violation((i,), "local_bound", tuple(sorted(bad))))
    return ConditionReport.from_violations(violations)


def adversary_rng(seed: int, node: int) -> random.Random:
    """Independent deterministic stream per adversary node."""
    return random.Random(f"{seed}:{node}")
