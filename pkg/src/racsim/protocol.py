"""Honest-node state machine for running-sum ratio consensus.

Each node keeps dual mass values y and z whose ratio tracks the
average of initial values. Instead of raw masses, nodes broadcast
cumulative running sums (lam for y, gam for z); receivers difference
consecutive values to recover per-round contributions. When an
in-neighbor is detected as malicious its accumulated contribution is
removed by zeroing its ledger entry, and mass previously sent to a
detected out-neighbor is compensated back into the node's own values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

Number = Union[int, float, Fraction]
Pair = tuple[Number, Number]

Z_FLOOR = 1e-12
DEFAULT_TOL = 1e-9

ZERO_PAIR: Pair = (0, 0)


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class ValueRule:
    """Equality and guard rules for protocol values.

    Float mode compares with an absolute tolerance; exact mode runs the
    whole protocol over rationals and compares exactly.
    """

    exact: bool = False
    tol: float = DEFAULT_TOL

    def convert(self, x: Number) -> Number:
        return Fraction(x) if self.exact else x

    def eq(self, a: Number, b: Number) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol

    def pair_eq(self, a: Pair, b: Pair) -> bool:
        return self.eq(a[0], b[0]) and self.eq(a[1], b[1])

    def z_ok(self, z: Number) -> bool:
        if self.exact:
            return z > 0
        return z > Z_FLOOR


@dataclass(frozen=True)
class InformationSet:
    """The per-round broadcast message of one node.

    self_next carries the running sums the sender will difference from
    next round; relayed carries the sender's current ledger, including
    an entry for the sender itself. The declared fields expose the
    sender's effective out-degree and the number of out-neighbors it
    removed this round, both needed by receivers to replay its update.
    """

    sender: int
    round: int
    detected: frozenset[int]
    self_next: Pair
    relayed: Mapping[int, Pair]
    declared_out_degree: int
    declared_removed_out: int = 0

    def __post_init__(self) -> None:
        assert self.sender in self.relayed, "message must relay the sender's own entry"
        assert self.declared_out_degree >= 0
        assert self.declared_removed_out >= 0


@dataclass
class RunningState:
    y: Number
    z: Number
    lam: Number
    gam: Number
    ratio: Number


@dataclass(frozen=True)
class NodeView:
    """A node's local knowledge of the topology."""

    id: int
    in_nbrs: frozenset[int]
    out_nbrs: frozenset[int]

    @staticmethod
    def from_graph(g, i: int) -> "NodeView":
        return NodeView(id=i, in_nbrs=g.in_neighbors(i), out_nbrs=g.out_neighbors(i))


@dataclass
class NodeState:
    id: int
    round: int
    view: NodeView
    run: RunningState
    prev_lam: Number  # running sums at the current round, one step behind run
    prev_gam: Number
    ledger: dict[int, Pair]  # per in-neighbor running sums read this round
    ledger_prev: dict[int, Pair]
    detected: set[int] = field(default_factory=set)
    detected_two_hop: set[int] = field(default_factory=set)
    active_out: frozenset[int] = frozenset()
    out_degree: int = 0
    removed_out_count: int = 0
    # detection bookkeeping
    check_set: dict[int, Pair] = field(default_factory=dict)
    msg_history: dict[int, InformationSet] = field(default_factory=dict)
    claim_first_seen: dict[tuple[int, int], int] = field(default_factory=dict)
    prev_claims: dict[int, frozenset[int]] = field(default_factory=dict)

    @property
    def active_in(self) -> frozenset[int]:
        return self.view.in_nbrs - self.detected


@dataclass(frozen=True)
class RoundResult:
    ratio: Number
    low_mass: bool
    crashed: frozenset[int]


def initial_share(x0: Number, out_degree: int, rule: ValueRule) -> Pair:
    """Running sums transmitted in the first exchange."""
    x0 = rule.convert(x0)
    one = rule.convert(1)
    return (x0 / (1 + out_degree), one / (1 + out_degree))


def bootstrap(
    id: int,
    x0: Number,
    view: NodeView,
    received: Mapping[int, Pair],
    rule: ValueRule,
    pre_detected: frozenset[int] = frozenset(),
) -> NodeState:
    """Build the state reached after the first exchange.

    received maps each in-neighbor to its first running-sum pair.
    In-neighbors missing from received, or already ruled out, absorb
    nothing and start detected. The first shares went out with the
    full out-degree weight, so out-neighbors detected this early are
    compensated right away.
    """
    if isinstance(x0, float) and not math.isfinite(x0):
        raise ProtocolError(f"initial value must be finite, got {x0!r}")
    x0 = rule.convert(x0)
    d_full = len(view.out_nbrs)
    lam1, gam1 = initial_share(x0, d_full, rule)
    detected = set(pre_detected)
    detected |= {j for j in view.in_nbrs if j not in received}
    ledger: dict[int, Pair] = {}
    y = lam1
    z = gam1
    for j in view.in_nbrs:
        if j in detected:
            ledger[j] = ZERO_PAIR
        else:
            lam_j, gam_j = received[j]
            ledger[j] = (lam_j, gam_j)
            y = y + lam_j
            z = z + gam_j
    removed = len(view.out_nbrs & detected)
    y = y + removed * lam1
    z = z + removed * gam1
    active_out = view.out_nbrs - detected
    d_eff = len(active_out)
    lam2 = lam1 + y / (1 + d_eff)
    gam2 = gam1 + z / (1 + d_eff)
    ratio = y / z if rule.z_ok(z) else x0
    return NodeState(
        id=id,
        round=1,
        view=view,
        run=RunningState(y=y, z=z, lam=lam2, gam=gam2, ratio=ratio),
        prev_lam=lam1,
        prev_gam=gam1,
        ledger=ledger,
        ledger_prev={j: ZERO_PAIR for j in view.in_nbrs},
        detected=detected,
        active_out=active_out,
        out_degree=d_eff,
        removed_out_count=removed,
    )


def build_information_set(s: NodeState) -> InformationSet:
    """The message a node broadcasts after finishing its round."""
    relayed = dict(s.ledger)
    relayed[s.id] = (s.prev_lam, s.prev_gam)
    return InformationSet(
        sender=s.id,
        round=s.round,
        detected=frozenset(s.detected),
        self_next=(s.run.lam, s.run.gam),
        relayed=relayed,
        declared_out_degree=s.out_degree,
        declared_removed_out=s.removed_out_count,
    )


def honest_round(
    s: NodeState,
    inbox: Mapping[int, InformationSet],
    new_detected: frozenset[int],
    rule: ValueRule,
) -> RoundResult:
    """Advance one round in place and return the resulting ratio.

    new_detected is this round's detection outcome; in-neighbors that
    sent nothing are treated as crashed and detected as well.
    """
    k = s.round + 1
    crashed = frozenset(
        j
        for j in s.view.in_nbrs
        if j not in s.detected and j not in new_detected and j not in inbox
    )
    s.detected |= set(new_detected) | crashed
    prev_active_out = s.active_out
    active_out = s.view.out_nbrs - s.detected
    removed_out = prev_active_out - active_out
    d_out = len(active_out)

    lam_k, gam_k = s.run.lam, s.run.gam
    new_ledger: dict[int, Pair] = {}
    y = lam_k - s.prev_lam
    z = gam_k - s.prev_gam
    for j in s.view.in_nbrs:
        if j in s.detected:
            new_ledger[j] = ZERO_PAIR
        else:
            new_ledger[j] = inbox[j].self_next
        y = y + (new_ledger[j][0] - s.ledger[j][0])
        z = z + (new_ledger[j][1] - s.ledger[j][1])
    # mass previously sent to newly removed out-neighbors comes back
    y = y + len(removed_out) * lam_k
    z = z + len(removed_out) * gam_k

    low_mass = not rule.z_ok(z)
    ratio = s.run.ratio if low_mass else y / z

    s.ledger_prev = s.ledger
    s.ledger = new_ledger
    s.prev_lam = lam_k
    s.prev_gam = gam_k
    s.run = RunningState(
        y=y,
        z=z,
        lam=lam_k + y / (1 + d_out),
        gam=gam_k + z / (1 + d_out),
        ratio=ratio,
    )
    s.round = k
    s.active_out = active_out
    s.out_degree = d_out
    s.removed_out_count = len(removed_out)
    return RoundResult(ratio=ratio, low_mass=low_mass, crashed=crashed)


def ratio(s: NodeState) -> Number:
    return s.run.ratio
