"""Malicious-node detection.

Two detectors over the same per-round audit machinery:

* sharing detection: every verified detection is shared network-wide
  by a trusted oracle within the round; each node then audits each
  in-neighbor's message against the shared detection set, its own
  check set of previously claimed running sums, and a full replay of
  the sender's update arithmetic.
* fully distributed detection: no oracle; nodes extend their check
  sets to two-hop in-neighbors by majority voting over relayed copies,
  accept detection claims corroborated by f+1 distinct reporters, and
  audit claim sets for uncorroborated or vanishing accusations.

All checks are conservative: a value that cannot be verified (no
majority, not enough reporters, insufficient structural coverage)
never produces a detection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

from .graph import DirectedGraph, two_hop_middle_nodes
from .protocol import (
    InformationSet,
    NodeState,
    Pair,
    ValueRule,
    ZERO_PAIR,
)


class Cause(Enum):
    STEP1 = "Step1"
    STEP1A = "Step1a"
    STEP1B = "Step1b"
    STEP2 = "Step2"
    STEP3 = "Step3"
    STEP4 = "Step4"
    CRASH = "Crash"
    INIT_RANGE = "InitRange"
    ORACLE_SHARED = "OracleShared"
    VOTE_MAJORITY = "VoteMajority"


class Provenance(Enum):
    DIRECT = "direct"
    VOTED = "voted"
    SELF = "self"


@dataclass(frozen=True)
class DetectionVerdict:
    suspect: int
    detector: int
    round: int
    cause: Cause
    evidence: tuple = ()


@dataclass
class CheckSet:
    """Verified running-sum values available to one detector this round."""

    owner: int
    round: int
    entries: dict[int, Pair] = field(default_factory=dict)
    provenance: dict[int, Provenance] = field(default_factory=dict)

    def add(self, node: int, value: Pair, prov: Provenance) -> None:
        self.entries[node] = value
        self.provenance[node] = prov

    def get(self, node: int) -> Optional[Pair]:
        return self.entries.get(node)


class _NoMajority:
    def __repr__(self) -> str:
        return "NoMajority"


NO_MAJORITY = _NoMajority()


@dataclass(frozen=True)
class ReconstructionResult:
    lam_pred: object
    gam_pred: object
    y_prev: object
    z_prev: object
    eps_lam: object
    eps_gam: object

    def clean(self, rule: ValueRule) -> bool:
        return rule.eq(self.eps_lam, 0) and rule.eq(self.eps_gam, 0)


def vote_value(reports: list[tuple[int, Pair]], rule: ValueRule):
    """Value pair reported by strictly more than half, else NO_MAJORITY."""
    if not reports:
        raise ValueError("reports must be non-empty")
    m = len(reports)
    for _, candidate in reports:
        count = sum(1 for _, v in reports if rule.pair_eq(v, candidate))
        if 2 * count > m:
            return candidate
    return NO_MAJORITY


def vote_detection_ids(
    neighbor_sets: Mapping[int, frozenset[int]],
    f: int,
    in_neighbor_sets: Optional[Mapping[int, frozenset[int]]] = None,
    vindicated: frozenset[int] = frozenset(),
) -> tuple[frozenset[int], frozenset[int]]:
    """Accept ids reported by at least f+1 distinct reporters.

    Dissenters are reporters that omit an accepted id they receive
    from directly (per in_neighbor_sets, when given), or that accuse a
    vindicated id.
    """
    counts: dict[int, int] = {}
    for claimed in neighbor_sets.values():
        for m in claimed:
            counts[m] = counts.get(m, 0) + 1
    accepted = frozenset(m for m, c in counts.items() if c >= f + 1)
    dissenters = set()
    for reporter, claimed in neighbor_sets.items():
        if claimed & vindicated:
            dissenters.add(reporter)
        if in_neighbor_sets is not None:
            known = in_neighbor_sets.get(reporter, frozenset())
            if (accepted & known) - claimed:
                dissenters.add(reporter)
    return accepted, frozenset(dissenters)


def virtual_initial_message(sender: int, in_nbrs: frozenset[int]) -> InformationSet:
    """Stand-in for the message before the first real broadcast.

    All running sums start at zero, so replaying the first broadcast
    against this baseline reproduces the bootstrap arithmetic.
    """
    relayed = {h: ZERO_PAIR for h in in_nbrs}
    relayed[sender] = ZERO_PAIR
    return InformationSet(
        sender=sender,
        round=0,
        detected=frozenset(),
        self_next=ZERO_PAIR,
        relayed=relayed,
        declared_out_degree=0,
        declared_removed_out=0,
    )


def reconstruct_running_sums(
    phi_now: InformationSet,
    phi_prev: InformationSet,
    rule: ValueRule,
) -> ReconstructionResult:
    """Replay the sender's update from its own two consecutive messages.

    The sender's relayed ledger difference plus its declared
    compensation term determines what its next running sums must be;
    the residuals measure how far the reported self_next values are
    from that replay.
    """
    j = phi_now.sender
    d = 1 + phi_now.declared_out_degree
    self_now = phi_now.relayed[j]
    keys = set(phi_now.relayed) | set(phi_prev.relayed)
    flow_y = sum(
        phi_now.relayed.get(h, ZERO_PAIR)[0] - phi_prev.relayed.get(h, ZERO_PAIR)[0]
        for h in keys
    )
    flow_z = sum(
        phi_now.relayed.get(h, ZERO_PAIR)[1] - phi_prev.relayed.get(h, ZERO_PAIR)[1]
        for h in keys
    )
    y_prev = flow_y + phi_now.declared_removed_out * self_now[0]
    z_prev = flow_z + phi_now.declared_removed_out * self_now[1]
    lam_pred = self_now[0] + y_prev / d
    gam_pred = self_now[1] + z_prev / d
    return ReconstructionResult(
        lam_pred=lam_pred,
        gam_pred=gam_pred,
        y_prev=y_prev,
        z_prev=z_prev,
        eps_lam=phi_now.self_next[0] - lam_pred,
        eps_gam=phi_now.self_next[1] - gam_pred,
    )


class StructuralOracle:
    """Topology-derived answers about who can verify whom.

    A value is knowable to a if it is a's own, comes from a direct
    in-neighbor, or can be recovered by majority vote over 2f+1
    relaying middle nodes. A full audit of h by a requires every input
    of h's update to be knowable to a.
    """

    def __init__(self, g: DirectedGraph, f: int):
        self.g = g
        self.f = f
        self._middles: dict[tuple[int, int], frozenset[int]] = {}
        self._full_audit: dict[tuple[int, int], bool] = {}

    def in_nbrs(self, i: int) -> frozenset[int]:
        return self.g.in_neighbors(i)

    def out_nbrs(self, i: int) -> frozenset[int]:
        return self.g.out_neighbors(i)

    def middles(self, h: int, i: int) -> frozenset[int]:
        key = (h, i)
        if key not in self._middles:
            self._middles[key] = two_hop_middle_nodes(self.g, h, i)
        return self._middles[key]

    def votable(self, a: int, h: int) -> bool:
        return len(self.middles(h, a)) >= 2 * self.f + 1

    def value_knowable(self, a: int, h: int) -> bool:
        return h == a or self.g.has_edge(h, a) or self.votable(a, h)

    def full_audit(self, a: int, h: int) -> bool:
        key = (a, h)
        if key not in self._full_audit:
            inputs = self.g.in_neighbors(h) | {h}
            self._full_audit[key] = all(self.value_knowable(a, x) for x in inputs)
        return self._full_audit[key]

    def must_detect(self, j: int, h: int) -> bool:
        """j is guaranteed to detect a misbehaving h on its own."""
        return self.g.has_edge(h, j) and self.full_audit(j, h)

    def must_know_status(self, i: int, h: int) -> bool:
        """i is guaranteed to learn of h's detection, directly or by vote."""
        if h == i:
            return True
        if self.g.has_edge(h, i) and self.full_audit(i, h):
            return True
        witnesses = sum(1 for p in self.middles(h, i) if self.full_audit(p, h))
        return witnesses >= 2 * self.f + 1


def init_range_check(
    x_reported: float,
    interval: Optional[tuple[float, float]],
    detector: int = 0,
    suspect: int = 0,
) -> Optional[DetectionVerdict]:
    """First-exchange sanity check against a configured safety interval."""
    if interval is None:
        return None
    lo, hi = interval
    if lo <= x_reported <= hi:
        return None
    return DetectionVerdict(
        suspect=suspect,
        detector=detector,
        round=1,
        cause=Cause.INIT_RANGE,
        evidence=(("reported", x_reported), ("interval", interval)),
    )


@dataclass(frozen=True)
class Alg3Result:
    verdicts: tuple[DetectionVerdict, ...]
    detected: frozenset[int]
    detected_two_hop: frozenset[int]


def _audit_steps_2_to_4(
    state: NodeState,
    j: int,
    msg: InformationSet,
    check: CheckSet,
    oracle: StructuralOracle,
    rule: ValueRule,
    k: int,
) -> list[DetectionVerdict]:
    """Steps shared by both detectors: id sanity, value consistency
    against the check set, declared-field cross-checks, and the full
    arithmetic replay of the sender's update."""
    i = state.id
    verdicts = []

    def condemn(cause: Cause, *evidence) -> None:
        verdicts.append(
            DetectionVerdict(suspect=j, detector=i, round=k, cause=cause, evidence=tuple(evidence))
        )

    in_j = oracle.in_nbrs(j)
    legit = in_j | {j}
    ids = set(msg.relayed)
    foreign = ids - legit
    missing = legit - ids
    if foreign:
        condemn(Cause.STEP2, ("foreign_ids", tuple(sorted(foreign))))
    if missing:
        condemn(Cause.STEP2, ("missing_ids", tuple(sorted(missing))))

    claims = msg.detected
    prev_msg = state.msg_history.get(j)
    prev_claims = prev_msg.detected if prev_msg is not None else frozenset()
    expected_d = len(oracle.out_nbrs(j) - claims)
    if msg.declared_out_degree != expected_d:
        condemn(Cause.STEP4, ("declared_out_degree", msg.declared_out_degree, expected_d))
    expected_removed = len((oracle.out_nbrs(j) - prev_claims) & claims)
    if msg.declared_removed_out != expected_removed:
        condemn(Cause.STEP4, ("declared_removed_out", msg.declared_removed_out, expected_removed))

    for h, val in msg.relayed.items():
        if h in foreign:
            continue
        if h != j and h in claims:
            expected: Optional[Pair] = ZERO_PAIR
        else:
            expected = check.get(h)
        if expected is not None and not rule.pair_eq(val, expected):
            condemn(Cause.STEP3, ("id", h), ("relayed", val), ("expected", expected))

    if prev_msg is None:
        prev_msg = virtual_initial_message(j, in_j)
    rec = reconstruct_running_sums(msg, prev_msg, rule)
    if not rec.clean(rule):
        condemn(
            Cause.STEP4,
            ("reported", msg.self_next),
            ("reconstructed", (rec.lam_pred, rec.gam_pred)),
        )
    return verdicts


def _store_round_bookkeeping(
    state: NodeState, inbox: Mapping[int, InformationSet]
) -> None:
    """Refresh the persistent check set and message history.

    The stored self_next claims become next round's expected relayed
    values; the detector's own entry is appended by the engine after
    its state update.
    """
    new_check: dict[int, Pair] = {}
    for j, msg in inbox.items():
        new_check[j] = msg.self_next
    state.check_set = new_check
    state.msg_history = dict(inbox)


def detect_alg2(
    state: NodeState,
    inbox: Mapping[int, InformationSet],
    shared: frozenset[int],
    oracle: StructuralOracle,
    rule: ValueRule,
) -> list[DetectionVerdict]:
    """One round of sharing detection for one node.

    shared is the oracle-distributed detection set as of last round;
    every honest claim set must equal it exactly.
    """
    i = state.id
    k = state.round + 1
    verdicts: list[DetectionVerdict] = []
    suspected: set[int] = set()

    def condemn(j: int, cause: Cause, *evidence) -> None:
        if j in suspected:
            return
        suspected.add(j)
        verdicts.append(
            DetectionVerdict(suspect=j, detector=i, round=k, cause=cause, evidence=tuple(evidence))
        )

    active_in = state.view.in_nbrs - state.detected
    for j in sorted(active_in):
        if j not in inbox:
            condemn(j, Cause.CRASH)

    check = CheckSet(owner=i, round=k - 1)
    for h, val in state.check_set.items():
        check.add(h, val, Provenance.SELF if h == i else Provenance.DIRECT)

    for j in sorted(active_in):
        if j not in inbox or j in suspected:
            continue
        msg = inbox[j]
        if msg.detected != shared:
            condemn(
                j,
                Cause.STEP1,
                ("claimed", tuple(sorted(msg.detected))),
                ("shared", tuple(sorted(shared))),
            )
            continue
        for v in _audit_steps_2_to_4(state, j, msg, check, oracle, rule, k):
            condemn(j, v.cause, *v.evidence)

    _store_round_bookkeeping(state, inbox)
    return verdicts


def detect_alg3(
    state: NodeState,
    inbox: Mapping[int, InformationSet],
    oracle: StructuralOracle,
    rule: ValueRule,
) -> Alg3Result:
    """One round of fully distributed detection for one node.

    Returns the verdicts plus the node's updated detection sets; the
    caller applies them to the protocol state.
    """
    i = state.id
    k = state.round + 1
    f = oracle.f
    detected = set(state.detected)
    two_hop_detected = set(state.detected_two_hop)
    verdicts: list[DetectionVerdict] = []

    def condemn(suspect: int, cause: Cause, *evidence) -> None:
        if suspect == i or suspect in detected or suspect in two_hop_detected:
            return
        verdicts.append(
            DetectionVerdict(
                suspect=suspect, detector=i, round=k, cause=cause, evidence=tuple(evidence)
            )
        )
        if suspect in state.view.in_nbrs or suspect in state.view.out_nbrs:
            detected.add(suspect)
        else:
            two_hop_detected.add(suspect)

    active_in = state.view.in_nbrs - state.detected
    for j in sorted(active_in):
        if j not in inbox:
            condemn(j, Cause.CRASH)

    reporters = {
        j: inbox[j] for j in sorted(active_in) if j in inbox and j not in detected
    }

    # extend the check set with majority-voted two-hop values
    check = CheckSet(owner=i, round=k - 1)
    for h, val in state.check_set.items():
        check.add(h, val, Provenance.SELF if h == i else Provenance.DIRECT)
    two_hop_ids = oracle.g.two_hop_in_neighbors(i) - state.view.in_nbrs - {i}
    for h in sorted(two_hop_ids):
        if h in detected or h in two_hop_detected or h in check.entries:
            continue
        reports = [
            (p, msg.relayed[h])
            for p, msg in reporters.items()
            if h in oracle.in_nbrs(p) and h in msg.relayed
        ]
        if len(reports) < 2 * f + 1:
            continue
        voted = vote_value(reports, rule)
        if voted is NO_MAJORITY:
            continue
        check.add(h, voted, Provenance.VOTED)

    # corroborated detection claims
    counts: dict[int, int] = {}
    for msg in reporters.values():
        for m in msg.detected:
            counts[m] = counts.get(m, 0) + 1
    for m in sorted(counts):
        if counts[m] >= f + 1 and m != i and m not in detected and m not in two_hop_detected:
            condemn(m, Cause.VOTE_MAJORITY, ("reporters", counts[m]))

    snapshot = detected | two_hop_detected

    for j, msg in sorted(reporters.items()):
        if j in detected:
            continue
        claims = msg.detected
        in_j = oracle.in_nbrs(j)

        # claims about j's own in-neighbors
        for h in sorted(claims & in_j):
            if h not in snapshot and oracle.must_know_status(i, h):
                condemn(j, Cause.STEP1A, ("uncorroborated", h))
        for h in sorted((snapshot & in_j) - claims):
            if oracle.must_detect(j, h):
                condemn(j, Cause.STEP1A, ("omitted", h))

        # two-hop claims: must be corroborated once repeated, and must
        # never vanish from the claim set
        previous = state.prev_claims.get(j)
        if previous is not None and not previous <= claims:
            condemn(j, Cause.STEP1B, ("vanished", tuple(sorted(previous - claims))))
        for m in sorted(claims - in_j - {j}):
            if m in snapshot:
                continue
            first = state.claim_first_seen.get((j, m))
            if first is None:
                state.claim_first_seen[(j, m)] = k
            elif first < k and oracle.must_know_status(i, m):
                condemn(j, Cause.STEP1B, ("persisted_uncorroborated", m))
        state.prev_claims[j] = claims

        if j in detected:
            continue
        for v in _audit_steps_2_to_4(state, j, msg, check, oracle, rule, k):
            condemn(j, v.cause, *v.evidence)

    _store_round_bookkeeping(state, inbox)
    return Alg3Result(
        verdicts=tuple(verdicts),
        detected=frozenset(detected),
        detected_two_hop=frozenset(two_hop_detected),
    )
