"""Synchronous round engine and experiment plumbing.

Each round every node emits its message, messages are delivered along
edges, detection runs per node, and the averaging update is applied.
The engine records a full numeric trace plus all detection events and
offers JSON scenario loading and CSV export.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .adversary import (
    ActionKind,
    AttackAction,
    AttackScript,
    TamperMode,
    adversary_rng,
    forge_information_set,
    scripted_self_value,
    tampered_inbox,
)
from .detection import (
    DetectionVerdict,
    StructuralOracle,
    detect_alg2,
    detect_alg3,
    init_range_check,
)
from .fixtures import FIXTURE_GRAPHS
from .graph import AdversaryKind, DirectedGraph, read_edge_list
from .protocol import (
    DEFAULT_TOL,
    NodeView,
    ValueRule,
    bootstrap,
    build_information_set,
    honest_round,
    initial_share,
)


class DetectionMode(Enum):
    NONE = "none"
    ALG2 = "alg2"
    ALG3 = "alg3"


class ScenarioError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class Scenario:
    graph: DirectedGraph
    x0: tuple[float, ...]
    f: int = 1
    model: AdversaryKind = AdversaryKind.LOCAL
    detection: DetectionMode = DetectionMode.ALG3
    sharing_oracle: bool = False
    adversaries: tuple[AttackScript, ...] = ()
    horizon: int = 200
    tol: float = 1e-6
    seed: int = 0
    safety_interval: Optional[tuple[float, float]] = None
    exact: bool = False
    value_tol: float = DEFAULT_TOL

    def validate(self) -> list[str]:
        problems = []
        if len(self.x0) != self.graph.n:
            problems.append(
                f"x0 has {len(self.x0)} entries for {self.graph.n} nodes"
            )
        if self.f < 0:
            problems.append("f must be non-negative")
        if self.horizon < 2:
            problems.append("horizon must be at least 2")
        if self.tol <= 0:
            problems.append("tol must be positive")
        if self.detection is DetectionMode.ALG2:
            if not self.sharing_oracle:
                problems.append("sharing detection requires the sharing oracle")
            if not self.graph.undirected:
                problems.append("sharing detection requires an undirected graph")
        nodes = [s.node for s in self.adversaries]
        if len(set(nodes)) != len(nodes):
            problems.append("duplicate adversary scripts")
        for v in nodes:
            if not (1 <= v <= self.graph.n):
                problems.append(f"adversary node {v} outside 1..{self.graph.n}")
        if self.safety_interval is not None:
            lo, hi = self.safety_interval
            if lo > hi:
                problems.append("safety interval is empty")
        return problems

    @property
    def adversary_nodes(self) -> frozenset[int]:
        return frozenset(s.node for s in self.adversaries)

    def rule(self) -> ValueRule:
        return ValueRule(exact=self.exact, tol=self.value_tol)


@dataclass
class Trace:
    scenario: Scenario
    y: dict[int, list]
    z: dict[int, list]
    r: dict[int, list]
    detected_count: dict[int, list]
    events: list[DetectionVerdict] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return self.scenario.horizon

    @property
    def never_detected(self) -> frozenset[int]:
        suspects = {e.suspect for e in self.events}
        return frozenset(set(self.scenario.graph.nodes) - suspects)

    @property
    def normal_nodes(self) -> frozenset[int]:
        return frozenset(set(self.scenario.graph.nodes) - self.scenario.adversary_nodes)

    @property
    def settle_round(self) -> int:
        return max((e.round for e in self.events), default=0)

    def target_average(self) -> float:
        keep = sorted(self.never_detected)
        total = sum(self.scenario.x0[i - 1] for i in keep)
        return total / len(keep)


def run(scenario: Scenario) -> Trace:
    problems = scenario.validate()
    if problems:
        raise ScenarioError(problems)
    g = scenario.graph
    rule = scenario.rule()
    nodes = list(g.nodes)
    scripts = {s.node: s for s in scenario.adversaries}
    rngs = {v: adversary_rng(scenario.seed, v) for v in scripts}
    oracle = StructuralOracle(g, scenario.f)
    views = {i: NodeView.from_graph(g, i) for i in nodes}
    x0 = {i: rule.convert(scenario.x0[i - 1]) for i in nodes}

    trace = Trace(
        scenario=scenario,
        y={i: [] for i in nodes},
        z={i: [] for i in nodes},
        r={i: [] for i in nodes},
        detected_count={i: [] for i in nodes},
    )
    one = rule.convert(1)
    for i in nodes:
        trace.y[i].append(x0[i])
        trace.z[i].append(one)
        trace.r[i].append(x0[i])
        trace.detected_count[i].append(0)

    # first exchange: everyone announces its initial running sums
    shares: dict[int, Optional[tuple]] = {}
    for i in nodes:
        lam1, gam1 = initial_share(x0[i], g.out_degree(i), rule)
        if i in scripts:
            actions = scripts[i].active_actions(1)
            if any(a.kind is ActionKind.CRASH for a in actions):
                shares[i] = None
                continue
            for a in actions:
                if a.kind is ActionKind.SET_SELF_VALUE:
                    forged = a.value if a.value is not None else rngs[i].uniform(-100.0, 100.0)
                    lam1 = rule.convert(forged) / (1 + g.out_degree(i))
        shares[i] = (lam1, gam1)

    # range screening of announced initial values
    pre_detected: dict[int, set[int]] = {i: set() for i in nodes}
    if scenario.safety_interval is not None:
        for i in nodes:
            if i in scripts:
                continue
            for j in g.in_neighbors(i):
                if shares[j] is None:
                    continue
                lam, gam = shares[j]
                reported = float(lam / gam) if gam != 0 else float("inf")
                verdict = init_range_check(
                    reported, scenario.safety_interval, detector=i, suspect=j
                )
                if verdict is not None:
                    trace.events.append(verdict)
                    pre_detected[i].add(j)
        if scenario.detection is DetectionMode.ALG2 and scenario.sharing_oracle:
            shared0 = set().union(*pre_detected.values()) if pre_detected else set()
            for i in nodes:
                pre_detected[i] = set(shared0)

    states = {}
    for i in nodes:
        received = {
            j: shares[j]
            for j in g.in_neighbors(i)
            if shares[j] is not None and j not in pre_detected[i]
        }
        states[i] = bootstrap(i, x0[i], views[i], received, rule,
                              pre_detected=frozenset(pre_detected[i]))
        # seed the check set with the first-round claims
        states[i].check_set = dict(received)
        states[i].check_set[i] = (states[i].prev_lam, states[i].prev_gam)

    for i in nodes:
        _record(trace, i, states[i], scripts.get(i), 1)

    for k in range(2, scenario.horizon + 1):
        # emit: one identical message per node, possibly forged
        msgs: dict[int, Optional[object]] = {}
        for i in nodes:
            truth = build_information_set(states[i])
            if i in scripts:
                msgs[i] = forge_information_set(
                    truth, scripts[i], k - 1, rngs[i], skip_ledger_tamper=True
                )
            else:
                msgs[i] = truth
        inboxes = {
            i: {j: msgs[j] for j in g.in_neighbors(i) if msgs[j] is not None}
            for i in nodes
        }

        # detect
        new_detected: dict[int, frozenset[int]] = {i: frozenset() for i in nodes}
        if scenario.detection is DetectionMode.ALG3:
            for i in nodes:
                if i in scripts:
                    continue
                res = detect_alg3(states[i], inboxes[i], oracle, rule)
                trace.events.extend(res.verdicts)
                new_detected[i] = res.detected - states[i].detected
                states[i].detected_two_hop = set(res.detected_two_hop)
        elif scenario.detection is DetectionMode.ALG2:
            shared = frozenset().union(
                *(frozenset(states[i].detected) for i in nodes if i not in scripts)
            )
            round_suspects: set[int] = set()
            for i in nodes:
                if i in scripts:
                    continue
                verdicts = detect_alg2(states[i], inboxes[i], shared, oracle, rule)
                trace.events.extend(verdicts)
                round_suspects |= {v.suspect for v in verdicts}
            new_shared = set(shared) | round_suspects
            for i in nodes:
                new_detected[i] = frozenset(new_shared - states[i].detected - {i})

        # update
        for i in nodes:
            if i in scripts:
                actions = scripts[i].active_actions(k - 1)
                if any(a.kind is ActionKind.CRASH for a in actions):
                    _record(trace, i, states[i], scripts[i], k)
                    continue
                inbox = tampered_inbox(inboxes[i], scripts[i], k)
            else:
                inbox = inboxes[i]
            honest_round(states[i], inbox, new_detected[i], rule)
            if scenario.detection is not DetectionMode.NONE and i not in scripts:
                states[i].check_set[i] = (states[i].prev_lam, states[i].prev_gam)
            _record(trace, i, states[i], scripts.get(i), k)

    return trace


def _record(trace: Trace, i: int, state, script: Optional[AttackScript], k: int) -> None:
    trace.y[i].append(state.run.y)
    trace.z[i].append(state.run.z)
    value = state.run.ratio
    if script is not None:
        scripted = scripted_self_value(script, k - 1)
        if scripted is not None:
            value = scripted
    trace.r[i].append(value)
    trace.detected_count[i].append(len(state.detected))


def convergence_round(trace: Trace, target: float, tol: float) -> Optional[int]:
    """Smallest round from which every normal ratio stays within tol."""
    normals = sorted(trace.normal_nodes)
    last_bad = -1
    for k in range(trace.horizon + 1):
        err = max(abs(float(trace.r[i][k]) - target) for i in normals)
        if err >= tol:
            last_bad = k
    if last_bad == trace.horizon:
        return None
    return last_bad + 1


def mass_sums(trace: Trace, nodes) -> list[tuple]:
    nodes = sorted(nodes)
    out = []
    for k in range(trace.horizon + 1):
        sy = sum(trace.y[i][k] for i in nodes)
        sz = sum(trace.z[i][k] for i in nodes)
        out.append((sy, sz))
    return out


# scenario (de)serialization


def _action_to_json(a: AttackAction) -> dict:
    out = {"kind": a.kind.value}
    if a.target is not None:
        out["target"] = a.target
    if a.kind is ActionKind.TAMPER_RELAYED:
        out["mode"] = a.mode.value
        out["amount"] = a.amount
    if a.value is not None:
        out["value"] = a.value
    if a.fake_values is not None:
        out["fake_values"] = list(a.fake_values)
    return out


def _action_from_json(d: dict) -> AttackAction:
    kind = ActionKind(d["kind"])
    fake = d.get("fake_values")
    return AttackAction(
        kind=kind,
        target=d.get("target"),
        mode=TamperMode(d.get("mode", "offset")),
        amount=d.get("amount", 0.0),
        value=d.get("value"),
        fake_values=tuple(fake) if fake is not None else None,
    )


def scenario_to_json(sc: Scenario) -> dict:
    from .graph import write_edge_list

    return {
        "graph": {"inline": write_edge_list(sc.graph)},
        "x0": list(sc.x0),
        "f": sc.f,
        "model": sc.model.value,
        "detection": sc.detection.value,
        "sharing_oracle": sc.sharing_oracle,
        "adversaries": [
            {
                "node": s.node,
                "collusion_partner": s.collusion_partner,
                "schedule": [
                    {"from_round": r, "action": _action_to_json(a)}
                    for r, a in s.schedule
                ],
            }
            for s in sc.adversaries
        ],
        "horizon": sc.horizon,
        "tol": sc.tol,
        "seed": sc.seed,
        "safety_interval": list(sc.safety_interval) if sc.safety_interval else None,
        "arithmetic": "exact" if sc.exact else "float",
    }


def scenario_from_json(data: dict, base_dir: Optional[Path] = None) -> Scenario:
    problems: list[str] = []
    gspec = data.get("graph")
    graph = None
    if not isinstance(gspec, dict):
        problems.append("missing graph specification")
    else:
        try:
            if "inline" in gspec:
                graph = read_edge_list(gspec["inline"])
            elif "file" in gspec:
                path = Path(gspec["file"])
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                graph = read_edge_list(path.read_text())
            elif "fixture" in gspec:
                name = gspec["fixture"]
                if name not in FIXTURE_GRAPHS:
                    problems.append(f"unknown fixture {name!r}")
                else:
                    graph = FIXTURE_GRAPHS[name]()
            else:
                problems.append("graph must give inline, file, or fixture")
        except (OSError, ValueError) as exc:
            problems.append(f"bad graph: {exc}")
    x0 = data.get("x0")
    if not isinstance(x0, list) or not x0:
        problems.append("x0 must be a non-empty list")
        x0 = [0.0]
    adversaries = []
    for entry in data.get("adversaries", []):
        try:
            schedule = tuple(
                (item["from_round"], _action_from_json(item["action"]))
                for item in entry.get("schedule", [])
            )
            adversaries.append(
                AttackScript(
                    node=entry["node"],
                    schedule=schedule,
                    collusion_partner=entry.get("collusion_partner"),
                )
            )
        except (KeyError, ValueError) as exc:
            problems.append(f"bad adversary entry: {exc}")
    try:
        detection = DetectionMode(data.get("detection", "alg3"))
    except ValueError:
        problems.append(f"bad detection mode {data.get('detection')!r}")
        detection = DetectionMode.NONE
    try:
        model = AdversaryKind(data.get("model", "local"))
    except ValueError:
        problems.append(f"bad adversary model {data.get('model')!r}")
        model = AdversaryKind.LOCAL
    interval = data.get("safety_interval")
    if problems:
        raise ScenarioError(problems)
    sc = Scenario(
        graph=graph,
        x0=tuple(float(v) for v in x0),
        f=int(data.get("f", 1)),
        model=model,
        detection=detection,
        sharing_oracle=bool(data.get("sharing_oracle", False)),
        adversaries=tuple(adversaries),
        horizon=int(data.get("horizon", 200)),
        tol=float(data.get("tol", 1e-6)),
        seed=int(data.get("seed", 0)),
        safety_interval=tuple(interval) if interval else None,
        exact=data.get("arithmetic", "float") == "exact",
    )
    return sc


def load_scenario(path: Path) -> Scenario:
    data = json.loads(Path(path).read_text())
    return scenario_from_json(data, base_dir=Path(path).parent)


def write_trace_csv(trace: Trace, path: Path) -> None:
    lines = ["round,node,y,z,ratio,detected_count"]
    for k in range(trace.horizon + 1):
        for i in trace.scenario.graph.nodes:
            lines.append(
                f"{k},{i},{_fmt(trace.y[i][k])},{_fmt(trace.z[i][k])},"
                f"{_fmt(trace.r[i][k])},{trace.detected_count[i][k]}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def write_events_csv(trace: Trace, path: Path) -> None:
    lines = ["round,detector,suspect,cause"]
    for e in trace.events:
        lines.append(f"{e.round},{e.detector},{e.suspect},{e.cause.value}")
    Path(path).write_text("\n".join(lines) + "\n")


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return repr(float(v))
    return repr(float(v))


def summary(trace: Trace) -> dict:
    target = trace.target_average()
    return {
        "target": target,
        "converged_round": convergence_round(trace, target, trace.scenario.tol),
        "settle_round": trace.settle_round,
        "never_detected": sorted(trace.never_detected),
    }
