"""Discrete-event simulation of chain scheduling across the multi-cloud.

One run owns all mutable state (event heap, machines, link loads, instance
status) and executes on a single logical thread.  Event ordering at equal
timestamps is fixed: finish < transfer < start < arrival, then sequence
number, so identical inputs replay identically.

Timing model for one placed service:

    dispatch ─ boot wait ─ inbound transfers ─ resume ─ execute ─ finish

Machine capacity is held from dispatch until finish.  A transfer is charged
only when a predecessor sits on a different machine; it serializes the
predecessor's output at the slower of the two machine NICs and, when the
machines sit on different nodes, additionally waits out the M/D/1 sojourn of
every link on the min-hop route.  While in flight, a transfer contributes
its line rate to those links, so concurrent transfers see each other's load.
"""

import heapq
from dataclasses import dataclass, field

from .chains import ChainInstance, ready_services
from .errors import NoFeasibleType
from .fws import (LabeledService, assign_labels, compute_weight,
                  select_machine_fws)
from .greedy import GREEDY_POLICIES, DECREASING_TIME, greedy_select_machine
from .infrastructure import provision_machine
from .metrics import MetricsReport, RequestRecord, check_sla
from .scenario import Scenario, generate_workload, sample_service_defs

EVENT_FINISH = 0
EVENT_TRANSFER = 1
EVENT_START = 2
EVENT_ARRIVAL = 3


@dataclass
class Placement:
    """One scheduled service execution and its timing breakdown."""

    instance_id: int
    service_id: int
    machine_id: int
    start_ms: float
    finish_ms: float
    dispatch_ms: float
    boot_wait_ms: float
    transfer_ms: float
    # per-predecessor inbound transfer delays, {pred_service_id: ms}
    transfers_in: dict = field(default_factory=dict)


@dataclass
class _RequestState:
    request: object
    instance: ChainInstance
    labels: dict
    dropped: bool = False
    completed_ms: float = None


class SimulationRun:
    """Executes one scenario under one policy and collects the schedule."""

    def __init__(self, scenario: Scenario, topology=None, requests=None,
                 service_defs=None, initial_machines=None):
        scenario.validate()
        self.scenario = scenario
        self.topology = topology if topology is not None \
            else scenario.topology_spec.build()
        self.topology.set_background_load(scenario.background_load_fraction)
        self.chains = {c.chain_id: c for c in scenario.chains}
        self.defs = service_defs if service_defs is not None \
            else sample_service_defs(scenario)
        self.requests = requests if requests is not None \
            else generate_workload(scenario)

        self.now = 0.0
        self._seq = 0
        self._events = []
        self.machines = []
        self.placements = []
        self._placed = {}          # (instance_id, service_id) -> Placement
        self.ready = []            # LabeledService entries awaiting dispatch
        self.states = {}           # request_id -> _RequestState
        self.arrived = 0
        self.completed = 0
        self.dropped = 0
        self.traffic_kb = 0.0      # online crossing-edge accumulator

        if initial_machines:
            for node_id, vm_type in initial_machines:
                self._provision(node_id, vm_type, active_at_ms=0.0)
        for req in self.requests:
            self._push(req.arrival_time_ms, EVENT_ARRIVAL, req)

        policy = scenario.policy
        self._greedy = GREEDY_POLICIES.get(policy)

    # ------------------------------------------------------------------ events

    def _push(self, time_ms, kind, payload):
        self._seq += 1
        heapq.heappush(self._events, (time_ms, kind, self._seq, payload))

    def execute(self):
        while self._events:
            time_ms, kind, _, payload = heapq.heappop(self._events)
            if time_ms < self.now - 1e-6:
                raise AssertionError("event dequeued out of time order")
            self.now = max(self.now, time_ms)
            if kind == EVENT_ARRIVAL:
                self._on_arrival(payload)
            elif kind == EVENT_FINISH:
                self._on_finish(*payload)
            elif kind == EVENT_START:
                self._on_start(*payload)
            elif kind == EVENT_TRANSFER:
                self._on_transfer_done(payload)
        # Anything still queued can never be placed: no capacity-releasing
        # event remains.  Those requests count as dropped.
        for entry in list(self.ready):
            state = self.states[entry.instance_id]
            if not state.dropped:
                self._drop(state)
        self.ready.clear()
        return self._report()

    def _on_arrival(self, request):
        chain = self.chains[request.chain_id]
        instance = ChainInstance(request.request_id, chain, request.request_id)
        exec_times = {sid: self.defs[sid].exec_time_ms for sid in chain.nodes}
        labels = assign_labels(chain, exec_times)
        state = _RequestState(request, instance, labels)
        self.states[request.request_id] = state
        self.arrived += 1
        for sid in sorted(ready_services(instance)):
            self._enqueue(state, sid)
        self._dispatch()

    def _on_start(self, instance_id, service_id):
        state = self.states[instance_id]
        state.instance.mark_running(service_id)
        self._dispatch()

    def _on_finish(self, instance_id, service_id, machine):
        state = self.states[instance_id]
        sdef = self.defs[service_id]
        machine.set_idle((instance_id, service_id))
        machine.buffer_service((instance_id, service_id),
                               sdef.memory_gb, sdef.cores)
        state.instance.mark_done(service_id)
        if not state.dropped:
            if state.instance.all_done():
                state.completed_ms = self.now
                self.completed += 1
            else:
                for succ in sorted(state.instance.chain.successors(service_id)):
                    if succ in ready_services(state.instance):
                        self._enqueue(state, succ)
        self._dispatch()

    def _on_transfer_done(self, transfer):
        route, rate_pps = transfer
        for key in route:
            link = self.topology.links[key]
            link.transfer_pps = max(0.0, link.transfer_pps - rate_pps)

    # ---------------------------------------------------------------- dispatch

    def _enqueue(self, state, service_id):
        state.instance.mark_ready(service_id)
        chain = state.instance.chain
        if self.scenario.weights.dependents == "transitive":
            dependents = chain.transitive_dependents(service_id)
        else:
            dependents = chain.immediate_dependents(service_id)
        self.ready.append(LabeledService(
            instance_id=state.instance.instance_id,
            service_id=service_id,
            label=state.labels[service_id],
            enqueue_time_ms=self.now,
            exec_time_ms=self.defs[service_id].exec_time_ms,
            dependents=dependents,
        ))

    def _priority_order(self):
        if self._greedy is None:
            params = self.scenario.weights
            for e in self.ready:
                e.weight = compute_weight(e, self.now, params)
            key = lambda e: (-e.label, -e.weight, e.enqueue_time_ms,
                             e.instance_id, e.service_id)
        elif self._greedy.service_bias == DECREASING_TIME:
            key = lambda e: (-e.label, -e.exec_time_ms, e.instance_id, e.service_id)
        else:
            key = lambda e: (-e.label, e.exec_time_ms, e.instance_id, e.service_id)
        return sorted(self.ready, key=key)

    def _dispatch(self):
        while self.ready:
            placed = False
            for entry in self._priority_order():
                state = self.states[entry.instance_id]
                if state.dropped:
                    self.ready.remove(entry)
                    placed = True
                    break
                choice = self._select_machine(entry)
                if choice is not None:
                    self._place(entry, choice)
                    self.ready.remove(entry)
                    placed = True
                    break
                if self.now - state.request.arrival_time_ms > state.request.delay_sla_ms:
                    self._drop(state)
                    placed = True
                    break
            if not placed:
                return

    def _select_machine(self, entry):
        sdef = self.defs[entry.service_id]
        try:
            if self._greedy is not None:
                return greedy_select_machine(
                    sdef.memory_gb, sdef.cores, self.machines,
                    self._greedy.machine_bias, self.topology,
                    self.scenario.catalog, self.now)
            preds = self._pred_placements(entry)
            return select_machine_fws(
                sdef.memory_gb, sdef.cores, preds, self.machines,
                self.topology, self.scenario.catalog, self.now)
        except NoFeasibleType:
            # demand exceeds the whole catalog: the request waits and drops,
            # it never crashes the run
            return None

    def _pred_placements(self, entry):
        chain = self.states[entry.instance_id].instance.chain
        out = []
        for pred in sorted(chain.predecessors(entry.service_id)):
            placement = self._placed[(entry.instance_id, pred)]
            machine = self.machines[placement.machine_id]
            out.append((pred, machine, self.defs[pred].data_out_kb))
        return out

    def _provision(self, node_id, vm_type, active_at_ms):
        node = self.topology.nodes[node_id]
        machine = provision_machine(node, vm_type, len(self.machines),
                                    active_at_ms=active_at_ms)
        self.machines.append(machine)
        return machine

    def _place(self, entry, choice):
        t = self.now
        sdef = self.defs[entry.service_id]
        if choice[0] == "provision":
            _, node_id, vm_type = choice
            machine = self._provision(
                node_id, vm_type, active_at_ms=t + self.scenario.provision_latency_ms)
            boot_ms = self.scenario.provision_latency_ms
        else:
            machine = choice[1]
            boot_ms = max(0.0, machine.active_at_ms - t)
        key = (entry.instance_id, entry.service_id)
        machine.allocate(key, sdef.memory_gb, sdef.cores)

        transfers_in = {}
        transfer_ms = 0.0
        for pred, pred_machine, data_out_kb in self._pred_placements(entry):
            if pred_machine.machine_id == machine.machine_id:
                continue
            self.traffic_kb += data_out_kb
            bw = min(pred_machine.vm_type.max_bandwidth_mbps,
                     machine.vm_type.max_bandwidth_mbps)
            delay_ms = data_out_kb / bw  # kB over MB/s serializes in ms
            if pred_machine.node_id != machine.node_id:
                route = self.topology.route(pred_machine.node_id, machine.node_id)
                delay_ms += 1000.0 * sum(
                    self.topology.links[k].delay_s(self.topology.rho_max)
                    for k in route)
                rate_pps = self.topology.line_rate_pps(bw)
                for k in route:
                    self.topology.links[k].transfer_pps += rate_pps
                self._push(t + delay_ms, EVENT_TRANSFER, (route, rate_pps))
            transfers_in[pred] = delay_ms
            transfer_ms = max(transfer_ms, delay_ms)

        start = t + boot_ms + transfer_ms + self.scenario.resume_latency_ms
        finish = start + sdef.exec_time_ms
        placement = Placement(
            instance_id=entry.instance_id, service_id=entry.service_id,
            machine_id=machine.machine_id, start_ms=start, finish_ms=finish,
            dispatch_ms=t, boot_wait_ms=boot_ms, transfer_ms=transfer_ms,
            transfers_in=transfers_in)
        self.placements.append(placement)
        self._placed[key] = placement
        self._push(start, EVENT_START, (entry.instance_id, entry.service_id))
        self._push(finish, EVENT_FINISH,
                   (entry.instance_id, entry.service_id, machine))

    def _drop(self, state):
        state.dropped = True
        self.dropped += 1
        self.ready = [e for e in self.ready
                      if e.instance_id != state.instance.instance_id]

    # ----------------------------------------------------------------- report

    def makespan_ms(self):
        return max((p.finish_ms for p in self.placements), default=0.0)

    def _attributed_costs(self):
        """Split each machine's hourly cost across requests by held time."""
        held_by_machine = {}
        held_by_request = {}
        for p in self.placements:
            span = p.finish_ms - p.dispatch_ms
            held_by_machine[p.machine_id] = held_by_machine.get(p.machine_id, 0.0) + span
            held_by_request.setdefault(p.instance_id, {})
            held_by_request[p.instance_id][p.machine_id] = \
                held_by_request[p.instance_id].get(p.machine_id, 0.0) + span
        costs = {}
        for rid, spans in held_by_request.items():
            total = 0.0
            for mid, span in spans.items():
                total += (span / held_by_machine[mid]) * \
                    self.machines[mid].vm_type.hourly_cost
            costs[rid] = total
        return costs

    def _report(self):
        if self.completed + self.dropped != self.arrived:
            raise AssertionError("requests lost: conservation violated")
        costs = self._attributed_costs()
        records = []
        for rid in sorted(self.states):
            state = self.states[rid]
            req = state.request
            turnaround = None
            if state.completed_ms is not None:
                turnaround = state.completed_ms - req.arrival_time_ms
            cost = costs.get(rid, 0.0)
            satisfied = check_sla(req, turnaround, cost, dropped=state.dropped)
            records.append(RequestRecord(
                request_id=rid, chain_id=req.chain_id,
                arrival_ms=req.arrival_time_ms, turnaround_ms=turnaround,
                attributed_cost=cost, satisfied=satisfied,
                dropped=state.dropped))
        finished = [r.turnaround_ms for r in records if r.turnaround_ms is not None]
        avg_turnaround = sum(finished) / len(finished) if finished else 0.0
        satisfied_pct = (100.0 * sum(1 for r in records if r.satisfied) /
                         len(records)) if records else 100.0
        total_cost = sum(m.vm_type.hourly_cost for m in self.machines)
        return MetricsReport(
            policy=self.scenario.policy,
            total_traffic_kb=self.traffic_kb,
            avg_turnaround_ms=avg_turnaround,
            satisfied_pct=satisfied_pct,
            total_cost_per_hour=total_cost,
            per_request=records,
        )


def run(scenario: Scenario) -> MetricsReport:
    """Simulate one scenario to quiescence and aggregate its metrics."""
    sim = SimulationRun(scenario)
    report = sim.execute()
    return report
