"""Biased-greedy baseline policies: LFFF, MFFF, LFDT, MFDT.

Labeling is shared with the fair weighted scheduler; the baselines differ in
how they break label ties (shortest vs longest execution time) and in how
they pick machines (least vs most utilized).  They never consult affinity or
inter-machine traffic.
"""

from dataclasses import dataclass

from .errors import EmptyQueue
from .infrastructure import nearest_vm_type

LEAST_FULL = "least_full"
MOST_FULL = "most_full"
FIRST_FINISH = "first_finish"
DECREASING_TIME = "decreasing_time"


@dataclass(frozen=True)
class GreedyPolicy:
    machine_bias: str
    service_bias: str


GREEDY_POLICIES = {
    "lfff": GreedyPolicy(LEAST_FULL, FIRST_FINISH),
    "mfff": GreedyPolicy(MOST_FULL, FIRST_FINISH),
    "lfdt": GreedyPolicy(LEAST_FULL, DECREASING_TIME),
    "mfdt": GreedyPolicy(MOST_FULL, DECREASING_TIME),
}


def greedy_select_service(queue, service_bias):
    """Pick from the max-label ready set by execution-time bias."""
    if not queue:
        raise EmptyQueue("ready queue is empty")
    top = max(e.label for e in queue)
    candidates = [e for e in queue if e.label == top]
    if service_bias == FIRST_FINISH:
        key = lambda e: (e.exec_time_ms, e.instance_id, e.service_id)
    elif service_bias == DECREASING_TIME:
        key = lambda e: (-e.exec_time_ms, e.instance_id, e.service_id)
    else:
        raise ValueError(f"unknown service bias {service_bias!r}")
    return min(candidates, key=key)


def greedy_select_machine(demand_memory_gb, demand_cores, machines,
                          machine_bias, topology, catalog, now_ms):
    """Utilization-biased machine choice with a provisioning fallback.

    Returns ("existing", machine) or ("provision", node_id, vm_type), or
    None when no machine fits and every node is full.
    """
    usable = [m for m in machines
              if m.active_at_ms <= now_ms and m.fits(demand_memory_gb, demand_cores)]
    if usable:
        if machine_bias == LEAST_FULL:
            key = lambda m: (m.utilization(), m.machine_id)
        elif machine_bias == MOST_FULL:
            key = lambda m: (-m.utilization(), m.machine_id)
        else:
            raise ValueError(f"unknown machine bias {machine_bias!r}")
        return ("existing", min(usable, key=key))
    open_nodes = [n for n in topology.nodes.values() if n.has_free_slot()]
    if not open_nodes:
        return None
    node = min(open_nodes, key=lambda n: n.node_id)
    vm_type = nearest_vm_type(demand_memory_gb, demand_cores, catalog)
    return ("provision", node.node_id, vm_type)
