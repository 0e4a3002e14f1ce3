"""Multi-cloud infrastructure: VM catalog, 20-node topology, link delays, machines.

Links are M/D/1 delay functions, not packet queues.  Each link carries a
fixed background load plus the line-rate contribution of transfers currently
in flight; delays are evaluated on demand from that combined load.
"""

from dataclasses import dataclass, field

from .errors import (MachineBusy, NodeFull, NoFeasibleType, NonPositiveRate,
                     NoPath, NotBuffered, NotIdle, UnstableQueue)

MICRO = "micro"
CORE = "core"

# Per-link service rates in packets/second, scaled from the catalog bandwidths.
CORE_LINK_MU_PPS = 12_500.0
MICRO_LINK_MU_PPS = 3_125.0

MICRO_VM_SLOTS = 4
CORE_VM_SLOTS = 32

# Effective utilisation is clamped here when computing delays under overload.
DEFAULT_RHO_MAX = 0.995
DEFAULT_PACKET_KB = 8.0


@dataclass(frozen=True)
class VmType:
    name: str
    memory_gb: float
    cores: int
    max_bandwidth_mbps: float  # MB/s
    hourly_cost: float


def default_catalog():
    """The four EC2-style machine configurations used throughout."""
    return [
        VmType("t2.small", 2.0, 1, 25.0, 0.034),
        VmType("t2.medium", 4.0, 2, 25.0, 0.068),
        VmType("t2.large", 8.0, 2, 25.0, 0.136),
        VmType("m4.large", 8.0, 2, 56.25, 0.140),
    ]


def nearest_vm_type(demand_memory_gb, demand_cores, catalog) -> VmType:
    """Cheapest catalog type covering the demand; ties by cost then name."""
    if not catalog:
        raise NoFeasibleType("empty catalog")
    feasible = [t for t in catalog
                if t.memory_gb >= demand_memory_gb and t.cores >= demand_cores]
    if not feasible:
        raise NoFeasibleType(
            f"no type fits {demand_memory_gb} GB / {demand_cores} cores")
    return min(feasible, key=lambda t: (t.hourly_cost, t.name))


def link_delay(lambda_pps, mu_pps) -> float:
    """M/D/1 sojourn time in seconds for arrival rate lambda and service rate mu."""
    if mu_pps <= 0:
        raise NonPositiveRate(f"mu must be positive, got {mu_pps}")
    if lambda_pps < 0:
        raise ValueError(f"negative arrival rate {lambda_pps}")
    if lambda_pps >= mu_pps:
        raise UnstableQueue(f"lambda {lambda_pps} >= mu {mu_pps}")
    rho = lambda_pps / mu_pps
    return (1.0 / (2.0 * mu_pps)) * (2.0 - rho) / (1.0 - rho)


@dataclass
class CloudNode:
    node_id: int
    kind: str  # micro | core
    vm_slots: int
    used_slots: int = 0

    def has_free_slot(self):
        return self.used_slots < self.vm_slots


@dataclass
class Link:
    endpoints: tuple
    mu_pps: float
    background_pps: float = 0.0
    transfer_pps: float = 0.0  # sum of active transfer line rates

    @property
    def lambda_pps(self):
        return self.background_pps + self.transfer_pps

    def delay_s(self, rho_max=DEFAULT_RHO_MAX):
        """Current sojourn time; load clamped below saturation."""
        lam = min(self.lambda_pps, rho_max * self.mu_pps)
        return link_delay(lam, self.mu_pps)


ACTIVE = "active"
BUFFERED = "buffered"


RUNNING = "running"
IDLE = "idle"


@dataclass
class Machine:
    """A provisioned VM.  Usage counts running services only; an idle service
    can be buffered, keeping only a storage residual with zero compute
    footprint.  ``hosted`` maps (instance_id, service_id) to its residency
    state: running, idle or buffered."""

    machine_id: int
    node_id: int
    vm_type: VmType
    active_at_ms: float = 0.0
    used_memory_gb: float = 0.0
    used_cores: int = 0
    hosted: dict = field(default_factory=dict)
    state: str = ACTIVE

    def fits(self, memory_gb, cores):
        return (self.used_memory_gb + memory_gb <= self.vm_type.memory_gb + 1e-9
                and self.used_cores + cores <= self.vm_type.cores)

    def utilization(self):
        """Max over resource dimensions, the binding constraint in [0, 1]."""
        return max(self.used_memory_gb / self.vm_type.memory_gb,
                   self.used_cores / self.vm_type.cores)

    def allocate(self, key, memory_gb, cores):
        if not self.fits(memory_gb, cores):
            raise ValueError(f"machine {self.machine_id}: allocation exceeds capacity")
        self.used_memory_gb += memory_gb
        self.used_cores += cores
        self.hosted[key] = RUNNING
        self.state = ACTIVE

    def set_idle(self, key):
        """The service stopped serving demand; compute is still held."""
        if self.hosted.get(key) != RUNNING:
            raise NotIdle(f"{key} is not running on machine {self.machine_id}")
        self.hosted[key] = IDLE

    def buffer_service(self, key, memory_gb, cores):
        """Drop an idle service to its storage residual, freeing compute."""
        if key not in self.hosted:
            raise NotBuffered(f"{key} not hosted on machine {self.machine_id}")
        if self.hosted[key] != IDLE:
            raise NotIdle(f"{key} still serves demand on machine {self.machine_id}")
        self.hosted[key] = BUFFERED
        self.used_memory_gb = max(0.0, self.used_memory_gb - memory_gb)
        self.used_cores -= cores
        if all(state == BUFFERED for state in self.hosted.values()):
            self.state = BUFFERED

    def resume_service(self, key, memory_gb, cores):
        """Restore full demand for a buffered service (caller adds the latency)."""
        if self.hosted.get(key) != BUFFERED:
            raise NotBuffered(f"{key} is not buffered on machine {self.machine_id}")
        if not self.fits(memory_gb, cores):
            raise ValueError(f"machine {self.machine_id}: resume exceeds capacity")
        self.used_memory_gb += memory_gb
        self.used_cores += cores
        self.hosted[key] = RUNNING
        self.state = ACTIVE

    def hosts_nothing(self):
        return not self.hosted


class Topology:
    """Cloud nodes plus undirected links with precomputed min-hop routes."""

    def __init__(self, nodes, links, rho_max=DEFAULT_RHO_MAX,
                 packet_kb=DEFAULT_PACKET_KB):
        self.nodes = {n.node_id: n for n in nodes}
        self.links = {}
        self.adj = {n.node_id: [] for n in nodes}
        for link in links:
            a, b = link.endpoints
            key = (min(a, b), max(a, b))
            link.endpoints = key
            self.links[key] = link
            self.adj[a].append(b)
            self.adj[b].append(a)
        for n in self.adj:
            self.adj[n].sort()
        self.rho_max = rho_max
        self.packet_kb = packet_kb
        self._routes = self._all_pairs_routes()

    def _all_pairs_routes(self):
        """BFS min-hop path (as a link-key list) for every node pair."""
        routes = {}
        for src in sorted(self.nodes):
            parent = {src: None}
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in self.adj[u]:
                        if v not in parent:
                            parent[v] = u
                            nxt.append(v)
                frontier = nxt
            for dst in sorted(self.nodes):
                if dst == src:
                    routes[(src, dst)] = []
                elif dst in parent:
                    path = []
                    cur = dst
                    while parent[cur] is not None:
                        p = parent[cur]
                        path.append((min(p, cur), max(p, cur)))
                        cur = p
                    routes[(src, dst)] = list(reversed(path))
        return routes

    def route(self, src, dst):
        if src not in self.nodes or dst not in self.nodes:
            raise NoPath(f"unknown node in ({src}, {dst})")
        key = (src, dst)
        if key not in self._routes:
            raise NoPath(f"no route between {src} and {dst}")
        return self._routes[key]

    def hops(self, src, dst):
        return len(self.route(src, dst))

    def path_delay_s(self, src, dst):
        """Sum of link sojourn times along the min-hop route, in seconds."""
        return sum(self.links[k].delay_s(self.rho_max) for k in self.route(src, dst))

    def set_background_load(self, fraction):
        if not 0 <= fraction < 1:
            raise ValueError(f"background load fraction {fraction} outside [0, 1)")
        for link in self.links.values():
            link.background_pps = fraction * link.mu_pps

    def line_rate_pps(self, bandwidth_mbps):
        return bandwidth_mbps * 1000.0 / self.packet_kb


def path_delay(topology, src_node, dst_node) -> float:
    """Seconds of queueing delay between two nodes at current link loads."""
    return topology.path_delay_s(src_node, dst_node)


def default_topology(micro_count=16, core_count=4,
                     micro_slots=MICRO_VM_SLOTS, core_slots=CORE_VM_SLOTS,
                     micro_mu_pps=MICRO_LINK_MU_PPS, core_mu_pps=CORE_LINK_MU_PPS,
                     rho_max=DEFAULT_RHO_MAX, packet_kb=DEFAULT_PACKET_KB):
    """16 edge micro-clouds (ids 0..15) behind 4 fully meshed core clouds.

    Each core cloud fronts an equal share of the micro-clouds through one
    access link apiece.
    """
    nodes = [CloudNode(i, MICRO, micro_slots) for i in range(micro_count)]
    nodes += [CloudNode(micro_count + j, CORE, core_slots) for j in range(core_count)]
    links = []
    for j in range(core_count):
        for k in range(j + 1, core_count):
            links.append(Link((micro_count + j, micro_count + k), core_mu_pps))
    per_core = micro_count // core_count
    for i in range(micro_count):
        core = micro_count + min(i // per_core, core_count - 1)
        links.append(Link((i, core), micro_mu_pps))
    return Topology(nodes, links, rho_max=rho_max, packet_kb=packet_kb)


def provision_machine(node: CloudNode, vm_type: VmType, machine_id,
                      active_at_ms=0.0) -> Machine:
    if not node.has_free_slot():
        raise NodeFull(f"node {node.node_id} has no free VM slot")
    node.used_slots += 1
    return Machine(machine_id, node.node_id, vm_type, active_at_ms=active_at_ms)


def release_machine(node: CloudNode, machine: Machine):
    if not machine.hosts_nothing():
        raise MachineBusy(f"machine {machine.machine_id} still hosts services")
    node.used_slots -= 1
