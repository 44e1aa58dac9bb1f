"""Directed optical networks and the stochastic transaction engine.

A network is a DAG of elements carrying a single photon's offer wave from
one source to a set of absorbers (detectors, blockers, screen bins, the
absorbed port of a polarizer).  Offer propagation enumerates every route,
multiplying scattering factors; the echo table gives each absorber the
squared modulus of its coherent path sum; exactly one absorber per event
is then selected with probability proportional to its echo.

Element kinds and their scattering behavior:

* source            emits the network emission amplitude, split 1/sqrt(k)
                    over its k output ports
* beamsplitter      inputs a, b; outputs out1, out2; transmit 1/sqrt(2),
                    reflect i/sqrt(2); a transmits to out1, b to out2
* mirror            redirects, factor 1
* phase_segment     length in wavelengths, factor exp(2*pi*i*length)
* halfwave_plate    Jones reflection about its axis (degrees)
* quarterwave_double  quarter-wave plate traversed twice, same action
* polarizer         projects onto its axis; the rejected component lands
                    on the implicit absorber "<id>.absorbed"
* blocker, detector terminal absorbers
* screen            terminal array of bins; each bin k adds the geometric
                    path factor for the slant distance from the feeding
                    input offset to the bin center

Networks are treated as immutable once validated.
"""

from __future__ import annotations

import bisect
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .rng import RandomStream, uniform_block
from .wavecore import (
    REFLECT_FACTOR,
    TRANSMIT_FACTOR,
    VERTICAL,
    PathRecord,
    PolarizedAmplitude,
    born_echo,
    path_phase,
    polarizer_project,
    polarizer_reject,
    waveplate_apply,
)

ECHO_SUM_TOL = 1e-9
DEFAULT_PATH_CAP = 10**6
_CHUNK = 1 << 16

KINDS = {
    "source",
    "beamsplitter",
    "mirror",
    "phase_segment",
    "halfwave_plate",
    "quarterwave_double",
    "polarizer",
    "blocker",
    "detector",
    "screen",
}
TERMINAL_KINDS = {"blocker", "detector", "screen"}
_SINGLE_OUT = {"mirror", "phase_segment", "halfwave_plate", "quarterwave_double", "polarizer"}


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    params: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)


def _parse_target(target: str, default_port: str = "") -> tuple[str, str]:
    # "S2:b" addresses input port b; a bare id takes the target's default port
    if ":" in target:
        elem, port = target.split(":", 1)
        return elem, port
    return target, default_port


def _default_in_port(kind: str) -> str:
    return "a" if kind == "beamsplitter" else "in"


def _screen_bins(params: dict) -> np.ndarray:
    n = int(params["bin_count"])
    w = float(params["half_width"])
    if n == 1:
        return np.array([0.0])
    return np.linspace(-w, w, n)


def _screen_bin_id(screen_id: str, k: int, bin_count: int) -> str:
    pad = len(str(bin_count - 1))
    return f"{screen_id}[{k:0{pad}d}]"


@dataclass
class OpticalNetwork:
    elements: tuple[Element, ...]
    source_id: str
    emission: PolarizedAmplitude = VERTICAL

    def __post_init__(self):
        self.elements = tuple(self.elements)
        self._by_id = {e.id: e for e in self.elements}

    def element(self, elem_id: str) -> Element:
        return self._by_id[elem_id]

    def __contains__(self, elem_id: str) -> bool:
        return elem_id in self._by_id


@dataclass(frozen=True)
class Defect:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    defects: tuple[Defect, ...]
    echo_sum: float | None = None


@dataclass
class EchoTable:
    """Absorber id -> echo strength, in sorted-id order.

    Treated as immutable; selection arrays are cached on first use.
    """

    entries: dict

    @property
    def total(self) -> float:
        return math.fsum(self.entries.values())

    @cached_property
    def _selection(self) -> tuple[tuple, np.ndarray, np.ndarray]:
        ids = tuple(sorted(self.entries))
        weights = np.array([self.entries[a] for a in ids], dtype=float)
        total = weights.sum()
        if abs(total - 1.0) > ECHO_SUM_TOL:
            raise ValueError(f"incomplete absorber set: echoes sum to {total:.6g}")
        probs = weights / total
        return ids, probs, np.cumsum(probs)


@dataclass(frozen=True)
class EventRecord:
    event_index: int
    selected_absorber: str
    rng_draw: float


def validate(network: OpticalNetwork) -> ValidationReport:
    """Structural and conservation checks; collects every defect found."""
    defects: list[Defect] = []
    add = lambda kind, detail: defects.append(Defect(kind, detail))

    ids = [e.id for e in network.elements]
    if len(set(ids)) != len(ids):
        add("duplicate id", ", ".join(sorted({i for i in ids if ids.count(i) > 1})))
    if network.source_id not in network:
        add("missing source", network.source_id)
    else:
        src = network.element(network.source_id)
        if src.kind != "source":
            add("missing source", f"{network.source_id} has kind {src.kind}")

    in_edges: dict[tuple[str, str], list[str]] = {}
    for elem in network.elements:
        if elem.kind not in KINDS:
            add("unknown kind", f"{elem.id}: {elem.kind}")
            continue
        defects.extend(_check_params(elem))
        defects.extend(_check_ports(elem))
        for port, target in sorted(elem.outputs.items()):
            tid, tport = _parse_target(target)
            if tid not in network:
                add("dangling port", f"{elem.id}.{port} -> {target}")
                continue
            tkind = network.element(tid).kind
            if tkind == "source":
                add("bad wiring", f"{elem.id}.{port} feeds source {tid}")
            tport = tport or _default_in_port(tkind)
            if tkind == "beamsplitter" and tport not in ("a", "b"):
                add("bad wiring", f"{elem.id}.{port} -> unknown input {tid}:{tport}")
            if tkind == "screen":
                offsets = network.element(tid).params.get("offsets", {})
                if tport not in offsets:
                    add("bad wiring", f"{elem.id}.{port} -> screen {tid} has no offset for port {tport}")
            in_edges.setdefault((tid, tport), []).append(elem.id)

    for (tid, tport), feeders in sorted(in_edges.items()):
        if len(feeders) > 1:
            add("input collision", f"{tid}:{tport} fed by {', '.join(sorted(feeders))}")

    if any(d.kind in ("unknown kind", "missing source", "duplicate id") for d in defects):
        return ValidationReport(False, tuple(defects))

    if _has_cycle(network):
        add("cycle", "network graph contains a cycle")
        return ValidationReport(False, tuple(defects))

    reachable = _reachable(network)
    for elem in network.elements:
        if elem.kind in TERMINAL_KINDS and elem.id not in reachable:
            add("unreachable absorber", elem.id)

    echo_sum = None
    try:
        paths = _enumerate(network, DEFAULT_PATH_CAP, lenient=True)
    except ValueError as exc:
        add("path explosion", str(exc))
    else:
        echo_sum = _total_echo(paths)
        if abs(echo_sum - 1.0) > ECHO_SUM_TOL:
            add("echo-sum", f"{echo_sum:.6g}")

    return ValidationReport(not defects, tuple(defects), echo_sum)


def _check_params(elem: Element) -> list[Defect]:
    out = []
    p = elem.params
    try:
        if elem.kind == "phase_segment":
            if not (float(p["length"]) >= 0):
                out.append(Defect("bad params", f"{elem.id}: negative length"))
        elif elem.kind in ("halfwave_plate", "quarterwave_double", "polarizer"):
            float(p["axis"])
        elif elem.kind == "screen":
            if int(p["bin_count"]) < 1:
                out.append(Defect("bad params", f"{elem.id}: bin_count < 1"))
            if not (float(p["half_width"]) > 0):
                out.append(Defect("bad params", f"{elem.id}: half_width <= 0"))
            if not (float(p["distance"]) > 0):
                out.append(Defect("bad params", f"{elem.id}: distance <= 0"))
            dict(p["offsets"])
    except (KeyError, TypeError, ValueError) as exc:
        out.append(Defect("bad params", f"{elem.id}: {exc!r}"))
    return out


def _check_ports(elem: Element) -> list[Defect]:
    out = []
    ports = set(elem.outputs)
    if elem.kind in TERMINAL_KINDS:
        if ports:
            out.append(Defect("bad wiring", f"terminal {elem.id} has outputs"))
    elif elem.kind == "source":
        if not ports:
            out.append(Defect("dangling port", f"source {elem.id} has no outputs"))
    elif elem.kind == "beamsplitter":
        if ports != {"out1", "out2"}:
            out.append(Defect("dangling port", f"{elem.id} needs out1 and out2, has {sorted(ports)}"))
    elif elem.kind in _SINGLE_OUT:
        if ports != {"out"}:
            out.append(Defect("dangling port", f"{elem.id} needs out, has {sorted(ports)}"))
    return out


def _edges(network: OpticalNetwork):
    for elem in network.elements:
        for port, target in sorted(elem.outputs.items()):
            tid, _ = _parse_target(target)
            if tid in network:
                yield elem.id, tid


def _has_cycle(network: OpticalNetwork) -> bool:
    adj: dict[str, list[str]] = {}
    for a, b in _edges(network):
        adj.setdefault(a, []).append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {e.id: WHITE for e in network.elements}
    for start in color:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(adj.get(start, ())))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = BLACK
                stack.pop()
            elif color[nxt] == GRAY:
                return True
            elif color[nxt] == WHITE:
                color[nxt] = GRAY
                stack.append((nxt, iter(adj.get(nxt, ()))))
    return False


def _reachable(network: OpticalNetwork) -> set[str]:
    seen = {network.source_id}
    frontier = [network.source_id]
    adj: dict[str, list[str]] = {}
    for a, b in _edges(network):
        adj.setdefault(a, []).append(b)
    while frontier:
        node = frontier.pop()
        for nxt in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def _enumerate(network: OpticalNetwork, path_cap: int, lenient: bool) -> list[PathRecord]:
    """Depth-first offer propagation from the source.

    lenient drops amplitude that runs into missing wiring (validation wants
    the measured loss); strict mode assumes a validated network.
    """
    source = network.element(network.source_id)
    out_ports = sorted(source.outputs)
    if not out_ports:
        return []
    split = 1.0 / math.sqrt(len(out_ports))
    done: list[PathRecord] = []
    # stack entries: (element_id, in_port, amplitude, length, trace)
    stack = []
    for port in reversed(out_ports):
        tid, tport = _parse_target(source.outputs[port])
        if tid not in network:
            continue
        tport = tport or _default_in_port(network.element(tid).kind)
        stack.append((tid, tport, network.emission * split, 0.0, (network.source_id,)))

    while stack:
        elem_id, in_port, amp, length, trace = stack.pop()
        elem = network.element(elem_id)
        trace = trace + (elem_id,)
        kind = elem.kind

        if kind in ("blocker", "detector"):
            done.append(PathRecord(trace, amp, length))
        elif kind == "screen":
            L = float(elem.params["distance"])
            x0 = float(elem.params["offsets"][in_port])
            bins = _screen_bins(elem.params)
            nb = len(bins)
            for k in range(nb):
                hyp = math.hypot(L, bins[k] - x0)
                done.append(
                    PathRecord(
                        trace + (_screen_bin_id(elem_id, k, nb),),
                        amp * path_phase(hyp),
                        length + hyp,
                    )
                )
        else:
            branches = []  # (out_port, amplitude, added_length)
            if kind == "mirror":
                branches.append(("out", amp, 0.0))
            elif kind == "phase_segment":
                seg = float(elem.params["length"])
                branches.append(("out", amp * path_phase(seg), seg))
            elif kind in ("halfwave_plate", "quarterwave_double"):
                plate = "half" if kind == "halfwave_plate" else "quarter_double_pass"
                branches.append(("out", waveplate_apply(amp, plate, float(elem.params["axis"])), 0.0))
            elif kind == "polarizer":
                axis = float(elem.params["axis"])
                done.append(PathRecord(trace + (f"{elem_id}.absorbed",), polarizer_reject(amp, axis), length))
                branches.append(("out", polarizer_project(amp, axis), 0.0))
            elif kind == "beamsplitter":
                if in_port == "a":
                    branches.append(("out1", amp * TRANSMIT_FACTOR, 0.0))
                    branches.append(("out2", amp * REFLECT_FACTOR, 0.0))
                else:
                    branches.append(("out1", amp * REFLECT_FACTOR, 0.0))
                    branches.append(("out2", amp * TRANSMIT_FACTOR, 0.0))
            for out_port, new_amp, extra in reversed(branches):
                target = elem.outputs.get(out_port)
                if target is None:
                    if lenient:
                        continue
                    raise ValueError(f"unwired port {elem_id}.{out_port}")
                tid, tport = _parse_target(target)
                if tid not in network:
                    if lenient:
                        continue
                    raise ValueError(f"dangling port {elem_id}.{out_port}")
                tport = tport or _default_in_port(network.element(tid).kind)
                stack.append((tid, tport, new_amp, length + extra, trace))

        if len(done) + len(stack) > path_cap:
            raise ValueError("path explosion")

    done.sort(key=lambda p: p.element_ids)
    return done


def _total_echo(paths) -> float:
    groups: dict[str, list[PathRecord]] = {}
    for p in paths:
        groups.setdefault(p.absorber, []).append(p)
    return math.fsum(born_echo(g) for g in groups.values())


def propagate_offers(network: OpticalNetwork, path_cap: int = DEFAULT_PATH_CAP) -> tuple[PathRecord, ...]:
    """Enumerate every source-to-absorber path of a valid network.

    Paths come back sorted by their element-id sequence, so ordering is
    reproducible.  Raises ValueError on an invalid network or if the route
    count exceeds path_cap.
    """
    report = validate(network)
    if not report.ok:
        raise ValueError("invalid network: " + "; ".join(str(d) for d in report.defects))
    return tuple(_enumerate(network, path_cap, lenient=False))


def echo_table(paths) -> EchoTable:
    """Group paths by absorber and take the Born weight of each group.

    Zero-echo absorbers stay in the table so reports always list every
    absorber the offer wave reached.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("no paths")
    groups: dict[str, list[PathRecord]] = {}
    for p in paths:
        groups.setdefault(p.absorber, []).append(p)
    return EchoTable({aid: born_echo(groups[aid]) for aid in sorted(groups)})


def network_echo_table(network: OpticalNetwork) -> EchoTable:
    return echo_table(propagate_offers(network))


def calibrated(network: OpticalNetwork) -> OpticalNetwork:
    """Rescale the emission so the echo over all absorbers sums to one.

    Screen bins sample relative intensity, so screen networks are built and
    then normalized through this explicit step; plain detector networks are
    already lossless and pass through nearly unchanged.
    """
    report = validate(network)
    structural = [d for d in report.defects if d.kind != "echo-sum"]
    if structural:
        raise ValueError("invalid network: " + "; ".join(str(d) for d in structural))
    total = report.echo_sum
    if total is None or total <= 0:
        raise ValueError("network has no absorbed amplitude to calibrate")
    return replace(network, emission=network.emission * (1.0 / math.sqrt(total)))


def _pick(cum: np.ndarray, probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    scaled = u * cum[-1]
    idx = np.searchsorted(cum, scaled, side="right")
    idx = np.minimum(idx, len(cum) - 1)
    # a draw can graze the upper edge in floating point; never let that
    # land on a zero-probability absorber
    bad = probs[idx] == 0.0
    while np.any(bad):
        idx = np.where(bad, idx - 1, idx)
        bad = probs[idx] == 0.0
    return idx


def select_transaction(table: EchoTable, stream: RandomStream) -> str:
    """Choose the single absorber completing this event.

    Echo weights within 1e-9 of total 1 are renormalized; anything further
    off means the network lost amplitude and selection refuses to guess.
    """
    ids, probs, cum = table._selection
    u = stream.next_uniform() * float(cum[-1])
    idx = bisect.bisect_right(cum, u)
    if idx >= len(ids):
        idx = len(ids) - 1
    while probs[idx] == 0.0:
        idx -= 1
    return ids[idx]


def sample_counts(table: EchoTable, n: int, seed: int, base_event_index: int = 0) -> dict[str, int]:
    """Tally n transaction selections without materializing event records."""
    ids, probs, cum = table._selection
    counts = np.zeros(len(ids), dtype=np.int64)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        ev = np.arange(base_event_index + start, base_event_index + stop, dtype=np.uint64)
        u = uniform_block(seed, ev)
        counts += np.bincount(_pick(cum, probs, u), minlength=len(ids))
    return {aid: int(c) for aid, c in zip(ids, counts)}


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("HQS_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError("HQS_THREADS must be a positive integer") from None
        if value < 1:
            raise ValueError("HQS_THREADS must be a positive integer")
        return value
    return os.cpu_count() or 1


def run_events(
    network: OpticalNetwork,
    n: int,
    seed: int,
    workers: int | None = None,
) -> tuple[dict[str, int], list[EventRecord]]:
    """Run n independent single-photon events through a validated network.

    Event i draws from a random stream keyed by (seed, i) alone, so counts
    and records are bit-identical for any worker count or chunk schedule.
    Worker threads default to HQS_THREADS, then to the available cores.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    table = network_echo_table(network)
    ids, probs, cum = table._selection

    def one_chunk(start: int) -> tuple[np.ndarray, list[EventRecord]]:
        stop = min(start + _CHUNK, n)
        ev = np.arange(start, stop, dtype=np.uint64)
        u = uniform_block(seed, ev)
        idx = _pick(cum, probs, u)
        recs = [
            EventRecord(int(e), ids[int(i)], float(x))
            for e, i, x in zip(ev, idx, u)
        ]
        return np.bincount(idx, minlength=len(ids)), recs

    starts = list(range(0, n, _CHUNK))
    nworkers = min(_worker_count(workers), len(starts))
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(one_chunk, starts))
    else:
        results = [one_chunk(s) for s in starts]

    counts = np.zeros(len(ids), dtype=np.int64)
    records: list[EventRecord] = []
    for c, recs in results:
        counts += c
        records.extend(recs)
    return {aid: int(c) for aid, c in zip(ids, counts)}, records
