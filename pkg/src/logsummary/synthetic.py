"""Seeded synthetic log corpora for tests, benchmarks and demos.

Every generator template has single-token variable slots and few enough
of them that online learning folds its instances into one template.
"""

from __future__ import annotations

import random
import string
from typing import Optional

import numpy as np

GENERATORS = [
    "Link bandwidth lost totally is resumed. ( Reason = {reason} )",
    "Interface {iface}, changed state to {updown}",
    "Receiving block {blk} src: {addr} dest: {addr}",
    "PacketResponder {n} for block {blk} terminating",
    "Connection from {ip} closed by remote host",
    "Failed password for user {user} from {ip} port {port} ssh2",
    "Job {job} started on node {node} --retries {n} --verbose",
    "Temperature sensor {sensor} exceeded threshold ( value = {temp} , limit = 85 )",
    "Session opened for user {user} by uid {uid}",
    "Deleting block {blk} file {path}",
    "Node {node} detected a hardware fault and rebooted the board",
    "Disk {disk} usage is above warning level [ used = {pct} ]",
    "Proxy {host} : {port} open through proxy server {ip} HTTPS",
    "Fan speed of module {n} was reduced to minimum setting",
    "Instruction cache parity error corrected on core {n}",
    "Process {pid} exited with status {code} after receiving signal TERM",
    "BGP neighbor {ip} went down , hold timer expired",
    "Allocated {n} MB of memory for container {cid} on host {host}",
    "Backup of volume {disk} completed successfully in {n} seconds",
    "Configuration reload requested by admin from console {tty}",
    "Replication of block {blk} to datanode {ip} failed and will retry",
    "Power supply unit {n} is not responding to management polls",
    "User {user} logged in from {ip} using key authentication method rsa",
    "Scheduler dropped task {job} because queue {node} is full",
]

REASONS = ["fault", "timeout", "maintenance", "flap", "overload", "reset", "cable"]
USERS = ["root", "admin", "alice", "bob", "deploy", "backup", "guest", "oper"]


def _value(kind: str, rng: random.Random) -> str:
    if kind == "reason":
        return rng.choice(REASONS)
    if kind == "iface":
        return f"{rng.choice(['ae', 'xe-0/0/', 'ge-1/0/', 'et-'])}{rng.randint(0, 47)}"
    if kind == "updown":
        return rng.choice(["up", "down"])
    if kind == "blk":
        return f"blk_{rng.randint(-2**62, 2**62)}"
    if kind == "addr":
        return f"/10.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(1, 254)}:{rng.randint(1024, 65535)}"
    if kind == "ip":
        return f"10.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(1, 254)}"
    if kind in ("n", "uid", "pid", "code", "pct", "temp", "port"):
        return str(rng.randint(0, 65535))
    if kind == "user":
        return rng.choice(USERS)
    if kind == "job":
        return f"job-{rng.randint(1000, 99999)}"
    if kind == "node":
        return f"R{rng.randint(0, 63):02d}-M{rng.randint(0, 1)}-N{rng.randint(0, 15)}"
    if kind == "sensor":
        return f"TS{rng.randint(0, 99)}"
    if kind == "path":
        return "/data/" + "".join(rng.choice(string.ascii_lowercase) for _ in range(6)) + f"/blk_{rng.randint(0, 10**9)}"
    if kind == "disk":
        return f"sd{rng.choice('abcdef')}{rng.randint(1, 9)}"
    if kind == "host":
        return f"host{rng.randint(1, 500)}.example.net"
    if kind == "cid":
        return "".join(rng.choice("0123456789abcdef") for _ in range(12))
    if kind == "tty":
        return f"tty{rng.randint(0, 9)}"
    raise KeyError(kind)


def render(generator: str, rng: random.Random) -> str:
    out = []
    for piece in string.Formatter().parse(generator):
        literal, field_name = piece[0], piece[1]
        out.append(literal)
        if field_name is not None:
            out.append(_value(field_name, rng))
    return "".join(out)


def synthetic_corpus(n_logs: int, n_templates: int = 20, seed: int = 0,
                     generators: Optional[list[str]] = None) -> list[str]:
    """``n_logs`` lines drawn uniformly from the first ``n_templates`` generators."""
    gens = (generators or GENERATORS)[:n_templates]
    if len(gens) < n_templates:
        raise ValueError(f"only {len(gens)} generators available")
    rng = random.Random(seed)
    return [render(rng.choice(gens), rng) for _ in range(n_logs)]


def synthetic_groups(n_groups: int, group_size: int = 20, templates_per_group: int = 4,
                     seed: int = 0) -> list[list[str]]:
    """Groups of logs, each drawn from a few generators, like one incident window."""
    rng = random.Random(seed)
    groups = []
    for _ in range(n_groups):
        gens = rng.sample(GENERATORS, templates_per_group)
        groups.append([render(rng.choice(gens), rng) for _ in range(group_size)])
    return groups


def random_embeddings(words, dimension: int = 32, seed: int = 0) -> str:
    """word2vec text-format table with Gaussian vectors for ``words``."""
    words = sorted(set(w.lower() for w in words))
    gen = np.random.default_rng(seed)
    rows = [f"{len(words)} {dimension}"]
    for w in words:
        rows.append(w + " " + " ".join(f"{x:.6f}" for x in gen.standard_normal(dimension)))
    return "\n".join(rows) + "\n"
