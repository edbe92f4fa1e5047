"""Run configuration, transcripts and their line-oriented wire format.

A transcript is the ordered record of everything that happened in one
protocol run.  Serialised form (version header ``PWV1``):

    PWV1
    config key=value          one line per configuration key, fixed order
    event <run_id> <step> <actor> <action> <payload_hex> <kind>
    end

The run id is a hash of the canonical configuration text, so equal
configurations always produce byte-identical files, and replaying a file
means re-running its embedded configuration and comparing event lines.
Payloads are hex-encoded UTF-8 so the format survives any payload content.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

FORMAT_VERSION = "PWV1"

CONFIG_KEYS = ("protocol", "mu", "nu", "secret", "inputs", "k", "seed", "mode", "strategy")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; equal configs give equal outputs."""

    protocol: str
    mu: int = 0
    nu: int = 0
    secret: str = ""
    inputs: str = ""
    k: int = 1
    seed: int = 0
    mode: str = "sample"
    strategy: str = ""

    def to_text(self) -> str:
        values = {
            "protocol": self.protocol,
            "mu": str(self.mu),
            "nu": str(self.nu),
            "secret": self.secret,
            "inputs": self.inputs,
            "k": str(self.k),
            "seed": str(self.seed),
            "mode": self.mode,
            "strategy": self.strategy,
        }
        return "\n".join(f"{k}={values[k]}" for k in CONFIG_KEYS)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        pairs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            pairs[key] = value
        missing = [k for k in CONFIG_KEYS if k not in pairs]
        if missing:
            raise ValueError(f"config is missing keys: {missing}")
        return cls(
            protocol=pairs["protocol"],
            mu=int(pairs["mu"]),
            nu=int(pairs["nu"]),
            secret=pairs["secret"],
            inputs=pairs["inputs"],
            k=int(pairs["k"]),
            seed=int(pairs["seed"]),
            mode=pairs["mode"],
            strategy=pairs["strategy"],
        )

    @property
    def run_id(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:12]

    def with_strategy(self, name: str) -> "RunConfig":
        return replace(self, strategy=name)


@dataclass(frozen=True)
class Event:
    seq: int
    step: str
    actor: str
    action: str
    payload: str
    kind: str  # classical | quantum | local
    visible: tuple[str, ...] = ()

    def wire_line(self, run_id: str) -> str:
        payload_hex = self.payload.encode().hex() or "-"
        return f"event {run_id} {self.step} {self.actor} {self.action} {payload_hex} {self.kind}"


class Transcript:
    """Append-only event log for one run, replayable bit for bit."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.events: list[Event] = []

    def append(self, step: str, actor: str, action: str, payload: str, kind: str,
               visible: tuple[str, ...]) -> Event:
        ev = Event(len(self.events), step, actor, action, payload, kind, visible)
        self.events.append(ev)
        return ev

    def to_text(self) -> str:
        run_id = self.config.run_id
        lines = [FORMAT_VERSION]
        lines.extend(f"config {line}" for line in self.config.to_text().splitlines())
        lines.extend(ev.wire_line(run_id) for ev in self.events)
        lines.append("end")
        return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> tuple[RunConfig, list[str]]:
    """Split a serialised transcript into its config and raw event lines."""
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_VERSION:
        raise ValueError(f"not a {FORMAT_VERSION} transcript")
    config_lines = []
    event_lines = []
    saw_end = False
    for line in lines[1:]:
        if line == "end":
            saw_end = True
            continue
        if line.startswith("config "):
            config_lines.append(line[len("config "):])
        elif line.startswith("event "):
            event_lines.append(line)
        elif line.strip() == "":
            continue
        else:
            raise ValueError(f"unrecognised transcript line: {line!r}")
    if not saw_end:
        raise ValueError("transcript is truncated (no end marker)")
    return RunConfig.from_text("\n".join(config_lines)), event_lines


def first_divergence(text_a: str, text_b: str) -> int | None:
    """Index of the first differing event line, or None when identical.

    Returns -1 when the texts differ outside the event lines (header or
    config), which replay treats as a mismatch as well.
    """
    if text_a == text_b:
        return None
    _, events_a = parse_transcript(text_a)
    _, events_b = parse_transcript(text_b)
    for i, (a, b) in enumerate(zip(events_a, events_b)):
        if a != b:
            return i
    if len(events_a) != len(events_b):
        return min(len(events_a), len(events_b))
    return -1
