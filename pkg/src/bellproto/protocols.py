"""Multiparty protocol runtime over the five-wire chain register.

Seven protocols share the same backbone: a relay Bell measurement that
swaps entanglement onto the outer stations, a sender Bell measurement that
moves the payload to the receiver, and classical verification built on the
correction label ``tau = aa ^ cc ^ mu ^ nu``.  Station A is always the
sender; in the two-party protocols stations B and C are both controlled by
the receiving party, in the multiparty ones they belong to separate
parties.

Every run is driven either by sampled Bell outcomes (seeded, reproducible)
or by forced outcomes (post-selection; every Bell outcome here has
probability exactly 1/4, so forcing is sound and lets the verification
suites enumerate the full outcome space instead of sampling it).  All
classical and quantum traffic is logged to a transcript with per-event
visibility, from which each party's view is reconstructed for the
information-hiding checks.

Measured-bit verification can see only the X part of a claimed bit pair:
the Z exponent of a correction acts as a global phase on basis states, so
verifiers log ``phase_unverified`` for the Z bit instead of pretending to
check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import TwoBits, label_from_zx, pauli_matrix, x_bit
from .states import (
    Rng,
    StateVector,
    apply_pauli,
    basis_state,
    bsm,
    chain_register,
    extract_qubit,
    fidelity,
    infer_tau,
    measure_qubit,
    qubit,
)
from .transcript import RunConfig, Transcript

CASTS: dict[str, dict[str, str]] = {
    "bc": {"A": "alice", "B": "bob", "C": "bob"},
    "ct": {"A": "alice", "B": "bob", "C": "bob"},
    "ot": {"A": "alice", "B": "bob", "C": "bob"},
    "tpsc": {"A": "alice", "B": "bob", "C": "bob"},
    "qss": {"A": "alice", "B": "bob", "C": "charlie"},
    "qds": {"A": "alice", "B": "bob", "C": "charlie"},
    "mpsc": {"A": "alice", "B": "bob", "C": "charlie"},
}

PROTOCOLS = tuple(CASTS)

# fixed derived-stream indices so replays are stable
_STREAM_BORN = 0
_STREAM_PARTY = {"alice": 1, "bob": 2, "charlie": 3}
_STREAM_SHARED = 9


@dataclass(frozen=True)
class Deviation:
    """One scripted departure from honest behaviour at a hook point."""

    kind: str  # flip_secret | xor_aa | withhold | substitute_label | fresh_qubit | skip | flip_message
    value: object = None


@dataclass(frozen=True)
class CheatStrategy:
    """A named adversary: honest everywhere except at its hooks."""

    name: str
    target: str
    hooks: Mapping[str, Deviation]
    note: str = ""

    def deviation(self, step: str) -> Deviation | None:
        return self.hooks.get(step)


@dataclass(frozen=True)
class Verdict:
    outcome: str  # accept | reject
    value: str = ""
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.outcome == "accept"


@dataclass
class SharedContext:
    """State of the world after the shared opening steps."""

    mu: int
    nu: int
    cc: TwoBits | None
    aa: TwoBits
    psi_prime_bit: int | None
    register: StateVector
    transcript: Transcript


@dataclass
class RunRecord:
    config: RunConfig
    verdict: Verdict
    transcript: Transcript
    held: dict[str, list[np.ndarray]]
    values: dict[str, object]

    def view(self, controller: str, cut_step: str | None = None) -> tuple:
        """Ordered observations of one controller, optionally truncated.

        ``cut_step`` excludes the first event carrying that step tag and
        everything after it (used for pre-reveal views).
        """
        out = []
        for ev in self.transcript.events:
            if cut_step is not None and ev.step == cut_step:
                break
            if controller in ev.visible:
                out.append((ev.step, ev.actor, ev.action, ev.payload))
        return tuple(out)


class Run:
    """Shared bookkeeping for one protocol execution.

    When no generator is passed (forced-outcome runs), streams fall back
    to one keyed by the config seed, so a replay driven purely by the
    recorded configuration reproduces masks and share splits exactly.
    """

    def __init__(self, config: RunConfig, cast: Mapping[str, str], rng: Rng | None,
                 cheat: CheatStrategy | None = None):
        self.config = config
        self.cast = dict(cast)
        self.controllers = tuple(sorted(set(cast.values())))
        self.transcript = Transcript(config)
        self.cheat = cheat
        base = rng if rng is not None else Rng(config.seed)
        self.born = base.derive(_STREAM_BORN)
        self.party_rng = {
            name: base.derive(idx) for name, idx in _STREAM_PARTY.items()
        }
        self.shared_rng = base.derive(_STREAM_SHARED)
        self.held: dict[str, list[np.ndarray]] = {c: [] for c in self.controllers}
        self.values: dict[str, object] = {}

    def deviation(self, step: str) -> Deviation | None:
        return self.cheat.deviation(step) if self.cheat else None

    def log(self, step, actor, action, payload, kind, visible) -> None:
        self.transcript.append(step, actor, action, payload, kind, tuple(visible))

    def local(self, step, actor, action, payload) -> None:
        self.log(step, actor, action, payload, "local", (actor,))

    def announce(self, step, actor, action, payload) -> None:
        self.log(step, actor, action, payload, "classical", self.controllers)

    def tell(self, step, frm, to, action, payload) -> None:
        self.log(step, frm, action, payload, "classical", _endpoints(frm, to))

    def send_qubit(self, step, frm, to, action, payload="qubit") -> None:
        self.log(step, frm, action, payload, "quantum", _endpoints(frm, to))

    def verdict(self, actor: str, verdict: Verdict) -> Verdict:
        payload = f"outcome={verdict.outcome} value={verdict.value} reason={verdict.reason}"
        self.announce("verdict", actor, "verdict", payload)
        return verdict

    def record(self, verdict: Verdict) -> RunRecord:
        return RunRecord(self.config, verdict, self.transcript, self.held, self.values)


def _endpoints(frm: str, to: str) -> tuple[str, ...]:
    return (frm,) if frm == to else tuple(sorted((frm, to)))


def _payload_state(secret) -> StateVector:
    if isinstance(secret, StateVector):
        if secret.n_qubits != 1:
            raise ValueError("payload must be a single qubit")
        return secret
    if secret in (0, 1):
        return basis_state([secret])
    raise ValueError(f"secret must be a bit or a 1-qubit state, got {secret!r}")


def _forced_pair(forced) -> tuple[TwoBits | None, TwoBits | None]:
    if forced is None:
        return None, None
    aa, cc = forced
    return aa, cc


def _mode_string(forced, k: int = 1) -> str:
    if forced is None:
        return "sample:1"
    cells = forced if isinstance(forced, list) else [forced]
    parts = []
    for cell in cells:
        aa, cc = _forced_pair(cell)
        parts.append(f"{aa if aa is not None else '--'}:{cc if cc is not None else '--'}")
    return "forced:" + ",".join(parts)


def parse_forced(mode: str):
    """Inverse of the forced-outcome encoding used in config ``mode``."""
    if not mode.startswith("forced:"):
        return None
    cells = []
    for part in mode[len("forced:"):].split(","):
        aa_s, cc_s = part.split(":")
        aa = None if aa_s == "--" else TwoBits.parse(aa_s)
        cc = None if cc_s == "--" else TwoBits.parse(cc_s)
        cells.append((aa, cc))
    return cells


def _make_config(protocol, mu, nu, secret, inputs, k, rng, forced, cheat) -> RunConfig:
    return RunConfig(
        protocol=protocol,
        mu=mu,
        nu=nu,
        secret=str(secret),
        inputs=inputs,
        k=k,
        seed=rng.seed if rng is not None else 0,
        mode=_mode_string(forced, k),
        strategy=cheat.name if cheat else "",
    )


def _chain_open(run: Run, mu: int, nu: int, payload: StateVector, *,
                measure_receiver: bool,
                forced_cc: TwoBits | None, forced_aa: TwoBits | None,
                nu_secret_of: str | None = None,
                sender_pre_label: int | None = None,
                skip_relay: bool = False):
    """Shared opening steps of every protocol.

    1. the relay measures its pair (2, 3) in the Bell basis,
    2. the sender (optionally after applying an input operator to the
       payload) measures (0, 1), moving the payload to the receiver wire,
    3. the receiver measures its wire when the payload is classical.

    Returns (context, register).  ``nu_secret_of`` restricts who sees the
    receiver-side channel label.  ``skip_relay`` models a relay that
    withholds its measurement: the sender's measurement then moves the
    payload onto the relay's wire 2 instead of the receiver's wire 4.
    """
    sender = run.cast["A"]
    receiver = run.cast["B"]
    relay = run.cast["C"]
    state = chain_register(mu, nu, payload)
    run.announce("setup", sender, "channel_sender_relay", f"mu={mu}")
    if nu_secret_of is None:
        run.announce("setup", relay, "channel_relay_receiver", f"nu={nu}")
    else:
        run.local("setup", nu_secret_of, "channel_relay_receiver", f"nu={nu}")

    cc = None
    if skip_relay:
        run.local("1", relay, "relay_bsm_skipped", "withheld")
    else:
        out, state = bsm(state, (2, 3), run.born, force=forced_cc)
        cc = out.bits
        run.local("1", relay, "relay_bsm", f"cc={cc}")

    if sender_pre_label is not None:
        state = apply_pauli(state, sender_pre_label, 0)
        run.local("2", sender, "apply_input", "label=private")
    out, state = bsm(state, (0, 1), run.born, force=forced_aa)
    aa = out.bits
    run.local("2", sender, "sender_bsm", f"aa={aa}")

    bit = None
    if measure_receiver and not skip_relay:
        bit, state = measure_qubit(state, 4, run.born)
        run.local("3", receiver, "measure_moved", f"bit={bit}")
    ctx = SharedContext(mu, nu, cc, aa, bit, state, run.transcript)
    return ctx, state


def common_steps(mu: int, nu: int, payload, rng: Rng | None, measure_b: bool = True,
                 *, forced_cc: TwoBits | None = None,
                 forced_aa: TwoBits | None = None) -> SharedContext:
    """Run the shared opening steps standalone (three-party casting)."""
    payload = _payload_state(payload)
    forced = None if forced_cc is None and forced_aa is None else (forced_aa, forced_cc)
    config = _make_config("qss", mu, nu, "q", "", 1, rng, forced, None)
    run = Run(config, CASTS["qss"], rng)
    ctx, state = _chain_open(
        run, mu, nu, payload,
        measure_receiver=measure_b, forced_cc=forced_cc, forced_aa=forced_aa,
    )
    if not measure_b:
        run.held["bob"].append(extract_qubit(state, 4).amplitudes)
    return ctx


# --- two-party protocols ----------------------------------------------------


def bc_run(secret: int, rng: Rng | None = None, *, mu: int = 0, nu: int = 0,
           forced=None, cheat: CheatStrategy | None = None,
           config: RunConfig | None = None) -> RunRecord:
    """Bit commitment: the sender commits one bit, later reveals it.

    The receiver controls both the relay and receiver stations; the
    receiver-side channel label is the receiver's secret.  Verification
    checks the two X-parity relations the receiver's measured bits impose
    on the revealed (bit, outcome-pair) claim; the Z bit of the claim is a
    global phase on the commitment qubit and is logged as unverifiable.
    """
    forced_aa, forced_cc = _forced_pair(forced)
    config = config or _make_config("bc", mu, nu, secret, "", 1, rng, forced, cheat)
    run = Run(config, CASTS["bc"], rng, cheat)
    run.local("setup", "alice", "payload", f"bit={secret}")
    ctx, state = _chain_open(
        run, mu, nu, _payload_state(secret),
        measure_receiver=True, forced_cc=forced_cc, forced_aa=forced_aa,
        nu_secret_of="bob",
    )
    # commitment twin: the payload bit masked by the sender's outcome pair
    twin = StateVector(pauli_matrix(ctx.aa.label) @ basis_state([secret]).amplitudes)
    run.send_qubit("4", "alice", "bob", "send_commit_twin")
    twin_bit, _ = measure_qubit(twin, 0, run.born)
    run.local("5", "bob", "measure_commit_twin", f"bit={twin_bit}")

    dev = run.deviation("reveal")
    if dev is not None and dev.kind == "withhold":
        run.local("reveal", "alice", "reveal_withheld", "no message")
        return run.record(run.verdict("bob", Verdict("reject", reason="transcript_incomplete")))
    reveal_bit = secret
    reveal_aa = ctx.aa
    if dev is not None and dev.kind == "flip_secret":
        reveal_bit ^= 1
    if dev is not None and dev.kind == "xor_aa":
        reveal_aa = reveal_aa ^ TwoBits.from_label(int(dev.value))
    run.tell("reveal", "alice", "bob", "reveal", f"bit={reveal_bit} aa={reveal_aa}")

    tau = infer_tau(reveal_aa, ctx.cc, mu, nu)
    check_twin = twin_bit == (reveal_bit ^ reveal_aa.lo)
    check_moved = ctx.psi_prime_bit == (reveal_bit ^ x_bit(tau))
    run.local("verify", "bob", "phase_unverified", f"z_claim={reveal_aa.hi}")
    run.values.update(
        twin_bit=twin_bit, moved_bit=ctx.psi_prime_bit, cc=str(ctx.cc), aa=str(ctx.aa)
    )
    if check_twin and check_moved:
        return run.record(run.verdict("bob", Verdict("accept", value=str(reveal_bit))))
    return run.record(run.verdict("bob", Verdict("reject", reason="commit_mismatch")))


def ct_run(secret: int, rng: Rng | None = None, *, forced=None,
           cheat: CheatStrategy | None = None,
           config: RunConfig | None = None) -> RunRecord:
    """Asynchronous coin toss over the publicly fixed chain (0, 0).

    The receiver re-keys the moved payload with its own relay outcome and
    announces the result; the sender strips her own outcome and checks she
    recovers her input.  Both corrections compose to the sender's outcome
    pair alone, so the coin equals ``secret XOR a'`` and is uniform over
    the measurement randomness.
    """
    mu = nu = 0
    forced_aa, forced_cc = _forced_pair(forced)
    config = config or _make_config("ct", mu, nu, secret, "", 1, rng, forced, cheat)
    run = Run(config, CASTS["ct"], rng, cheat)
    run.local("setup", "alice", "payload", f"bit={secret}")
    ctx, state = _chain_open(
        run, mu, nu, _payload_state(secret),
        measure_receiver=True, forced_cc=forced_cc, forced_aa=forced_aa,
    )
    dev = run.deviation("transform")
    if dev is not None and dev.kind == "fresh_qubit":
        # receiver discards the moved qubit and injects a fixed basis state
        state = apply_pauli(state, label_from_zx(0, ctx.psi_prime_bit ^ int(dev.value)), 4)
        run.local("4", "bob", "substitute_qubit", f"bit={int(dev.value)}")
    elif dev is not None and dev.kind == "substitute_label":
        state = apply_pauli(state, int(dev.value), 4)
        run.local("4", "bob", "rekey", "label=private")
    else:
        state = apply_pauli(state, ctx.cc.label, 4)
        run.local("4", "bob", "rekey", "label=private")
    coin, state = measure_qubit(state, 4, run.born)
    run.announce("4", "bob", "announce_coin", f"coin={coin}")
    run.send_qubit("4", "bob", "alice", "send_coin_state")

    state = apply_pauli(state, ctx.aa.label, 4)
    recovered, state = measure_qubit(state, 4, run.born)
    run.local("verify", "alice", "unkey_and_measure", f"bit={recovered}")
    run.values.update(coin=coin, recovered=recovered, aa=str(ctx.aa), cc=str(ctx.cc))
    if recovered == secret:
        return run.record(run.verdict("alice", Verdict("accept", value=str(coin))))
    return run.record(run.verdict("alice", Verdict("reject", reason="invalid")))


def ot_run(secret: int, bob_message: TwoBits | None = None, rng: Rng | None = None, *,
           forced_aa: TwoBits | None = None, cheat: CheatStrategy | None = None,
           config: RunConfig | None = None) -> RunRecord:
    """Oblivious transfer flavour of the coin-toss dataflow.

    The announced state travels privately to the sender.  The receiver's
    (message, signature) pair is realised by its relay outcome (forcing
    it selects the cell in enumerate mode) and rides the Z exponent of
    the re-keying operator, so the sender's verified view is identical for
    both message values and the sender learns the message with probability
    no better than a blind guess.
    """
    mu = nu = 0
    forced = None if bob_message is None and forced_aa is None else (forced_aa, bob_message)
    inputs = str(bob_message) if bob_message is not None else ""
    config = config or _make_config("ot", mu, nu, secret, inputs, 1, rng, forced, cheat)
    run = Run(config, CASTS["ot"], rng, cheat)
    run.local("setup", "alice", "payload", f"bit={secret}")
    ctx, state = _chain_open(
        run, mu, nu, _payload_state(secret),
        measure_receiver=True, forced_cc=bob_message, forced_aa=forced_aa,
    )
    dev = run.deviation("transform")
    if dev is not None and dev.kind == "substitute_label":
        state = apply_pauli(state, int(dev.value), 4)
    else:
        state = apply_pauli(state, ctx.cc.label, 4)
    run.local("4", "bob", "rekey", "label=private")
    run.send_qubit("4", "bob", "alice", "send_function_state")

    state = apply_pauli(state, ctx.aa.label, 4)
    recovered, state = measure_qubit(state, 4, run.born)
    run.local("verify", "alice", "unkey_and_measure", f"bit={recovered}")
    run.values.update(
        recovered=recovered,
        bob_message=ctx.cc.hi,
        bob_signature=ctx.cc.lo,
        aa=str(ctx.aa),
    )
    # the sender announces only pass/fail; what she recovered stays local
    if recovered == secret:
        return run.record(run.verdict("alice", Verdict("accept", value="received")))
    return run.record(run.verdict("alice", Verdict("reject", reason="challenge")))


def tpsc_run(alice_input: TwoBits, bob_input: TwoBits, public_bit: int,
             rng: Rng | None = None, *, mu: int = 0, nu: int = 0,
             forced=None, masks: tuple[int, int] | None = None,
             cheat: CheatStrategy | None = None,
             config: RunConfig | None = None) -> RunRecord:
    """Two-party computation of one output bit from both (message, signature) inputs.

    Each party applies an operator whose X exponent is its signature bit
    and whose Z exponent is its message bit under a private uniform mask,
    so the announced output depends only on the signature bits while the
    message bits stay hidden behind the masks.  Both parties reconstruct
    the output locally and must agree.
    """
    inputs = f"{alice_input},{bob_input}"
    config = config or _make_config("tpsc", mu, nu, public_bit, inputs, 1, rng, forced, cheat)
    forced_aa, forced_cc = _forced_pair(forced)
    run = Run(config, CASTS["tpsc"], rng, cheat)
    mask_a, mask_b = masks if masks is not None else (
        run.party_rng["alice"].bit(), run.party_rng["bob"].bit())
    run.announce("setup", "alice", "public_payload", f"bit={public_bit}")

    label_a = label_from_zx(alice_input.hi ^ mask_a, alice_input.lo)
    run.local("2", "alice", "mask_choice", f"mask={mask_a}")
    ctx, state = _chain_open(
        run, mu, nu, _payload_state(public_bit),
        measure_receiver=False, forced_cc=forced_cc, forced_aa=forced_aa,
        sender_pre_label=label_a,
    )
    # the sender's outcome-keyed copy of her masked input, sent alongside
    twin = StateVector(
        pauli_matrix(ctx.aa.label) @ pauli_matrix(label_a)
        @ basis_state([public_bit]).amplitudes
    )
    run.send_qubit("2", "alice", "bob", "send_input_twin")

    moved_bit, state = measure_qubit(state, 4, run.born)
    run.local("3", "bob", "measure_moved", f"bit={moved_bit}")
    twin_bit, _ = measure_qubit(twin, 0, run.born)
    run.local("3", "bob", "measure_input_twin", f"bit={twin_bit}")
    label_b = label_from_zx(bob_input.hi ^ mask_b, bob_input.lo)
    run.local("3", "bob", "mask_choice", f"mask={mask_b}")
    state = apply_pauli(state, label_b, 4)
    state = apply_pauli(state, ctx.cc.label, 4)
    run.local("3", "bob", "apply_input_and_rekey", "labels=private")
    run.send_qubit("3", "bob", "alice", "return_state")

    state = apply_pauli(state, ctx.aa.label, 4)
    f_alice, state = measure_qubit(state, 4, run.born)
    run.announce("4", "alice", "announce_outcome", f"aa={ctx.aa} f={f_alice}")

    xmn = x_bit(mu) ^ x_bit(nu)
    f_bob = moved_bit ^ bob_input.lo ^ ctx.cc.lo ^ ctx.aa.lo
    # receiver-side binding: the twin must agree with the moved bit given
    # the announced outcome pair (X parities only, Z is phase)
    derived_a_sig = moved_bit ^ public_bit ^ ctx.aa.lo ^ ctx.cc.lo ^ xmn
    check_twin = twin_bit == (public_bit ^ derived_a_sig ^ ctx.aa.lo)
    run.local("verify", "bob", "derive_sender_signature", f"bit={derived_a_sig}")
    run.values.update(
        f_alice=f_alice, f_bob=f_bob,
        alice_sig_seen_by_bob=derived_a_sig,
        bob_sig_seen_by_alice=f_alice ^ public_bit ^ alice_input.lo ^ xmn,
        masks=(mask_a, mask_b),
    )
    if f_alice == f_bob and check_twin:
        return run.record(run.verdict("bob", Verdict("accept", value=str(f_alice))))
    return run.record(run.verdict("bob", Verdict("reject", reason="inconsistent_views")))


# --- multiparty protocols ---------------------------------------------------


def qss_run(secret, rng: Rng | None = None, *, mu: int = 0, nu: int = 0,
            forced=None, cheat: CheatStrategy | None = None,
            reconstruct: bool = True, shares: str = "both",
            config: RunConfig | None = None) -> RunRecord:
    """(2, 2) secret sharing of a bit or qubit across receiver and relay.

    The receiver ends up holding the payload under an unknown correction;
    the sender's outcome pair goes to the receiver only, after the
    receiver confirms it holds a qubit, and the relay's outcome pair is
    the second share.  Either share alone leaves the payload maximally
    mixed; both together invert the correction exactly.
    """
    payload = _payload_state(secret)
    classical = not isinstance(secret, StateVector)
    secret_text = str(secret) if classical else _encode_qubit(payload)
    forced_aa, forced_cc = _forced_pair(forced)
    config = config or _make_config("qss", mu, nu, secret_text, "", 1, rng, forced, cheat)
    run = Run(config, CASTS["qss"], rng, cheat)
    run.local("setup", "alice", "payload", f"value={secret_text}")

    dev = run.deviation("relay_bsm")
    skip = dev is not None and dev.kind == "skip"
    ctx, state = _chain_open(
        run, mu, nu, payload,
        measure_receiver=False, forced_cc=forced_cc, forced_aa=forced_aa,
        skip_relay=skip,
    )
    run.tell("auth", "bob", "alice", "ack_holding_qubit", "token")
    run.tell("share", "alice", "bob", "send_sender_share", f"aa={ctx.aa}")

    if skip:
        # the sender's measurement moved the payload to the relay's wire
        run.held["charlie"].append(extract_qubit(state, 2).amplitudes)
        run.values.update(relay_skipped=True, aa=str(ctx.aa))
        return run.record(run.verdict("bob", Verdict("reject", reason="insufficient_shares")))

    if not reconstruct:
        run.held["bob"].append(extract_qubit(state, 4).amplitudes)
        run.values.update(aa=str(ctx.aa), cc=str(ctx.cc))
        return run.record(Verdict("accept", value="unreconstructed"))

    if shares != "both":
        run.held["bob"].append(extract_qubit(state, 4).amplitudes)
        run.values.update(aa=str(ctx.aa), cc=str(ctx.cc))
        return run.record(run.verdict(
            "bob", Verdict("reject", reason="insufficient_shares")))

    run.tell("collaborate", "charlie", "bob", "send_relay_share", f"cc={ctx.cc}")
    tau = infer_tau(ctx.aa, ctx.cc, mu, nu)
    state = apply_pauli(state, tau, 4)  # self-inverse up to a global sign
    run.local("reconstruct", "bob", "invert_correction", "label=private")
    recovered = extract_qubit(state, 4)
    fid = fidelity(payload, recovered)
    run.values.update(fidelity=fid, aa=str(ctx.aa), cc=str(ctx.cc))
    if classical:
        bit, _ = measure_qubit(recovered, 0, run.born)
        run.values["bit"] = bit
        return run.record(run.verdict("bob", Verdict("accept", value=str(bit))))
    run.held["bob"].append(recovered.amplitudes)
    return run.record(run.verdict("bob", Verdict("accept", value="qubit")))


def qds_run(message: Sequence[int], rng: Rng | None = None, *, mu: int = 0, nu: int = 0,
            forced=None, cheat: CheatStrategy | None = None,
            split_exchange: bool = True,
            config: RunConfig | None = None) -> RunRecord:
    """Digital signature of a bit string, one chain instance per bit.

    The receiver's moved bits and the sender's outcome-keyed twins are the
    signature material.  Receiver and relay swap split halves of their
    records over a channel the sender cannot read (completing them on
    demand during verification), then the receiver authenticates the
    revealed message and forwards it to the relay, which cross-checks both
    its own twin copy and the receiver's moved bits.
    """
    message = [int(b) for b in message]
    if any(b not in (0, 1) for b in message) or not message:
        raise ValueError("message must be a non-empty bit sequence")
    k = len(message)
    forced_cells = forced if forced is not None else [None] * k
    if len(forced_cells) != k:
        raise ValueError("forced cell list must match the message length")
    config = config or _make_config(
        "qds", mu, nu, "".join(map(str, message)), "", k, rng,
        forced if forced is None else list(forced_cells), cheat)
    run = Run(config, CASTS["qds"], rng, cheat)

    aa_list: list[TwoBits] = []
    cc_list: list[TwoBits] = []
    moved_bits: list[int] = []
    twin_bits: list[int] = []
    for i, bit in enumerate(message):
        forced_aa, forced_cc = _forced_pair(forced_cells[i])
        ctx, state = _chain_open(
            run, mu, nu, _payload_state(bit),
            measure_receiver=True, forced_cc=forced_cc, forced_aa=forced_aa,
        )
        aa_list.append(ctx.aa)
        cc_list.append(ctx.cc)
        moved_bits.append(ctx.psi_prime_bit)
        twin = StateVector(pauli_matrix(ctx.aa.label) @ basis_state([bit]).amplitudes)
        run.send_qubit("4", "alice", "charlie", "send_signature_twin", f"index={i}")
        twin_bit, _ = measure_qubit(twin, 0, run.born)
        run.local("5", "charlie", "measure_signature_twin", f"index={i} bit={twin_bit}")
        twin_bits.append(twin_bit)

    # split exchange of the two signature shares, ordering hidden from the sender
    if split_exchange:
        to_relay = sorted(
            i for i in range(k) if run.shared_rng.bit() == 1
        )
        to_receiver = sorted(
            i for i in range(k) if run.shared_rng.bit() == 1
        )
    else:
        to_relay = list(range(k))
        to_receiver = list(range(k))
    run.tell("6", "bob", "charlie", "share_moved_bits",
             f"positions={to_relay} bits={[moved_bits[i] for i in to_relay]}")
    run.tell("6", "charlie", "bob", "share_relay_pairs",
             f"positions={to_receiver} pairs={[str(cc_list[i]) for i in to_receiver]}")

    dev = run.deviation("reveal")
    reveal_msg = list(message)
    reveal_aa = list(aa_list)
    if dev is not None and dev.kind == "flip_message":
        reveal_msg[int(dev.value)] ^= 1
    if dev is not None and dev.kind == "xor_aa":
        pos, mask = dev.value
        reveal_aa[pos] = reveal_aa[pos] ^ TwoBits.from_label(int(mask))
    run.tell("reveal", "alice", "bob", "reveal_message",
             f"bits={reveal_msg} aa={[str(a) for a in reveal_aa]}")

    missing_b = [i for i in range(k) if i not in to_receiver]
    if missing_b:
        run.tell("verify", "charlie", "bob", "complete_relay_pairs",
                 f"positions={missing_b} pairs={[str(cc_list[i]) for i in missing_b]}")
    bob_bad = [
        i for i in range(k)
        if moved_bits[i] != reveal_msg[i] ^ x_bit(infer_tau(reveal_aa[i], cc_list[i], mu, nu))
    ]
    run.values["bob_failed_positions"] = bob_bad
    if bob_bad:
        bob_verdict = Verdict("reject", reason="repudiation")
        run.verdict("bob", bob_verdict)
        run.values.update(bob=bob_verdict, charlie=Verdict("reject", reason="not_reached"))
        return run.record(bob_verdict)
    bob_verdict = Verdict("accept", value="".join(map(str, reveal_msg)))
    run.values["bob"] = bob_verdict

    forward_msg = list(reveal_msg)
    forward_aa = list(reveal_aa)
    fdev = run.deviation("forward")
    if fdev is not None and fdev.kind == "flip_message":
        forward_msg[int(fdev.value)] ^= 1
    run.tell("forward", "bob", "charlie", "forward_message",
             f"bits={forward_msg} aa={[str(a) for a in forward_aa]}")

    missing_c = [i for i in range(k) if i not in to_relay]
    if missing_c:
        run.tell("verify", "bob", "charlie", "complete_moved_bits",
                 f"positions={missing_c} bits={[moved_bits[i] for i in missing_c]}")
    charlie_bad = [
        i for i in range(k)
        if twin_bits[i] != forward_msg[i] ^ forward_aa[i].lo
        or moved_bits[i] != forward_msg[i] ^ x_bit(infer_tau(forward_aa[i], cc_list[i], mu, nu))
    ]
    run.values["charlie_failed_positions"] = charlie_bad
    if charlie_bad:
        charlie_verdict = Verdict("reject", reason="forgery")
    else:
        charlie_verdict = Verdict("accept", value="".join(map(str, forward_msg)))
    run.verdict("charlie", charlie_verdict)
    run.values["charlie"] = charlie_verdict
    overall = charlie_verdict if not charlie_verdict.accepted else bob_verdict
    return run.record(overall)


def mpsc_run(alice_input: TwoBits, bob_input: TwoBits,
             charlie_input: TwoBits | None, public_bit: int,
             rng: Rng | None = None, *, mu: int = 0, nu: int = 0,
             forced_aa: TwoBits | None = None,
             masks: tuple[int, int, int] | None = None,
             cheat: CheatStrategy | None = None,
             config: RunConfig | None = None) -> RunRecord:
    """Three-party computation over a public payload bit.

    The relay's (message, signature) input is realised by its own Bell
    outcome (forced in enumerate mode).  The sender announces her outcome
    pair immediately; the output bit is announced by the relay, everyone
    announces signature bits and every party verifies the announced output
    against the X-parity relation it implies.
    """
    inputs = f"{alice_input},{bob_input},{charlie_input if charlie_input else '--'}"
    forced = None if forced_aa is None and charlie_input is None else (forced_aa, charlie_input)
    config = config or _make_config("mpsc", mu, nu, public_bit, inputs, 1, rng, forced, cheat)
    run = Run(config, CASTS["mpsc"], rng, cheat)
    mask_a, mask_b, mask_c = masks if masks is not None else (
        run.party_rng["alice"].bit(), run.party_rng["bob"].bit(),
        run.party_rng["charlie"].bit())
    run.announce("setup", "alice", "public_payload", f"bit={public_bit}")

    label_a = label_from_zx(alice_input.hi ^ mask_a, alice_input.lo)
    run.local("2", "alice", "mask_choice", f"mask={mask_a}")
    ctx, state = _chain_open(
        run, mu, nu, _payload_state(public_bit),
        measure_receiver=False, forced_cc=charlie_input, forced_aa=forced_aa,
        sender_pre_label=label_a,
    )
    run.announce("2", "alice", "announce_sender_pair", f"aa={ctx.aa}")

    moved_bit, state = measure_qubit(state, 4, run.born)
    run.local("3", "bob", "measure_moved", f"bit={moved_bit}")
    label_b = label_from_zx(bob_input.hi ^ mask_b, bob_input.lo)
    run.local("3", "bob", "mask_choice", f"mask={mask_b}")
    state = apply_pauli(state, label_b, 4)
    run.send_qubit("3", "bob", "charlie", "send_worked_state")

    label_c = label_from_zx(ctx.cc.hi ^ mask_c, ctx.cc.lo)
    run.local("4", "charlie", "mask_choice", f"mask={mask_c}")
    state = apply_pauli(state, label_c, 4)
    f_bit, state = measure_qubit(state, 4, run.born)
    run.announce("4", "charlie", "announce_outcome", f"f={f_bit}")

    run.announce("verify", "alice", "announce_signature", f"sig={alice_input.lo}")
    run.announce("verify", "bob", "announce_signature", f"sig={bob_input.lo}")
    run.announce("verify", "charlie", "announce_signature", f"sig={ctx.cc.lo}")

    xmn = x_bit(mu) ^ x_bit(nu)
    expected_f = public_bit ^ alice_input.lo ^ bob_input.lo ^ ctx.aa.lo ^ xmn
    check_public = f_bit == expected_f
    check_receiver = moved_bit == (
        public_bit ^ alice_input.lo ^ ctx.aa.lo ^ ctx.cc.lo ^ xmn)
    run.values.update(
        f=f_bit, expected_f=expected_f, moved_bit=moved_bit,
        relay_pair=str(ctx.cc), aa=str(ctx.aa),
        masks=(mask_a, mask_b, mask_c),
    )
    if check_public and check_receiver:
        return run.record(run.verdict("charlie", Verdict("accept", value=str(f_bit))))
    blamed = "charlie" if not check_public else "alice"
    return run.record(run.verdict(
        "charlie", Verdict("reject", reason=f"verification_failed:{blamed}")))


# --- config-driven dispatch -------------------------------------------------


def run_from_config(config: RunConfig, cheat: CheatStrategy | None = None) -> RunRecord:
    """Execute the protocol a configuration describes, reproducibly."""
    if config.protocol not in CASTS:
        raise ValueError(f"unknown protocol {config.protocol!r}")
    rng = Rng(config.seed)
    forced = parse_forced(config.mode)
    one = forced[0] if forced else None
    if config.protocol == "bc":
        return bc_run(int(config.secret), rng, mu=config.mu, nu=config.nu,
                      forced=one, cheat=cheat, config=config)
    if config.protocol == "ct":
        return ct_run(int(config.secret), rng, forced=one, cheat=cheat, config=config)
    if config.protocol == "ot":
        bob_message = TwoBits.parse(config.inputs) if config.inputs else None
        forced_aa = one[0] if one else None
        if one and one[1] is not None:
            bob_message = one[1]
        return ot_run(int(config.secret), bob_message, rng,
                      forced_aa=forced_aa, cheat=cheat, config=config)
    if config.protocol == "tpsc":
        a_txt, b_txt = config.inputs.split(",")
        return tpsc_run(TwoBits.parse(a_txt), TwoBits.parse(b_txt), int(config.secret),
                        rng, mu=config.mu, nu=config.nu, forced=one, cheat=cheat,
                        config=config)
    if config.protocol == "qss":
        if config.secret in ("0", "1"):
            secret = int(config.secret)
        elif config.secret.startswith("q:"):
            secret = _decode_qubit(config.secret)
        else:
            secret = _qss_probe(rng)
        return qss_run(secret, rng, mu=config.mu, nu=config.nu, forced=one,
                       cheat=cheat, config=config)
    if config.protocol == "qds":
        bits = [int(c) for c in config.secret]
        return qds_run(bits, rng, mu=config.mu, nu=config.nu, forced=forced,
                       cheat=cheat, config=config)
    if config.protocol == "mpsc":
        parts = config.inputs.split(",")
        if len(parts) != 3:
            raise ValueError("mpsc needs inputs like 10,01,11")
        charlie = None if parts[2] == "--" else TwoBits.parse(parts[2])
        forced_aa = one[0] if one else None
        return mpsc_run(TwoBits.parse(parts[0]), TwoBits.parse(parts[1]), charlie,
                        int(config.secret), rng, mu=config.mu, nu=config.nu,
                        forced_aa=forced_aa, cheat=cheat, config=config)
    raise AssertionError("unreachable")


def _qss_probe(rng: Rng | None) -> StateVector:
    if rng is None:
        return qubit(0.6, 0.8)
    return rng.derive(99).unit_qubit()


def _encode_qubit(state: StateVector) -> str:
    """Qubit amplitudes as a config-safe string, lossless for replay."""
    a, b = state.amplitudes
    return "q:" + ",".join(
        format(v, ".17g") for v in (a.real, a.imag, b.real, b.imag)
    )


def _decode_qubit(text: str) -> StateVector:
    parts = [float(p) for p in text[2:].split(",")]
    if len(parts) != 4:
        raise ValueError(f"bad qubit encoding {text!r}")
    return StateVector([complex(parts[0], parts[1]), complex(parts[2], parts[3])])
