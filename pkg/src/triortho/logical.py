"""Logical-level procedures: teleported CCZ, measurement-based Hadamard,
Steane-style X correction, and an exhaustive fault-injection sweep.

The Hadamard procedure applies transversal H to the data block, entangles
it into a freshly encoded all-plus ancilla block with transversal CNOT,
measures every ancilla qubit in Z, and classically decodes the outcome
string: an X-stabilizer syndrome fixes X errors, and the remaining parity
information restores the gauge configuration to the all-zero reference.
Gauge parities are read from the corrected outcome string; reading them
from the raw string would let a single measurement flip corrupt the
restored gauge.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .codes import TriorthogonalCode
from .gf2 import BitVector
from .simulator import (
    LabelLike,
    SparseState,
    apply_gate,
    drop_qubits,
    measure_register,
    prepare_logical,
    prepare_plus_all,
    superpose,
    tensor,
)

__all__ = [
    "FAULT_LOCATIONS",
    "FaultSpec",
    "SteaneReport",
    "logical_hadamard",
    "steane_x_correct",
    "toffoli_resource_state",
    "ccz_via_toffoli_state",
    "PauliResidual",
    "pauli_residual",
    "gauge_parities_of_state",
    "SweepCounterexample",
    "SweepReport",
    "fault_tolerance_sweep",
]

FAULT_LOCATIONS = (
    "data_pre_h",
    "data_post_h",
    "ancilla",
    "cnot_data",
    "cnot_ancilla",
    "cnot_both",
    "measurement",
)

_PAULI_BY_LOCATION = {
    "data_pre_h": ("X", "Z"),
    "data_post_h": ("X", "Z"),
    "ancilla": ("X", "Z"),
    "cnot_data": ("X",),
    "cnot_ancilla": ("X",),
    "cnot_both": ("X",),
    "measurement": ("FLIP",),
}


@dataclass(frozen=True)
class FaultSpec:
    """One injected fault at a named circuit site.

    CNOT sites place an X on the data leg, the ancilla leg, or both, after
    the gate.  Measurement faults flip the recorded classical bit.
    """

    location: str
    pauli: str
    qubit: int

    def validate(self, n: int) -> None:
        if self.location not in FAULT_LOCATIONS:
            raise ValueError(f"unknown fault location {self.location!r}")
        if self.pauli not in _PAULI_BY_LOCATION[self.location]:
            raise ValueError(f"pauli {self.pauli!r} not valid at {self.location!r}")
        if not 0 <= self.qubit < n:
            raise ValueError(f"fault qubit {self.qubit} out of range for {n} qubits")


@dataclass(frozen=True)
class SteaneReport:
    """Classical record of one measurement-based correction round.

    ``applied_correction`` is the minimum-weight X pattern consistent with
    ``x_syndrome``; when gauge parities are nonzero the corresponding gauge
    X supports are applied to the data in addition to it.
    """

    raw_outcomes: BitVector
    x_syndrome: tuple[int, ...]
    gauge_parities: tuple[int, ...]
    applied_correction: BitVector
    decode_success: bool

    def to_json_dict(self) -> dict:
        return {
            "raw_outcomes": self.raw_outcomes.to_string(),
            "x_syndrome": list(self.x_syndrome),
            "gauge_parities": list(self.gauge_parities),
            "applied_correction": self.applied_correction.to_string(),
            "decode_success": self.decode_success,
        }


def _apply_pauli_fault(state: SparseState, pauli: str, qubit: int) -> SparseState:
    return apply_gate(state, pauli, (qubit,))


def _steane_round(
    state: SparseState,
    code: TriorthogonalCode,
    faults: Sequence[FaultSpec],
    rng,
    force_outcomes: Optional[int],
    with_hadamard: bool,
) -> tuple[SparseState, SteaneReport]:
    n = code.n
    if state.n != n:
        raise ValueError(f"state has {state.n} qubits, code has {n}")
    by_location: dict[str, list[FaultSpec]] = {loc: [] for loc in FAULT_LOCATIONS}
    for f in faults:
        f.validate(n)
        if f.location == "data_pre_h" and not with_hadamard:
            raise ValueError("data_pre_h faults only exist in the Hadamard procedure")
        by_location[f.location].append(f)

    data = state
    if with_hadamard:
        for f in by_location["data_pre_h"]:
            data = _apply_pauli_fault(data, f.pauli, f.qubit)
        for q in range(n):
            data = apply_gate(data, "H", (q,))
    for f in by_location["data_post_h"]:
        data = _apply_pauli_fault(data, f.pauli, f.qubit)

    ancilla = prepare_plus_all(code)
    for f in by_location["ancilla"]:
        ancilla = _apply_pauli_fault(ancilla, f.pauli, f.qubit)

    joint = tensor(data, ancilla)
    data_mask = (1 << n) - 1
    # Transversal CNOT, data controlling ancilla, as one key relabeling.
    joint = SparseState(2 * n, {k ^ ((k & data_mask) << n): a for k, a in joint.amps.items()})
    for f in by_location["cnot_data"]:
        joint = apply_gate(joint, "X", (f.qubit,))
    for f in by_location["cnot_ancilla"]:
        joint = apply_gate(joint, "X", (n + f.qubit,))
    for f in by_location["cnot_both"]:
        joint = apply_gate(joint, "X", (f.qubit,))
        joint = apply_gate(joint, "X", (n + f.qubit,))

    outcome, collapsed = measure_register(
        joint, range(n, 2 * n), rng=rng, force=force_outcomes
    )
    data = drop_qubits(collapsed, range(n, 2 * n))

    recorded = outcome
    for f in by_location["measurement"]:
        recorded ^= 1 << f.qubit

    syndrome_int = code.x_syndrome_of(recorded)
    correction = code.decode_x(syndrome_int)
    if correction is None:
        decode_success = False
        correction = BitVector(0, n)
    else:
        decode_success = True
    corrected = recorded ^ correction.value

    gauge = tuple(
        (pair.z_part.value & corrected).bit_count() & 1 for pair in code.gauge_pairs
    )
    total = correction.value
    for bit, pair in zip(gauge, code.gauge_pairs):
        if bit:
            total ^= pair.x_part.value
    if total:
        data = SparseState(n, {k ^ total: a for k, a in data.amps.items()})

    syndrome_bits = tuple(
        (syndrome_int >> j) & 1 for j in range(code.g0_basis.row_count)
    )
    report = SteaneReport(
        raw_outcomes=BitVector(recorded, n),
        x_syndrome=syndrome_bits,
        gauge_parities=gauge,
        applied_correction=correction,
        decode_success=decode_success,
    )
    return data, report


def logical_hadamard(
    state: SparseState,
    code: TriorthogonalCode,
    faults: Sequence[FaultSpec] = (),
    rng=None,
    force_outcomes: Optional[int] = None,
) -> tuple[SparseState, SteaneReport]:
    """Apply the logical Hadamard to every logical qubit of a data block.

    Transversal H, then one Steane-style measurement round against a fresh
    all-plus ancilla block.  The returned state lives on a fresh code block
    with gauge parities restored to zero; up to the injected faults it
    equals the logical Hadamard image of the input on every measurement
    branch.
    """
    return _steane_round(state, code, faults, rng, force_outcomes, with_hadamard=True)


def steane_x_correct(
    state: SparseState,
    code: TriorthogonalCode,
    faults: Sequence[FaultSpec] = (),
    rng=None,
    force_outcomes: Optional[int] = None,
) -> tuple[SparseState, SteaneReport]:
    """One X-error correction round: the Hadamard procedure without the
    initial transversal H.  Logical amplitudes are untouched."""
    return _steane_round(state, code, faults, rng, force_outcomes, with_hadamard=False)


def toffoli_resource_state() -> SparseState:
    """The three-qubit resource state for gate teleportation: a Toffoli
    applied to |+,+,0>, with qubit 2 the target."""
    state = SparseState.basis_state(3, 0)
    for q in (0, 1, 2):
        state = apply_gate(state, "H", (q,))
    state = apply_gate(state, "CCZ", (0, 1, 2))
    state = apply_gate(state, "H", (2,))
    return state


def ccz_via_toffoli_state(
    inputs: SparseState,
    resource: SparseState,
    rng=None,
    force_outcomes: Optional[int] = None,
) -> tuple[SparseState, tuple[int, int, int]]:
    """Perform CCZ on a three-qubit input by consuming a Toffoli state.

    Hadamard on the resource target turns it into the CCZ magic state; each
    resource qubit then controls a CNOT into the matching input qubit, the
    inputs are measured out, and the outcome-dependent X, CZ, and Z
    corrections are applied.  Returns the output state (on the resource
    qubits) and the three measurement outcomes.
    """
    if inputs.n != 3 or resource.n != 3:
        raise ValueError("inputs and resource must each be three qubits")
    joint = tensor(inputs, resource)
    joint = apply_gate(joint, "H", (5,))
    for i in range(3):
        joint = apply_gate(joint, "CNOT", (3 + i, i))
    outcome, collapsed = measure_register(joint, (0, 1, 2), rng=rng, force=force_outcomes)
    out = drop_qubits(collapsed, (0, 1, 2))
    s = tuple((outcome >> i) & 1 for i in range(3))
    for i in range(3):
        if s[i]:
            out = apply_gate(out, "X", (i,))
    others = ((1, 2), (0, 2), (0, 1))
    for i in range(3):
        if s[i]:
            out = apply_gate(out, "CZ", others[i])
    for i, j, target in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        if s[i] and s[j]:
            out = apply_gate(out, "Z", (target,))
    return out, (s[0], s[1], s[2])


@dataclass(frozen=True)
class PauliResidual:
    """The cheapest Pauli explaining observed-vs-ideal, up to stabilizers.

    ``sites`` counts qubits touched by the X and/or Z parts after
    minimizing over all equivalent stabilizer representatives."""

    sites: int
    x_pattern: BitVector
    z_pattern: BitVector


def pauli_residual(
    observed: SparseState,
    ideal: SparseState,
    tol: float = 1e-9,
) -> Optional[PauliResidual]:
    """Find the minimum-site Pauli P with observed = P * ideal, up to a
    global phase.  Returns None when no Pauli relates the two states.

    All X shifts mapping the ideal support onto the observed support are
    tried; for each, the sign pattern is solved as a linear system whose
    full solution space (particular solution plus null space of the support
    differences) is enumerated to minimize the touched-site count.
    """
    if observed.n != ideal.n:
        return None
    if len(observed.amps) != len(ideal.amps) or not ideal.amps:
        return None
    n = ideal.n
    obs_keys = set(observed.amps)
    ideal_keys = sorted(ideal.amps)
    k_out = min(obs_keys)
    k0 = ideal_keys[0]
    best: Optional[tuple[int, int, int]] = None

    for k_id in ideal_keys:
        r = k_out ^ k_id
        if any((k ^ r) not in obs_keys for k in ideal_keys):
            continue
        rho0 = observed.amps[k0 ^ r] / ideal.amps[k0]
        if abs(abs(rho0) - 1.0) > tol:
            continue
        # Row-reduce the sign constraints t . (k ^ k0) = rhs over GF(2).
        echelon: list[tuple[int, int, int]] = []
        consistent = True
        for k in ideal_keys[1:]:
            rho = observed.amps[k ^ r] / ideal.amps[k]
            s = rho / rho0
            if abs(s - 1.0) <= tol:
                rhs = 0
            elif abs(s + 1.0) <= tol:
                rhs = 1
            else:
                consistent = False
                break
            vec = k ^ k0
            for pivot, pv, prhs in echelon:
                if (vec >> pivot) & 1:
                    vec ^= pv
                    rhs ^= prhs
            if vec:
                echelon.append(((vec & -vec).bit_length() - 1, vec, rhs))
            elif rhs:
                consistent = False
                break
        if not consistent:
            continue
        # Back-substitution: clear every pivot from the other rows so the
        # particular solution and kernel read off directly.
        for i in range(len(echelon)):
            p_i, v_i, r_i = echelon[i]
            for j in range(len(echelon)):
                if i != j and (echelon[j][1] >> p_i) & 1:
                    p_j, v_j, r_j = echelon[j]
                    echelon[j] = (p_j, v_j ^ v_i, r_j ^ r_i)
        t0 = 0
        for pivot, _vec, rhs in echelon:
            if rhs:
                t0 |= 1 << pivot
        pivots = {p for p, _, _ in echelon}
        null_basis = []
        for free in range(n):
            if free in pivots:
                continue
            v = 1 << free
            for pivot, vec, _ in echelon:
                if (vec >> free) & 1:
                    v |= 1 << pivot
            null_basis.append(v)
        if len(null_basis) > 20:
            raise ValueError("residual null space too large to enumerate")
        t = t0
        sites = (r | t).bit_count()
        cand = (sites, r, t)
        if best is None or cand[0] < best[0]:
            best = cand
        current = t0
        for i in range(1, 1 << len(null_basis)):
            current ^= null_basis[(i & -i).bit_length() - 1]
            sites = (r | current).bit_count()
            if best is None or sites < best[0]:
                best = (sites, r, current)
    if best is None:
        return None
    return PauliResidual(
        sites=best[0],
        x_pattern=BitVector(best[1], n),
        z_pattern=BitVector(best[2], n),
    )


def gauge_parities_of_state(
    state: SparseState, code: TriorthogonalCode
) -> Optional[tuple[int, ...]]:
    """Gauge parities of a state supported on X-stabilizer cosets.

    Each gauge Z support must have constant overlap parity across the whole
    support; returns None when some parity is indefinite."""
    parities = []
    for pair in code.gauge_pairs:
        z = pair.z_part.value
        seen: Optional[int] = None
        for k in state.amps:
            p = (z & k).bit_count() & 1
            if seen is None:
                seen = p
            elif p != seen:
                return None
        parities.append(seen if seen is not None else 0)
    return tuple(parities)


@dataclass(frozen=True)
class SweepCounterexample:
    faults: tuple[FaultSpec, ...]
    residual_sites: Optional[int]


@dataclass(frozen=True)
class SweepReport:
    weight_limit: int
    cases_run: int
    counterexamples: tuple[SweepCounterexample, ...]

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def _hadamard_image(code: TriorthogonalCode, label: tuple[int, ...]) -> SparseState:
    # Ideal transversal-H image of the encoded basis state: the usual
    # k-fold Hadamard sign pattern over all logical labels.
    amp = complex(2.0 ** (-code.k / 2.0))
    terms = []
    for other in range(1 << code.k):
        bits = tuple((other >> i) & 1 for i in range(code.k))
        sign = -1.0 if sum(a * b for a, b in zip(label, bits)) % 2 else 1.0
        terms.append((amp * sign, prepare_logical(code, bits)))
    return superpose(terms)


def _generic_logical_state(code: TriorthogonalCode) -> tuple[SparseState, SparseState]:
    """A fixed superposition over all logical labels and its Hadamard image.

    Amplitudes (j+1) * i^j give every label a distinct magnitude and phase,
    so no logical Pauli leaves the state invariant.  An eigenstate input
    would hide its own eigenoperator: |+...+> absorbs any logical X, making
    weight-2 logical damage look like a clean round.
    """
    coeffs = [complex(j + 1) * (1j**j) for j in range(1 << code.k)]
    labels = [tuple((j >> i) & 1 for i in range(code.k)) for j in range(1 << code.k)]
    state = superpose(
        [(c, prepare_logical(code, lab)) for c, lab in zip(coeffs, labels)]
    )
    image = superpose(
        [(c, _hadamard_image(code, lab)) for c, lab in zip(coeffs, labels)]
    )
    return state, image


def _fault_universe(n: int) -> list[FaultSpec]:
    sites = []
    for q in range(n):
        sites.append(FaultSpec("data_pre_h", "X", q))
        sites.append(FaultSpec("data_post_h", "X", q))
        sites.append(FaultSpec("ancilla", "X", q))
        sites.append(FaultSpec("cnot_data", "X", q))
        sites.append(FaultSpec("cnot_ancilla", "X", q))
        sites.append(FaultSpec("cnot_both", "X", q))
        sites.append(FaultSpec("measurement", "FLIP", q))
    return sites


def fault_tolerance_sweep(
    code: TriorthogonalCode,
    weight_limit: int,
    input_label: Optional[LabelLike] = None,
    seed: int = 0,
) -> SweepReport:
    """Inject every fault set up to ``weight_limit`` into the Hadamard
    procedure and compare each output against the ideal image.

    A case passes when the output equals the ideal up to a Pauli touching
    at most as many sites as there were injected faults.  With the default
    input (a fixed generic superposition, no logical eigenoperators) a pass
    also certifies that no logical damage occurred; an explicit basis
    ``input_label`` checks that one state but cannot see its own
    eigenoperators.  Single faults must always pass for a distance-3 code;
    at weight two, counterexamples are reported rather than asserted away.
    """
    if input_label is None:
        data, ideal = _generic_logical_state(code)
    else:
        label = tuple(input_label)
        data = prepare_logical(code, label)
        ideal = _hadamard_image(code, label)
    rng = random.Random(seed)
    universe = _fault_universe(code.n)
    counterexamples = []
    cases = 0
    for w in range(1, weight_limit + 1):
        for combo in itertools.combinations(universe, w):
            cases += 1
            output, _report = logical_hadamard(data, code, faults=combo, rng=rng)
            residual = pauli_residual(output, ideal)
            if residual is None:
                counterexamples.append(SweepCounterexample(tuple(combo), None))
            elif residual.sites > w:
                counterexamples.append(SweepCounterexample(tuple(combo), residual.sites))
    return SweepReport(
        weight_limit=weight_limit,
        cases_run=cases,
        counterexamples=tuple(counterexamples),
    )
