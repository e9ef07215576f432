"""Sparse state-vector simulator keyed on computational basis strings.

States are dictionaries mapping basis keys (integers, bit ``i`` = qubit
``i``) to complex amplitudes.  Encoded states of a triorthogonal code are
uniform superpositions over cosets of the even-row span, so supports stay
small and every gate here preserves that sparsity except Hadamard, which
grows it by at most a factor of two per application.

Measurement randomness always comes from an explicit caller-supplied
source (anything with a ``random()`` method, such as ``random.Random`` or
``numpy.random.Generator``); there is no ambient seeding.  Deterministic
branches can be forced instead of sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .codes import TriorthogonalCode
from .gf2 import ENUMERATION_GUARD, _enumerate_span_ints

__all__ = [
    "PRUNE_EPS",
    "NORM_TOL",
    "SparseState",
    "apply_gate",
    "tensor",
    "superpose",
    "drop_qubits",
    "measure_z",
    "measure_register",
    "register_distribution",
    "states_equal_up_to_global_phase",
    "LogicalBasisLabel",
    "prepare_logical",
    "prepare_plus_all",
    "PhaseCheckResult",
    "transversal_ccz_phase_check",
    "transversal_multi_cz_phase_check",
]

PRUNE_EPS = 1e-14
NORM_TOL = 1e-12

GATE_ARITY = {"X": 1, "Z": 1, "H": 1, "CNOT": 2, "CZ": 2, "CCZ": 3}

_SQRT_HALF = math.sqrt(0.5)


class SparseState:
    """A normalized sparse state on ``n`` qubits."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: Optional[dict[int, complex]] = None) -> None:
        if n < 0:
            raise ValueError("qubit count must be nonnegative")
        self.n = n
        self.amps = {} if amps is None else amps

    @classmethod
    def basis_state(cls, n: int, key: int = 0) -> "SparseState":
        if key < 0 or key >> n:
            raise ValueError(f"key 0x{key:x} does not fit in {n} qubits")
        return cls(n, {key: 1.0 + 0.0j})

    def copy(self) -> "SparseState":
        return SparseState(self.n, dict(self.amps))

    def norm_sq(self) -> float:
        return sum((a * a.conjugate()).real for a in self.amps.values())

    def amplitude(self, key: int) -> complex:
        return self.amps.get(key, 0.0 + 0.0j)

    def prune(self, eps: float = PRUNE_EPS) -> "SparseState":
        self.amps = {k: a for k, a in self.amps.items() if abs(a) > eps}
        return self

    def normalize(self) -> "SparseState":
        norm = math.sqrt(self.norm_sq())
        if norm == 0.0:
            raise ValueError("cannot normalize a zero state")
        scale = 1.0 / norm
        self.amps = {k: a * scale for k, a in self.amps.items()}
        return self

    def support_size(self) -> int:
        return len(self.amps)

    def to_csv_lines(self) -> list[str]:
        """Debug dump, one ``bitstring,re,im`` line per basis key."""
        lines = []
        for k in sorted(self.amps):
            bits = "".join("1" if (k >> i) & 1 else "0" for i in range(self.n))
            a = self.amps[k]
            lines.append(f"{bits},{a.real!r},{a.imag!r}")
        return lines

    def __repr__(self) -> str:
        return f"SparseState(n={self.n}, support={len(self.amps)})"


def _check_qubits(state: SparseState, qubits: Sequence[int]) -> None:
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubits must be distinct, got {tuple(qubits)}")
    for q in qubits:
        if not 0 <= q < state.n:
            raise ValueError(f"qubit {q} out of range for {state.n} qubits")


def apply_gate(state: SparseState, gate: str, qubits: Sequence[int]) -> SparseState:
    """Apply one gate from {X, Z, H, CNOT, CZ, CCZ}, returning a new state.

    CNOT's first qubit is the control.  Diagonal gates never change the
    support; X and CNOT permute it; H at most doubles it.
    """
    arity = GATE_ARITY.get(gate)
    if arity is None:
        raise ValueError(f"unknown gate {gate!r}")
    if len(qubits) != arity:
        raise ValueError(f"{gate} takes {arity} qubit(s), got {len(qubits)}")
    _check_qubits(state, qubits)
    amps = state.amps
    if gate == "X":
        mask = 1 << qubits[0]
        return SparseState(state.n, {k ^ mask: a for k, a in amps.items()})
    if gate == "Z":
        mask = 1 << qubits[0]
        return SparseState(state.n, {k: -a if k & mask else a for k, a in amps.items()})
    if gate == "H":
        mask = 1 << qubits[0]
        out: dict[int, complex] = {}
        for k, a in amps.items():
            lo = k & ~mask
            hi = k | mask
            contrib = a * _SQRT_HALF
            out[lo] = out.get(lo, 0.0) + contrib
            out[hi] = out.get(hi, 0.0) + (-contrib if k & mask else contrib)
        return SparseState(state.n, out).prune()
    if gate == "CNOT":
        cmask = 1 << qubits[0]
        tmask = 1 << qubits[1]
        return SparseState(state.n, {(k ^ tmask if k & cmask else k): a for k, a in amps.items()})
    if gate == "CZ":
        both = (1 << qubits[0]) | (1 << qubits[1])
        return SparseState(
            state.n, {k: -a if (k & both) == both else a for k, a in amps.items()}
        )
    mask3 = (1 << qubits[0]) | (1 << qubits[1]) | (1 << qubits[2])
    return SparseState(state.n, {k: -a if (k & mask3) == mask3 else a for k, a in amps.items()})


def tensor(a: SparseState, b: SparseState) -> SparseState:
    """Tensor product; ``b``'s qubits are placed above ``a``'s."""
    shift = a.n
    out: dict[int, complex] = {}
    for kb, ab in b.amps.items():
        high = kb << shift
        for ka, aa in a.amps.items():
            out[high | ka] = aa * ab
    return SparseState(a.n + b.n, out)


def superpose(terms: Sequence[tuple[complex, SparseState]]) -> SparseState:
    """Linear combination of same-width states, normalized."""
    if not terms:
        raise ValueError("need at least one term")
    n = terms[0][1].n
    out: dict[int, complex] = {}
    for coeff, st in terms:
        if st.n != n:
            raise ValueError("states have mismatched qubit counts")
        for k, a in st.amps.items():
            out[k] = out.get(k, 0.0) + coeff * a
    return SparseState(n, out).prune().normalize()


def drop_qubits(state: SparseState, qubits: Sequence[int]) -> SparseState:
    """Remove qubits whose value is constant across the support.

    This is a relabeling, not a measurement; it raises if the dropped
    qubits actually vary.
    """
    _check_qubits(state, qubits)
    drop = set(qubits)
    keep = [q for q in range(state.n) if q not in drop]
    drop_mask = 0
    for q in drop:
        drop_mask |= 1 << q
    fixed = None
    out: dict[int, complex] = {}
    for k, a in state.amps.items():
        value = k & drop_mask
        if fixed is None:
            fixed = value
        elif value != fixed:
            raise ValueError("dropped qubits vary across the support")
        new_key = 0
        for i, q in enumerate(keep):
            if (k >> q) & 1:
                new_key |= 1 << i
        out[new_key] = a
    return SparseState(len(keep), out)


def measure_z(
    state: SparseState,
    qubit: int,
    rng=None,
    force: Optional[int] = None,
) -> tuple[int, SparseState]:
    """Measure one qubit in the Z basis.

    The outcome is sampled from ``rng`` unless ``force`` picks a branch,
    which must have probability above NORM_TOL.  Returns the outcome and
    the renormalized post-measurement state.
    """
    outcome, collapsed = measure_register(state, (qubit,), rng=rng, force=force)
    return outcome, collapsed


def register_distribution(state: SparseState, qubits: Sequence[int]) -> dict[int, float]:
    """Outcome probabilities for a joint Z measurement of ``qubits``.

    Outcome bit ``i`` is the value of ``qubits[i]``.
    """
    _check_qubits(state, qubits)
    probs: dict[int, float] = {}
    for k, a in state.amps.items():
        outcome = 0
        for i, q in enumerate(qubits):
            if (k >> q) & 1:
                outcome |= 1 << i
        probs[outcome] = probs.get(outcome, 0.0) + (a * a.conjugate()).real
    return probs


def measure_register(
    state: SparseState,
    qubits: Sequence[int],
    rng=None,
    force: Optional[int] = None,
) -> tuple[int, SparseState]:
    """Jointly measure several qubits in the Z basis.

    Sampling walks the outcome distribution in sorted key order so a given
    rng stream always selects the same branch.  ``force`` selects a branch
    explicitly and raises if its probability is negligible.
    """
    probs = register_distribution(state, qubits)
    if force is not None:
        prob = probs.get(force, 0.0)
        if prob <= NORM_TOL:
            raise ValueError(f"forced outcome {force:#x} has negligible probability")
        outcome = force
    else:
        if rng is None:
            raise ValueError("measurement needs an rng (or a forced outcome)")
        r = rng.random()
        acc = 0.0
        outcome = max(probs)
        for key in sorted(probs):
            acc += probs[key]
            if r < acc:
                outcome = key
                break
    scale = 1.0 / math.sqrt(probs[outcome])
    out: dict[int, complex] = {}
    for k, a in state.amps.items():
        value = 0
        for i, q in enumerate(qubits):
            if (k >> q) & 1:
                value |= 1 << i
        if value == outcome:
            out[k] = a * scale
    return outcome, SparseState(state.n, out)


def states_equal_up_to_global_phase(a: SparseState, b: SparseState, tol: float = NORM_TOL) -> bool:
    """Whether two states agree up to one overall complex phase."""
    if a.n != b.n:
        return False
    ref_key = None
    ref_mag = tol
    for k, amp in a.amps.items():
        mag = abs(amp)
        if mag > ref_mag:
            ref_key, ref_mag = k, mag
    if ref_key is None:
        return all(abs(amp) <= tol for amp in b.amps.values())
    phase = b.amplitude(ref_key) / a.amplitude(ref_key)
    if abs(abs(phase) - 1.0) > tol:
        return False
    for k in a.amps.keys() | b.amps.keys():
        if abs(b.amplitude(k) - phase * a.amplitude(k)) > tol:
            return False
    return True


LabelLike = Union[int, Sequence[int], "LogicalBasisLabel"]


@dataclass(frozen=True)
class LogicalBasisLabel:
    """Which logical basis state to prepare: one bit per logical qubit,
    plus optional gauge bits selecting a gauge-space coset."""

    bits: tuple[int, ...]
    gauge_bits: tuple[int, ...] = ()

    @classmethod
    def of(cls, bits: LabelLike, gauge_bits: Sequence[int] = ()) -> "LogicalBasisLabel":
        if isinstance(bits, LogicalBasisLabel):
            return bits
        if isinstance(bits, int):
            bits = (bits,)
        return cls(tuple(int(b) & 1 for b in bits), tuple(int(b) & 1 for b in gauge_bits))


def prepare_logical(code: TriorthogonalCode, label: LabelLike) -> SparseState:
    """Uniform superposition over the coset selecting the given logical
    (and gauge) basis state."""
    lab = LogicalBasisLabel.of(label)
    if len(lab.bits) != code.k:
        raise ValueError(f"label has {len(lab.bits)} bits for a code with k={code.k}")
    if lab.gauge_bits and len(lab.gauge_bits) != len(code.gauge_pairs):
        raise ValueError(
            f"label has {len(lab.gauge_bits)} gauge bits for {len(code.gauge_pairs)} pairs"
        )
    shift = 0
    for bit, row in zip(lab.bits, code.logical_x):
        if bit:
            shift ^= row.value
    for bit, pair in zip(lab.gauge_bits, code.gauge_pairs):
        if bit:
            shift ^= pair.x_part.value
    return _uniform_coset(code.n, code.g0_basis.row_values(), shift)


def prepare_plus_all(code: TriorthogonalCode) -> SparseState:
    """Encoded |+> on every logical qubit, gauge bits zero: the uniform
    superposition over the full matrix row space."""
    basis, _ = _reduced_full_basis(code)
    return _uniform_coset(code.n, basis, 0)


def _reduced_full_basis(code: TriorthogonalCode) -> tuple[list[int], int]:
    basis = code.g0_basis.row_values() + [v.value for v in code.logical_x]
    return basis, len(basis)


def _uniform_coset(n: int, basis: list[int], shift: int) -> SparseState:
    if len(basis) > ENUMERATION_GUARD:
        raise ValueError(
            f"coset of rank {len(basis)} exceeds enumeration guard 2**{ENUMERATION_GUARD}"
        )
    amp = complex(2.0 ** (-len(basis) / 2.0))
    return SparseState(n, {v: amp for v in _enumerate_span_ints(basis, shift)})


@dataclass(frozen=True)
class PhaseCheckResult:
    """Outcome of a transversal diagonal-gate phase check.

    ``phase`` is the common sign picked up by every basis term (only
    meaningful when ``uniform``), ``expected`` the sign demanded by the
    corresponding logical gate, and ``terms`` the number of basis-triple
    combinations inspected.
    """

    phase: int
    expected: int
    uniform: bool
    terms: int

    @property
    def matches(self) -> bool:
        return self.uniform and self.phase == self.expected


def _coset_values(code: TriorthogonalCode, label: LabelLike) -> list[int]:
    lab = LogicalBasisLabel.of(label)
    if len(lab.bits) != code.k:
        raise ValueError(f"label has {len(lab.bits)} bits for a code with k={code.k}")
    shift = 0
    for bit, row in zip(lab.bits, code.logical_x):
        if bit:
            shift ^= row.value
    return list(_enumerate_span_ints(code.g0_basis.row_values(), shift))


def transversal_multi_cz_phase_check(
    code: TriorthogonalCode, labels: Sequence[LabelLike]
) -> PhaseCheckResult:
    """Verify that h-qubit controlled-Z applied on every site across h code
    blocks acts as the logical h-qubit controlled-Z on basis states.

    Each block is prepared in a logical basis state; the transversal gate
    multiplies each joint basis term by the parity of the common support of
    the h coset representatives.  The check passes when that parity is the
    same for every term and equals the logical phase, the product of the
    label bits summed across logical qubits.
    """
    h = len(labels)
    if h < 2:
        raise ValueError("need at least two blocks")
    if code.source.level < h:
        raise ValueError(f"code has level {code.source.level}, below h={h}")
    rank0 = code.g0_basis.row_count
    if h * rank0 > ENUMERATION_GUARD:
        raise ValueError("phase check enumeration exceeds the guard")

    labs = [LogicalBasisLabel.of(lab) for lab in labels]
    expected_parity = 0
    for i in range(code.k):
        product = 1
        for lab in labs:
            product &= lab.bits[i]
        expected_parity ^= product
    expected = -1 if expected_parity else 1

    cosets = [_coset_values(code, lab) for lab in labs]
    first: Optional[int] = None
    terms = 0

    def scan(depth: int, acc: int) -> Optional[int]:
        nonlocal first, terms
        if depth == h:
            parity = acc.bit_count() & 1
            terms += 1
            if first is None:
                first = parity
                return None
            if parity != first:
                return parity
            return None
        for v in cosets[depth]:
            bad = scan(depth + 1, acc & v)
            if bad is not None:
                return bad
        return None

    mismatch = scan(0, (1 << code.n) - 1)
    uniform = mismatch is None
    phase = -1 if first else 1
    return PhaseCheckResult(phase=phase, expected=expected, uniform=uniform, terms=terms)


def transversal_ccz_phase_check(
    code: TriorthogonalCode, labels: Sequence[LabelLike]
) -> PhaseCheckResult:
    """Specialization of the multi-CZ check to three blocks under CCZ."""
    if len(labels) != 3:
        raise ValueError("CCZ check takes exactly three labels")
    return transversal_multi_cz_phase_check(code, labels)
