"""Expected physical-T cost of stacked magic-state distillation protocols.

A protocol consumes ``inputs_per_output`` states of ``input_kind`` at error
``p`` and produces one ``output_kind`` state at error ``error_poly(p)``,
succeeding with probability ``success_poly(p)``.  Stacks chain protocols
whose kinds match, starting from physical T states; the expected T count
multiplies the input counts and divides by every success probability along
the way.  The optimizer searches all kind-consistent stacks up to a depth
bound, pruning states that another state beats on both error and cost (all
menu polynomials are monotone on [0, 1], so dominated states stay
dominated).

Kinds encode error structure, not just state type.  The Toffoli-level
triorthogonal protocol's quadratic formula assumes inputs whose error is
spread uniformly over the seven nontrivial classes; its own outputs
concentrate the surviving error on specific classes, so they are labeled
``toffoli_distilled`` and cannot legally feed the same formula again.
Both Toffoli kinds count as deliverables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

__all__ = [
    "DELIVERABLE_KINDS",
    "ProtocolSpec",
    "fifteen_to_one",
    "triorthogonal_t_level",
    "jones_toffoli",
    "triorthogonal_top_level",
    "default_menu",
    "CostQuery",
    "StackLevel",
    "CostResult",
    "InfeasibleTargetError",
    "optimize_stack",
    "CurveRow",
    "cost_curve",
    "render_cost_curve_csv",
    "CSV_HEADER",
    "menu_to_json",
    "menu_from_json",
]

Poly = tuple[tuple[float, int], ...]

# Kinds whose states are usable Toffoli outputs.
DELIVERABLE_KINDS = frozenset({"toffoli", "toffoli_distilled"})


def _eval_poly(poly: Poly, p: float) -> float:
    return sum(coeff * p**degree for coeff, degree in poly)


@dataclass(frozen=True)
class ProtocolSpec:
    """One distillation protocol as polynomial input/output behavior."""

    name: str
    inputs_per_output: float
    error_poly: Poly
    success_poly: Poly
    input_kind: str
    output_kind: str
    family: str = ""
    param_k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.inputs_per_output <= 0:
            raise ValueError(f"{self.name}: inputs_per_output must be positive")
        if self.output_error(0.0) != 0.0:
            raise ValueError(f"{self.name}: perfect inputs must give perfect outputs")
        if self.success_prob(0.0) != 1.0:
            raise ValueError(f"{self.name}: perfect inputs must always succeed")

    def output_error(self, p: float) -> float:
        return _eval_poly(self.error_poly, p)

    def success_prob(self, p: float) -> float:
        return _eval_poly(self.success_poly, p)


def _check_k(k: int) -> None:
    if k % 2 != 0 or not 2 <= k <= 100:
        raise ValueError(f"k must be an even integer in [2, 100], got {k}")


def fifteen_to_one() -> ProtocolSpec:
    """Classic 15-to-1 T distillation: error 35 p^3."""
    return ProtocolSpec(
        name="fifteen-to-one",
        inputs_per_output=15.0,
        error_poly=((35.0, 3),),
        success_poly=((1.0, 0), (-15.0, 1)),
        input_kind="T",
        output_kind="T",
        family="t",
    )


def triorthogonal_t_level(k: int) -> ProtocolSpec:
    """T distillation on the k-output triorthogonal family: 3k+8 inputs for
    k outputs, error (3k+1) p^2 per output."""
    _check_k(k)
    return ProtocolSpec(
        name=f"tri-t-k{k}",
        inputs_per_output=(3 * k + 8) / k,
        error_poly=((3.0 * k + 1.0, 2),),
        success_poly=((1.0, 0), (-(3.0 * k + 8.0), 1)),
        input_kind="T",
        output_kind="T",
        family="t",
        param_k=k,
    )


def jones_toffoli() -> ProtocolSpec:
    """Toffoli-state preparation from eight T states, error 28 p^2."""
    return ProtocolSpec(
        name="jones-toffoli",
        inputs_per_output=8.0,
        error_poly=((28.0, 2),),
        success_poly=((1.0, 0), (-8.0, 1)),
        input_kind="T",
        output_kind="toffoli",
        family="jones",
    )


def triorthogonal_top_level(k: int) -> ProtocolSpec:
    """Toffoli-to-Toffoli distillation through the k-output triorthogonal
    code: 3k+8 input states for k outputs, each input error p split evenly
    over the seven error classes, giving 7 (3k+1) (p/7)^2 per output.

    The even split is an assumption about the inputs, valid for Toffoli
    states built from independently failing T states but not for this
    protocol's own outputs (the surviving second-order events land on a few
    specific classes).  The distinct output kind keeps such outputs from
    being fed back in.
    """
    _check_k(k)
    return ProtocolSpec(
        name=f"tri-toffoli-k{k}",
        inputs_per_output=(3 * k + 8) / k,
        error_poly=(((3.0 * k + 1.0) / 7.0, 2),),
        success_poly=((1.0, 0), (-(3.0 * k + 8.0), 1)),
        input_kind="toffoli",
        output_kind="toffoli_distilled",
        family="triortho",
        param_k=k,
    )


def default_menu(include_triorthogonal: bool = True) -> list[ProtocolSpec]:
    """The built-in menu: 15-to-1, the T-level triorthogonal family, the
    eight-T Toffoli protocol, and optionally the Toffoli-level family."""
    menu = [fifteen_to_one()]
    menu.extend(triorthogonal_t_level(k) for k in range(2, 101, 2))
    menu.append(jones_toffoli())
    if include_triorthogonal:
        menu.extend(triorthogonal_top_level(k) for k in range(2, 101, 2))
    return menu


@dataclass(frozen=True)
class CostQuery:
    """What to optimize: reach ``target_error`` per output Toffoli state
    starting from physical T states at ``physical_t_error``.

    ``k_range`` restricts which parameterized menu entries participate;
    entries without a k always do.
    """

    target_error: float
    physical_t_error: float
    menu: tuple[ProtocolSpec, ...]
    max_depth: int = 4
    required_final_family: Optional[str] = None
    k_range: tuple[int, ...] = tuple(range(2, 101, 2))

    def __post_init__(self) -> None:
        if not 0.0 < self.physical_t_error < 1.0:
            raise ValueError("physical_t_error must be in (0, 1)")
        if not 0.0 < self.target_error <= self.physical_t_error:
            raise ValueError("target_error must be in (0, physical_t_error]")
        if not self.menu:
            raise ValueError("menu is empty")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if not self.k_range:
            raise ValueError("k_range is empty")

    def active_menu(self) -> tuple[ProtocolSpec, ...]:
        allowed = set(self.k_range)
        return tuple(
            spec
            for spec in self.menu
            if spec.param_k is None or spec.param_k in allowed
        )


@dataclass(frozen=True)
class StackLevel:
    spec: ProtocolSpec
    input_error: float
    output_error: float
    success_prob: float


@dataclass(frozen=True)
class CostResult:
    expected_t_count: float
    achieved_error: float
    levels: tuple[StackLevel, ...]

    @property
    def k_star(self) -> Optional[int]:
        return self.levels[-1].spec.param_k if self.levels else None

    def describe(self) -> str:
        chain = " -> ".join(level.spec.name for level in self.levels)
        return f"{chain}: {self.expected_t_count:.4f} T, error {self.achieved_error:.3e}"


class InfeasibleTargetError(Exception):
    """No stack within the depth bound reaches the target error."""

    def __init__(self, message: str, best_error: Optional[float] = None) -> None:
        super().__init__(message)
        self.best_error = best_error


@dataclass(frozen=True)
class _State:
    kind: str
    error: float
    cost: float
    levels: tuple[StackLevel, ...]


def _prune(states: list[_State]) -> list[_State]:
    # Keep the Pareto frontier in (error, cost), deterministically.
    ordered = sorted(states, key=lambda s: (s.error, s.cost, len(s.levels)))
    kept: list[_State] = []
    best_cost = math.inf
    for st in ordered:
        if st.cost < best_cost:
            kept.append(st)
            best_cost = st.cost
    return kept


def optimize_stack(query: CostQuery) -> CostResult:
    """Cheapest kind-consistent stack producing Toffoli states at or below
    the target error.

    Expected cost multiplies input counts and divides by success
    probabilities level by level; branches whose success probability is not
    positive are discarded.  Raises InfeasibleTargetError when nothing
    within the depth bound reaches the target.
    """
    menu = query.active_menu()
    if not menu:
        raise ValueError("k_range excludes every menu entry")
    start = _State(kind="T", error=query.physical_t_error, cost=1.0, levels=())
    frontier: dict[str, list[_State]] = {"T": [start]}
    fresh = [start]
    candidates: list[_State] = []
    best_error: Optional[float] = None

    for _ in range(query.max_depth):
        expanded: list[_State] = []
        for st in fresh:
            for spec in menu:
                if spec.input_kind != st.kind:
                    continue
                success = spec.success_prob(st.error)
                if success <= 0.0:
                    continue
                error = spec.output_error(st.error)
                cost = st.cost * spec.inputs_per_output / success
                expanded.append(
                    _State(
                        kind=spec.output_kind,
                        error=error,
                        cost=cost,
                        levels=st.levels
                        + (
                            StackLevel(
                                spec=spec,
                                input_error=st.error,
                                output_error=error,
                                success_prob=success,
                            ),
                        ),
                    )
                )
        fresh = []
        for st in expanded:
            if st.kind in DELIVERABLE_KINDS:
                if (
                    query.required_final_family is None
                    or st.levels[-1].spec.family == query.required_final_family
                ):
                    candidates.append(st)
                    if best_error is None or st.error < best_error:
                        best_error = st.error
        by_kind: dict[str, list[_State]] = {}
        for st in expanded:
            by_kind.setdefault(st.kind, []).append(st)
        for kind, states in by_kind.items():
            merged = _prune(frontier.get(kind, []) + states)
            survivors = set(id(s) for s in merged)
            fresh.extend(s for s in states if id(s) in survivors)
            frontier[kind] = merged
        if not fresh:
            break

    feasible = [st for st in candidates if st.error <= query.target_error]
    if not feasible:
        raise InfeasibleTargetError(
            f"no stack of depth <= {query.max_depth} reaches {query.target_error:g}"
            + (f" (best achieved {best_error:g})" if best_error is not None else ""),
            best_error=best_error,
        )
    best = min(
        feasible,
        key=lambda s: (s.cost, len(s.levels), tuple(lv.spec.name for lv in s.levels)),
    )
    return CostResult(
        expected_t_count=best.cost, achieved_error=best.error, levels=best.levels
    )


CSV_HEADER = "target_error,jones,jones_double,triortho_k_opt,k_star"


@dataclass(frozen=True)
class CurveRow:
    target_error: float
    jones: Optional[float]
    jones_double: Optional[float]
    triortho_k_opt: Optional[float]
    k_star: Optional[int]


def _family_cost(
    menu: Sequence[ProtocolSpec],
    family: str,
    target: float,
    physical: float,
    max_depth: int,
) -> Optional[CostResult]:
    if family == "triortho":
        # The final triorthogonal level may sit on any Toffoli source.
        chosen = tuple(menu)
    else:
        chosen = tuple(
            spec
            for spec in menu
            if (spec.input_kind == "T" and spec.output_kind == "T") or spec.family == family
        )
    if not any(spec.family == family for spec in chosen):
        return None
    try:
        return optimize_stack(
            CostQuery(
                target_error=target,
                physical_t_error=physical,
                menu=chosen,
                max_depth=max_depth,
                required_final_family=family,
            )
        )
    except InfeasibleTargetError:
        return None


def cost_curve(
    menu: Sequence[ProtocolSpec],
    targets: Sequence[float],
    physical_t_error: float,
    max_depth: int = 4,
) -> list[CurveRow]:
    """Per-family optimum cost at each target error.

    The jones and jones_double columns restrict the menu to T-level
    protocols plus that single Toffoli family; the triortho column allows
    any Toffoli source below a final triorthogonal level and reports its
    k.  Missing families and infeasible targets leave blank cells.
    """
    rows = []
    for target in targets:
        jones = _family_cost(menu, "jones", target, physical_t_error, max_depth)
        double = _family_cost(menu, "jones_double", target, physical_t_error, max_depth)
        tri = _family_cost(menu, "triortho", target, physical_t_error, max_depth)
        rows.append(
            CurveRow(
                target_error=target,
                jones=jones.expected_t_count if jones else None,
                jones_double=double.expected_t_count if double else None,
                triortho_k_opt=tri.expected_t_count if tri else None,
                k_star=tri.k_star if tri else None,
            )
        )
    return rows


def render_cost_curve_csv(rows: Sequence[CurveRow]) -> str:
    def cell(value) -> str:
        return "" if value is None else repr(value)

    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                (
                    repr(row.target_error),
                    cell(row.jones),
                    cell(row.jones_double),
                    cell(row.triortho_k_opt),
                    cell(row.k_star) if row.k_star is None else str(row.k_star),
                )
            )
        )
    return "\n".join(lines) + "\n"


def menu_to_json(menu: Sequence[ProtocolSpec]) -> list[dict]:
    out = []
    for spec in menu:
        entry = {
            "name": spec.name,
            "inputs_per_output": spec.inputs_per_output,
            "error_poly": [[c, d] for c, d in spec.error_poly],
            "success_poly": [[c, d] for c, d in spec.success_poly],
            "kind": f"{spec.input_kind}->{spec.output_kind}",
        }
        if spec.family:
            entry["family"] = spec.family
        if spec.param_k is not None:
            entry["k"] = spec.param_k
        out.append(entry)
    return out


def menu_from_json(data: Sequence[dict]) -> list[ProtocolSpec]:
    menu = []
    for entry in data:
        try:
            kind = entry["kind"]
            if "->" not in kind:
                raise ValueError(f"kind must look like 'T->toffoli', got {kind!r}")
            input_kind, output_kind = kind.split("->", 1)
            menu.append(
                ProtocolSpec(
                    name=str(entry["name"]),
                    inputs_per_output=float(entry["inputs_per_output"]),
                    error_poly=tuple((float(c), int(d)) for c, d in entry["error_poly"]),
                    success_poly=tuple((float(c), int(d)) for c, d in entry["success_poly"]),
                    input_kind=input_kind,
                    output_kind=output_kind,
                    family=str(entry.get("family", "")),
                    param_k=int(entry["k"]) if "k" in entry else None,
                )
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed menu entry: {exc!r}") from exc
    return menu
