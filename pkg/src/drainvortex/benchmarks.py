"""Benchmark catalog: classical test functions, constrained engineering
designs, penalty wrapping, and a plugin registry.

Objectives take a single point (shape (dim,)) and return a float. Constraints
use the g(x) <= 0 convention. Noisy objectives additionally take the run's
RngStream so noise stays inside the determinism contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .rng import RngStream

Array = np.ndarray

# violations are clipped here so boundary singularities (inf/nan from a
# constraint) cannot poison fitness comparisons
_VIOLATION_CAP = 1e30

DEFAULT_PENALTY_COEFF = 1e9
DEFAULT_FEASIBILITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A bound-constrained minimization problem, optionally with
    inequality constraints g(x) <= 0 and a known optimum for error
    reporting."""

    name: str
    dim: int
    lower: Array
    upper: Array
    objective: Callable
    f_true: Optional[float] = None
    constraints: tuple = ()
    noisy: bool = False
    tags: tuple = ()
    # original objective when this spec is a penalty wrap of a constrained one
    raw_objective: Optional[Callable] = None

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != (self.dim,) or upper.shape != (self.dim,):
            raise ValueError(
                f"{self.name}: bounds must have shape ({self.dim},), "
                f"got {lower.shape} and {upper.shape}"
            )
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ValueError(f"{self.name}: bounds must be finite")
        if not (lower < upper).all():
            raise ValueError(f"{self.name}: need lower < upper componentwise")
        if self.dim < 1:
            raise ValueError(f"{self.name}: dim must be >= 1")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def constrained(self) -> bool:
        return len(self.constraints) > 0


def evaluate(problem: ProblemSpec, points: Array, rng: RngStream) -> Array:
    """Evaluate rows of `points`; noisy objectives draw from `rng` per row."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(pts))
    if problem.noisy:
        for i, x in enumerate(pts):
            out[i] = problem.objective(x, rng)
    else:
        for i, x in enumerate(pts):
            out[i] = problem.objective(x)
    return out


# ---------------------------------------------------------------------------
# scalable classical functions (any dimension)
# ---------------------------------------------------------------------------


def _sphere(x):
    return float(np.sum(x * x))


def _abs_sum_prod(x):
    a = np.abs(x)
    return float(np.sum(a) + np.prod(a))


def _rotated_hyper_ellipsoid(x):
    return float(np.sum(np.cumsum(x) ** 2))


def _max_abs(x):
    return float(np.max(np.abs(x)))


def _rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def _step(x):
    return float(np.sum(np.floor(x + 0.5) ** 2))


def _noisy_quartic(x, rng: RngStream):
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x**4) + rng.random())


_SCHWEFEL_PER_DIM = -418.9828872724338


def _schwefel(x):
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def _rastrigin(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def _ackley(x):
    d = x.size
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / d))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / d)
        + 20.0
        + np.e
    )


def _griewank(x):
    i = np.arange(1, x.size + 1)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _bound_penalty(x, a, k, m):
    # u(x, a, k, m): zero inside [-a, a], polynomial wall outside
    out = np.zeros_like(x)
    hi = x > a
    lo = x < -a
    out[hi] = k * (x[hi] - a) ** m
    out[lo] = k * (-x[lo] - a) ** m
    return float(np.sum(out))


def _penalized_sine(x):
    d = x.size
    y = 1.0 + (x + 1.0) / 4.0
    core = (
        10.0 * np.sin(np.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(np.pi / d * core + _bound_penalty(x, 10.0, 100.0, 4))


def _penalized_flats(x):
    core = (
        np.sin(3.0 * np.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2)
    )
    return float(0.1 * core + _bound_penalty(x, 5.0, 100.0, 4))


# id -> (objective, lower, upper, f_true or None for per-dim, noisy)
_SCALABLE = {
    "F1": (_sphere, -100.0, 100.0, 0.0, False),
    "F2": (_abs_sum_prod, -10.0, 10.0, 0.0, False),
    "F3": (_rotated_hyper_ellipsoid, -100.0, 100.0, 0.0, False),
    "F4": (_max_abs, -100.0, 100.0, 0.0, False),
    "F5": (_rosenbrock, -30.0, 30.0, 0.0, False),
    "F6": (_step, -100.0, 100.0, 0.0, False),
    "F7": (_noisy_quartic, -1.28, 1.28, 0.0, True),
    "F8": (_schwefel, -500.0, 500.0, None, False),
    "F9": (_rastrigin, -5.12, 5.12, 0.0, False),
    "F10": (_ackley, -32.0, 32.0, 0.0, False),
    "F11": (_griewank, -600.0, 600.0, 0.0, False),
    "F12": (_penalized_sine, -50.0, 50.0, 0.0, False),
    "F13": (_penalized_flats, -50.0, 50.0, 0.0, False),
}

SCALABLE_IDS = tuple(_SCALABLE)


def classical_scalable(fid: str, dim: int) -> ProblemSpec:
    """Scalable classical function F1..F13 at the requested dimension."""
    if fid not in _SCALABLE:
        raise KeyError(f"unknown scalable function id {fid!r}")
    if dim < 2:
        raise ValueError(f"{fid}: dim must be >= 2, got {dim}")
    fn, lo, hi, f_true, noisy = _SCALABLE[fid]
    if fid == "F8":
        f_true = _SCHWEFEL_PER_DIM * dim
    return ProblemSpec(
        name=fid,
        dim=dim,
        lower=np.full(dim, lo),
        upper=np.full(dim, hi),
        objective=fn,
        f_true=f_true,
        noisy=noisy,
        tags=("classical", "scalable"),
    )


# ---------------------------------------------------------------------------
# fixed-dimension classical functions
# ---------------------------------------------------------------------------

_FOXHOLE_A = np.array(
    [
        [-32, -16, 0, 16, 32] * 5,
        [-32] * 5 + [-16] * 5 + [0] * 5 + [16] * 5 + [32] * 5,
    ],
    dtype=float,
)


def _foxholes(x):
    denom = np.arange(1, 26) + np.sum((x[:, None] - _FOXHOLE_A) ** 6, axis=0)
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / denom)))


_KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
_KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def _kowalik(x):
    b = _KOWALIK_B
    model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3])
    return float(np.sum((_KOWALIK_A - model) ** 2))


def _six_hump_camel(x):
    x1, x2 = x
    return float(
        4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4
    )


def _branin(x):
    x1, x2 = x
    return float(
        (x2 - 5.1 / (4.0 * np.pi**2) * x1**2 + 5.0 / np.pi * x1 - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1)
        + 10.0
    )


def _goldstein_price(x):
    x1, x2 = x
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return float(a * b)


_HARTMANN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN3_A = np.array([[3, 10, 30], [0.1, 10, 35], [3, 10, 30], [0.1, 10, 35]], dtype=float)
_HARTMANN3_P = 1e-4 * np.array(
    [[3689, 1170, 2673], [4699, 4387, 7470], [1091, 8732, 5547], [381, 5743, 8828]],
    dtype=float,
)
_HARTMANN6_A = np.array(
    [
        [10, 3, 17, 3.5, 1.7, 8],
        [0.05, 10, 17, 0.1, 8, 14],
        [3, 3.5, 1.7, 10, 17, 8],
        [17, 8, 0.05, 10, 0.1, 14],
    ],
    dtype=float,
)
_HARTMANN6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ],
    dtype=float,
)


def _hartmann3(x):
    inner = np.sum(_HARTMANN3_A * (x - _HARTMANN3_P) ** 2, axis=1)
    return float(-np.sum(_HARTMANN_ALPHA * np.exp(-inner)))


def _hartmann6(x):
    inner = np.sum(_HARTMANN6_A * (x - _HARTMANN6_P) ** 2, axis=1)
    return float(-np.sum(_HARTMANN_ALPHA * np.exp(-inner)))


_SHEKEL_C = np.array(
    [
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
    ],
    dtype=float,
)
_SHEKEL_B = 0.1 * np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5], dtype=float)


def _shekel(m):
    def fn(x):
        d = np.sum((x[:, None] - _SHEKEL_C[:, :m]) ** 2, axis=0) + _SHEKEL_B[:m]
        return float(-np.sum(1.0 / d))

    return fn


# id -> (objective, dim, lower, upper, f_true)
_FIXED = {
    "F14": (_foxholes, 2, [-65.536] * 2, [65.536] * 2, 0.998003837794450),
    "F15": (_kowalik, 4, [-5.0] * 4, [5.0] * 4, 0.0003074859878056),
    "F16": (_six_hump_camel, 2, [-5.0] * 2, [5.0] * 2, -1.0316284534898776),
    "F17": (_branin, 2, [-5.0, 0.0], [10.0, 15.0], 0.39788735772973816),
    "F18": (_goldstein_price, 2, [-2.0] * 2, [2.0] * 2, 3.0),
    "F19": (_hartmann3, 3, [0.0] * 3, [1.0] * 3, -3.8627797873326633),
    "F20": (_hartmann6, 6, [0.0] * 6, [1.0] * 6, -3.322368011415515),
    "F21": (_shekel(5), 4, [0.0] * 4, [10.0] * 4, -10.153199679058229),
    "F22": (_shekel(7), 4, [0.0] * 4, [10.0] * 4, -10.402915336777745),
    "F23": (_shekel(10), 4, [0.0] * 4, [10.0] * 4, -10.536443153483534),
}

FIXED_IDS = tuple(_FIXED)


def classical_fixed(fid: str) -> ProblemSpec:
    """Fixed-dimension classical function F14..F23."""
    if fid not in _FIXED:
        raise KeyError(f"unknown fixed function id {fid!r}")
    fn, dim, lo, hi, f_true = _FIXED[fid]
    return ProblemSpec(
        name=fid,
        dim=dim,
        lower=np.array(lo),
        upper=np.array(hi),
        objective=fn,
        f_true=f_true,
        tags=("classical", "fixed"),
    )


# ---------------------------------------------------------------------------
# constrained engineering designs (g(x) <= 0)
# ---------------------------------------------------------------------------


def _truss_objective(x):
    return float((2.0 * math.sqrt(2.0) * x[0] + x[1]) * 100.0)


def _truss_constraints():
    P, sigma = 2.0, 2.0
    rt2 = math.sqrt(2.0)

    def g1(x):
        return (rt2 * x[0] + x[1]) / (rt2 * x[0] ** 2 + 2.0 * x[0] * x[1]) * P - sigma

    def g2(x):
        return x[1] / (rt2 * x[0] ** 2 + 2.0 * x[0] * x[1]) * P - sigma

    def g3(x):
        return 1.0 / (rt2 * x[1] + x[0]) * P - sigma

    return (g1, g2, g3)


def _spring_objective(x):
    d, D, n = x
    return float((n + 2.0) * D * d * d)


def _spring_constraints():
    def g1(x):
        d, D, n = x
        return 1.0 - D**3 * n / (71785.0 * d**4)

    def g2(x):
        d, D, n = x
        return (4.0 * D**2 - d * D) / (12566.0 * (D * d**3 - d**4)) + 1.0 / (
            5108.0 * d**2
        ) - 1.0

    def g3(x):
        d, D, n = x
        return 1.0 - 140.45 * d / (D**2 * n)

    def g4(x):
        d, D, n = x
        return (D + d) / 1.5 - 1.0

    return (g1, g2, g3, g4)


def _weld_objective(x):
    x1, x2, x3, x4 = x
    return float(1.10471 * x1**2 * x2 + 0.04811 * x3 * x4 * (14.0 + x2))


def _weld_constraints():
    P, L, E, G = 6000.0, 14.0, 30e6, 12e6
    tau_max, sigma_max, delta_max = 13600.0, 30000.0, 0.25

    def tau(x):
        x1, x2, x3, _ = x
        t1 = P / (math.sqrt(2.0) * x1 * x2)
        M = P * (L + x2 / 2.0)
        R = math.sqrt(x2**2 / 4.0 + ((x1 + x3) / 2.0) ** 2)
        J = 2.0 * math.sqrt(2.0) * x1 * x2 * (x2**2 / 12.0 + ((x1 + x3) / 2.0) ** 2)
        t2 = M * R / J
        return math.sqrt(t1**2 + 2.0 * t1 * t2 * x2 / (2.0 * R) + t2**2)

    def g1(x):
        return tau(x) - tau_max

    def g2(x):
        return 6.0 * P * L / (x[3] * x[2] ** 2) - sigma_max

    def g3(x):
        return x[0] - x[3]

    def g4(x):
        return 0.10471 * x[0] ** 2 + 0.04811 * x[2] * x[3] * (14.0 + x[1]) - 5.0

    def g5(x):
        return 0.125 - x[0]

    def g6(x):
        return 4.0 * P * L**3 / (E * x[2] ** 3 * x[3]) - delta_max

    def g7(x):
        x3, x4 = x[2], x[3]
        pc = (
            4.013 * E * math.sqrt(x3**2 * x4**6 / 36.0) / L**2
            * (1.0 - x3 / (2.0 * L) * math.sqrt(E / (4.0 * G)))
        )
        return P - pc

    return (g1, g2, g3, g4, g5, g6, g7)


def _vessel_objective(x):
    x1, x2, x3, x4 = x
    return float(
        0.6224 * x1 * x3 * x4
        + 1.7781 * x2 * x3**2
        + 3.1661 * x1**2 * x4
        + 19.84 * x1**2 * x3
    )


def _vessel_constraints():
    def g1(x):
        return -x[0] + 0.0193 * x[2]

    def g2(x):
        return -x[1] + 0.00954 * x[2]

    def g3(x):
        return -math.pi * x[2] ** 2 * x[3] - 4.0 / 3.0 * math.pi * x[2] ** 3 + 1296000.0

    def g4(x):
        return x[3] - 240.0

    return (g1, g2, g3, g4)


def _reducer_objective(x):
    x1, x2, x3, x4, x5, x6, x7 = x
    return float(
        0.7854 * x1 * x2**2 * (3.3333 * x3**2 + 14.9334 * x3 - 43.0934)
        - 1.508 * x1 * (x6**2 + x7**2)
        + 7.4777 * (x6**3 + x7**3)
        + 0.7854 * (x4 * x6**2 + x5 * x7**2)
    )


def _reducer_constraints():
    def g1(x):
        return 27.0 / (x[0] * x[1] ** 2 * x[2]) - 1.0

    def g2(x):
        return 397.5 / (x[0] * x[1] ** 2 * x[2] ** 2) - 1.0

    def g3(x):
        return 1.93 * x[3] ** 3 / (x[1] * x[2] * x[5] ** 4) - 1.0

    def g4(x):
        return 1.93 * x[4] ** 3 / (x[1] * x[2] * x[6] ** 4) - 1.0

    def g5(x):
        return (
            math.sqrt((745.0 * x[3] / (x[1] * x[2])) ** 2 + 16.9e6)
            / (110.0 * x[5] ** 3)
            - 1.0
        )

    def g6(x):
        return (
            math.sqrt((745.0 * x[4] / (x[1] * x[2])) ** 2 + 157.5e6)
            / (85.0 * x[6] ** 3)
            - 1.0
        )

    def g7(x):
        return x[1] * x[2] / 40.0 - 1.0

    def g8(x):
        return 5.0 * x[1] / x[0] - 1.0

    def g9(x):
        return x[0] / (12.0 * x[1]) - 1.0

    def g10(x):
        return (1.5 * x[5] + 1.9) / x[3] - 1.0

    def g11(x):
        return (1.1 * x[6] + 1.9) / x[4] - 1.0

    return (g1, g2, g3, g4, g5, g6, g7, g8, g9, g10, g11)


# name -> (objective, constraints builder, lower, upper)
_ENGINEERING = {
    "three_bar_truss": (_truss_objective, _truss_constraints, [0.0, 0.0], [1.0, 1.0]),
    "tension_spring": (
        _spring_objective,
        _spring_constraints,
        [0.05, 0.25, 2.0],
        [2.0, 1.3, 15.0],
    ),
    "welded_beam": (
        _weld_objective,
        _weld_constraints,
        [0.1, 0.1, 0.1, 0.1],
        [2.0, 10.0, 10.0, 2.0],
    ),
    "pressure_vessel": (
        _vessel_objective,
        _vessel_constraints,
        [0.0, 0.0, 10.0, 10.0],
        [99.0, 99.0, 200.0, 240.0],
    ),
    "speed_reducer": (
        _reducer_objective,
        _reducer_constraints,
        [2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0],
        [3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5],
    ),
}

ENGINEERING_NAMES = tuple(_ENGINEERING)


def engineering_problem(name: str) -> ProblemSpec:
    """Constrained engineering design in its standard formulation."""
    if name not in _ENGINEERING:
        raise KeyError(f"unknown engineering problem {name!r}")
    fn, cons, lo, hi = _ENGINEERING[name]
    lo = np.array(lo)
    return ProblemSpec(
        name=name,
        dim=lo.size,
        lower=lo,
        upper=np.array(hi),
        objective=fn,
        constraints=cons(),
        tags=("engineering", "constrained"),
    )


# ---------------------------------------------------------------------------
# penalty wrap and feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PenaltySpec:
    """Static penalty: objective + coefficient * sum of positive violations."""

    coefficient: float = DEFAULT_PENALTY_COEFF

    def __post_init__(self):
        if not (self.coefficient > 0 and math.isfinite(self.coefficient)):
            raise ValueError(f"penalty coefficient must be positive finite")


def _violation_amounts(constraints, x):
    # non-finite constraint values count as maximal violation so boundary
    # singularities cannot poison comparisons
    out = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for g in constraints:
            v = float(g(x))
            if math.isnan(v):
                v = math.inf
            out.append(min(max(v, 0.0), _VIOLATION_CAP))
    return out


def penalize(spec: ProblemSpec, penalty: PenaltySpec = PenaltySpec()) -> ProblemSpec:
    """Wrap a constrained spec so optimizers see a plain objective.

    Feasible points keep their raw objective value exactly; each unit of
    violation adds `penalty.coefficient`. Constraints stay attached for
    feasibility reporting.
    """
    if not spec.constrained:
        raise ValueError(f"{spec.name}: penalize requires a constrained problem")
    raw = spec.objective
    constraints = spec.constraints
    coeff = penalty.coefficient

    def penalized(x):
        total = sum(_violation_amounts(constraints, x))
        return raw(x) + coeff * total

    return replace(
        spec,
        objective=penalized,
        raw_objective=raw,
        tags=spec.tags + ("penalized",),
    )


def feasibility(x, spec: ProblemSpec, tol: float = DEFAULT_FEASIBILITY_TOL):
    """(feasible, max_violation) for a point under a constrained spec."""
    if not spec.constrained:
        raise ValueError(f"{spec.name}: feasibility requires constraints")
    worst = max(_violation_amounts(spec.constraints, np.asarray(x, dtype=float)))
    return worst <= tol, worst


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_PLUGINS: dict = {}


def register_plugin(spec: ProblemSpec) -> None:
    """Add a user problem to the registry; catalog names are reserved."""
    name = spec.name
    if name in _SCALABLE or name in _FIXED or name in _ENGINEERING:
        raise ValueError(f"{name!r} collides with a catalog problem")
    if name in _PLUGINS:
        raise ValueError(f"plugin {name!r} is already registered")
    _PLUGINS[name] = spec


def clear_plugins() -> None:
    _PLUGINS.clear()


def get_problem(name: str, dim: Optional[int] = None) -> ProblemSpec:
    """Resolve a problem by name; scalable ids require `dim`."""
    if name in _SCALABLE:
        if dim is None:
            raise ValueError(f"{name} is scalable: a dimension is required")
        return classical_scalable(name, dim)
    if name in _FIXED:
        spec = classical_fixed(name)
    elif name in _ENGINEERING:
        spec = engineering_problem(name)
    elif name in _PLUGINS:
        spec = _PLUGINS[name]
    else:
        raise KeyError(f"unknown problem {name!r}")
    if dim is not None and dim != spec.dim:
        raise ValueError(f"{name} has fixed dimension {spec.dim}, got {dim}")
    return spec


def catalog_names() -> list:
    """All problem names: scalable, fixed, engineering, then plugins."""
    return list(SCALABLE_IDS) + list(FIXED_IDS) + list(ENGINEERING_NAMES) + sorted(_PLUGINS)
