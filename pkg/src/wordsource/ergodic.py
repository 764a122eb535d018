"""Time averages, empirical components, and AMS / ergodicity diagnostics.

Bounded measurable functions are represented by finite-order cylinder
functions g(w) = table[w_1 .. w_k]; this subclass generates the cylinder
sigma-field and is enough to separate the hypotheses of interest at desk
scale. All convergence verdicts are finite-horizon proxies: a trace of
partial averages whose last-quartile spread falls under a tolerance. A small
battery of such verdicts is evidence for, never a proof of, the almost-sure
statements they track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, ResourceError
from .sources import SourceModel, as_symbols, seed_sequence

MAX_CYLINDER_ORDER = 12


def _window_codes(arr, alphabet_size, order):
    if arr.size < order:
        return np.empty(0, dtype=np.int64)
    win = np.lib.stride_tricks.sliding_window_view(arr, order)
    powers = alphabet_size ** np.arange(order - 1, -1, -1, dtype=np.int64)
    return win @ powers


@dataclass(frozen=True)
class CylinderFunction:
    """g(w) = table[w_1 .. w_k], a bounded function of the first k symbols."""

    alphabet_size: int
    order: int
    table: np.ndarray

    def __post_init__(self):
        if self.order < 1 or self.order > MAX_CYLINDER_ORDER:
            raise DomainError(f"order must be in 1..{MAX_CYLINDER_ORDER}")
        table = np.asarray(self.table, dtype=float).reshape(-1)
        if table.size != self.alphabet_size**self.order:
            raise DomainError(
                f"table must cover all {self.alphabet_size**self.order} windows"
            )
        object.__setattr__(self, "table", table)

    @property
    def bound(self):
        return float(np.abs(self.table).max())

    @classmethod
    def indicator(cls, alphabet_size, pattern):
        """Indicator of the cylinder set [pattern]."""
        pattern = tuple(int(s) for s in pattern)
        order = len(pattern)
        table = np.zeros(alphabet_size**order)
        code = 0
        for s in pattern:
            if s < 0 or s >= alphabet_size:
                raise DomainError(f"pattern symbol {s} outside the alphabet")
            code = code * alphabet_size + s
        table[code] = 1.0
        return cls(alphabet_size=alphabet_size, order=order, table=table)

    @classmethod
    def constant(cls, alphabet_size, value):
        return cls(alphabet_size=alphabet_size, order=1,
                   table=np.full(alphabet_size, float(value)))

    def values_along(self, symbols):
        """g evaluated at every window position of a finite sequence."""
        arr = as_symbols(symbols, self.alphabet_size)
        return self.table[_window_codes(arr, self.alphabet_size, self.order)]


@dataclass(frozen=True)
class ConvergenceVerdict:
    """A partial-average trace plus its finite-horizon convergence verdict.

    ``spread`` is max minus min over the last quartile of the trace;
    ``converged`` means spread < tolerance. ``stderr2`` carries a two-sigma
    sampling error bar when the trace was estimated from a path ensemble,
    and is None for exact traces.
    """

    checkpoints: np.ndarray
    partial_averages: np.ndarray
    final: float
    spread: float
    converged: bool
    tolerance: float
    stderr2: float | None = None


def _verdict(checkpoints, partials, tol, stderr2=None):
    partials = np.asarray(partials, dtype=float)
    vals = partials.tolist()
    if len(vals) == 1:
        spread = 0.0
    else:
        tail = vals[-max(2, -(-len(vals) // 4)):]
        spread = float(max(tail) - min(tail))
    return ConvergenceVerdict(
        checkpoints=np.asarray(checkpoints, dtype=np.int64),
        partial_averages=partials,
        final=float(partials[-1]),
        spread=spread,
        converged=spread < tol,
        tolerance=tol,
        stderr2=stderr2,
    )


def default_checkpoints(horizon, count=32):
    """Evenly spaced horizons ending exactly at ``horizon``.

    Even spacing keeps the last-quartile convergence window anchored to the
    top quarter of the horizon range.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    pts = np.unique(np.linspace(1, horizon, num=min(count, horizon)).astype(np.int64))
    pts[-1] = horizon
    return pts


def time_average(symbols, g, checkpoints, tol=1e-2):
    """Partial averages (1/n) sum_{i<n} g(w at window i) at each checkpoint."""
    arr = as_symbols(symbols, g.alphabet_size)
    cps = np.asarray(sorted(int(c) for c in checkpoints), dtype=np.int64)
    if cps.size == 0 or cps[0] < 1:
        raise DomainError("checkpoints must be positive")
    if cps[-1] + g.order - 1 > arr.size:
        raise RangeError(
            f"sequence of length {arr.size} cannot supply {cps[-1]} windows of "
            f"order {g.order}"
        )
    vals = g.values_along(arr)
    csum = np.cumsum(vals)
    partials = csum[cps - 1] / cps
    return _verdict(cps, partials, tol)


@dataclass(frozen=True)
class SpreadResult:
    """Cross-path dispersion of final time averages."""

    spread: float
    finals: np.ndarray


def ergodicity_spread(measure, g, paths, horizon, seed):
    """Standard deviation across paths of the final time average of g.

    Shrinks with horizon for ergodic measures; stays bounded away from zero
    for mixtures whose components give g different means (the negative
    control). ``measure`` may be a source model or an induced measure; both
    sample seeded paths.
    """
    if paths < 2:
        raise DomainError("need at least two paths")
    children = seed_sequence(seed).spawn(paths)
    finals = np.empty(paths)
    need = horizon + g.order - 1
    for idx in range(paths):
        ps = measure.sample_path(need, children[idx])
        vals = g.values_along(ps.symbols)
        finals[idx] = vals[:horizon].mean()
    return SpreadResult(spread=float(finals.std()), finals=finals)


def ams_diagnostic(measure, cylinders, horizon, checkpoints=None, tol=1e-2,
                   exact_cap=10, ensemble_paths=100, seed=0):
    """Cesaro traces of shifted cylinder probabilities, one verdict per cylinder.

    Source models are evaluated exactly at every checkpoint. Induced measures
    are evaluated exactly while the enumeration stays under ``exact_cap``
    leading symbols and by a seeded path ensemble beyond it, with a 2-sigma
    error bar attached to the verdict.
    """
    if horizon < 100:
        raise DomainError("horizon must be >= 100")
    if checkpoints is None:
        checkpoints = default_checkpoints(horizon)
    cps = np.asarray(sorted(int(c) for c in checkpoints), dtype=np.int64)
    out = []
    for cyl in cylinders:
        arr = as_symbols(cyl, measure.alphabet_size)
        if isinstance(measure, SourceModel):
            trace = measure._shifted_probability_trace(arr, int(cps[-1]))
            csum = np.cumsum(trace)
            partials = csum[cps - 1] / cps
            out.append(_verdict(cps, partials, tol))
        else:
            out.append(_induced_cesaro(measure, arr, cps, tol, exact_cap,
                                       ensemble_paths, seed))
    return out


def _induced_cesaro(measure, arr, cps, tol, exact_cap, ensemble_paths, seed):
    exact_cps = cps[cps <= exact_cap]
    partials = []
    if exact_cps.size:
        shifted = [
            measure.shifted_cylinder_probability(arr, i) for i in range(int(exact_cps[-1]))
        ]
        csum = np.cumsum(shifted)
        partials.extend((csum[exact_cps - 1] / exact_cps).tolist())
    big_cps = cps[cps > exact_cap]
    stderr2 = None
    if big_cps.size:
        horizon = int(big_cps[-1])
        children = seed_sequence(seed).spawn(ensemble_paths)
        k = arr.size
        per_path = np.empty((ensemble_paths, big_cps.size))
        g_code_powers = measure.alphabet_size ** np.arange(k - 1, -1, -1, dtype=np.int64)
        target = int(arr @ g_code_powers)
        for idx in range(ensemble_paths):
            ps = measure.sample_path(horizon + k - 1, children[idx])
            codes = _window_codes(ps.symbols, measure.alphabet_size, k)
            hits = np.cumsum(codes == target)
            per_path[idx] = hits[big_cps - 1] / big_cps
        means = per_path.mean(axis=0)
        partials.extend(means.tolist())
        stderr2 = float(2.0 * per_path[:, -1].std(ddof=1) / math.sqrt(ensemble_paths))
    return _verdict(cps, partials, tol, stderr2=stderr2)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Relative cylinder frequencies of one sequence, up to a maximum order.

    Realises the per-sequence stationary measure construction: the table of
    order k holds the frequency of every k-tuple among the first ``horizon``
    windows. Counts share the window range, so marginalisation is exact
    integer arithmetic.
    """

    alphabet_size: int
    max_order: int
    horizon: int
    tables: tuple

    def frequency(self, pattern):
        pattern = tuple(int(s) for s in pattern)
        order = len(pattern)
        if order < 1 or order > self.max_order:
            raise DomainError(f"pattern order must be in 1..{self.max_order}")
        code = 0
        for s in pattern:
            if s < 0 or s >= self.alphabet_size:
                raise DomainError(f"pattern symbol {s} outside the alphabet")
            code = code * self.alphabet_size + s
        return float(self.tables[order - 1][code])

    def table(self, order):
        return self.tables[order - 1].copy()


def empirical_component(symbols, alphabet_size, max_order, horizon):
    """Empirical stationary measure of one path: all cylinder frequencies.

    Requires horizon >= 10 * alphabet**max_order windows (and a sequence long
    enough that every window is complete, which keeps marginal consistency
    exact).
    """
    if max_order < 1 or max_order > MAX_CYLINDER_ORDER:
        raise DomainError(f"max order must be in 1..{MAX_CYLINDER_ORDER}")
    arr = as_symbols(symbols, alphabet_size)
    needed = 10 * alphabet_size**max_order
    if horizon < needed:
        raise ResourceError(
            f"horizon {horizon} is too small: need at least {needed} windows "
            f"for order {max_order} over alphabet {alphabet_size}"
        )
    if arr.size < horizon + max_order - 1:
        raise RangeError(
            f"sequence of length {arr.size} cannot supply {horizon} windows of "
            f"order {max_order}"
        )
    tables = []
    for order in range(1, max_order + 1):
        codes = _window_codes(arr, alphabet_size, order)[:horizon]
        counts = np.bincount(codes, minlength=alphabet_size**order)
        tables.append(counts / horizon)
    return EmpiricalMeasure(
        alphabet_size=alphabet_size,
        max_order=max_order,
        horizon=horizon,
        tables=tuple(tables),
    )
