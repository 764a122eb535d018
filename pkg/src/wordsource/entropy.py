"""Induced output measures, block entropies, sample-entropy traces, AEP runs.

The induced measure of a word-valued source assigns q(b^n), the total source
probability of all n-tuples whose concatenated codewords start with b^n. It
is evaluated by a forward dynamic program over boundary states: alpha(j, s)
is the probability that some codeword sequence exactly covers the first j
output symbols and leaves the source in memory state s. Extending by one
codeword either lands on a later boundary or overshoots the target length,
in which case the trailing source symbols marginalise away and the mass goes
straight to the answer. The DP carries natural logs, combines branches with
max-shifted summation, and fixes the accumulation order (older boundaries
first, then input symbol, then source state) so repeated runs are bit
identical.

Block distributions, joint entropies H_n, per-sequence sample-entropy traces
and the AEP experiment (per-path sample entropy against the component bound
entropy-rate / expected-codeword-length) are built on the same scanner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ResourceError
from .sources import (
    LN2,
    NEG_INF,
    MarkovSource,
    MixtureSource,
    PathSample,
    _clamp_log_prob,
    _logsumexp,
    _MixtureScanner,
    as_symbols,
    seed_sequence,
)
from .wordcode import WordFunction, encode_stream, expected_codeword_length, is_prefix_free

# Full block enumerations refuse to build more than this many cylinders.
DEFAULT_ENUMERATION_CELLS = 2**20


def _np_logsumexp(arr):
    arr = np.asarray(arr, dtype=float)
    finite = arr[arr > NEG_INF]
    if finite.size == 0:
        return NEG_INF
    m = finite.max()
    return float(m + np.log(np.exp(finite - m).sum()))


class _SourceKernel:
    """Transition view of an IID or Markov source for the boundary DP.

    States are 0..k-1 for Markov memory plus a fresh state k that uses the
    initial distribution; IID collapses to the single state 0.
    """

    __slots__ = ("trans", "fresh_state", "collapse")

    def __init__(self, model):
        if isinstance(model, MixtureSource):
            raise DomainError("mixture sources are handled per component")
        if isinstance(model, MarkovSource):
            k = model.alphabet_size
            self.trans = [list(map(float, row)) for row in model._log_matrix] + [
                [float(v) for v in model._log_init]
            ]
            self.fresh_state = k
            self.collapse = False
        else:
            self.trans = [[float(v) for v in model._log_dist]]
            self.fresh_state = 0
            self.collapse = True

    def state_of(self, symbol):
        return 0 if self.collapse else symbol


class _InducedScanner:
    """Rolling-window boundary DP along a fixed output prefix."""

    __slots__ = ("kernel", "codewords", "max_len", "rows", "buf", "log_prob", "dead")

    def __init__(self, kernel, codewords, max_len, rows=None, buf=None,
                 log_prob=NEG_INF, dead=False):
        self.kernel = kernel
        self.codewords = codewords
        self.max_len = max_len
        if rows is None:
            start = [NEG_INF] * (kernel.fresh_state + 1)
            start[kernel.fresh_state] = 0.0
            rows = [start]
        self.rows = rows
        self.buf = [] if buf is None else buf
        self.log_prob = log_prob
        self.dead = dead

    def clone(self):
        return _InducedScanner(
            self.kernel, self.codewords, self.max_len,
            rows=[row[:] for row in self.rows], buf=self.buf[:],
            log_prob=self.log_prob, dead=self.dead,
        )

    def advance(self, symbol):
        if self.dead:
            return NEG_INF
        buf = self.buf
        buf.append(symbol)
        if len(buf) > self.max_len:
            del buf[0]
        rows = self.rows
        trans = self.kernel.trans
        n_rows = len(rows)
        new_terms = [[] for _ in trans]
        answer_terms = []
        # rows[d] holds alpha at boundary j = m - (n_rows - 1 - d); after the
        # append the new target is m + 1, so row d must match the last
        # (n_rows - d) buffered symbols.
        for d in range(n_rows):
            row = rows[d]
            need = n_rows - d
            seg_start = len(buf) - need
            for a, cw in enumerate(self.codewords):
                if len(cw) < need:
                    continue
                match = True
                for t in range(need):
                    if cw[t] != buf[seg_start + t]:
                        match = False
                        break
                if not match:
                    continue
                exact = len(cw) == need
                tgt = self.kernel.state_of(a)
                for s, lp in enumerate(row):
                    if lp == NEG_INF:
                        continue
                    tr = trans[s][a]
                    if tr == NEG_INF:
                        continue
                    term = lp + tr
                    answer_terms.append(term)
                    if exact:
                        new_terms[tgt].append(term)
        new_row = [(_logsumexp(ts) if ts else NEG_INF) for ts in new_terms]
        rows.append(new_row)
        if len(rows) > self.max_len:
            del rows[0]
        self.log_prob = _clamp_log_prob(_logsumexp(answer_terms))
        if self.log_prob == NEG_INF:
            self.dead = True
        return self.log_prob


class InducedMeasure:
    """Exact evaluator for the output law q(b^n) of a word-valued source."""

    def __init__(self, model, word_function):
        if not isinstance(word_function, WordFunction):
            raise DomainError("expected a WordFunction")
        if model.alphabet_size != word_function.input_alphabet_size:
            raise DomainError(
                f"model alphabet size {model.alphabet_size} does not match "
                f"codebook input alphabet {word_function.input_alphabet_size}"
            )
        self.model = model
        self.word_function = word_function
        self.alphabet_size = word_function.output_alphabet_size

    @property
    def model_id(self):
        return f"{self.model.model_id}*{self.word_function.config_dict()['code']}"

    def prefix_scanner(self):
        model = self.model
        wf = self.word_function
        if isinstance(model, MixtureSource):
            children = [
                InducedMeasure(comp, wf).prefix_scanner() for comp in model.components
            ]
            return _MixtureScanner([float(v) for v in model._log_weights], children)
        return _InducedScanner(_SourceKernel(model), wf.codewords, wf.max_codeword_length)

    def cylinder_log_probability(self, symbols):
        """log q(b^n); -inf when b^n has no preimage under the codebook."""
        arr = as_symbols(symbols, self.alphabet_size)
        if arr.size == 0:
            raise DomainError("cylinder tuple must be nonempty")
        scanner = self.prefix_scanner()
        lp = NEG_INF
        for s in arr:
            lp = scanner.advance(int(s))
            if lp == NEG_INF:
                return NEG_INF
        return lp

    def shifted_cylinder_probability(self, symbols, shift, max_cells=DEFAULT_ENUMERATION_CELLS):
        """q(T^-i [b]) via exact enumeration over the i leading symbols."""
        arr = as_symbols(symbols, self.alphabet_size)
        if shift < 0:
            raise DomainError("shift must be >= 0")
        if shift == 0:
            lp = self.cylinder_log_probability(arr)
            return math.exp(lp) if lp > NEG_INF else 0.0
        n = shift + arr.size
        table = block_log_probability_table(self, n, max_cells=max_cells)
        B = self.alphabet_size
        suffix = 0
        for s in arr:
            suffix = suffix * B + int(s)
        slice_lps = table.reshape(B**shift, B**arr.size)[:, suffix]
        lp = _np_logsumexp(slice_lps)
        return math.exp(lp) if lp > NEG_INF else 0.0

    def sample_path(self, length, seed):
        """Sample the first ``length`` output symbols (encode, then truncate)."""
        src = self.model.sample_path(length, seed)
        enc = encode_stream(self.word_function, src.symbols)
        return PathSample(
            symbols=enc.output[:length].copy(),
            seed=seed,
            model_id=self.model_id,
            component_index=src.component_index,
        )


def induced_cylinder_log_probability(model, word_function, symbols):
    """log q(b^n) for the word-valued source of (model, word_function)."""
    return InducedMeasure(model, word_function).cylinder_log_probability(symbols)


def block_log_probability_table(measure, n, max_cells=DEFAULT_ENUMERATION_CELLS):
    """Log probabilities of every length-n cylinder, in lexicographic order.

    Shares prefix work across tuples by walking the output tree with cloned
    scanners; entry i corresponds to the base-|alphabet| digits of i.
    """
    if n < 1:
        raise DomainError("block length must be >= 1")
    B = measure.alphabet_size
    cells = B**n
    if cells > max_cells:
        raise ResourceError(
            f"block table needs {cells} cylinders, over the cap of {max_cells}"
        )
    out = np.full(cells, NEG_INF)
    stack = [(measure.prefix_scanner(), 0, 0)]
    while stack:
        scanner, depth, idx = stack.pop()
        for b in range(B):
            # the original may only be advanced once all clones are taken
            child = scanner.clone() if b < B - 1 else scanner
            lp = child.advance(b)
            child_idx = idx * B + b
            if depth + 1 == n:
                out[child_idx] = lp
            elif lp > NEG_INF:
                stack.append((child, depth + 1, child_idx))
            # dead prefixes keep the prefilled -inf for the whole subtree
    return out


def joint_entropy_exact(measure, n, max_cells=DEFAULT_ENUMERATION_CELLS):
    """H_n in bits by full enumeration; zero-probability cylinders add 0."""
    lps = block_log_probability_table(measure, n, max_cells=max_cells)
    finite = lps[lps > NEG_INF]
    return float(-(np.exp(finite) * finite).sum() / LN2)


def _trailing_spread(values):
    """Max minus min over the last quartile (at least two points) of a trace."""
    if len(values) == 0:
        return float("inf")
    if len(values) == 1:
        return 0.0
    tail = values[-max(2, -(-len(values) // 4)):]
    return float(max(tail) - min(tail))


@dataclass(frozen=True)
class EntropyTrace:
    """Per-horizon sample entropies -(1/n) log2 rho([w^n]) along one sequence.

    When the sequence leaves the measure's support, the trace stops at the
    last positive-probability checkpoint and ``left_support_at`` records the
    1-based position where the probability first hit zero.
    """

    horizons: np.ndarray
    values: np.ndarray
    limit_estimate: float
    converged: bool
    tolerance: float
    left_support_at: int | None = None


def sample_entropy_trace(measure, symbols, checkpoints, tol=1e-2):
    """Evaluate -(1/n) log2 rho([w^n]) at each checkpoint, incrementally."""
    arr = as_symbols(symbols, measure.alphabet_size)
    cps = sorted(int(c) for c in checkpoints)
    if not cps or cps[0] < 1:
        raise DomainError("checkpoints must be positive")
    if cps[-1] > arr.size:
        raise DomainError(
            f"max checkpoint {cps[-1]} exceeds the sequence length {arr.size}"
        )
    scanner = measure.prefix_scanner()
    horizons = []
    values = []
    left_at = None
    cp_iter = iter(cps)
    next_cp = next(cp_iter)
    for pos in range(cps[-1]):
        lp = scanner.advance(int(arr[pos]))
        if lp == NEG_INF:
            left_at = pos + 1
            break
        if pos + 1 == next_cp:
            horizons.append(pos + 1)
            values.append(-lp / ((pos + 1) * LN2))
            try:
                next_cp = next(cp_iter)
            except StopIteration:
                break
    values_arr = np.array(values, dtype=float)
    spread = _trailing_spread(values)
    return EntropyTrace(
        horizons=np.array(horizons, dtype=np.int64),
        values=values_arr,
        limit_estimate=float(values_arr[-1]) if values else float("nan"),
        converged=left_at is None and bool(values) and spread < tol,
        tolerance=tol,
        left_support_at=left_at,
    )


class ComponentBound(NamedTuple):
    """One ergodic component's AEP quantities."""

    weight: float
    entropy_rate: float
    expected_length: float
    bound: float


@dataclass(frozen=True)
class AepReport:
    """One path's AEP measurement against its component's bound.

    ``verdict`` is "equality" when the measured output sample entropy is
    within tolerance of the bound, "strict_inequality" when it falls below,
    and "violation" when it exceeds the bound by more than the tolerance
    (never an accepted outcome).
    """

    per_component: tuple
    component_index: int
    empirical_h: float
    prefix_free: bool
    verdict: str
    source_sample_entropy: float
    scaled_output_sample_entropy: float
    input_horizon: int
    output_horizon: int
    path_index: int

    @property
    def bound(self):
        return self.per_component[self.component_index].bound


def component_bounds(model, word_function):
    """(weight, entropy rate, E[codeword length], bound) per ergodic component."""
    lengths = expected_codeword_length(model, word_function)
    bounds = []
    for (weight, comp), (_, el) in zip(model.ergodic_components(), lengths):
        rate = comp.entropy_rate_exact()
        bounds.append(ComponentBound(weight, rate, el, rate / el))
    return tuple(bounds)


def aep_experiment(model, word_function, horizon, paths, seed, tol=0.02):
    """Sample paths, encode, and compare output sample entropies to bounds.

    Each path is sampled with its own seed spawned from ``seed``, encoded,
    and measured at the output horizon zeta_n reached by ``horizon`` input
    symbols. The report records both sides of the per-path inequality
    (source sample entropy versus the length-scaled output sample entropy).
    The default tolerance (0.02 bits at horizon 1e4) is finite-sample slack
    for the verdict, not a claim about the limit.
    """
    if horizon < 10:
        raise DomainError("horizon must be >= 10")
    if paths < 1:
        raise DomainError("need at least one path")
    bounds = component_bounds(model, word_function)
    prefix_free = bool(is_prefix_free(word_function))
    induced = InducedMeasure(model, word_function)
    children = seed_sequence(seed).spawn(paths)
    reports = [None] * paths
    for idx in range(paths):
        ps = model.sample_path(horizon, children[idx])
        comp_idx = ps.component_index if ps.component_index is not None else 0
        enc = encode_stream(word_function, ps.symbols)
        zeta_n = enc.total_length
        scanner = induced.prefix_scanner()
        lp = NEG_INF
        for s in enc.output:
            lp = scanner.advance(int(s))
            if lp == NEG_INF:
                break
        if lp == NEG_INF:
            raise DomainError("encoded path left the induced support; inconsistent DP")
        empirical = -lp / (zeta_n * LN2)
        source_lp = model.cylinder_log_probability(ps.symbols)
        bound = bounds[comp_idx].bound
        if empirical > bound + tol:
            verdict = "violation"
        elif empirical < bound - tol:
            verdict = "strict_inequality"
        else:
            verdict = "equality"
        reports[idx] = AepReport(
            per_component=bounds,
            component_index=comp_idx,
            empirical_h=empirical,
            prefix_free=prefix_free,
            verdict=verdict,
            source_sample_entropy=-source_lp / (horizon * LN2),
            scaled_output_sample_entropy=-lp / (horizon * LN2),
            input_horizon=horizon,
            output_horizon=zeta_n,
            path_index=idx,
        )
    return reports


@dataclass(frozen=True)
class ConservationReport:
    """Entropy-conservation check: integral bound vs measured output rate.

    integral_bound = sum_c weight_c * entropy_rate_c / E_c[codeword length];
    empirical_entropy_rate = H_n(q) - H_{n-1}(q) at the enumeration cap. The
    empirical value never exceeds the bound beyond tolerance, with equality
    (within tolerance) for prefix-free codebooks.
    """

    integral_bound: float
    empirical_entropy_rate: float
    block_cap: int
    prefix_free: bool
    per_component: tuple


def conservation_report(model, word_function, block_cap=14,
                        max_cells=DEFAULT_ENUMERATION_CELLS):
    """Compare the decomposition-integrated bound with exact block entropies."""
    if block_cap < 2:
        raise DomainError("block cap must be >= 2")
    bounds = component_bounds(model, word_function)
    integral = math.fsum(cb.weight * cb.bound for cb in bounds)
    induced = InducedMeasure(model, word_function)
    h_hi = joint_entropy_exact(induced, block_cap, max_cells=max_cells)
    h_lo = joint_entropy_exact(induced, block_cap - 1, max_cells=max_cells)
    return ConservationReport(
        integral_bound=integral,
        empirical_entropy_rate=h_hi - h_lo,
        block_cap=block_cap,
        prefix_free=bool(is_prefix_free(word_function)),
        per_component=bounds,
    )
