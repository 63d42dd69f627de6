"""Waveform synthesis and readout over a reference system.

A trace is the exact tick-by-tick value of a product or superposition
waveform.  Samples are rational: a product string's sample is the product
of its chosen reference values (so its magnitude is lambda^(#L factors)),
and a factored superposition's sample is the product over bits of
(c_H * A_r(t) + c_L * lambda * B_r(t)), evaluated in O(N) per tick.

Meaning is assigned at the end-of-period readout window (the last
sub-clock slot), where shifted and unshifted traces of the same object
agree from period 1 on.  For long Monte Carlo runs the readout-only
helpers skip the intermediate ticks; they are exact and are tested to
equal the full-trace readouts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence

from .algebra import VALUE_H, VALUE_L, FactoredSuperposition, ProductString
from .rtw import ROLE_A, ROLE_B, ClockGrid, ReferenceSystem, value_at


@dataclass(frozen=True)
class SignalTrace:
    """Exact samples of one waveform, one value per tick."""

    grid: ClockGrid
    shifted: bool
    samples: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.samples) != self.grid.num_ticks:
            raise ValueError("sample count disagrees with grid")

    def sample(self, tick: int) -> Fraction:
        self.grid.check_tick(tick)
        return self.samples[tick]

    def __len__(self) -> int:
        return len(self.samples)


Selection = Sequence[tuple[int, str]]


def _selection_of(w: ProductString) -> list[tuple[int, str]]:
    return [(r, w.value(r)) for r in range(1, w.num_bits + 1)]


def _check_selection(refs: ReferenceSystem, picks: Selection) -> None:
    for bit, value in picks:
        if not 1 <= bit <= refs.num_bits:
            raise ValueError(f"bit {bit} outside 1..{refs.num_bits}")
        if value not in (VALUE_H, VALUE_L):
            raise ValueError(f"pick value must be H or L, got {value!r}")


def trace_selection(refs: ReferenceSystem, picks: Selection, shifted: bool = False) -> SignalTrace:
    """Trace of a product of chosen logic-value waveforms.

    picks may cover any subset of bits and may repeat a bit (for example
    [(r, "H"), (r, "L")] is the inverter waveform H_r * L_r for bit r).
    The lambda scale of each L pick is folded into the samples.
    """
    _check_selection(refs, picks)
    grid = refs.grid
    streams = [
        refs.stream(bit, ROLE_A if value == VALUE_H else ROLE_B)
        for bit, value in picks
    ]
    lam_power = refs.lam ** sum(1 for _, value in picks if value == VALUE_L)
    samples = []
    for tick in range(grid.num_ticks):
        sign = 1
        for proc in streams:
            sign *= value_at(proc, tick, grid, shifted)
        samples.append(lam_power * sign)
    return SignalTrace(grid=grid, shifted=shifted, samples=tuple(samples))


def trace_product(refs: ReferenceSystem, w: ProductString, shifted: bool = False) -> SignalTrace:
    """Trace of a full product string (one chosen value per bit)."""
    if w.num_bits != refs.num_bits:
        raise ValueError("bit-width mismatch")
    return trace_selection(refs, _selection_of(w), shifted)


def trace_superposition(
    refs: ReferenceSystem,
    f: FactoredSuperposition,
    shifted: bool = False,
) -> SignalTrace:
    """Trace of a factored superposition, O(num_bits) work per tick."""
    if f.num_bits != refs.num_bits:
        raise ValueError("bit-width mismatch")
    grid = refs.grid
    lam = refs.lam
    pairs = [
        (f.c_h[r - 1], f.c_l[r - 1] * lam, refs.stream(r, ROLE_A), refs.stream(r, ROLE_B))
        for r in range(1, refs.num_bits + 1)
    ]
    samples = []
    for tick in range(grid.num_ticks):
        acc = Fraction(1)
        for ch, cl_lam, proc_a, proc_b in pairs:
            acc *= ch * value_at(proc_a, tick, grid, shifted) + cl_lam * value_at(
                proc_b, tick, grid, shifted
            )
        samples.append(acc)
    return SignalTrace(grid=grid, shifted=shifted, samples=tuple(samples))


def multiply_traces(a: SignalTrace, b: SignalTrace) -> SignalTrace:
    """Pointwise product of two traces over the same grid and mode."""
    if a.grid != b.grid or a.shifted != b.shifted:
        raise ValueError("traces must share grid and mode")
    samples = tuple(x * y for x, y in zip(a.samples, b.samples))
    return SignalTrace(grid=a.grid, shifted=a.shifted, samples=samples)


def readout(trace: SignalTrace) -> tuple[Fraction, ...]:
    """Per-period values at the readout window (last tick of each period)."""
    grid = trace.grid
    return tuple(
        trace.samples[grid.readout_tick(k)] for k in range(grid.num_periods)
    )


# ---------------------------------------------------------------------------
# readout-only fast paths (exact; skip intermediate ticks)
# ---------------------------------------------------------------------------

def product_readouts(refs: ReferenceSystem, w: ProductString) -> tuple[Fraction, ...]:
    """Per-period readout of a product string without building the trace.

    At the readout window every stream holds the current period's sign in
    both modes, so this equals readout(trace_product(...)) for either mode.
    """
    if w.num_bits != refs.num_bits:
        raise ValueError("bit-width mismatch")
    streams = [
        refs.stream(r, ROLE_A if w.value(r) == VALUE_H else ROLE_B)
        for r in range(1, w.num_bits + 1)
    ]
    lam_power = refs.lam ** sum(1 for r in range(1, w.num_bits + 1) if w.value(r) == VALUE_L)
    out = []
    for k in range(refs.grid.num_periods):
        sign = 1
        for proc in streams:
            sign *= proc.signs[k]
        out.append(lam_power * sign)
    return tuple(out)


def superposition_readouts(refs: ReferenceSystem, f: FactoredSuperposition) -> tuple[Fraction, ...]:
    """Per-period readout of a factored superposition, skipping mid-period ticks."""
    if f.num_bits != refs.num_bits:
        raise ValueError("bit-width mismatch")
    lam = refs.lam
    pairs = [
        (f.c_h[r - 1], f.c_l[r - 1] * lam, refs.stream(r, ROLE_A), refs.stream(r, ROLE_B))
        for r in range(1, refs.num_bits + 1)
    ]
    out = []
    for k in range(refs.grid.num_periods):
        acc = Fraction(1)
        for ch, cl_lam, proc_a, proc_b in pairs:
            acc *= ch * proc_a.signs[k] + cl_lam * proc_b.signs[k]
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _format_amplitude(value: Fraction, style: str) -> str:
    if style == "fraction":
        return str(value)
    if style == "decimal":
        # exact decimal expansion when the denominator is 2^a * 5^b,
        # otherwise fall back to the exact p/q form
        den = value.denominator
        for p in (2, 5):
            while den % p == 0:
                den //= p
        if den != 1:
            return str(value)
        if value.denominator == 1:
            return str(value.numerator)
        scale = 0
        num = value.numerator
        den = value.denominator
        while den % 2 == 0:
            den //= 2
            num *= 5
            scale += 1
        while den % 5 == 0:
            den //= 5
            num *= 2
            scale += 1
        text = str(abs(num)).rjust(scale + 1, "0")
        sign = "-" if num < 0 else ""
        return f"{sign}{text[:-scale]}.{text[-scale:]}" if scale else f"{sign}{text}"
    raise ValueError(f"style must be 'fraction' or 'decimal', got {style!r}")


def write_trace_csv(trace: SignalTrace, out: IO[str], style: str = "fraction") -> None:
    """Write a trace as CSV rows: tick, period, scp, amplitude."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["tick", "period", "scp", "amplitude"])
    grid = trace.grid
    for tick, value in enumerate(trace.samples):
        writer.writerow(
            [tick, grid.period_of(tick), grid.scp_of(tick), _format_amplitude(value, style)]
        )
