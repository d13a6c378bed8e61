"""Excitonic cascade ladder, pump profiles, and the rate-generator matrix.

The ladder is a strict chain of levels (ground = index 0).  Every radiative
transition connects level i to level i-1 and is routed to one detector
channel.  Pumping is a single ladder-up rate applied uniformly to every
level; the generator matrix collects pump and decay rates in the column
convention Q[j, i] = rate of i -> j, with columns summing to zero.

All rates are in 1/ns, wavelengths in nm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError

# Default triexciton cascade: G -> X -> XX -> XXX with the three emission
# lines at 894.5 / 893.1 / 940.9 nm.  The exciton lifetime (2.8 ns) is a
# measured value; the biexciton (1.5 ns) and triexciton (0.7 ns) lifetimes
# are chosen so the full cascade spans ~5 ns and are configurable.
DEFAULT_LEVELS = ("G", "X", "XX", "XXX")
DEFAULT_LIFETIMES_NS = {"XXX": 0.7, "XX": 1.5, "X": 2.8}
DEFAULT_WAVELENGTHS_NM = {"XXX": 894.5, "XX": 893.1, "X": 940.9}
# D1 watches the triexciton line (Start), D2 the separated biexciton,
# D3 the exciton.
DEFAULT_ROUTING = {"XXX": 1, "XX": 2, "X": 3}


@dataclass(frozen=True)
class Transition:
    """One radiative ladder-down step (upper -> lower = upper - 1)."""

    upper: int
    lower: int
    label: str
    wavelength_nm: float
    radiative_rate: float  # 1/ns


@dataclass(frozen=True)
class CascadeLadder:
    """Ordered level scheme with radiative transitions and channel routing.

    ``states`` lists level labels from ground upward.  ``transitions`` may be
    given in any order; helpers index them by label or upper level.
    """

    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    channel_routing: dict[str, int] = field(default_factory=dict)

    @property
    def n_levels(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> tuple[str, ...]:
        """Transition labels ordered from the top of the ladder down."""
        return tuple(t.label for t in sorted(self.transitions, key=lambda t: -t.upper))

    def transition(self, label: str) -> Transition:
        for t in self.transitions:
            if t.label == label:
                return t
        raise KeyError(f"no transition labelled {label!r}")

    def decay_rate_of_level(self, level: int) -> float:
        """Total radiative rate out of ``level`` (0 for the ground level)."""
        return sum(t.radiative_rate for t in self.transitions if t.upper == level)

    def channel_of(self, label: str) -> int:
        return self.channel_routing[label]


@dataclass(frozen=True)
class PumpProfile:
    """Continuous-wave or pulsed pumping.

    cw: a constant ladder-up rate ``pump_rate`` (1/ns).
    pulsed: instantaneous promotion at each pulse, each ladder step taken
    with probability ``eta_ex``; ``pump_rate`` is ignored between pulses.
    """

    mode: str
    pump_rate: float = 0.0
    period_ns: float = 0.0
    eta_ex: float = 0.0

    def __post_init__(self):
        if self.mode not in ("cw", "pulsed"):
            raise StructuralError(f"unknown pump mode {self.mode!r}")
        if self.pump_rate < 0:
            raise StructuralError("pump rate must be >= 0")
        if self.mode == "pulsed":
            if self.period_ns <= 0:
                raise StructuralError("pulse period must be > 0")
            if not 0.0 <= self.eta_ex <= 1.0:
                raise StructuralError("eta_ex must lie in [0, 1]")

    @classmethod
    def cw(cls, pump_rate: float) -> "PumpProfile":
        return cls(mode="cw", pump_rate=pump_rate)

    @classmethod
    def pulsed(cls, period_ns: float, eta_ex: float) -> "PumpProfile":
        return cls(mode="pulsed", period_ns=period_ns, eta_ex=eta_ex)


@dataclass(frozen=True)
class RateGenerator:
    """Generator matrix Q (1/ns) with Q[j, i] = rate of level i -> level j.

    Columns sum to zero (probability conservation); off-diagonal entries are
    nonnegative.
    """

    matrix: np.ndarray

    @property
    def n_levels(self) -> int:
        return self.matrix.shape[0]

    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def default_triexciton_ladder(
    lifetimes_ns: dict[str, float] | None = None,
    routing: dict[str, int] | None = None,
) -> CascadeLadder:
    """The paper-default 4-level cascade (G, X, XX, XXX)."""
    lifetimes = dict(DEFAULT_LIFETIMES_NS)
    if lifetimes_ns:
        lifetimes.update(lifetimes_ns)
    routing = dict(routing or DEFAULT_ROUTING)
    transitions = []
    for upper, label in ((3, "XXX"), (2, "XX"), (1, "X")):
        transitions.append(
            Transition(
                upper=upper,
                lower=upper - 1,
                label=label,
                wavelength_nm=DEFAULT_WAVELENGTHS_NM[label],
                radiative_rate=1.0 / lifetimes[label],
            )
        )
    return CascadeLadder(
        states=DEFAULT_LEVELS,
        transitions=tuple(transitions),
        channel_routing=routing,
    )


def two_level_ladder(gamma: float, channel: int = 1) -> CascadeLadder:
    """Minimal G -> X ladder, mostly for tests and closed-form checks."""
    t = Transition(upper=1, lower=0, label="X", wavelength_nm=940.9, radiative_rate=gamma)
    return CascadeLadder(states=("G", "X"), transitions=(t,), channel_routing={"X": channel})


def validate_ladder(ladder: CascadeLadder) -> ValidationReport:
    """Collect every invariant violation; duplicate channel routing is only a
    warning (two lines on one detector are physical)."""
    violations: list[str] = []
    warnings: list[str] = []
    n = ladder.n_levels
    if n < 2:
        violations.append("ladder needs at least two levels")
    seen_upper: set[int] = set()
    for i, t in enumerate(ladder.transitions):
        if t.lower != t.upper - 1:
            violations.append(
                f"transition {i} ({t.label}): non-adjacent transition {t.upper}->{t.lower}"
            )
        if not 0 < t.upper < n or t.lower < 0:
            violations.append(f"transition {i} ({t.label}): level index out of range")
        if t.radiative_rate <= 0:
            violations.append(f"transition {i} ({t.label}): nonpositive radiative rate")
        if t.wavelength_nm <= 0:
            violations.append(f"transition {i} ({t.label}): nonpositive wavelength")
        if t.upper in seen_upper:
            violations.append(f"transition {i} ({t.label}): duplicate transition from level {t.upper}")
        seen_upper.add(t.upper)
        if t.label not in ladder.channel_routing:
            violations.append(f"transition {i} ({t.label}): not routed to a detector channel")
    for level in range(1, n):
        if level not in seen_upper:
            violations.append(f"level {level} has no radiative decay path")
    routed = [ladder.channel_routing.get(t.label) for t in ladder.transitions]
    for ch in set(routed):
        if ch is not None and routed.count(ch) > 1:
            warnings.append(f"channel {ch} receives more than one transition")
    return ValidationReport(tuple(violations), tuple(warnings))


def up_shift_matrix(n_levels: int) -> np.ndarray:
    """Unit-pump generator U: build_generator(ladder, W_p) = Q(0) + W_p * U."""
    u = np.zeros((n_levels, n_levels))
    for i in range(n_levels - 1):
        u[i + 1, i] = 1.0
        u[i, i] = -1.0
    return u


def build_generator(ladder: CascadeLadder, pump: PumpProfile | float) -> RateGenerator:
    """Assemble Q from the ladder decay rates and the instantaneous pump rate.

    ``pump`` may be a PumpProfile (its ``pump_rate`` is used) or a bare rate
    in 1/ns.  Raises StructuralError if the ladder is invalid.
    """
    report = validate_ladder(ladder)
    if not report.ok:
        raise StructuralError("invalid ladder: " + "; ".join(report.violations))
    wp = pump.pump_rate if isinstance(pump, PumpProfile) else float(pump)
    if wp < 0:
        raise StructuralError("pump rate must be >= 0")
    n = ladder.n_levels
    q = np.zeros((n, n))
    for t in ladder.transitions:
        q[t.lower, t.upper] += t.radiative_rate
    q += wp * up_shift_matrix(n)
    # decay part of the diagonal (pump part already handled by the shift)
    for t in ladder.transitions:
        q[t.upper, t.upper] -= t.radiative_rate
    return RateGenerator(matrix=q)
