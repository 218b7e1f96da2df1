"""System parameters and node geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Invalid value for a model-domain quantity."""


def dbm_to_linear(x_dbm: float) -> float:
    """Convert a dBm quantity to linear milliwatts."""
    return 10.0 ** (x_dbm / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    """Static link-level parameters shared by all modules."""

    ns: int = 16                 # BS transmit antennas
    nr: int = 16                 # RIS reflecting elements
    m: int = 0                   # external eavesdroppers
    p_dbm: float = 25.0          # total transmit power [dBm]
    n0_dbm: float = 0.0          # noise power [dBm]
    k_factor: float = 10.0       # Rician K
    eta: float = 2.0             # path-loss exponent
    r1_th: float = 1.0           # min rate for the near user [bps/Hz]
    r2_th: float = 1.0           # min rate for the far user [bps/Hz]
    epsilon: float = 1e-4        # alternating-iteration stop tolerance
    max_iters: int = 1000
    # "random": each LoS entry carries an i.i.d. uniform phase.
    # "fixed": LoS mean is the real constant sqrt(K/(K+1)).
    los_phase: str = "random"

    def __post_init__(self) -> None:
        if self.ns < 1 or self.nr < 1:
            raise DomainError("ns and nr must be >= 1")
        if self.m < 0:
            raise DomainError("m must be >= 0")
        if self.k_factor <= 0:
            raise DomainError("k_factor must be > 0")
        if self.eta < 0:
            raise DomainError("eta must be >= 0")
        if self.epsilon <= 0:
            raise DomainError("epsilon must be > 0")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.r1_th < 0 or self.r2_th < 0:
            raise DomainError("rate thresholds must be >= 0")
        if self.los_phase not in ("random", "fixed"):
            raise DomainError("los_phase must be 'random' or 'fixed'")

    @property
    def p(self) -> float:
        return dbm_to_linear(self.p_dbm)

    @property
    def n0(self) -> float:
        return dbm_to_linear(self.n0_dbm)

    @property
    def gamma1_th(self) -> float:
        return 2.0 ** self.r1_th - 1.0

    @property
    def gamma2_th(self) -> float:
        return 2.0 ** self.r2_th - 1.0


Point = tuple[float, float]


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class Geometry:
    """Node placement; BS sits at the origin."""

    ris: Point = (0.5, 0.5)
    u1: Point = (2.0, 0.0)
    u2: Point = (3.0, 0.0)
    eavesdroppers: tuple[Point, ...] = ()
    bs: Point = field(default=(0.0, 0.0))

    def __post_init__(self) -> None:
        for name, d in (
            ("bs-ris", self.d_bs_ris),
            ("ris-u1", self.d_ris_u1),
            ("ris-u2", self.d_ris_u2),
            *((f"ris-eav{i}", di) for i, di in enumerate(self.d_ris_eavs)),
        ):
            if d <= 0:
                raise DomainError(f"zero distance on link {name}")

    @classmethod
    def on_axis(
        cls,
        d_rx: float = 0.5,
        d_ry: float = 0.5,
        d_u1: float = 2.0,
        d_u2: float = 3.0,
        d_eavs: tuple[float, ...] = (),
    ) -> "Geometry":
        """Users/eavesdroppers on the positive x-axis, RIS at (d_rx, d_ry)."""
        return cls(
            ris=(d_rx, d_ry),
            u1=(d_u1, 0.0),
            u2=(d_u2, 0.0),
            eavesdroppers=tuple((d, 0.0) for d in d_eavs),
        )

    @property
    def d_bs_ris(self) -> float:
        return _dist(self.bs, self.ris)

    @property
    def d_ris_u1(self) -> float:
        return _dist(self.ris, self.u1)

    @property
    def d_ris_u2(self) -> float:
        return _dist(self.ris, self.u2)

    @property
    def d_ris_eavs(self) -> tuple[float, ...]:
        return tuple(_dist(self.ris, e) for e in self.eavesdroppers)
