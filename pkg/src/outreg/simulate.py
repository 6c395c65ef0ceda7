"""Closed-loop simulation driver: fixed-step RK4 runs, logs, and metrics.

run() integrates a ScenarioConfig through the backend kernel and returns a
SimLog; rk4_step() exposes a single integration step on a structured state.
Identical configs give byte-identical logs: the time grid is t = step * h
(products, not accumulated sums), the kernel arithmetic is fixed, and CSV
formatting uses 17 significant digits, enough to round-trip any double.

A run whose state leaves the |y| <= 1e9 box raises DivergenceError carrying
the partial log and the offending time; callers that want the data anyway
(the CLI, sweep collectors) catch it and keep the log.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backend import BACKEND, run_closed_loop
from .scenario import ScenarioConfig

CSV_HEADER = "t,x1,x2,e,zeta,u,a11,a21,a23,detT1,detT2,khat"
_COLUMNS = tuple(CSV_HEADER.split(","))

_MODE_CODES = {"nonadaptive": 0, "adaptive": 1, "open_loop": 2}


@dataclass(frozen=True)
class ClosedLoopState:
    """Structured closed-loop state; k_hat is None in nonadaptive use."""

    x: tuple
    v: tuple
    eta1: tuple
    eta2: tuple
    k_hat: float | None = None

    def __post_init__(self):
        if len(self.x) != 2 or len(self.v) != 2 or len(self.eta1) != 4 or len(self.eta2) != 8:
            raise ValueError("need x[2], v[2], eta1[4], eta2[8]")

    @property
    def dimension(self) -> int:
        return 14 if self.k_hat is None else 15

    def pack(self) -> list:
        kh = 0.0 if self.k_hat is None else float(self.k_hat)
        return [*map(float, self.x), *map(float, self.v),
                *map(float, self.eta1), *map(float, self.eta2), kh]

    @classmethod
    def unpack(cls, y, adaptive: bool) -> "ClosedLoopState":
        return cls(x=(y[0], y[1]), v=(y[2], y[3]), eta1=tuple(y[4:8]),
                   eta2=tuple(y[8:16]), k_hat=y[16] if adaptive else None)


class SimLog:
    """Column store for one run; one row per recorded step."""

    def __init__(self, rows):
        rows = [tuple(float(v) for v in r) for r in rows]
        for r in rows:
            if len(r) != len(_COLUMNS):
                raise ValueError("rows must have %d columns" % len(_COLUMNS))
        for a, b in zip(rows, rows[1:]):
            if not b[0] > a[0]:
                raise ValueError("time grid must be strictly increasing")
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, SimLog) and self.rows == other.rows

    def column(self, name: str) -> list:
        return [r[_COLUMNS.index(name)] for r in self.rows]

    @property
    def t(self):
        return self.column("t")

    def to_csv(self) -> str:
        out = [CSV_HEADER]
        for r in self.rows:
            out.append(",".join("%.17g" % v for v in r))
        return "\n".join(out) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SimLog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != CSV_HEADER:
            raise ValueError("bad or missing CSV header")
        return cls([tuple(float(p) for p in ln.split(",")) for ln in lines[1:]])


class DivergenceError(RuntimeError):
    """Integration left the sanity box; .time and .partial tell the story."""

    def __init__(self, time: float, partial: SimLog):
        self.time = time
        self.partial = partial
        super().__init__("state diverged at t = %g" % time)


def _kernel_args(cfg: ScenarioConfig, mode: str):
    return (cfg.c1, cfg.c2, cfg.c3, cfg.sigma, cfg.m1, cfg.m2, cfg.epsilon,
            cfg.mask1, cfg.mask2, cfg.rho.coeffs, cfg.k.coeffs, cfg.k0,
            _MODE_CODES[mode], cfg.disturbance_amp, cfg.disturbance_freq)


def run(cfg: ScenarioConfig, mode: str | None = None) -> SimLog:
    """Integrate the scenario from t = 0 to t_end; returns the SimLog.

    mode overrides cfg.mode when given.  Raises DivergenceError (with the
    partial log attached) if the state blows up before t_end.
    """
    mode = cfg.mode if mode is None else mode
    if mode not in _MODE_CODES:
        raise ValueError("mode must be one of %s" % "/".join(_MODE_CODES))
    y0 = [*cfg.x0, *cfg.v0, *cfg.eta1_0, *cfg.eta2_0, cfg.khat0]
    records, diverged_at, _ = run_closed_loop(
        y0, cfg.h, cfg.n_steps, cfg.stride, *_kernel_args(cfg, mode))
    log = SimLog(records)
    if diverged_at >= 0.0:
        raise DivergenceError(diverged_at, log)
    return log


def rk4_step(state: ClosedLoopState, h: float, cfg: ScenarioConfig,
             t0: float = 0.0) -> ClosedLoopState:
    """One RK4 step of the full coupled field; u recomputed per stage.

    Produces exactly the state run() would reach after the same step (both
    delegate to the kernel).  t0 sets the clock for the disturbance term.
    The law follows the state: a k_hat value selects the adaptive law, its
    absence the scenario's mode (downgraded to nonadaptive if that was
    adaptive, since there is no k_hat to integrate).
    """
    if not h > 0.0:
        raise ValueError("h must be > 0, got %r" % (h,))
    adaptive = state.k_hat is not None
    if adaptive:
        mode = "adaptive"
    elif cfg.mode == "adaptive":
        mode = "nonadaptive"
    else:
        mode = cfg.mode
    records, diverged_at, y = run_closed_loop(
        state.pack(), h, 1, 1, *_kernel_args(cfg, mode), t0)
    if diverged_at >= 0.0:
        raise DivergenceError(diverged_at, SimLog(records))
    return ClosedLoopState.unpack(y, adaptive)


def metrics(log: SimLog, cfg: ScenarioConfig, settle_threshold: float = 1e-2,
            diverged_at: float | None = None) -> dict:
    """Quantities the acceptance thresholds talk about, as a flat dict.

    Trailing-window statistics cover t >= 0.8 * t_end; they are None when
    the log ends earlier (a diverged run).  Estimation errors compare the
    logged estimates against the exosystem targets sigma^2, 9 sigma^4 and
    10 sigma^2.  Settling time is the first logged t after which |e| never
    exceeds settle_threshold.
    """
    if not len(log):
        raise ValueError("empty log")
    t = log.t
    e = log.column("e")
    u = log.column("u")
    cut = 0.8 * cfg.t_end
    tail = [i for i, ti in enumerate(t) if ti >= cut]
    s2 = cfg.sigma * cfg.sigma
    out = {
        "backend": BACKEND,
        "diverged": diverged_at is not None,
        "diverged_at": diverged_at,
        "t_final": t[-1],
        "max_abs_u": max(abs(v) for v in u),
        "min_detT1": min(log.column("detT1")),
        "min_detT2": min(log.column("detT2")),
        "khat_final": log.column("khat")[-1],
    }
    if tail and diverged_at is None:
        a11 = log.column("a11")
        a21 = log.column("a21")
        a23 = log.column("a23")
        out["trailing_sup_e"] = max(abs(e[i]) for i in tail)
        out["trailing_err_a11"] = max(abs(a11[i] - s2) for i in tail)
        out["trailing_err_a21"] = max(abs(a21[i] - 9.0 * s2 * s2) for i in tail)
        out["trailing_err_a23"] = max(abs(a23[i] - 10.0 * s2) for i in tail)
    else:
        out["trailing_sup_e"] = None
        out["trailing_err_a11"] = None
        out["trailing_err_a21"] = None
        out["trailing_err_a23"] = None
    settle = None
    for i in range(len(e) - 1, -1, -1):
        if abs(e[i]) > settle_threshold:
            settle = t[i + 1] if i + 1 < len(t) else None
            break
        settle = t[i]
    out["settling_time"] = settle if diverged_at is None else None
    return out
