from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import binomtest

from ..regions import fmt6
from .codes import SimConfig, alice_encode, bob_decode, build_code, code_rng, helper_encode
from .equivocation import exact_equivocation

CSV_HEADER = "model,n,seed,trials,margin,eps,pe_hat,pe_lo,pe_hi,equiv_per_symbol,helper_fail_rate"


@dataclass(frozen=True)
class SimReport:
    model: str
    n: int
    seed: int
    trials: int
    margin: float
    eps: float
    errors: int
    pe_hat: float
    pe_lo: float
    pe_hi: float
    equivocation_per_symbol: Optional[float]
    helper_encode_failure_rate: float
    alice_encode_failure_rate: float
    rates_used: dict = field(default_factory=dict, compare=False)

    def csv_row(self) -> str:
        eq = "nan" if self.equivocation_per_symbol is None else fmt6(self.equivocation_per_symbol)
        return ",".join([self.model, str(self.n), str(self.seed), str(self.trials),
                         fmt6(self.margin), fmt6(self.eps), fmt6(self.pe_hat), fmt6(self.pe_lo),
                         fmt6(self.pe_hi), eq, fmt6(self.helper_encode_failure_rate)])


def draw_source(cfg: SimConfig, trial: int) -> tuple[np.ndarray, np.ndarray]:
    """(x^n, y^n) for one trial, from stream (seed, 1, trial)."""
    pxy = cfg.source.joint.table(["X", "Y"])
    rng = code_rng(cfg.seed, 1, trial)
    flat = rng.choice(pxy.size, size=cfg.n, p=pxy.ravel())
    return flat // pxy.shape[1], flat % pxy.shape[1]


def _trial(code, cfg: SimConfig, i: int) -> tuple[bool, bool, bool]:
    x, y = draw_source(cfg, i)
    hi = helper_encode(code, y)
    v = code.helper_codebook[hi.index]
    msg = alice_encode(code, x, v if cfg.model == "two" else None)
    xhat = bob_decode(code, msg, hi)
    err = xhat is None or not np.array_equal(xhat, x)
    return err, not hi.ok, not msg.ok


def run_experiment(cfg: SimConfig, x_bin_map=None) -> SimReport:
    """Draw one code, push ``cfg.trials`` source blocks through it, measure leakage once."""
    if cfg.exact:
        cfg.check_guard()
    code = build_code(cfg, x_bin_map)
    idx = range(cfg.trials)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            res = list(ex.map(lambda i: _trial(code, cfg, i), idx))
    else:
        res = [_trial(code, cfg, i) for i in idx]
    errs = sum(r[0] for r in res)
    ci = binomtest(errs, cfg.trials).proportion_ci(confidence_level=0.95, method="exact")
    equiv = exact_equivocation(code, cfg) if cfg.exact else None
    return SimReport(cfg.model, cfg.n, cfg.seed, cfg.trials, cfg.rate_margin, cfg.typ_eps,
                     errs, errs / cfg.trials, float(ci.low), float(ci.high), equiv,
                     sum(r[1] for r in res) / cfg.trials, sum(r[2] for r in res) / cfg.trials,
                     dict(code.rates_used))
