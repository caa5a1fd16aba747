"""Cost-point scans over (beta1, beta2) grids and the bound-coefficient fit.

For every Hamiltonian in a config this sweeps the two Gibbs parameters over an
inclusive uniform grid, collects (entropy, energy cost, spatial cost) samples,
and fits the smallest coefficient alpha such that

    entropy <= log(alpha * sqrt(product) + 1)

holds for every sample whose cost product lies inside the window.  Sweeps can
prune grid regions whose products fall outside the window, relying on the
empirical monotonic decrease of the cost product in both parameters; every
skipped range is logged with the evaluation that triggered it, and pruning
never drops an in-window point as long as the sampled rows are monotone.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .discrete_qm import HamiltonianSpec, QSystem, build_system
from .errors import EmptyWindowError, NumericError, ValidationError
from .gibbs import gibbs_state

logger = logging.getLogger(__name__)

CSV_HEADER = "spec_id,beta1,beta2,entropy,energy_cost,space_cost,product,in_window"


@dataclass(frozen=True)
class ScanConfig:
    """Scan parameters: Hamiltonians, grid ranges, window, worker hint."""

    specs: tuple[HamiltonianSpec, ...]
    beta1_range: tuple[float, float, int] = (-5.0, 5.0, 300)
    beta2_range: tuple[float, float, int] = (-0.5, 2.0, 200)
    cost_window: tuple[float, float] = (1.0, 100.0)
    parallelism: int | None = None
    prune: bool = True

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        for name in ("beta1_range", "beta2_range"):
            lo, hi, steps = getattr(self, name)
            if steps < 2:
                raise ValidationError(f"{name}: need at least 2 steps, got {steps}")
            if not lo < hi:
                raise ValidationError(f"{name}: need lo < hi, got ({lo}, {hi})")
            object.__setattr__(self, name, (float(lo), float(hi), int(steps)))
        c_min, c_max = self.cost_window
        if not 0.0 < c_min < c_max:
            raise ValidationError(
                f"cost window must satisfy 0 < C_min < C_max, got ({c_min}, {c_max})"
            )
        object.__setattr__(self, "cost_window", (float(c_min), float(c_max)))

    def beta1_values(self) -> np.ndarray:
        lo, hi, steps = self.beta1_range
        return np.linspace(lo, hi, steps)

    def beta2_values(self) -> np.ndarray:
        lo, hi, steps = self.beta2_range
        return np.linspace(lo, hi, steps)

    def to_json_dict(self) -> dict:
        return {
            "specs": [s.to_json_dict() for s in self.specs],
            "beta1_range": list(self.beta1_range),
            "beta2_range": list(self.beta2_range),
            "cost_window": list(self.cost_window),
            "parallelism": self.parallelism,
            "prune": self.prune,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScanConfig":
        return cls(
            specs=tuple(HamiltonianSpec.from_json_dict(s) for s in data["specs"]),
            beta1_range=tuple(data.get("beta1_range", (-5.0, 5.0, 300))),
            beta2_range=tuple(data.get("beta2_range", (-0.5, 2.0, 200))),
            cost_window=tuple(data.get("cost_window", (1.0, 100.0))),
            parallelism=data.get("parallelism"),
            prune=bool(data.get("prune", True)),
        )


@dataclass(frozen=True)
class CostPoint:
    """One scan sample: parameters, entropy, and both costs."""

    spec_id: int
    beta1: float
    beta2: float
    entropy: float
    energy_cost: float
    space_cost: float
    product: float

    def in_window(self, window: tuple[float, float]) -> bool:
        return window[0] <= self.product <= window[1]


@dataclass(frozen=True)
class SkipRecord:
    """Contiguous index range [start, stop) skipped after seeing ``trigger``."""

    start: int
    stop: int
    trigger: int

    @property
    def count(self) -> int:
        return self.stop - self.start


@dataclass
class RowScan:
    """Products of the evaluated indices of one row plus its skip records."""

    products: dict[int, float]
    skips: list[SkipRecord]

    @property
    def evaluations(self) -> int:
        return len(self.products)


def _gap_records(evaluated: Iterable[int], n: int) -> list[SkipRecord]:
    keys = sorted(evaluated)
    records = []
    prev = -1
    for k in list(keys) + [n]:
        if k > prev + 1:
            records.append(SkipRecord(start=prev + 1, stop=k, trigger=max(prev, 0)))
        prev = k
    return records


def scan_row(
    evaluate: Callable[[int], float],
    n: int,
    window: tuple[float, float],
    seed: dict[int, float] | None = None,
) -> RowScan:
    """Walk one monotone-decreasing row, skipping out-of-window segments.

    The tail is cut at the first product below C_min (everything after would
    be smaller).  A head segment above C_max is bridged by bisecting for the
    first index at or below C_max, so its interior is never evaluated.  With
    a monotone row no in-window index is ever skipped; the skip records are
    the maximal never-evaluated index ranges.
    """
    c_min, c_max = window
    products: dict[int, float] = dict(seed or {})

    def ev(j: int) -> float:
        if j not in products:
            products[j] = evaluate(j)
        return products[j]

    start = 0
    p0 = ev(0)
    if p0 < c_min:
        return RowScan(products, _gap_records(products, n))
    if p0 > c_max and n > 1 and ev(1) > c_max:
        if ev(n - 1) > c_max:
            # row minimum still above the window: nothing to walk
            return RowScan(products, _gap_records(products, n))
        lo, hi = 1, n - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ev(mid) > c_max:
                lo = mid
            else:
                hi = mid
        start = hi
    j = start
    while j < n:
        p = ev(j)
        if p < c_min:
            break
        j += 1
    return RowScan(products, _gap_records(products, n))


def scan_row_full(
    evaluate: Callable[[int], float],
    n: int,
    seed: dict[int, float] | None = None,
) -> RowScan:
    """Evaluate every index of a row; no pruning."""
    products = dict(seed or {})
    for j in range(n):
        if j not in products:
            products[j] = evaluate(j)
    return RowScan(products, [])


def _scan_spec(
    spec_id: int, system: QSystem, config: ScanConfig
) -> list[CostPoint]:
    """Sweep one system's grid in canonical order with optional pruning."""
    b1s = config.beta1_values()
    b2s = config.beta2_values()
    n1, n2 = len(b1s), len(b2s)
    window = config.cost_window
    cache: dict[tuple[int, int], CostPoint | None] = {}

    def product_at(i: int, j: int) -> float:
        key = (i, j)
        if key not in cache:
            try:
                state = gibbs_state(system, float(b1s[i]), float(b2s[j]))
            except NumericError as exc:
                logger.warning(
                    "spec %d: point (beta1=%r, beta2=%r) failed: %s",
                    spec_id, b1s[i], b2s[j], exc,
                )
                cache[key] = None
                return math.nan
            cache[key] = CostPoint(
                spec_id=spec_id,
                beta1=float(b1s[i]),
                beta2=float(b2s[j]),
                entropy=state.entropy,
                energy_cost=state.energy_cost,
                space_cost=state.space_cost,
                product=state.product,
            )
        point = cache[key]
        return math.nan if point is None else point.product

    rows: dict[int, RowScan] = {}
    if not config.prune:
        for i in range(n1):
            rows[i] = scan_row_full(lambda j, i=i: product_at(i, j), n2)
    else:
        first_row = 0
        c_min, c_max = window
        if n1 > 1 and product_at(0, n2 - 1) > c_max:
            # rows whose minimum exceeds C_max are entirely above the window;
            # bisect for the first row that reaches it
            if product_at(n1 - 1, n2 - 1) > c_max:
                first_row = n1  # whole grid above the window
            else:
                lo, hi = 0, n1 - 1
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if product_at(mid, n2 - 1) > c_max:
                        lo = mid
                    else:
                        hi = mid
                first_row = hi
            logger.info(
                "spec %d: rows [0, %d) lie above the window at their minimum",
                spec_id, first_row,
            )
        for i in range(first_row, n1):
            # row minima probed during row-level bisection are already cached;
            # seed them so skip bookkeeping stays exact
            seed = {}
            cached_last = cache.get((i, n2 - 1))
            if cached_last is not None:
                seed[n2 - 1] = cached_last.product
            row = scan_row(lambda j, i=i: product_at(i, j), n2, window, seed=seed)
            rows[i] = row
            for skip in row.skips:
                logger.info(
                    "spec %d row %d: skipped beta2 indices [%d, %d) after index %d",
                    spec_id, i, skip.start, skip.stop, skip.trigger,
                )
            if row.products.get(0, math.inf) < c_min:
                # this row's maximum is already below C_min; later rows only sink
                if i + 1 < n1:
                    logger.info(
                        "spec %d: skipping rows [%d, %d) below the window", spec_id,
                        i + 1, n1,
                    )
                break

    points = [
        point
        for (i, j), point in sorted(cache.items())
        if point is not None
    ]
    return points


def run_scan(config: ScanConfig) -> list[CostPoint]:
    """Evaluate every spec's grid; deterministic (spec, beta1, beta2) order.

    A spec that fails to build aborts only itself (logged); failed grid
    points are logged and omitted.  Parallelism runs whole specs on worker
    threads and never changes the output ordering.
    """
    systems: dict[int, QSystem] = {}
    for spec_id, spec in enumerate(config.specs):
        try:
            systems[spec_id] = build_system(spec)
        except (ValidationError, NumericError) as exc:
            logger.error("spec %d (%s) failed to build: %s", spec_id, spec, exc)

    workers = config.parallelism or 1
    workers = max(1, min(workers, max(len(systems), 1)))
    results: dict[int, list[CostPoint]] = {}
    if workers == 1:
        for spec_id, system in systems.items():
            results[spec_id] = _scan_spec(spec_id, system, config)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                spec_id: pool.submit(_scan_spec, spec_id, system, config)
                for spec_id, system in systems.items()
            }
            for spec_id, future in futures.items():
                results[spec_id] = future.result()

    points: list[CostPoint] = []
    for spec_id in sorted(results):
        points.extend(results[spec_id])
    return points


@dataclass(frozen=True)
class BoundFit:
    """Smallest alpha with entropy <= log(alpha sqrt(product) + 1) in-window."""

    alpha: float
    attaining_point: CostPoint
    window: tuple[float, float]
    n_points: int

    def to_json_dict(self) -> dict:
        pt = self.attaining_point
        return {
            "alpha": self.alpha,
            "spec_id": pt.spec_id,
            "beta1": pt.beta1,
            "beta2": pt.beta2,
            "entropy": pt.entropy,
            "product": pt.product,
            "n_points": self.n_points,
            "c_min": self.window[0],
            "c_max": self.window[1],
        }


def fit_alpha(points: Sequence[CostPoint], window: tuple[float, float]) -> BoundFit:
    """alpha = max over in-window points of (e^entropy - 1) / sqrt(product).

    By construction no in-window point lies above the fitted curve, and
    shrinking alpha breaks that dominance at the attaining point.
    """
    best_alpha = -1.0
    best_point = None
    n_in = 0
    for point in points:
        if point.in_window(window):
            n_in += 1
            a = math.expm1(point.entropy) / math.sqrt(point.product)
            if a > best_alpha:
                best_alpha, best_point = a, point
    if best_point is None:
        raise EmptyWindowError(
            f"no points with product inside [{window[0]!r}, {window[1]!r}]"
        )
    return BoundFit(
        alpha=best_alpha, attaining_point=best_point, window=tuple(window),
        n_points=n_in,
    )


def candidate_bound(s: float, alpha: float) -> float:
    """(e^s / alpha - 1)^2 with the pre-square argument floored at 0."""
    if alpha <= 0.0:
        raise ValidationError(f"alpha must be positive, got {alpha!r}")
    arg = max(math.exp(s) / alpha - 1.0, 0.0)
    return arg * arg


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(points: Sequence[CostPoint], window: tuple[float, float], path) -> None:
    """Write scan output with a 0/1 in-window flag; 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for p in points:
            fields = [
                str(p.spec_id),
                _fmt(p.beta1),
                _fmt(p.beta2),
                _fmt(p.entropy),
                _fmt(p.energy_cost),
                _fmt(p.space_cost),
                _fmt(p.product),
                "1" if p.in_window(window) else "0",
            ]
            fh.write(",".join(fields) + "\n")


def read_csv(path) -> list[CostPoint]:
    """Read scan output back; the in-window flag is recomputed by consumers."""
    points = []
    with open(path, "r") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValidationError(f"unexpected CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 8:
                raise ValidationError(f"malformed CSV row: {line!r}")
            points.append(
                CostPoint(
                    spec_id=int(parts[0]),
                    beta1=float(parts[1]),
                    beta2=float(parts[2]),
                    entropy=float(parts[3]),
                    energy_cost=float(parts[4]),
                    space_cost=float(parts[5]),
                    product=float(parts[6]),
                )
            )
    return points
