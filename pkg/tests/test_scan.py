import json
import math

import numpy as np
import pytest

from entrobound import discrete_qm, scan
from entrobound.errors import EmptyWindowError, ValidationError


def small_config(**overrides):
    base = dict(
        specs=(discrete_qm.HamiltonianSpec(dim=4, terms=((2, 0.5),)),),
        beta1_range=(-1.0, 1.0, 3),
        beta2_range=(-0.5, 0.5, 3),
        cost_window=(1.0, 100.0),
    )
    base.update(overrides)
    return scan.ScanConfig(**base)


class CountingRow:
    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def __call__(self, j):
        self.calls += 1
        return self.values[j]


# --- config ---------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValidationError):
        small_config(beta1_range=(1.0, -1.0, 10))
    with pytest.raises(ValidationError):
        small_config(beta2_range=(0.0, 1.0, 1))
    with pytest.raises(ValidationError):
        small_config(cost_window=(0.0, 10.0))
    with pytest.raises(ValidationError):
        small_config(cost_window=(5.0, 5.0))


def test_config_json_round_trip():
    config = small_config(parallelism=4, prune=False)
    data = json.loads(json.dumps(config.to_json_dict()))
    assert scan.ScanConfig.from_json_dict(data) == config


def test_config_grid_values_inclusive():
    config = small_config()
    np.testing.assert_allclose(config.beta1_values(), [-1.0, 0.0, 1.0])
    np.testing.assert_allclose(config.beta2_values(), [-0.5, 0.0, 0.5])


# --- row pruning -----------------------------------------------------------------


def test_row_tail_cut_saves_evaluations():
    # monotone row of 20 whose product first drops below C_min = 1 at the
    # 7th point: 7 evaluations, 13 saved
    values = [50.0 / 2.0**k for k in range(20)]  # 50, 25, ..., crosses 1 at k=6
    assert values[5] >= 1.0 > values[6]
    row = CountingRow(values)
    result = scan.scan_row(row, 20, (1.0, 100.0))
    assert row.calls == 7
    assert sorted(result.products) == list(range(7))
    assert result.skips == [scan.SkipRecord(start=7, stop=20, trigger=6)]


def test_row_entirely_in_window_no_skips():
    row = CountingRow(np.linspace(80.0, 2.0, 15))
    result = scan.scan_row(row, 15, (1.0, 100.0))
    assert row.calls == 15
    assert result.skips == []


def test_row_head_bisection_preserves_window_points():
    # starts far above C_max; the in-window segment must survive pruning
    values = [1e6 / 4.0**k for k in range(25)]
    window = (1.0, 100.0)
    row = CountingRow(values)
    result = scan.scan_row(row, 25, window)
    expected_in = {j for j, v in enumerate(values) if window[0] <= v <= window[1]}
    got_in = {j for j, v in result.products.items() if window[0] <= v <= window[1]}
    assert got_in == expected_in
    assert row.calls < 25
    assert sum(s.count for s in result.skips) == 25 - len(result.products)


def test_row_entirely_above_window():
    row = CountingRow([1e5] * 30)
    result = scan.scan_row(row, 30, (1.0, 100.0))
    assert row.calls == 3  # first, second, last
    assert sum(s.count for s in result.skips) == 27


def test_row_first_point_below_window():
    row = CountingRow([0.5] + [0.1] * 9)
    result = scan.scan_row(row, 10, (1.0, 100.0))
    assert row.calls == 1
    assert result.skips == [scan.SkipRecord(start=1, stop=10, trigger=0)]


def test_row_full_mode_evaluates_everything():
    row = CountingRow([1e5] * 12)
    result = scan.scan_row_full(row, 12)
    assert row.calls == 12
    assert result.skips == []


# --- run_scan ----------------------------------------------------------------------


def test_run_scan_small_grid_complete():
    config = scan.ScanConfig(
        specs=(discrete_qm.HamiltonianSpec(dim=4),),
        beta1_range=(-1.0, 1.0, 3),
        beta2_range=(-0.5, 0.5, 3),
        cost_window=(1e-6, 1e6),
    )
    points = scan.run_scan(config)
    assert len(points) == 9
    keys = [(p.beta1, p.beta2) for p in points]
    assert keys == sorted(keys)


def test_run_scan_zero_beta_row_has_full_entropy():
    config = small_config(cost_window=(1e-6, 1e6))
    points = scan.run_scan(config)
    center = [p for p in points if p.beta1 == 0.0 and p.beta2 == 0.0]
    assert len(center) == 1
    assert center[0].entropy == pytest.approx(math.log(4.0), abs=1e-12)


def test_run_scan_empty_spec_list():
    config = scan.ScanConfig(
        specs=(),
        beta1_range=(-1.0, 1.0, 3),
        beta2_range=(-0.5, 0.5, 3),
    )
    assert scan.run_scan(config) == []


def test_run_scan_skips_unbuildable_spec(caplog):
    # a potential that overflows to infinity aborts only its own spec
    overflowing = discrete_qm.HamiltonianSpec(dim=400, terms=((5, 1e300),))
    config = scan.ScanConfig(
        specs=(discrete_qm.HamiltonianSpec(dim=4), overflowing),
        beta1_range=(-1.0, 1.0, 3),
        beta2_range=(-0.5, 0.5, 3),
        cost_window=(1e-6, 1e6),
    )
    points = scan.run_scan(config)
    assert {p.spec_id for p in points} == {0}
    assert any("failed to build" in r.message for r in caplog.records)


def test_run_scan_parallel_matches_serial():
    specs = tuple(discrete_qm.monomial_family([4, 6], thetas=[0.5], exponents=[1, 2]))
    base = dict(
        specs=specs,
        beta1_range=(-1.0, 1.0, 5),
        beta2_range=(-0.2, 0.8, 5),
        cost_window=(0.5, 50.0),
    )
    serial = scan.run_scan(scan.ScanConfig(**base))
    threaded = scan.run_scan(scan.ScanConfig(parallelism=4, **base))
    assert serial == threaded


def test_pruned_scan_matches_full_on_monotone_grid():
    spec = discrete_qm.HamiltonianSpec(dim=4, terms=((2, 1.0),))
    base = dict(
        specs=(spec,),
        beta1_range=(0.05, 2.0, 20),
        beta2_range=(0.05, 1.0, 20),
        cost_window=(0.5, 5.0),
    )
    full = scan.run_scan(scan.ScanConfig(prune=False, **base))
    pruned = scan.run_scan(scan.ScanConfig(prune=True, **base))
    window = base["cost_window"]

    # precondition of the pruning contract: sampled rows/columns monotone
    products = {(p.beta1, p.beta2): p.product for p in full}
    b1s = sorted({p.beta1 for p in full})
    b2s = sorted({p.beta2 for p in full})
    for b1 in b1s:
        row = [products[(b1, b2)] for b2 in b2s]
        assert all(x >= y for x, y in zip(row, row[1:]))
    for b2 in (b2s[0], b2s[-1]):
        col = [products[(b1, b2)] for b1 in b1s]
        assert all(x >= y for x, y in zip(col, col[1:]))

    def in_window_set(points):
        return {(p.beta1, p.beta2) for p in points if p.in_window(window)}

    assert in_window_set(pruned) == in_window_set(full)
    assert len(pruned) < len(full)


# --- fit -----------------------------------------------------------------------------


def _point(entropy, product, spec_id=0):
    return scan.CostPoint(
        spec_id=spec_id, beta1=0.0, beta2=0.0, entropy=entropy,
        energy_cost=product, space_cost=1.0, product=product,
    )


def test_fit_single_point():
    fit = scan.fit_alpha([_point(math.log(2.0), 1.0)], (0.5, 10.0))
    assert fit.alpha == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 1


def test_fit_two_point_example():
    points = [_point(math.log(2.0), 1.0), _point(math.log(3.0), 4.0)]
    fit = scan.fit_alpha(points, (0.5, 10.0))
    assert fit.alpha == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 2


def test_fit_zero_entropy_points():
    fit = scan.fit_alpha([_point(0.0, 2.0), _point(0.0, 5.0)], (0.5, 10.0))
    assert fit.alpha == 0.0


def test_fit_ignores_out_of_window():
    points = [_point(math.log(2.0), 1.0), _point(3.0, 0.01)]
    fit = scan.fit_alpha(points, (0.5, 10.0))
    assert fit.alpha == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 1


def test_fit_empty_window_raises():
    with pytest.raises(EmptyWindowError):
        scan.fit_alpha([_point(1.0, 1000.0)], (0.5, 10.0))


def test_fit_dominance_and_minimality_on_real_scan():
    config = small_config(cost_window=(0.1, 200.0))
    points = scan.run_scan(config)
    fit = scan.fit_alpha(points, config.cost_window)
    for p in points:
        if p.in_window(config.cost_window):
            assert p.entropy <= math.log(fit.alpha * math.sqrt(p.product) + 1.0) + 1e-12
    shrunk = fit.alpha * (1.0 - 1e-6)
    pt = fit.attaining_point
    assert pt.entropy > math.log(shrunk * math.sqrt(pt.product) + 1.0)


def test_bound_fit_json_fields():
    fit = scan.fit_alpha([_point(math.log(2.0), 4.0, spec_id=7)], (0.5, 10.0))
    data = fit.to_json_dict()
    assert set(data) == {
        "alpha", "spec_id", "beta1", "beta2", "entropy", "product",
        "n_points", "c_min", "c_max",
    }
    assert data["spec_id"] == 7


# --- candidate bound -------------------------------------------------------------------


def test_candidate_bound_zero_at_log_alpha():
    assert scan.candidate_bound(math.log(2.3455), 2.3455) == pytest.approx(0.0, abs=1e-12)


def test_candidate_bound_unit_value():
    assert scan.candidate_bound(math.log(2.0 * 2.3455), 2.3455) == pytest.approx(
        1.0, abs=1e-12
    )


def test_candidate_bound_floored():
    assert scan.candidate_bound(0.0, 1.0) == 0.0
    assert scan.candidate_bound(0.0, 2.0) == 0.0  # e^0/2 - 1 < 0 floored


def test_candidate_bound_rejects_nonpositive_alpha():
    with pytest.raises(ValidationError):
        scan.candidate_bound(1.0, 0.0)


# --- CSV -------------------------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    config = small_config(cost_window=(0.1, 200.0))
    points = scan.run_scan(config)
    path = tmp_path / "scan.csv"
    scan.write_csv(points, config.cost_window, path)
    back = scan.read_csv(path)
    assert back == points  # 17 significant digits round-trip doubles exactly


def test_csv_header_and_flags(tmp_path):
    points = [_point(0.5, 1.0), _point(0.5, 1e5)]
    path = tmp_path / "pts.csv"
    scan.write_csv(points, (0.5, 10.0), path)
    lines = path.read_text().splitlines()
    assert lines[0] == scan.CSV_HEADER
    assert lines[1].endswith(",1")
    assert lines[2].endswith(",0")


def test_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValidationError):
        scan.read_csv(path)


def test_scan_determinism_byte_identical(tmp_path):
    config = small_config(cost_window=(0.1, 200.0))
    paths = []
    for name in ("a.csv", "b.csv"):
        points = scan.run_scan(config)
        path = tmp_path / name
        scan.write_csv(points, config.cost_window, path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
