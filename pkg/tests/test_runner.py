from dataclasses import fields
from fractions import Fraction as F

import pytest

from composite_bethe import config as config_module
from composite_bethe.config import Config, JobConfig
from composite_bethe.errors import ConfigError, GenericityError, RetryExhausted
from composite_bethe.ratfun import ParamSet, genericity_check
from composite_bethe.runner import VerificationRunner, draw_generic_rationals, draw_twist, summarize
from composite_bethe.types import CheckRecord, Suite, Verdict


def test_draws_are_reproducible():
    one = draw_generic_rationals(7, 4, 40, stream=(3, 1))
    two = draw_generic_rationals(7, 4, 40, stream=(3, 1))
    assert one == two
    assert len(one) == 4
    assert all(abs(x.numerator) <= 40 * x.denominator for x in one)


def test_draws_are_generic_with_fixed_sets():
    xi = ParamSet.of([0, F(1, 2), 3], "xi")
    vals = draw_generic_rationals(11, 5, 40, fixed=[xi], negate=True)
    assert genericity_check([vals, xi], 1).ok
    assert genericity_check([vals.negated(), xi], 1).ok


def test_draw_edge_cases():
    assert len(draw_generic_rationals(1, 0, 40)) == 0
    with pytest.raises(ConfigError):
        draw_generic_rationals(1, 5, 3)
    with pytest.raises(RetryExhausted):
        draw_generic_rationals(1, 2, 40, max_redraws=0)


def test_twist_draw():
    d = draw_twist(3, 40, stream=(1,))
    assert len(set(d)) == 3 and 0 not in d
    assert d == draw_twist(3, 40, stream=(1,))


def test_job_config_validation():
    with pytest.raises(ConfigError):
        JobConfig(L=9)
    with pytest.raises(ConfigError):
        JobConfig(L=2, split=3)
    with pytest.raises(ConfigError):
        JobConfig(c=0)
    with pytest.raises(ConfigError):
        JobConfig(jobs=0)
    with pytest.raises(ConfigError):
        JobConfig(suites=["theorem2"])
    with pytest.raises(ConfigError):
        JobConfig.from_dict({"schema_version": 2})
    with pytest.raises(ConfigError):
        JobConfig.from_dict({"Lmax": 3})
    with pytest.raises(ConfigError):
        JobConfig(L=2, xi=["0"])


def test_job_config_round_trip():
    job = JobConfig(c="1/2", L=2, xi=["0", "7/3"], twist=[2, 3, 5], split="sweep", suites=["rtt", "gl2"], seed=9)
    assert job.c == F(1, 2)
    assert job.splits == [0, 1, 2]
    assert JobConfig.from_dict(job.as_dict()) == job


def test_out_path_default(monkeypatch, tmp_path):
    monkeypatch.setattr(config_module, "DEFAULT_OUT_DIR", str(tmp_path))
    assert JobConfig().out_path() == str(tmp_path / "report.json")
    assert JobConfig(out="x.json").out_path() == "x.json"


def _job(**kw):
    base = dict(L=2, split=1, a_max=1, b_max=1, samples=1, seed=3, jobs=2)
    base.update(kw)
    return JobConfig(**base)


def test_rtt_suite_runs():
    runner = VerificationRunner(_job(suites=["rtt"]))
    records = runner.run()
    # lengths 0..2, three samples of an RTT and a vacuum check each, plus the control
    assert len(records) == 19
    assert all(r.verdict == Verdict.OK for r in records), [r.detail for r in records]
    controls = [r for r in records if "control" in r.instance]
    assert len(controls) == 1 and controls[0].detail == "control detected"


def test_given_inhomogeneities_must_be_generic():
    with pytest.raises(GenericityError):
        VerificationRunner(_job(xi=["0", "0"]))
    with pytest.raises(GenericityError):
        VerificationRunner(_job(xi=["0", "1"]))


def test_reports_are_reproducible():
    job = _job(suites=["actions", "theorem1"])
    first = VerificationRunner(job)
    second = VerificationRunner(job)
    assert first.report(first.run()) == second.report(second.run())


def test_small_run_has_no_failures():
    runner = VerificationRunner(_job(suites=list(Suite)), Config(max_parallel_checks=2))
    report = runner.report(runner.run())
    assert report["summary"]["fail"] == 0, [r for r in report["records"] if r["verdict"] == "fail"]
    assert set(report["summary"]["by_suite"]) == {s.value for s in Suite}
    assert report["config"]["chain"]["xi"] == [f"{x.numerator}/{x.denominator}" for x in runner.chain.xi]


@pytest.mark.slow
def test_ledger_controls_on_an_inner_split():
    runner = VerificationRunner(_job(L=3, a_max=2, b_max=2, suites=["ledgers"]))
    records = runner.run()
    controls = [r for r in records if "control" in r.instance]
    assert len(controls) == 2
    assert all(r.verdict == Verdict.OK for r in records)


def test_summarize():
    recs = [
        CheckRecord(Suite.RTT, {}, Verdict.OK),
        CheckRecord(Suite.RTT, {}, Verdict.FAIL),
        CheckRecord(Suite.GL2, {}, Verdict.SKIPPED),
    ]
    out = summarize(recs)
    assert out["total"] == 3 and out["ok"] == 1 and out["fail"] == 1 and out["skipped"] == 1
    assert out["by_suite"]["rtt"] == {"ok": 1, "fail": 1, "skipped": 0}


def test_config_fields_are_the_runtime_knobs():
    assert [fd.name for fd in fields(Config)] == [
        "c", "max_L", "max_parallel_checks", "enable_cache", "cache_size", "draw_bound", "max_redraws", "samples",
    ]


def test_gl2_draws_keep_negatives_generic():
    runner = VerificationRunner(_job(L=3, split=1, suites=["gl2"], b_max=2))
    for task in runner.tasks_gl2():
        vs = [F(x) for x in task.instance["v"]]
        assert genericity_check([tuple(-x for x in vs), runner.chain.xi], runner.chain.c).ok
