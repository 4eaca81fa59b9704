import json
from typing import Any

import pytest

from enriqueslab import runners
from enriqueslab.runners import Check, RunConfig, RunContext, VerificationReport
from enriqueslab.typing import SCHEMA, CertificateError


def _broken(_: RunContext) -> dict[str, Any]:
    raise CertificateError("deliberately broken")


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert (config.suite, config.config_index, config.seed, config.workers) == (
            "all",
            0,
            0,
            1,
        )

    @pytest.mark.parametrize(
        ("kwargs", "match"),
        [
            ({"suite": "geometry"}, "is not one of"),
            ({"workers": 0}, "must be positive"),
            ({"config_index": -1}, "must be non-negative"),
        ],
    )
    def test_validation(self, kwargs: dict[str, Any], match: str):
        with pytest.raises(ValueError, match=match):
            RunConfig(**kwargs)

    def test_config_index_out_of_range(self):
        context = RunContext(RunConfig(config_index=10_000))
        with pytest.raises(IndexError, match="configurations"):
            _ = context.cfg

    def test_rng_depends_on_seed_and_salt(self):
        first, second = RunContext(RunConfig(seed=1)), RunContext(RunConfig(seed=2))
        assert first.rng(0).integers(1 << 30) == first.rng(0).integers(1 << 30)
        assert first.rng(0).integers(1 << 30) != second.rng(0).integers(1 << 30)
        assert first.rng(0).integers(1 << 30) != first.rng(1).integers(1 << 30)


class TestRegistry:
    def test_ids_are_unique_and_namespaced(self):
        ids = [c.check_id for c in runners.CHECKS]
        assert len(ids) == len(set(ids))
        assert all(c.check_id.startswith(f"{c.suite}.") for c in runners.CHECKS)
        assert {c.suite for c in runners.CHECKS} == set(runners.SUITES)

    def test_select(self):
        plane_ids = [c.check_id for c in runners.select_checks("plane")]
        assert plane_ids == [
            "plane.incidence",
            "plane.torsion",
            "plane.sextuples",
            "plane.collineations",
            "plane.pencil",
        ]
        assert len(runners.select_checks("all")) == len(runners.CHECKS)
        with pytest.raises(ValueError, match="is not one of"):
            runners.select_checks("geometry")

    def test_duplicate_registration(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setattr(runners, "CHECKS", [])
        runners.check("plane", "twice", "plumbing")(_broken)
        with pytest.raises(ValueError, match="registered twice"):
            runners.check("plane", "twice", "plumbing")(_broken)


class TestReport:
    def test_plane_suite(self):
        report = runners.run("plane")
        assert report.exit_code == 0
        assert report.counts() == {"pass": 5, "fail": 0, "skipped": 0}
        assert report.record("plane.sextuples").witness["general_sextuples"] == 168
        assert report.record("plane.collineations").witness["collineations"] == 20

    def test_progress_options_are_not_mutated(self):
        options = {"disable": True}
        assert runners.run("plane", pbar=options).exit_code == 0
        assert options == {"disable": True}

    def test_json_is_reproducible(self):
        first = runners.run("plane", RunConfig(seed=7)).to_json(timings=False)
        second = runners.run("plane", RunConfig(seed=7, workers=3)).to_json(timings=False)
        assert first == second
        document = json.loads(first)
        assert document["schema"] == SCHEMA
        assert document["kind"] == "verification-report"
        assert "elapsed_ms" not in document["records"][0]
        assert set(document["records"][0]) == {
            "check_id",
            "anchor",
            "status",
            "witness",
        }

    def test_timings(self):
        document = json.loads(runners.run("plane").to_json())
        assert all(r["elapsed_ms"] >= 0 for r in document["records"])

    def test_failure_is_recorded(self, monkeypatch: pytest.MonkeyPatch):
        broken = Check("plane.broken", "plane", "plumbing", _broken)
        monkeypatch.setattr(runners, "CHECKS", [*runners.CHECKS, broken])
        report = runners.run("plane")
        record = report.record("plane.broken")
        assert record.status == "fail"
        assert record.witness == {
            "error": "CertificateError",
            "message": "deliberately broken",
        }
        assert report.record("plane.pencil").status == "pass"
        assert not report.ok
        assert report.exit_code == 1

    def test_missing_record(self):
        report = VerificationReport(RunConfig())
        assert report.ok
        with pytest.raises(KeyError):
            report.record("plane.nothing")

    def test_suite_argument_wins(self):
        report = runners.run("plane", RunConfig(suite="char2", seed=4))
        assert report.config.suite == "plane"
        assert report.config.seed == 4


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["lattice", "gamma", "vinberg", "char2"])
def test_suite_passes(suite: str):
    report = runners.run(suite)
    failures = [r.to_dict() for r in report.records if r.status != "pass"]
    assert failures == []


@pytest.mark.slow
def test_euler_witness():
    witness = runners.run("char2").record("char2.euler").witness
    assert witness["divisor_square"] == -24
    assert witness["isolated_degree"] == 0
    assert witness["eleven_curve_degree"] == 2
