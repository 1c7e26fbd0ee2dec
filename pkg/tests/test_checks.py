import pytest

from src.check_manager import CheckManager
from src.config.settings import ConfigManager
from src.checks import CHECK_ORDER, check_registry
from src.checks.base_check import CheckResult, VerifyContext
from src.numerics.errors import ConfigError

SMALL = {"n_theta": 64, "n_modes": 4, "symmetry_samples": 5, "seed": 7}


def test_registry_discovers_every_check():
    assert check_registry.get_check_names() == CHECK_ORDER
    assert all(check_registry.get_check(name).description for name in CHECK_ORDER)


def test_full_suite_passes_on_a_coarse_grid():
    manager = CheckManager(SMALL)
    results = manager.run_all()
    failed = [(r.name, r.error, r.tolerance) for r in results if not r.passed]
    assert not failed
    assert manager.context.relaxed
    report = manager.format_report(results)
    assert f"{len(results)}/{len(results)} checks passed" in report


@pytest.mark.parametrize("name", ["trivial_residual", "kernel", "diagonal_limits", "symmetry"])
def test_single_checks(name):
    results = CheckManager(SMALL).run_all(only=[name])
    assert results
    assert CheckManager.all_passed(results)


def test_mode_matrix_fault_is_detected():
    manager = CheckManager(SMALL, fault="mode_matrix_sign")
    results = manager.run_all(only=["mode_matrices"])
    failed = {r.name for r in results if not r.passed}
    assert "M_1[b=2]" in failed
    assert not any(name.startswith("mode_coupling") for name in failed)
    assert "NO" in manager.format_report(results)


def test_unknown_fault_is_a_config_error():
    with pytest.raises(ConfigError):
        CheckManager(SMALL, fault="flip_everything")


def test_raising_check_becomes_a_failed_result(monkeypatch):
    check = check_registry.get_check("kernel")

    def broken(context):
        raise RuntimeError("boom")

    monkeypatch.setattr(check, "run", broken)
    results = check_registry.run_check("kernel", VerifyContext(SMALL))
    assert len(results) == 1
    assert not results[0].passed
    assert results[0].note == "boom"


def test_unknown_check_name():
    with pytest.raises(ValueError):
        check_registry.run_check("nonexistent", VerifyContext(SMALL))


def test_check_result_compare():
    assert CheckResult.compare("x", 1.0, 1.0 + 1e-9, 1e-8).passed
    assert not CheckResult.compare("x", 1.0, 1.1, 1e-8).passed
    assert CheckResult.compare("x", 4.0, 4.1, 0.05, error=0.025).passed


def test_empty_results_do_not_pass():
    assert not CheckManager.all_passed([])


def test_context_tolerances():
    assert VerifyContext({"n_theta": 1024}).identity_tol == 1e-10
    assert VerifyContext({"n_theta": 128}).identity_tol == 1e-8
    context = VerifyContext({})
    assert context.memo("k", lambda: 3) == 3
    assert context.memo("k", lambda: 4) == 3


def test_symmetry_over_a_hundred_random_states():
    settings = dict(SMALL, symmetry_samples=100)
    results = CheckManager(settings).run_all(only=["symmetry"])
    assert [r.name for r in results] == ["parity[100 states]"]
    assert results[0].passed


def test_default_symmetry_sample_count():
    assert ConfigManager().get_section("verify")["symmetry_samples"] == 100
