import pytest

from fixtures import DESCRIPTIONS, EXAMPLE_BUILDERS, EXPECTED_PASS, registry, run_fixture
from report import PASS, SKIPPED

FAST = [
    "abelian-r2",
    "so3-trivial",
    "manin-triple-Q-so3",
    "gen-manin-triple-double-sl2",
    "qp-group-quadruple-double",
]
HEAVY = [name for name in EXAMPLE_BUILDERS if name not in FAST]


def test_registry_is_complete():
    names = [fixture.name for fixture in registry()]
    assert names == list(EXAMPLE_BUILDERS)
    assert set(DESCRIPTIONS) == set(EXPECTED_PASS) == set(EXAMPLE_BUILDERS)
    assert all(fixture.expected for fixture in registry())


@pytest.mark.parametrize(
    "name",
    FAST + [pytest.param(name, marks=pytest.mark.slow) for name in HEAVY],
)
def test_expected_rows_pass(name):
    report = run_fixture(name)
    assert report.title == name
    assert report.status_of("expected outcomes") == PASS
    for row in EXPECTED_PASS[name]:
        assert report.status_of(row) == PASS
    assert report.ok, [o.name for o in report.failures()]


@pytest.mark.slow
def test_amm_groupoid_skips_coisotropy_unless_slow():
    report = run_fixture("amm-sl2")
    assert report.status_of("graph of multiplication coisotropic") == SKIPPED


def test_unknown_example():
    with pytest.raises(KeyError):
        run_fixture("so4-nowhere")


def test_run_fixture_announces(capsys):
    run_fixture("gen-manin-triple-double-sl2", quiet=False)
    assert "gen-manin-triple-double-sl2" in capsys.readouterr().out
