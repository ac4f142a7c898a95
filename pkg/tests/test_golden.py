import pytest

from gedgen.golden import examples, first_failure, replay, replay_all


@pytest.mark.parametrize("ex", examples(), ids=lambda ex: f"example{ex.number}")
def test_worked_example_bit_exact(ex):
    bad = [c for c in replay(ex) if not c.ok]
    assert not bad, bad[0]


def test_network_and_reference_both_checked():
    sources = {c.source for c in replay_all([1])}
    assert sources == {"network", "reference"}


def test_suppression_fault_is_caught_at_deletion_index():
    # C = 4 is one below the first deletion index x_1 = 5, so relu(5 - C) leaks
    bad = first_failure(replay_all([2], C=4))
    assert bad is not None and bad.example == 2 and bad.symbol == "x'"


def test_report_is_stable():
    assert replay_all() == replay_all()
