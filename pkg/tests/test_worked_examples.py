import pytest

from modules.worked_examples import DemoRow, demo_paper, format_table


@pytest.fixture(scope='module')
def report():
    return demo_paper()


def test_every_row_reproduces(report):
    assert report.all_ok
    assert not any(v.failed for v in report.verdicts)


def test_remark_transform_entries_are_exact(report):
    for i in (1, 2):
        for j in (1, 2):
            assert report.row(f'remark.C[{i},{j}]').diff < 1e-9


def test_example_real_part(report):
    row = report.row('example.ReC[2,2]')
    assert row.computed == pytest.approx(15.96)
    assert report.row('example.two_norm').ok
    assert report.row('example.improvement_margin').computed > 0


def test_discrepancies_are_listed(report):
    labels = [item['label'] for item in report.discrepancies]
    assert labels == ['remark.C_plus_C_star[1,2]', 'example.ReC']
    assert report.discrepancies[0]['computed'] == pytest.approx(58 + 46j)
    computed = report.discrepancies[1]['computed']
    assert computed[0][0] == pytest.approx(10.94)
    assert computed[0][1] == pytest.approx(-0.005)


def test_missing_row_raises(report):
    with pytest.raises(KeyError):
        report.row('remark.nothing')


def test_row_tolerance():
    assert DemoRow('x', 1.0, 1.0005, 5e-4, 1e-3).ok
    assert not DemoRow('x', 1.0, 1.01, 1e-2, 1e-3).ok


def test_format_table_and_json(report):
    table = format_table(report)
    assert 'remark.C[2,1]' in table
    assert 'example.accretive_disk' in table
    assert '58+46i' in table
    data = report.to_dict()
    assert data['all_ok'] is True
    assert data['rows'][0]['published'] == [27.0, -184.0]
