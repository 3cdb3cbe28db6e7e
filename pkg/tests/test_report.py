import json

import numpy as np
import pandas as pd

from utils.report import Check, VerificationReport, export_report_json, export_rows_csv, render_text


def sample_report():
    report = VerificationReport('jacobi', {'samples': 3, 'box': np.float64(1.5)}, seed=4)
    report.add(Check.upper('max_abs_J', 1e-12, 1e-9, witness=np.array([1.0, 2.0])))
    return report


class TestCheck:
    def test_upper(self):
        assert Check.upper('x', 1.0, 1.0).passed
        assert not Check.upper('x', 1.5, 1.0).passed

    def test_lower(self):
        check = Check.lower('gap', 0.5, 0.4)
        assert check.passed and check.details['bound'] == 'lower'
        assert not Check.lower('gap', 0.3, 0.4).passed

    def test_to_dict_is_plain(self):
        payload = Check.upper('n', np.float64(2.0), 3.0, count=np.int64(4), flag=np.bool_(True)).to_dict()
        assert payload['pass'] is True
        assert type(payload['details']['count']) is int and payload['details']['flag'] is True


class TestVerificationReport:
    def test_exit_codes(self):
        report = sample_report()
        assert report.overall and report.exit_code == 0
        report.add(Check.upper('other', 2.0, 1.0))
        assert report.exit_code == 1
        report.numerical_failure = True
        assert report.exit_code == 3

    def test_empty_report_passes(self):
        assert VerificationReport('jacobi', {}).exit_code == 0

    def test_json(self):
        text = sample_report().to_json()
        payload = json.loads(text)
        assert payload['schema'] == 1
        assert payload['seed'] == 4
        assert payload['checks'][0]['details']['witness'] == [1.0, 2.0]
        assert text == json.dumps(payload, sort_keys=True, indent=2)

    def test_warn(self):
        report = sample_report()
        report.warn("path 0 skipped")
        assert report.to_dict()['warnings'] == ["path 0 skipped"]


class TestExport:
    def test_json_file(self, tmp_path):
        target = export_report_json(sample_report(), str(tmp_path / 'report.json'))
        with open(target, encoding='utf-8') as f:
            assert json.load(f)['command'] == 'jacobi'

    def test_rows_csv(self, tmp_path):
        report = sample_report()
        report.rows = [{'trial': 0, 'value': np.float64(0.25)}, {'trial': 1, 'value': 0.5}]
        target = export_rows_csv(report, str(tmp_path / 'rows.csv'), ['trial', 'value'])
        df = pd.read_csv(target)
        assert list(df.columns) == ['trial', 'value']
        assert df['value'].tolist() == [0.25, 0.5]


class TestRenderText:
    def test_pass_and_fail(self):
        report = sample_report()
        report.add(Check.lower('res_uv', 1e-5, 4e-5))
        text = render_text(report)
        assert "[PASS] max_abs_J" in text
        assert "[FAIL] res_uv" in text and ">=" in text
        assert text.splitlines()[-1] == "overall: FAIL"
        assert text.splitlines()[0] == "jacobi (seed=4)"
