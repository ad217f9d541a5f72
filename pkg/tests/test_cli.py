import json
import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.orchestration.cli import EXIT_ERROR, EXIT_PASS, CLIError, main, parse_command
from src.orchestration.pipeline_runner import PipelineRunner
from src.orchestration.pipelines import check_ainfty


def _last_json(text: str) -> dict:
    return json.loads(text[text.index('{'):])


def test_parse_command_collects_bounds():
    """Numeric flags end up in the bounds map"""
    command = parse_command(['ext', '--depth', '6', '--weight-bound', '7'])
    assert command.subcommand == 'ext'
    assert command.bounds['depth'] == 6
    assert command.bounds['weight_bound'] == 7


def test_unknown_flag_is_usage_error():
    """argparse errors are raised instead of exiting"""
    with pytest.raises(CLIError):
        parse_command(['check-ainfty', '--algebra', 'lambda1', '--bogus'])


def test_check_ainfty_writes_certificate(tmp_path, capsys):
    """A catalog algebra passes and its certificate is stored in the workdir"""
    code = main(['--workdir', str(tmp_path), 'check-ainfty', '--algebra', 'lambda1', '--arity', '4'])
    assert code == EXIT_PASS
    summary = _last_json(capsys.readouterr().out)
    assert summary['verdict'] == 'PASS'
    stored = json.loads((tmp_path / 'certificates' / 'check-ainfty.json').read_text(encoding='utf-8'))
    assert stored['verdict'] == 'PASS'
    assert stored['pipeline'] == summary['pipeline']


def test_explicit_output_path(tmp_path):
    """--output places the certificate inside the workdir"""
    code = main(['--workdir', str(tmp_path), '--output', 'out/lambda1.json',
                 'check-ainfty', '--algebra', 'lambda1', '--arity', '3'])
    assert code == EXIT_PASS
    assert (tmp_path / 'out' / 'lambda1.json').exists()


def test_malformed_input_exits_with_error(tmp_path, capsys):
    """A '1/0' coefficient is reported as a structured error"""
    document = {
        'name': 'broken',
        'basis': [{'name': 'e', 'degree': 0, 'weight': 1}],
        'tables': [{'arity': 2, 'inputs': ['e', 'e'], 'output': {'e': '1/0'}}],
    }
    path = tmp_path / 'broken.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    code = main(['--workdir', str(tmp_path), 'check-ainfty', '--input', str(path)])
    assert code == EXIT_ERROR
    error = _last_json(capsys.readouterr().out)
    assert error['error'] == 'ValidationError'
    assert not (tmp_path / 'certificates').exists()


def test_non_positive_bound_rejected(tmp_path, capsys):
    """Bounds must be positive"""
    code = main(['--workdir', str(tmp_path), 'hochschild', '--algebra', 'lambda1', '--max-weight', '0'])
    assert code == EXIT_ERROR
    assert 'error' in _last_json(capsys.readouterr().out)


def test_usage_error_exit_code(capsys):
    """Unknown subcommands give exit status 2"""
    assert main(['frobnicate']) == EXIT_ERROR
    assert _last_json(capsys.readouterr().out)['error'] == 'CLIError'


def test_truncation_error_reports_required_bounds(tmp_path, capsys):
    """A weight bound too small for the requested arity names the bound it needs"""
    code = main(['--workdir', str(tmp_path), 'certify-10dim', '--arity', '8', '--weight-bound', '3'])
    assert code == EXIT_ERROR
    error = _last_json(capsys.readouterr().out)
    assert error['error'] == 'TruncationError'
    assert error['required']['weight_bound'] >= 4


def test_runner_records_statistics(tmp_path):
    """Each pipeline run is stored and counted"""
    runner = PipelineRunner(str(tmp_path))
    document = runner.run_pipeline('check-ainfty-lambda1', lambda: check_ainfty('lambda1', 3))
    assert document.verdict == 'PASS'
    assert runner.pipeline_stats['pipelines_run'] == 1
    assert runner.pipeline_stats['checks_failed'] == 0
    assert (tmp_path / 'certificates' / 'check-ainfty-lambda1.json').exists()


def test_runner_certificates_are_reproducible(tmp_path):
    """Running the same pipeline twice writes identical bytes"""
    runner = PipelineRunner(str(tmp_path))
    path = tmp_path / 'certificates' / 'check-ainfty-y_cube.json'
    runner.run_pipeline('check-ainfty-y_cube', lambda: check_ainfty('y_cube', 4))
    first = path.read_bytes()
    runner.run_pipeline('check-ainfty-y_cube', lambda: check_ainfty('y_cube', 4))
    assert path.read_bytes() == first
