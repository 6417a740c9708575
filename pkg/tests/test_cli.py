import json
import os

import pytest

from aadbench.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from aadbench.utils.datasets.directory import MANIFEST_NAME
from aadbench.utils.evaluators.report import AGGREGATE_CURVES_FILE, CURVES_FILE, MESD_FILE


def _write_json(path, content):
    with open(path, 'w') as f:
        json.dump(content, f)
    return str(path)


@pytest.fixture(scope='module')
def dataset_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp('cli')
    config = _write_json(root / 'synth.json', {'n_channels': 2, 'duration': 130.0, 'n_subjects': 2, 'seed': 4})
    out = root / 'dataset'
    assert main(['synth', '--config', config, '--out', str(out)]) == EXIT_OK
    return out


class TestCli:
    """Subcommands and exit codes."""

    def test_synth(self, dataset_dir):
        assert os.path.isfile(dataset_dir / MANIFEST_NAME)
        with open(dataset_dir / 'config.json') as f:
            assert json.load(f)['seed'] == 4

    def test_synth_invalid_field(self, tmp_path):
        config = _write_json(tmp_path / 'synth.json', {'channels': 2})
        assert main(['synth', '--config', config, '--out', str(tmp_path / 'out')]) == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        assert main(['evaluate', '--config', str(tmp_path / 'run.json')]) == EXIT_USAGE

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as info:
            main(['frobnicate'])
        assert info.value.code == EXIT_USAGE

    def test_invalid_workers(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(['evaluate', '--config', str(tmp_path / 'run.json'), '--workers', '0'])
        assert info.value.code == EXIT_USAGE

    def test_report_without_results(self, tmp_path):
        assert main(['report', '--out', str(tmp_path)]) == EXIT_DATA

    def test_inspect(self, dataset_dir, capsys):
        assert main(['inspect', '--dataset', str(dataset_dir)]) == EXIT_OK
        out = capsys.readouterr().out
        assert 's00' in out and 's01' in out

    def test_inspect_missing_dataset(self, tmp_path):
        assert main(['inspect', '--dataset', str(tmp_path / 'nowhere')]) == EXIT_DATA

    def test_evaluate_mesd_report(self, dataset_dir, tmp_path, capsys):
        run = _write_json(tmp_path / 'run.json', {
            'dataset': {'dataset_name': 'directory', 'path': str(dataset_dir)},
            'algorithms': [{'algorithm_name': 'oracle'}, {'algorithm_name': 'anti_oracle'}],
            'evaluation': {'taus': [10.0, 30.0]},
        })
        results = tmp_path / 'results'
        assert main(['evaluate', '--config', run, '--out', str(results), '--seed', '3']) == EXIT_OK
        assert os.path.isfile(results / CURVES_FILE)

        os.remove(results / MESD_FILE)
        capsys.readouterr()
        assert main(['mesd', '--curves', str(results / CURVES_FILE)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert 'oracle\ts00\t10' in lines
        assert 'anti_oracle\ts00\t>50.0' in lines
        assert os.path.isfile(results / MESD_FILE)

        assert main(['report', '--out', str(results)]) == EXIT_OK
        assert os.path.isfile(results / AGGREGATE_CURVES_FILE)
