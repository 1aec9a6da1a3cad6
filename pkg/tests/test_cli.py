import json

import pytest

import tmodl.cli as cli
from tmodl.cli import (
    ConfigError, RunConfig, config_from_args, render_report, run,
)
from tmodl.lvalue import Verdict


def parse_report(text):
    return json.loads(text)


# -- config handling ----------------------------------------------------

def test_config_from_flags():
    cfg = config_from_args(['zeta', '--q', '2', '--n', '1', '--prec', '8'])
    assert cfg.command == 'zeta'
    assert cfg.q == 2 and cfg.n == 1 and cfg.prec == 8
    cfg.validate()


def test_config_roundtrip():
    cfg = config_from_args(['class-formula', '--q', '2', '--carlitz', '1',
                            '--context', 'trivial', '--prec', '8'])
    again = RunConfig.from_dict(cfg.serialize())
    assert again == cfg


def test_config_file_toml(tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('command = "zeta"\nq = 2\nn = 1\nprec = 5\n')
    cfg = config_from_args(['zeta', '--config', str(path)])
    assert cfg.prec == 5 and cfg.n == 1
    cfg.validate()


def test_config_file_bad_toml(tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('command = zeta oops\n')
    with pytest.raises(ConfigError):
        config_from_args(['zeta', '--config', str(path)])


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        RunConfig('zeta', q=4, prec=5).validate()  # not prime
    with pytest.raises(ConfigError):
        RunConfig('zeta', q=2, prec=0).validate()
    with pytest.raises(ConfigError):
        RunConfig('nope', q=2, prec=3).validate()
    with pytest.raises(ConfigError):
        RunConfig('trace-check', q=2, prec=3).validate()  # no demo/instance
    with pytest.raises(ConfigError):
        # |G| = 2 divisible by p = 2, rejected before any computation
        RunConfig('lvalue', q=2, prec=3, context='constant:2').validate()
    with pytest.raises(ConfigError):
        RunConfig('artin', q=2, prec=3,
                  context='cyclotomic:t^2+t+1').validate()  # no character


def test_usage_exit_code():
    assert cli.main(['bogus-command']) == 3
    assert cli.main([]) == 3


# -- runs and reports ---------------------------------------------------

def test_zeta_run_passes():
    code, doc = run(RunConfig('zeta', q=2, n=1, prec=6))
    assert code == 0
    assert doc['status'] == 'pass'
    assert doc['schema'] == 'tmodl-report/1'
    assert doc['euler_product'] == doc['oracle']


def test_report_deterministic():
    cfg = RunConfig('zeta', q=2, n=1, prec=6)
    a = render_report(run(cfg)[1])
    b = render_report(run(RunConfig('zeta', q=2, n=1, prec=6))[1])
    assert a == b  # byte-identical


def test_report_config_roundtrip():
    cfg = RunConfig('trace-check', q=2, demo='qpower', prec=6)
    _, doc = run(cfg)
    assert RunConfig.from_dict(doc['config']) == cfg


def test_ledger_sorted_by_degree_then_lex():
    _, doc = run(RunConfig('zeta', q=2, n=1, prec=5))
    primes = [e['prime'] for e in doc['ledger']]
    keyed = sorted(primes, key=lambda s: (s.split('+')[0], s))
    assert primes == keyed


def test_class_formula_run():
    code, doc = run(RunConfig('class-formula', q=2, carlitz=1,
                              context='trivial', prec=8))
    assert code == 0
    assert doc['class_dim'] == 0


def test_trace_check_demo():
    code, doc = run(RunConfig('trace-check', q=2, demo='qpower', prec=6))
    assert code == 0
    assert doc['lhs'] == '1' and doc['rhs'] == '1'


def test_trace_check_instance_file(tmp_path):
    path = tmp_path / 'inst.txt'
    path.write_text('trace instance\np: 2\nm: 1\ntau 1: t+1\n')
    code, doc = run(RunConfig('trace-check', q=2, instance=str(path),
                              prec=5))
    assert code == 0
    assert doc['status'] == 'pass'


def test_trace_check_missing_instance(tmp_path):
    code, doc = run(RunConfig('trace-check', q=2,
                              instance=str(tmp_path / 'nope'), prec=5))
    assert code == 3
    assert 'nope' in doc['error']


def test_artin_run():
    code, doc = run(RunConfig('artin', q=2, n=1,
                              context='cyclotomic:t^2+t+1',
                              character='1', prec=5))
    assert code == 0
    assert all(p['status'] == 'pass' for p in doc['per_prime'])


def test_lvalue_equivariant_run():
    code, doc = run(RunConfig('lvalue', q=2, carlitz=1,
                              context='constant:3', prec=4))
    assert code == 0
    assert doc['value']['0'].startswith('1')  # identity component


def test_fail_exit_code_and_first_difference(monkeypatch):
    def rigged(cfg):
        return Verdict(Verdict.FAIL, 'forced', first_difference=-3), {}
    monkeypatch.setitem(cli._PIPELINES, 'zeta', rigged)
    code, doc = run(RunConfig('zeta', q=2, prec=4))
    assert code == 1
    assert doc['first_difference'] == -3


def test_inconclusive_exit_code(monkeypatch):
    def rigged(cfg):
        return Verdict(Verdict.INCONCLUSIVE, 'budget exhausted'), {}
    monkeypatch.setitem(cli._PIPELINES, 'zeta', rigged)
    code, doc = run(RunConfig('zeta', q=2, prec=4))
    assert code == 2


def test_emit_report_to_file(tmp_path, capsys):
    cfg = RunConfig('zeta', q=2, n=1, prec=4, out=str(tmp_path / 'r.json'))
    assert cli.main(['zeta', '--q', '2', '--n', '1', '--prec', '4',
                     '--out', str(tmp_path / 'r.json')]) == 0
    doc = json.loads((tmp_path / 'r.json').read_text())
    assert doc['status'] == 'pass'
    assert 'zeta: pass' in capsys.readouterr().out


def test_emit_report_bad_path(capsys):
    code = cli.main(['zeta', '--q', '2', '--prec', '4',
                     '--out', '/nonexistent-dir/r.json'])
    assert code == 3
    assert 'cannot write report' in capsys.readouterr().err


def test_main_end_to_end_stdout(capsys):
    assert cli.main(['trace-check', '--q', '2', '--demo', 'qpower',
                     '--prec', '5']) == 0
    out = capsys.readouterr().out
    assert '"schema": "tmodl-report/1"' in out
    assert 'trace-check: pass' in out
