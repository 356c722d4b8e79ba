import json
import pytest

from dsbr.apis.cli import main, EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL
from dsbr.datasets.loader import load_game, load_policy, save_game, save_policy
from dsbr.core.games import MarkovGame, MatrixGame, JointPolicy, Policy


def _json_output(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_game_and_simulate(tmp_path, capsys):
    game_path = tmp_path / 'pennies.json'
    assert main(['gen-game', '--name', 'matching-pennies', '--out', str(game_path)]) == EXIT_OK
    assert isinstance(load_game(game_path), MatrixGame)
    capsys.readouterr()
    code = main(['simulate-matrix', str(game_path), '--K', '200', '--replications', '2', '--json'])
    assert code == EXIT_OK
    summary = _json_output(capsys)
    assert summary['n_replications'] == 2 and summary['seeds'] == [0, 1]


def test_gen_random_markov_and_value_iterate(tmp_path, capsys):
    game_path = tmp_path / 'markov.json'
    code = main(['gen-game', '--kind', 'random-markov', '--dims', '3', '2', '2', '--gamma', '0.5',
                 '--seed', '4', '--out', str(game_path)])
    assert code == EXIT_OK
    assert isinstance(load_game(game_path), MarkovGame)
    capsys.readouterr()
    assert main(['value-iterate', str(game_path)]) == EXIT_OK
    result = _json_output(capsys)
    assert len(result['v_star']) == 3 and result['iterations'] >= 1
    assert main(['value-iterate', str(game_path), '--player', '2']) == EXIT_OK
    result2 = _json_output(capsys)
    assert result2['v_star'] == pytest.approx([-v for v in result['v_star']], abs=1e-8)


def test_mixing_time_two_state(tmp_path, capsys):
    game_path, policy_path = tmp_path / 'd.json', tmp_path / 'd_policy.json'
    code = main(['gen-game', '--name', 'appendix-d', '--mix-alpha', '0.9', '--out', str(game_path),
                 '--policy-out', str(policy_path)])
    assert code == EXIT_OK
    assert load_policy(policy_path).pi1.probs[0, 0] == pytest.approx(0.9)
    assert main(['mixing-time', str(game_path), str(policy_path), '--eta', '0.05']) == EXIT_OK
    result = _json_output(capsys)
    assert result['mixing_time'] == 11
    assert result['stationary'] == pytest.approx([0.5, 0.5])
    assert result['two_state']['alpha'] == pytest.approx(0.9)
    assert result['two_state']['lower_bound'] <= 11


def test_nash_gap(tmp_path, capsys, pennies):
    game_path, policy_path = tmp_path / 'g.json', tmp_path / 'p.json'
    save_game(pennies, game_path)
    save_policy(JointPolicy(Policy([[1.0, 0.0]]), Policy([[1.0, 0.0]])), policy_path)
    assert main(['nash-gap', str(game_path), str(policy_path)]) == EXIT_OK
    assert _json_output(capsys)['nash_gap'] == pytest.approx(2.0)


def test_check_conditions(tmp_path, capsys, pennies):
    game_path = tmp_path / 'g.json'
    save_game(pennies, game_path)
    code = main(['check-conditions', str(game_path), '--alpha', '0.5', '--ratio', '0.9', '--tau', '0.01',
                 '--json'])
    assert code == EXIT_OK
    report = _json_output(capsys)
    assert report['beta_le_one']['status'] == 'ok'
    assert report['ratio_bound']['status'] == 'symbolic'


def test_experiment_settings(tmp_path, capsys):
    settings = {
        'game': {'kind': 'named', 'name': 'rock-paper-scissors'},
        'config': {'K': 100, 'tau': 0.1,
                   'schedule': {'class': 'dsbr.models.schedule.StepsizeSchedule', 'alpha': 0.2}},
        'n_replications': 2,
        'output': str(tmp_path / 'out'),
    }
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps(settings), encoding='utf-8')
    assert main(['experiment', '--settings', str(path), '--json']) == EXIT_OK
    assert _json_output(capsys)['n_replications'] == 2
    assert (tmp_path / 'out' / 'summary.json').exists()


def test_experiment_settings_errors(tmp_path, capsys):
    path = tmp_path / 'settings.json'
    cases = (
        '{"game": {"kind": "named", "name": "matching-pennies"}, "config": {"K": 10}, "replicas": 2}',
        '{"game": {"kind": "named", "name": "matching-pennies"}, '
        '"config": {"K": 10, "schedule": {"class": "Schedule"}}}',
        '{"class": "RunConfig", "K": 10}',
        '[1, 2]',
        '{"game": ',
    )
    for text in cases:
        path.write_text(text, encoding='utf-8')
        assert main(['experiment', '--settings', str(path)]) == EXIT_VALIDATION
    path.write_text('{"game": {"kind": "named", "name": "matching-pennies"}, '
                    '"config": {"K": 10, "schedule": {"class": "StepsizeSchedule", "alpha": 0.2}}}',
                    encoding='utf-8')
    capsys.readouterr()
    assert main(['experiment', '--settings', str(path), '--json']) == EXIT_OK
    assert _json_output(capsys)['seeds'] == [0]


def test_exit_codes(tmp_path, pennies):
    assert main(['simulate-matrix', str(tmp_path / 'missing.json')]) == EXIT_VALIDATION
    bad = tmp_path / 'bad.json'
    bad.write_text('{"type": "matrix", "payoff": [[2.0]]}', encoding='utf-8')
    assert main(['simulate-matrix', str(bad)]) == EXIT_VALIDATION
    game_path = tmp_path / 'g.json'
    save_game(pennies, game_path)
    assert main(['simulate-matrix', str(game_path), '--alpha', '2.0', '--K', '5']) == EXIT_VALIDATION
    assert main(['simulate-markov', str(game_path), '--K', '5']) == EXIT_VALIDATION
    assert main(['gen-game', '--name', 'matching-pennies', '--policy-out', str(tmp_path / 'x.json')]) \
        == EXIT_VALIDATION

    markov = tmp_path / 'markov.json'
    save_game(MarkovGame([[[[1.0]]]], [[[0.0]]], 0.5), markov)
    for field, value in (('n_actions', 2), ('gamma', None)):
        obj = json.loads(markov.read_text(encoding='utf-8'))
        obj[field] = value
        mistyped = tmp_path / f'mistyped_{field}.json'
        mistyped.write_text(json.dumps(obj), encoding='utf-8')
        assert main(['value-iterate', str(mistyped)]) == EXIT_VALIDATION

    periodic = MarkovGame([[[[0.0, 1.0]]], [[[1.0, 0.0]]]], [[[0.0]], [[0.0]]], 0.5)
    save_game(periodic, tmp_path / 'periodic.json')
    save_policy(JointPolicy(Policy([[1.0], [1.0]]), Policy([[1.0], [1.0]])), tmp_path / 'pp.json')
    assert main(['mixing-time', str(tmp_path / 'periodic.json'), str(tmp_path / 'pp.json')]) == EXIT_NUMERICAL
