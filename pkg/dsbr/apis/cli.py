"""
命令行入口 python -m dsbr <subcommand> ...
退出码: 0 成功, 2 输入校验失败, 3 数值计算失败
"""
import argparse
import json
import sys
from typing import Optional, Sequence

from dsbr.core.games import MatrixGame, MarkovGame
from dsbr.core.chain import (
    induce_chain, stationary_distribution, mixing_time, match_two_state,
    two_state_marginal, two_state_mixing_lower_bound)
from dsbr.core.oracles import markov_nash_gap, matrix_nash_gap, minimax_value_iteration, minimax_policies
from dsbr.datasets.loader import load_game, load_policy, save_game, save_policy, game_to_object
from dsbr.datasets.generator.games import (
    GeneratorSpec, GeneratorKind, NamedGame, generate_game, appendix_d_policy)
from dsbr.models.conditions import check_conditions
from dsbr.models.dynamics import RunConfig
from dsbr.models.schedule import StepsizeSchedule, SCHEDULE_KINDS
from dsbr.apis.experiment import ExperimentSpec, run_experiment
from dsbr.utils.builder import build_from_settings
from dsbr.utils.errors import ValidationError, NumericalFailure
from dsbr.utils.logger import DsbrLogger

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--seed', type=int, default=0, help='base seed')
    parser.add_argument('--out', default=None, help='output file or directory')
    parser.add_argument('--replications', type=int, default=1)
    parser.add_argument('--checkpoint-every', type=int, default=None)
    parser.add_argument('--tau', type=float, default=0.05)
    parser.add_argument('--schedule', choices=SCHEDULE_KINDS, default='constant')
    parser.add_argument('--alpha', type=float, default=0.1)
    parser.add_argument('--h', type=float, default=0.0)
    parser.add_argument('--z', type=float, default=None)
    parser.add_argument('--ratio', type=float, default=0.5, help='c_{alpha,beta}')
    parser.add_argument('--K', type=int, default=1000)
    parser.add_argument('--T', type=int, default=1)
    parser.add_argument('--tol', type=float, default=1e-8)
    parser.add_argument('--strict-theory', action='store_true')
    parser.add_argument('--json', action='store_true', help='print summaries as JSON')
    parser.add_argument('--workers', type=int, default=1)
    parser.add_argument('--c4', type=float, default=None, help='smoothing-bias constant for Markov runs')
    parser.add_argument('--verbose', action='store_true')
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog='dsbr', description='doubly smoothed best-response dynamics')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen-game', parents=[common], help='generate a game file')
    gen.add_argument('--kind', choices=[k.value for k in GeneratorKind], default='named')
    gen.add_argument('--name', choices=[n.value for n in NamedGame], default=None)
    gen.add_argument('--dims', type=int, nargs='+', default=())
    gen.add_argument('--gamma', type=float, default=0.0)
    gen.add_argument('--eps-p', type=float, default=0.2)
    gen.add_argument('--mix-alpha', type=float, default=0.9, help='appendix-d action probability')
    gen.add_argument('--policy-out', default=None, help='appendix-d: also write the matching policy')

    for name, help_text in (('simulate-matrix', 'run DSBR on a matrix game'),
                            ('simulate-markov', 'run DSBR-VI on a Markov game')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('game')

    rat = sub.add_parser('rationality', parents=[common], help='learn against a frozen opponent')
    rat.add_argument('game')
    rat.add_argument('--opponent', default=None, help='policy file holding the opponent policy')
    rat.add_argument('--learner', type=int, choices=(1, 2), default=1)

    gap = sub.add_parser('nash-gap', parents=[common], help='exact Nash gap of a joint policy')
    gap.add_argument('game')
    gap.add_argument('policy')
    gap.add_argument('--p-o', type=float, nargs='+', default=None)

    vi = sub.add_parser('value-iterate', parents=[common], help='minimax value iteration')
    vi.add_argument('game')
    vi.add_argument('--player', type=int, choices=(1, 2), default=1)

    mix = sub.add_parser('mixing-time', parents=[common], help='mixing time of a policy-induced chain')
    mix.add_argument('game')
    mix.add_argument('policy')
    mix.add_argument('--eta', type=float, default=0.05)

    cond = sub.add_parser('check-conditions', parents=[common], help='check stepsize conditions')
    cond.add_argument('game')
    cond.add_argument('--c0', type=float, default=None)
    cond.add_argument('--c-tau', type=float, default=None)
    cond.add_argument('--window', type=int, default=None)

    exp = sub.add_parser('experiment', parents=[common], help='run an experiment settings file')
    exp.add_argument('--settings', required=True)
    return parser


def _run_config(args) -> RunConfig:
    schedule = StepsizeSchedule(kind=args.schedule, alpha=args.alpha, ratio=args.ratio,
                                h=args.h, z=args.z)
    return RunConfig(K=args.K, T=args.T, tau=args.tau, schedule=schedule, seed=args.seed,
                     checkpoint_every=args.checkpoint_every, strict_theory=args.strict_theory,
                     tol=args.tol, c4=args.c4)


def _emit(obj: dict):
    print(json.dumps(obj, indent=2))


def _print_summary(summary: dict, as_json: bool):
    if as_json:
        _emit(summary)
        return
    final = summary['final_nash_gap']
    print(f"mode: {summary['mode']}  replications: {summary['n_replications']}")
    print(f"final nash gap: mean {final['mean']:.6g}  std {final['std']:.6g}")
    if 'regret' in summary:
        print(f"regret: mean {summary['regret']['mean']:.6g}  std {summary['regret']['std']:.6g}")


def _cmd_gen_game(args):
    spec = GeneratorSpec(kind=args.kind, name=args.name, dims=tuple(args.dims),
                         gamma=args.gamma, eps_p=args.eps_p, alpha=args.mix_alpha)
    game = generate_game(spec, args.seed)
    if args.out is None:
        _emit(game_to_object(game))
    else:
        save_game(game, args.out)
    if args.policy_out is not None:
        if spec.name != NamedGame.AppendixD.value:
            raise ValidationError('--policy-out is only available for appendix-d')
        save_policy(appendix_d_policy(spec.alpha), args.policy_out)


def _cmd_simulate(args, mode: str, opponent=None, learner=1):
    spec = ExperimentSpec(game=args.game, config=_run_config(args), n_replications=args.replications,
                          base_seed=args.seed, output=args.out, mode=mode, workers=args.workers,
                          opponent=opponent, learner=learner)
    _print_summary(run_experiment(spec), args.json)


def _cmd_nash_gap(args):
    game = load_game(args.game)
    joint = load_policy(args.policy, game)
    if isinstance(game, MatrixGame):
        gap = matrix_nash_gap(game, joint.pi1[0], joint.pi2[0])
    else:
        gap = markov_nash_gap(game, joint.pi1, joint.pi2, args.p_o, args.tol)
    _emit({'nash_gap': gap})


def _cmd_value_iterate(args):
    game = load_game(args.game)
    markov = game.as_markov if isinstance(game, MatrixGame) else game
    result = minimax_value_iteration(markov, args.player, args.tol)
    joint = minimax_policies(markov, result.v_star if args.player == 1 else -result.v_star)
    _emit({'v_star': result.v_star.tolist(), 'iterations': result.iterations,
           'residual': result.residual, 'pi1': joint.pi1.probs.tolist(), 'pi2': joint.pi2.probs.tolist()})


def _cmd_mixing_time(args):
    game = load_game(args.game)
    if not isinstance(game, MarkovGame):
        raise ValidationError('mixing-time needs a Markov game')
    joint = load_policy(args.policy, game)
    chain = induce_chain(game, joint)
    result = {'mixing_time': mixing_time(chain, args.eta),
              'stationary': stationary_distribution(chain).tolist()}
    alpha = match_two_state(game, joint)
    if alpha is not None:
        k = result['mixing_time']
        result['two_state'] = {
            'alpha': alpha,
            'lower_bound': two_state_mixing_lower_bound(alpha, args.eta) if args.eta < 0.5 else None,
            'marginal_at_mixing_time': two_state_marginal(alpha, k),
        }
    _emit(result)


def _cmd_check_conditions(args):
    game = load_game(args.game)
    markov = game.as_markov if isinstance(game, MatrixGame) else game
    report = check_conditions(_run_config(args), markov.n_actions, markov.discount, markov.n_states,
                              c0=args.c0, c_tau=args.c_tau, window=args.window)
    if args.json:
        _emit(report.as_dict())
    else:
        for check in report.checks:
            print(f'{check.name:<20} {check.status:<9} {check.detail}')


def _cmd_experiment(args):
    with open(args.settings, 'r', encoding='utf-8') as f:
        try:
            settings = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f'{args.settings}: invalid JSON ({e})') from e
    if not isinstance(settings, dict):
        raise ValidationError(f'{args.settings}: settings must be a JSON object')
    # 根对象缺省为 ExperimentSpec
    settings.setdefault('class', 'ExperimentSpec')
    spec = build_from_settings(settings)
    if not isinstance(spec, ExperimentSpec):
        raise ValidationError(f'{args.settings}: root class must build an ExperimentSpec')
    _print_summary(run_experiment(spec), args.json)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = DsbrLogger.logger()
    logger.set_console_level('DEBUG' if args.verbose else 'INFO')
    commands = {
        'gen-game': _cmd_gen_game,
        'simulate-matrix': lambda a: _cmd_simulate(a, 'dsbr'),
        'simulate-markov': lambda a: _cmd_simulate(a, 'dsbr-vi'),
        'rationality': lambda a: _cmd_simulate(a, 'rationality', a.opponent, a.learner),
        'nash-gap': _cmd_nash_gap,
        'value-iterate': _cmd_value_iterate,
        'mixing-time': _cmd_mixing_time,
        'check-conditions': _cmd_check_conditions,
        'experiment': _cmd_experiment,
    }
    try:
        commands[args.command](args)
    except (ValidationError, FileNotFoundError) as e:
        logger.error(f'{args.command}: {e}')
        return EXIT_VALIDATION
    except NumericalFailure as e:
        logger.error(f'{args.command}: {e}')
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
