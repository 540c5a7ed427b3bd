"""
CLI

The `selectq` command.

    selectq train --config cs-small --out results/
    selectq eval --checkpoint results/<hash>_seed0.json
    selectq transfer --checkpoint results/<hash>_seed0.json --n-test 20
    selectq verify --suite ei --seed 0
    selectq bench

`--config` takes a preset name or a JSON file. Reports are printed as JSON on
stdout. Exit status: 0 on success, 1 when a check fails, 2 on a configuration
error.
"""

import argparse
import json
import logging
import sys

from selectq.errors import ConfigError, TransferError
from selectq.harness.bench import bench
from selectq.harness.config import PRESETS, build_env, load_config
from selectq.harness.evaluate import ei_deviation, evaluate, transfer_evaluate
from selectq.harness.logs import LEVELS, configure_logging
from selectq.harness.run import checkpoint_config, read_checkpoint, restore_agent, run_experiment
from selectq.verification.suites import SUITES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _print(doc):
    print(json.dumps(doc, indent=2, sort_keys=True))


def cmd_train(args):
    cfg = load_config(args.config)
    result = run_experiment(cfg, out=args.out, workers=args.parallel_seeds, progress=args.progress)
    _print({"config_hash": result.config_hash, "manifest": str(result.manifest), "final": result.report.to_dict()})
    return EXIT_OK


def _restore(args):
    doc = read_checkpoint(args.checkpoint)
    cfg = load_config(args.config) if args.config else checkpoint_config(doc)
    return doc, cfg


def cmd_eval(args):
    doc, cfg = _restore(args)
    env = build_env(cfg, args.seed)
    agent = restore_agent(doc, cfg, env)
    episodes = args.episodes or cfg.train.eval_episodes
    _print(evaluate(agent, env, episodes, args.seed, cfg.episode_length()).to_dict())
    return EXIT_OK


def cmd_transfer(args):
    doc, cfg = _restore(args)
    if doc.get("kind") == "dense":
        raise TransferError("Dense networks are bound to the item count they were trained at and cannot be transferred.")
    agent = restore_agent(doc, cfg, build_env(cfg, args.seed))
    test_cfg = cfg.with_env_params(N=args.n_test)
    env = build_env(test_cfg, args.seed)
    episodes = args.episodes or cfg.train.eval_episodes
    report = transfer_evaluate(agent, env, episodes, args.seed, test_cfg.episode_length())
    deviation = ei_deviation(agent, env, args.seed)
    _print({"n_train": cfg.env_config().N, "n_test": args.n_test, "ei_deviation": deviation, "report": report.to_dict()})
    return EXIT_OK


def cmd_verify(args):
    reports = run_suite(args.suite, args.seed, args.workers)
    _print([report.to_dict() for report in reports])
    return EXIT_OK if all(report.ok for report in reports) else EXIT_FAILED


def cmd_bench(args):
    _print(bench(tuple(args.sizes), channels=args.channels, repeats=args.repeats))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="selectq", description="Iterative select Q-learning experiments and checks.")
    parser.add_argument("--log-level", default="INFO", choices=LEVELS, help="Root logging level")
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", help="Train every seed of an experiment and write its result files")
    train.add_argument("--config", required=True, help=f"Preset ({', '.join(PRESETS)}) or JSON file")
    train.add_argument("--out", default=None, help="Output directory (default: the config's `out`)")
    train.add_argument("--parallel-seeds", type=int, default=1, help="Worker threads, one seed each")
    train.add_argument("--progress", action="store_true", help="Show a progress bar")
    train.set_defaults(handler=cmd_train)

    evaluation = commands.add_parser("eval", help="Evaluate a checkpoint greedily")
    evaluation.add_argument("--checkpoint", required=True)
    evaluation.add_argument("--config", default=None, help="Override the config stored in the checkpoint")
    evaluation.add_argument("--episodes", type=int, default=None)
    evaluation.add_argument("--seed", type=int, default=0)
    evaluation.set_defaults(handler=cmd_eval)

    transfer = commands.add_parser("transfer", help="Evaluate a checkpoint at another item count")
    transfer.add_argument("--checkpoint", required=True)
    transfer.add_argument("--n-test", type=int, required=True, help="Item count of the test environment")
    transfer.add_argument("--config", default=None, help="Override the config stored in the checkpoint")
    transfer.add_argument("--episodes", type=int, default=None)
    transfer.add_argument("--seed", type=int, default=0)
    transfer.set_defaults(handler=cmd_transfer)

    verify = commands.add_parser("verify", help="Run verification suites")
    verify.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--workers", type=int, default=1)
    verify.set_defaults(handler=cmd_verify)

    timing = commands.add_parser("bench", help="Time shared and dense networks at growing N")
    timing.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50])
    timing.add_argument("--channels", type=int, default=16)
    timing.add_argument("--repeats", type=int, default=3)
    timing.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except (ConfigError, TransferError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
