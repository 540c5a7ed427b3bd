"""
RUN

Runs one experiment and writes its result files.

Every file name starts with the first 12 hex digits of the config hash:

- `<hash>_curve_seed<s>.csv`  -- one per seed, columns step,seed,mean_reward,ci95,
- `<hash>_summary.csv`        -- the same columns with seed `all`; the interval
  is taken over the per-seed means of each step,
- `<hash>_seed<s>.json`       -- checkpoint of the trained networks, with the
  agent kind and the experiment config,
- `<hash>_curve.svg`          -- mean and interval band, when `plot` is set,
- `<hash>_manifest.json`      -- config echo, full hash, package version and
  the sha256 of every file above; written last.
"""

import csv
import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position

from selectq import __version__
from selectq.baselines.kinds import make_agent
from selectq.errors import ConfigError
from selectq.harness.config import ExperimentConfig, build_env
from selectq.harness.evaluate import combine_reports, evaluate
from selectq.learner.train import train
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import mean_ci95
from selectq.nets.serialization import dump_params, load_params

logger = logging.getLogger(__name__)

CURVE_FIELDS = ("step", "seed", "mean_reward", "ci95")
HASH_PREFIX = 12
EVAL_SEED_OFFSET = 10_000


@dataclass
class ExperimentResult:
    """Paths written by `run_experiment` and the final evaluation."""

    config_hash: str
    curves: dict = field(default_factory=dict)
    summary: Path = None
    checkpoints: dict = field(default_factory=dict)
    plot: Path = None
    manifest: Path = None
    report: object = None


def _write(path, write):
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            write(handle)
    except OSError as exc:
        logger.error("Cannot write %s: %s", path, exc.strerror)
        raise
    return path


def write_curve(path, rows):
    def write(handle):
        writer = csv.DictWriter(handle, fieldnames=CURVE_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow({key: repr(float(row[key])) if isinstance(row[key], float) else row[key] for key in CURVE_FIELDS})

    return _write(path, write)


def read_curve(path):
    """Rows of a curve CSV with numeric fields converted."""
    with open(path, encoding="utf-8", newline="") as handle:
        return [
            {
                "step": int(row["step"]),
                "seed": row["seed"] if row["seed"] == "all" else int(row["seed"]),
                "mean_reward": float(row["mean_reward"]),
                "ci95": float(row["ci95"]),
            }
            for row in csv.DictReader(handle)
        ]


def summarise(curves):
    """Summary rows: per step, the mean and interval over the seeds' mean rewards."""
    by_step = {}
    for rows in curves:
        for row in rows:
            by_step.setdefault(row["step"], []).append(row["mean_reward"])
    summary = []
    for step in sorted(by_step):
        mean, ci95 = mean_ci95(by_step[step])
        summary.append({"step": step, "seed": "all", "mean_reward": mean, "ci95": ci95})
    return summary


def plot_curve(path, summary, title):
    steps = [row["step"] for row in summary]
    means = [row["mean_reward"] for row in summary]
    lows = [row["mean_reward"] - row["ci95"] for row in summary]
    highs = [row["mean_reward"] + row["ci95"] for row in summary]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(steps, means, linewidth=1.0)
    ax.fill_between(steps, lows, highs, alpha=0.25)
    ax.set_title(title)
    ax.set_xlabel("Training steps")
    ax.set_ylabel("Mean episode reward")
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        logger.error("Cannot write %s: %s", path, exc.strerror)
        raise
    finally:
        plt.close(fig)
    return path


def checkpoint_doc(agent, cfg, seed):
    """Checkpoint document of a trained agent, or None for agents without networks."""
    nets = getattr(agent, "nets", None)
    if nets is None:
        return None
    doc = dump_params(nets.mains, nets.phases(), nets.K)
    doc.update(agent=cfg.agent, seed=seed, experiment=cfg.to_dict())
    return doc


def file_sha256(path):
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def run_seed(cfg, seed, progress=False):
    """
    Trains one seed. The training environment, the evaluation environment, the
    agent and every random stream belong to this call alone.

    OUTPUT: (agent, curve rows, final EvalReport)
    """
    env = build_env(cfg, seed)
    eval_env = build_env(cfg, seed + EVAL_SEED_OFFSET)
    (init_rng,) = SeededRng(seed).spawn(1)
    mode = cfg.sharing_mode()
    agent = make_agent(cfg.kind, cfg.train, env, mode, init_rng)
    last = {}

    def evaluator(agent, step):
        report = evaluate(agent, eval_env, cfg.train.eval_episodes, seed + step, cfg.episode_length())
        last["report"] = report
        return report.mean, report.ci95

    agent, curve = train(cfg.train, env, mode, seed, agent=agent, evaluator=evaluator, progress=progress)
    if "report" not in last:
        evaluator(agent, 0)
    return agent, curve, last["report"]


def run_experiment(cfg, out=None, workers=1, progress=False):
    """
    Trains every seed of `cfg` and writes the result files to `out` (default
    `cfg.out`). Seeds run on `workers` threads. Returns an ExperimentResult.
    """
    out = Path(out if out is not None else cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    full_hash = cfg.config_hash()
    prefix = full_hash[:HASH_PREFIX]
    result = ExperimentResult(full_hash)
    logger.info("Experiment %s: %s on %s, seeds %s", prefix, cfg.agent, cfg.env, list(cfg.seeds))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        runs = list(pool.map(lambda seed: run_seed(cfg, seed, progress and workers <= 1), cfg.seeds))

    curves = []
    for seed, (agent, curve, _) in zip(cfg.seeds, runs):
        curves.append(curve)
        result.curves[seed] = write_curve(out / f"{prefix}_curve_seed{seed}.csv", curve)
        doc = checkpoint_doc(agent, cfg, seed)
        if doc is not None:
            path = out / f"{prefix}_seed{seed}.json"
            result.checkpoints[seed] = _write(path, lambda handle, doc=doc: json.dump(doc, handle))
    summary = summarise(curves)
    result.summary = write_curve(out / f"{prefix}_summary.csv", summary)
    if cfg.plot and summary:
        result.plot = plot_curve(out / f"{prefix}_curve.svg", summary, f"{cfg.agent} on {cfg.env} ({prefix})")
    result.report = combine_reports(report for _, _, report in runs)

    written = [*result.curves.values(), result.summary, *result.checkpoints.values()]
    if result.plot is not None:
        written.append(result.plot)
    manifest = {
        "config": cfg.to_dict(),
        "config_hash": full_hash,
        "version": __version__,
        "final": result.report.to_dict(),
        "files": {path.name: file_sha256(path) for path in written},
    }
    result.manifest = _write(
        out / f"{prefix}_manifest.json", lambda handle: json.dump(manifest, handle, indent=2, sort_keys=True)
    )
    logger.info("Final reward %.4f +- %.4f; manifest %s", result.report.mean, result.report.ci95, result.manifest)
    return result


def read_checkpoint(path):
    """The checkpoint document at `path`."""
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"Cannot read checkpoint {path}: {exc.strerror}.") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Checkpoint {path} is not valid JSON: {exc}.") from exc


def checkpoint_config(doc):
    if "experiment" not in doc:
        raise ConfigError("Checkpoint carries no experiment config; pass one explicitly.")
    return ExperimentConfig.from_dict(doc["experiment"])


def restore_agent(doc, cfg, env):
    """The agent of a checkpoint, built for `env` and loaded with its parameters."""
    param_sets, phases, _ = load_params(doc)
    agent = make_agent(doc.get("agent", cfg.agent), cfg.train, env, cfg.sharing_mode(), SeededRng(0))
    if getattr(agent, "nets", None) is None:
        raise ConfigError(f"Agent kind {agent.name!r} has no networks to load.")
    agent.nets.assign(param_sets, phases)
    return agent
