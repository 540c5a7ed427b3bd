"""
EVALUATE

The evaluation protocol.

An evaluation plays `episodes` independent episodes of `episode_length` macro
steps with exploration switched off and reports the mean episode return. No
transition is stored and no parameter changes. `combine_reports` merges the
reports of several training seeds into one, with the Student-t interval taken
over the per-seed means.

Transfer evaluation runs shared networks trained at one item count on an
environment with another: the scalars are rebuilt into fresh parameter sets
and the item count never enters them.
"""

import copy
import logging
from dataclasses import asdict, dataclass

import numpy as np

from selectq.constants import CS_EPISODE_LENGTH, CS_MAX_RADIUS, EVAL_EPISODES
from selectq.errors import ConfigError, TransferError
from selectq.learner.agents import uniform_action
from selectq.learner.train import SEED_LIMIT
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import mean_ci95
from selectq.mdp.phase import advance, to_phase0
from selectq.nets.groups import Permutation, apply_permutation, group_specs, permute_rows

logger = logging.getLogger(__name__)

RADIUS_EDGES = tuple(float(edge) for edge in np.linspace(0.0, CS_MAX_RADIUS, 10))


@dataclass(frozen=True)
class EvalReport:
    """
    - `mean`             -- mean episode return,
    - `ci95`             -- half-width of the 95% interval,
    - `per_seed_means`   -- mean return of each training seed,
    - `episode_length`   -- macro steps per episode,
    - `episodes`         -- episodes per seed,
    - `radius_histogram` -- counts of selected circle radii over RADIUS_EDGES,
      or None for environments without radii.
    """

    mean: float
    ci95: float
    per_seed_means: tuple
    episode_length: int
    episodes: int
    radius_histogram: tuple = None

    def to_dict(self):
        doc = asdict(self)
        doc["per_seed_means"] = list(self.per_seed_means)
        if self.radius_histogram is not None:
            doc["radius_histogram"] = {"edges": list(RADIUS_EDGES), "counts": list(self.radius_histogram)}
        return doc


def default_episode_length(env):
    config = getattr(env, "config", None)
    return int(getattr(config, "episode_length", CS_EPISODE_LENGTH))


def evaluate(agent, env, episodes=EVAL_EPISODES, seed=0, episode_length=None):
    """
    Greedy evaluation of `agent` on `env`; the same seed gives the same report.

    INPUT:
    - `agent`          -- any Agent; QAgent-like agents act with epsilon 0,
    - `env`            -- the environment, reset at the start of every episode,
    - `episodes`       -- number of episodes,
    - `seed`           -- seed of the episode resets and of the agent's random choices,
    - `episode_length` -- macro steps per episode (default: the environment's).
    """
    if episodes < 1:
        raise ConfigError(f"Evaluation needs at least one episode, got {episodes}.")
    if episode_length is None:
        episode_length = default_episode_length(env)
    rng = SeededRng(seed)
    act_rng = rng.child()
    returns = []
    radii = []
    tracks_radii = hasattr(env, "last_selected_radii")
    for _ in range(episodes):
        items, context = env.reset(int(rng.integers(0, SEED_LIMIT)))
        s = to_phase0(items, context, env.n_select, env.n_commands)
        total = 0.0
        for _ in range(episode_length):
            chain, s = agent.play_macro(env, s, 0.0, act_rng)
            total += chain.reward
            if tracks_radii:
                radii.append(np.asarray(env.last_selected_radii, dtype=np.float64))
        returns.append(total)
    mean, ci95 = mean_ci95(returns)
    histogram = None
    if tracks_radii:
        counts, _ = np.histogram(np.concatenate(radii) if radii else np.zeros(0), bins=RADIUS_EDGES)
        histogram = tuple(int(count) for count in counts)
    logger.debug("Evaluated %s: %.4f +- %.4f over %d episodes", agent.name, mean, ci95, episodes)
    return EvalReport(mean, ci95, (mean,), episode_length, episodes, histogram)


def combine_reports(reports):
    """One report over several seeds; the interval comes from the per-seed means."""
    reports = list(reports)
    if not reports:
        raise ConfigError("Cannot combine an empty list of reports.")
    lengths = {(report.episode_length, report.episodes) for report in reports}
    if len(lengths) > 1:
        raise ConfigError(f"Reports use different episode settings: {sorted(lengths)}.")
    per_seed = tuple(m for report in reports for m in report.per_seed_means)
    mean, ci95 = mean_ci95(per_seed)
    histogram = None
    if all(report.radius_histogram is not None for report in reports):
        histogram = tuple(int(total) for total in np.sum([report.radius_histogram for report in reports], axis=0))
    return EvalReport(mean, ci95, per_seed, reports[0].episode_length, reports[0].episodes, histogram)


def _planned_phases(agent):
    return getattr(agent, "K", agent.nets.K)


def rebuild(agent, env):
    """
    A copy of `agent` whose parameter sets are rebuilt from their scalars for
    `env`. Raises TransferError for dense networks, a different number of
    phases or different feature widths.
    """
    nets = getattr(agent, "nets", None)
    if nets is None:
        return copy.deepcopy(agent)
    if not nets.kernel.shape_agnostic:
        raise TransferError("Dense networks are bound to the item count they were trained at and cannot be transferred.")
    if _planned_phases(agent) != env.n_select:
        raise TransferError(f"Networks were trained for K={_planned_phases(agent)}, the environment selects K={env.n_select}.")
    groups = group_specs(env.item_width, env.n_commands, env.context_width)
    if tuple(nets.kernel.groups) != tuple(groups) or nets.kernel.n_commands != env.n_commands:
        raise TransferError(
            f"Feature widths {[(g.gid, g.width) for g in nets.kernel.groups]} do not match "
            f"the environment's {[(g.gid, g.width) for g in groups]}."
        )
    moved = copy.deepcopy(agent)
    moved.nets.assign([params.with_vector(params.to_vector()) for params in nets.mains], nets.phases())
    if moved.nets.param_count() != nets.param_count():
        raise TransferError(f"Parameter count changed from {nets.param_count()} to {moved.nets.param_count()}.")
    return moved


def transfer_evaluate(agent, env, episodes=EVAL_EPISODES, seed=0, episode_length=None):
    """Evaluates networks trained at one item count on `env`, which may have another."""
    moved = rebuild(agent, env)
    logger.info("Transfer evaluation of %s at N=%d", agent.name, env.n_items)
    return evaluate(moved, env, episodes, seed, episode_length)


def ei_deviation(agent, env, seed=0, trials=20):
    """
    Largest |Q(sigma(s)) - sigma_i(Q(s))| of the agent's networks on phase
    states drawn from `env`, cycling through the phases.
    """
    nets = agent.nets
    rng = SeededRng(seed)
    deviation = 0.0
    for trial in range(trials):
        items, context = env.reset(int(rng.integers(0, SEED_LIMIT)))
        s = to_phase0(items, context, env.n_select, env.n_commands)
        for _ in range(trial % env.n_select):
            s = advance(s, uniform_action(s, rng))
        k = min(s.k, nets.K - 1)
        x = s.phase_input
        sigma = Permutation.random(rng, x.k, x.n_unselected, x.n_context)
        q = nets.q_values(k, x)
        moved = nets.q_values(k, apply_permutation(sigma, x))
        deviation = max(deviation, float(np.max(np.abs(moved - permute_rows(sigma.i, q)))))
    return deviation


def transfer_matrix(agents, envs, episodes=EVAL_EPISODES, seed=0, episode_length=None):
    """
    Transfer performance table.

    INPUT:
    - `agents` -- dict, training item count -> trained agent,
    - `envs`   -- dict, test item count -> environment; must contain every
      training item count.

    OUTPUT: (means, ratios), both dicts keyed by (N_tr, N_te); each ratio is
    the mean divided by the mean of the same agent at N_te == N_tr.
    """
    missing = sorted(set(agents) - set(envs))
    if missing:
        raise ConfigError(f"Test environments lack the training item counts {missing}.")
    means = {}
    for n_train, agent in agents.items():
        for n_test, env in envs.items():
            means[(n_train, n_test)] = transfer_evaluate(agent, env, episodes, seed, episode_length).mean
    ratios = {}
    for (n_train, n_test), mean in means.items():
        diagonal = means[(n_train, n_train)]
        ratios[(n_train, n_test)] = mean / diagonal if diagonal != 0 else float("nan")
    return means, ratios
