"""
TEST_EXPERIMENT_CONFIG

Tests for ExperimentConfig, the presets and build_env.
"""

import json

import pytest

from selectq.baselines.sorting import SortedItems
from selectq.envs.circles import CircleSelection
from selectq.envs.predator_prey import PredatorPrey
from selectq.envs.tabular import TabularSMDP
from selectq.errors import ConfigError
from selectq.harness.config import PRESETS, ExperimentConfig, build_env, load_config, preset


def tiny(**overrides):
    data = {
        "env": "cs",
        "env_params": {"N": 4, "K": 1, "U": 1, "C": 1},
        "train": {"total_steps": 20, "layers": 1, "channels": 4},
        "seeds": [0, 1],
    }
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


class TestExperimentConfig:
    """Tests for ExperimentConfig."""

    def test_defaults(self):
        """Tests the defaults of an empty document."""
        cfg = ExperimentConfig.from_dict({})
        assert cfg.env == "cs"
        assert cfg.agent == "isq"
        assert cfg.seeds == (0, 1, 2, 3)
        assert cfg.train.eval_episodes == 20

    def test_nested_train(self):
        """Tests that the train section becomes a TrainConfig."""
        cfg = tiny()
        assert cfg.train.total_steps == 20
        assert cfg.train.channels == 4

    def test_unknown_key(self):
        """Tests that unknown top-level and nested keys are rejected."""
        with pytest.raises(ConfigError):
            tiny(colour="blue")
        with pytest.raises(ConfigError):
            tiny(train={"total_steps": 20, "speed": 3})

    def test_bad_values(self):
        """Tests validation of env, env parameters, agent, sharing and seeds."""
        with pytest.raises(ConfigError):
            tiny(env="chess")
        with pytest.raises(ConfigError):
            tiny(env_params={"N": 2, "K": 3})
        with pytest.raises(ConfigError):
            tiny(agent="ppo")
        with pytest.raises(ConfigError):
            tiny(sharing="Q")
        with pytest.raises(ConfigError):
            tiny(seeds=[])
        with pytest.raises(ConfigError):
            tiny(seeds=[1, 1])
        with pytest.raises(ConfigError):
            tiny(eval_episode_length=0)

    def test_hash(self):
        """Tests that the hash is stable through JSON and changes with the config."""
        cfg = tiny()
        again = ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
        assert again == cfg
        assert again.config_hash() == cfg.config_hash()
        assert len(cfg.config_hash()) == 64
        assert tiny(seeds=[0, 2]).config_hash() != cfg.config_hash()

    def test_episode_length(self):
        """Tests the evaluation episode length of each environment."""
        assert tiny().episode_length() == 2500
        assert preset("pp-small").episode_length() == 175
        assert tiny(eval_episode_length=7).episode_length() == 7
        tabular = tiny(env="tabular", env_params={"N": 3, "K": 2}, train={"episode_length": 30})
        assert tabular.episode_length() == 30

    def test_with_env_params(self):
        """Tests replacing one environment parameter."""
        cfg = tiny().with_env_params(N=9)
        assert cfg.env_config().N == 9
        assert cfg.env_config().U == 1
        with pytest.raises(ConfigError):
            tiny(env_params={"N": 4, "K": 3}).with_env_params(N=2)

    def test_sharing_mode(self):
        """Tests that P sharing gets its split schedule."""
        mode = preset("pp-small").sharing_mode()
        assert mode.variant == "P"
        assert mode.splits == (50_000,)
        assert tiny().sharing_mode().splits == ()


class TestPresets:
    """Tests for the shipped presets."""

    def test_all_presets_load(self):
        """Tests that every preset is a valid config."""
        for name in PRESETS:
            assert isinstance(preset(name), ExperimentConfig)

    def test_cs_small(self):
        """Tests the sizes of the cs-small preset."""
        cfg = preset("cs-small")
        env = cfg.env_config()
        assert (env.N, env.K, env.U, env.C) == (5, 1, 1, 1)
        assert cfg.train.total_steps == 200_000
        assert cfg.train.channels == 16
        assert len(cfg.seeds) == 4

    def test_cs_medium_and_pp_small(self):
        """Tests the sizes of the cs-medium and pp-small presets."""
        cs = preset("cs-medium").env_config()
        assert (cs.N, cs.K, cs.C) == (20, 3, 5)
        pp = preset("pp-small").env_config()
        assert (pp.G, pp.N, pp.U, pp.K) == (6, 4, 4, 2)

    def test_unknown_preset(self):
        """Tests that an unknown preset is a ConfigError."""
        with pytest.raises(ConfigError):
            preset("cs-huge")


class TestLoadConfig:
    """Tests for load_config."""

    def test_preset_name(self):
        """Tests that a preset name loads the preset."""
        assert load_config("cs-small") == preset("cs-small")

    def test_file(self, tmp_path):
        """Tests loading a JSON file."""
        path = tmp_path / "exp.json"
        path.write_text(json.dumps(tiny().to_dict()), encoding="utf-8")
        assert load_config(str(path)) == tiny()

    def test_missing_and_malformed(self, tmp_path):
        """Tests that unreadable or malformed files are ConfigErrors."""
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.json"))
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestBuildEnv:
    """Tests for build_env."""

    def test_kinds_of_env(self):
        """Tests the environment class of each env name."""
        assert isinstance(build_env(tiny()), CircleSelection)
        assert isinstance(build_env(preset("pp-small")), PredatorPrey)
        tabular = tiny(env="tabular", env_params={"N": 3, "K": 2})
        assert isinstance(build_env(tabular), TabularSMDP)

    def test_sorting_wraps(self):
        """Tests that the sorting agent sees a SortedItems view."""
        env = build_env(tiny(agent="sorting"))
        assert isinstance(env, SortedItems)
        items, _ = env.observe()
        assert list(items[:, 2]) == sorted(items[:, 2], reverse=True)

    def test_single_command_needs_c1(self):
        """Tests that isq_single on a five-command task is a ConfigError."""
        with pytest.raises(ConfigError):
            build_env(tiny(agent="isq_single", env_params={"N": 4, "K": 1, "C": 5}))
        assert build_env(tiny(agent="isq_single")).n_commands == 1

    def test_seeded(self):
        """Tests that the same seed gives the same initial observation."""
        a, _ = build_env(tiny(), seed=4).observe()
        b, _ = build_env(tiny(), seed=4).observe()
        assert (a == b).all()
