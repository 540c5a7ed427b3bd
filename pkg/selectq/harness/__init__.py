from selectq.harness.bench import bench
from selectq.harness.config import PRESETS, ExperimentConfig, build_env, load_config, preset
from selectq.harness.evaluate import (
    EvalReport,
    combine_reports,
    ei_deviation,
    evaluate,
    rebuild,
    transfer_evaluate,
    transfer_matrix,
)
from selectq.harness.logs import TqdmHandler, configure_logging
from selectq.harness.run import (
    ExperimentResult,
    read_checkpoint,
    read_curve,
    restore_agent,
    run_experiment,
    summarise,
)
