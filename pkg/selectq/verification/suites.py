"""
SUITES

Named groups of checks, as run by `selectq verify --suite`.

Each suite returns a list of CheckReports. Suites with a negative control
append the control report, which is expected to fail.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

from selectq.verification.equivalence import check_equivalence, check_myopic_gap
from selectq.verification.properties import (
    check_ei,
    check_gradients,
    check_loss_invariance,
    check_theorem1_projection,
)
from selectq.verification.universality import check_universality_fit

logger = logging.getLogger(__name__)

EQUIVALENCE_SEEDS = 20


def _equivalence(seed):
    reports = [check_equivalence(seed + offset) for offset in range(EQUIVALENCE_SEEDS)]
    reports.append(check_equivalence(seed, K=3))
    reports.append(check_equivalence(seed, K=1))
    reports.append(check_myopic_gap(seed))
    return reports


SUITES = {
    "ei": lambda seed: [check_ei(seed), check_ei(seed, trials=50, control=True)],
    "grad": lambda seed: [check_gradients(seed)],
    "theorem1": lambda seed: [check_theorem1_projection(seed), check_theorem1_projection(seed, cases=4, control=True)],
    "lemma": lambda seed: [check_loss_invariance(seed), check_loss_invariance(seed, cases=4, samples=5, control=True)],
    "equiv": _equivalence,
    "universal": lambda seed: [check_universality_fit(seed)],
}


def suite_names(name):
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise KeyError(f"Unknown suite {name!r}; expected one of {', '.join(SUITES)} or all.")
    return [name]


def run_suite(name, seed=0, workers=1):
    """Runs suite `name` (or every suite for "all"); suites run in parallel when workers > 1."""
    names = suite_names(name)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda suite: SUITES[suite](seed), names))
    reports = [report for batch in results for report in batch]
    for report in reports:
        level = logging.INFO if report.ok else logging.ERROR
        logger.log(level, "%s (seed %d): max deviation %.3g, tolerance %.3g", report.suite, report.seed, report.max_deviation, report.tolerance)
    return reports
