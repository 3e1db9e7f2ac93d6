"""
Property pipeline behind ``main.py selftest``.

Runs every verifier at the sizes held in a Config, phase by phase, and
collects the reports for one summary table.
"""

import logging
import time
from typing import Callable, Dict, List, Optional

from annulus import verify_aij_coproduct, verify_aij_hecke, verify_colored_unknot, verify_primitivity
from config import Config
from dilog import dilog_report
from lift import move_invariance_suite, skein_relation_suite, verify_coproduct_sweep, verify_lift_tables
from qtorus import gl1_report, verify_intertwining
from reporting import VerificationReport
from torus import (fock_crosscheck, verify_associativity, verify_confluence, verify_jacobi, verify_pentagon,
                   verify_quadratic_refinement, verify_sw)
from triangulate import EffectivityChecker, figure_eight

logger = logging.getLogger(__name__)


class SelfTest:
    """Runs the property suites in a fixed order; output depends only on the config."""

    def __init__(self, config: Optional[Config] = None):
        self.config = (config or Config()).validate()
        self.reports: List[VerificationReport] = []

    def phases(self) -> Dict[str, Callable[[], List[VerificationReport]]]:
        c = self.config
        return {
            'dilogarithm': lambda: dilog_report(c.max_degree),
            'pentagon': lambda: [verify_pentagon(c.max_weight), verify_pentagon(c.max_weight, twisted=True)],
            'seiberg-witten': lambda: [verify_sw(c.sw_weight)],
            'gl1': lambda: gl1_report(c.gl1_weight) + [verify_intertwining(c.seed, 5, min(c.max_weight, 5))],
            'structure': lambda: [
                verify_jacobi(3),
                verify_associativity(c.seed, 5, min(c.max_weight, 5)),
                verify_confluence(c.seed, 10),
                verify_quadratic_refinement(4),
                fock_crosscheck(min(c.max_degree, 6), seed=c.seed),
            ],
            'coproduct': lambda: [
                verify_primitivity(c.max_degree),
                verify_aij_coproduct(c.aij_max),
                verify_aij_hecke(c.aij_max, c.strand_bound),
                verify_colored_unknot(c.max_size),
                verify_coproduct_sweep(c.coproduct_strands, c.coproduct_length, c.random_cases, c.seed,
                                       workers=c.workers),
            ],
            'lift': lambda: [
                verify_lift_tables(),
                skein_relation_suite(c.seed, c.random_cases),
                move_invariance_suite(c.seed),
            ],
            'effectivity': lambda: [EffectivityChecker(figure_eight()).report()],
        }

    def run(self, only: Optional[List[str]] = None) -> List[VerificationReport]:
        phases = self.phases()
        names = only or list(phases)
        unknown = [n for n in names if n not in phases]
        if unknown:
            raise ValueError(f"Unsupported selftest phase: {unknown[0]}. Choose from {list(phases.keys())}")
        self.reports = []
        for step, name in enumerate(names, 1):
            started = time.perf_counter()
            logger.info("Phase %d/%d: %s", step, len(names), name)
            reports = phases[name]()
            failed = [r.identity for r in reports if not r.verified]
            logger.info("Phase %s done in %.2fs (%d reports, %d falsified)",
                        name, time.perf_counter() - started, len(reports), len(failed))
            if failed:
                logger.warning("Falsified in %s: %s", name, ', '.join(failed))
            self.reports.extend(reports)
        return self.reports

    @property
    def verified(self) -> bool:
        return bool(self.reports) and all(r.verified for r in self.reports)
