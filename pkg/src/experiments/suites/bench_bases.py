"""
Suite ``bench-bases``: coût mesuré des familles de bases en fonction de n
"""

import statistics
import time
from typing import List

import psutil

from src.core.config import ToleranceConfig
from src.symmetry.bases import BasisDescriptor, BasisFamily, basis_vector

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs

WARMUPS = 3
REPETITIONS = 11
DEFAULT_SIZES = [4, 8, 16, 32]


class BenchBasesExperiment(BaseExperiment):
    """Médiane de 11 mesures après 3 tours de chauffe; aucune assertion sur les temps absolus"""

    columns = ["family", "n", "m", "mean_ns", "median_ns"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="bench-bases",
            description="Timing of polarized power sums, elementary symmetric polynomials and sorting",
        )

    def _families(self, config: ExperimentConfig) -> List[BasisFamily]:
        families = [BasisFamily.POLARIZED_POWER, BasisFamily.ELEMENTARY_SYMMETRIC]
        if config.d == 1:
            families.append(BasisFamily.SORTING)
        return families

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        sizes = [int(n) for n in config.options.get("sizes", DEFAULT_SIZES)]
        rng = config.rng()
        rows = []
        for family in self._families(config):
            for n in sizes:
                desc = BasisDescriptor.build(family, n, config.d)
                X = uniform_configs(rng, n, config.d, config.box, 1)[0]
                for _ in range(WARMUPS):
                    basis_vector(desc, X)
                timings = []
                for _ in range(REPETITIONS):
                    start = time.perf_counter_ns()
                    basis_vector(desc, X)
                    timings.append(time.perf_counter_ns() - start)
                rows.append(
                    {
                        "family": family.value,
                        "n": n,
                        "m": desc.m,
                        "mean_ns": int(statistics.fmean(timings)),
                        "median_ns": int(statistics.median(timings)),
                    }
                )
                self.log_debug("bench_measured", family=family.value, n=n, median_ns=rows[-1]["median_ns"])

        self._trend_check(rows)
        metrics = {
            "warmups": WARMUPS,
            "repetitions": REPETITIONS,
            "physical_cores": psutil.cpu_count(logical=False),
            "logical_cores": psutil.cpu_count(logical=True),
        }
        return self.result(config, rows, metrics)

    def _trend_check(self, rows) -> None:
        """Le coût des polynômes élémentaires croît au plus comme c·n·m (marge ×2, rapporté)"""
        elementary = [row for row in rows if row["family"] == BasisFamily.ELEMENTARY_SYMMETRIC.value]
        worst = 0.0
        for previous, current in zip(elementary, elementary[1:]):
            measured = current["median_ns"] / max(1, previous["median_ns"])
            allowed = (current["n"] * current["m"]) / (previous["n"] * previous["m"])
            worst = max(worst, measured / allowed)
        self.check_at_most("elementary_growth_vs_nm", worst, 2.0, enforced=False)
