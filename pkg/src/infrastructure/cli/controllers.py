from typing import Optional

from src.domain.dt.models.dt_case import DtCase
from src.domain.identities.models.report import IdentityReport, power_mismatches
from src.domain.partitions.models.partition import LegTriple, Partition
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp, Window
from src.infrastructure.cli.dependencies import Services
from src.utils.logger import Logger

logger = Logger(__name__)

METHODS = ("box", "orv", "both")


class CommandsController:
    """Turns parsed subcommands into service calls; every command returns one report."""

    def __init__(self, services: Services):
        self.services = services

    def identity(self, identity_id: int, order: int, window: Window, jobs: Optional[int] = None,
                 radius: Optional[int] = None, box_ratio: Optional[int] = None) -> IdentityReport:
        """Verifies one of the identities 2 to 5, optionally with the box-counting ratio check."""
        report = self.services.identities.verify(identity_id, order, window, jobs, radius)
        if box_ratio is not None:
            ratio = self.services.identities.box_ratio_check(identity_id, box_ratio, window.high, jobs or 1)
            report = report.merged([ratio])
        return report

    def vertex(self, legs: LegTriple, method: str, top: HalfExp, jobs: Optional[int] = None) -> IdentityReport:
        """Computes V_{lambda mu nu} by box counting, by the skew Schur formula, or both and compares."""
        if method not in METHODS:
            raise ValueError(f"Unknown method {method!r}; expected one of {METHODS}.")
        series = {}
        if method in ("box", "both"):
            series["box"] = self.services.enumeration.vertex_box_counting(legs, top, jobs or 1)
        if method in ("orv", "both"):
            series["orv"] = self.services.vertex.vertex_orv(legs, top)
        mismatches = []
        if method == "both":
            mismatches += power_mismatches(series["box"].mismatches(series["orv"]), "box_orv", str(legs))
        box, empty = Partition.box(), Partition()
        if legs in (LegTriple(box, empty, empty), LegTriple(empty, box, empty), LegTriple(empty, empty, box)):
            # V_{box,0,0} = M(p) / (1 - p)
            single = self.services.vertex.times_macmahon(RationalLaurent(PSeries.one(), {1: 1}), top)
            for name, value in series.items():
                mismatches += power_mismatches(value.mismatches(single), "single_leg", name)
        return IdentityReport(
            check="vertex",
            params={"legs": str(legs), "method": method, "pmax": top},
            mismatches=mismatches,
            series=series,
        )

    def enumerate3d(self, legs: LegTriple, budget: int, jobs: Optional[int] = None) -> IdentityReport:
        """Counts 3D partitions by renormalized volume; with no legs the counts must be MacMahon's."""
        counts = self.services.enumeration.enumerate_asymptotic(legs, budget, jobs or 1)
        low = min(counts)
        top = 2 * max(counts)
        volumes = PSeries({2 * v: c for v, c in counts.items()}, lower=2 * low, top=top)
        mismatches = []
        if legs.size == 0:
            macmahon = self.services.products.macmahon(top)
            mismatches += power_mismatches(volumes.mismatches(macmahon), "macmahon", str(legs))
        return IdentityReport(
            check="enumerate3d",
            params={"legs": str(legs), "budget": budget, "counts": {str(v): c for v, c in sorted(counts.items())}},
            mismatches=mismatches,
            series={"volumes": volumes},
        )

    def fock(self, check: str, emax: int, order: int, window: Window, radius: int) -> IdentityReport:
        report = self.services.fock.run(check, emax, order, window, radius)
        report.params.update({"check": check, "emax": emax, "qmax": order, "awin": radius,
                              "window": window.as_list()})
        return report

    def bo(self, point: str, order: int, window: Window) -> IdentityReport:
        return self.services.bloch_okounkov.run(point, order, window)

    def dt(self, case: DtCase, order: int, window: Window, check_quotients: bool = False) -> IdentityReport:
        """Builds one DT series, checks it against its vertex sum, and optionally runs the quotient identities."""
        report = self.services.dt.dt_series_check(case, order, window)
        if check_quotients:
            report = report.merged([self.services.dt.quotient_checks(order, window, case.g)])
        logger.info("DT %s to q^%d: %s", case, order, report.status)
        return report
