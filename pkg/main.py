import argparse
import logging
import sys
from typing import List, Optional, Sequence

from annulus import BraidWord, verify_aij_coproduct, verify_aij_hecke, verify_colored_unknot, verify_primitivity
from config import FORMATS, Config
from dilog import dilog_report
from lift import CoverChart, LeafDiagram, LiftEngine, evaluate, verify_coproduct_sweep
from qtorus import verify_gl1_pentagon, verify_gl1_sw
from reporting import ReportWriter, VerificationReport, merge_reports
from selftest import SelfTest
from torus import verify_pentagon, verify_sw
from triangulate import EffectivityChecker, Marking, TriangulationLoader

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
EXIT_VERIFIED, EXIT_FALSIFIED, EXIT_INPUT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='main.py', description='Exact skein-trace identities and their verifiers.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='debug logging')
    common.add_argument('--quiet', action='store_true', help='warnings and errors only')
    common.add_argument('--format', choices=FORMATS, default=None, help='report rendering')
    common.add_argument('--output', help='also write the report as json to this file')
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--workers', type=int, default=None, help='processes for the coproduct sweep')
    common.add_argument('--inject-error', action='store_true', help='append a nonzero residual (falsification path)')
    verbs = parser.add_subparsers(dest='verb', required=True)

    p = verbs.add_parser('dilog', parents=[common], help='skein dilogarithm closed forms and recurrences')
    p.add_argument('--max-degree', type=int)
    p.add_argument('--which', default='all')

    p = verbs.add_parser('pentagon', parents=[common], help='pentagon identity in the torus skein')
    p.add_argument('--max-weight', type=int)
    p.add_argument('--twisted', action='store_true')
    p.add_argument('--gl1', action='store_true', help='check the quantum-torus image instead')

    p = verbs.add_parser('sw-wcf', parents=[common], help='Seiberg-Witten wall-crossing identity')
    p.add_argument('--max-weight', type=int)
    p.add_argument('--gl1', action='store_true')

    p = verbs.add_parser('coproduct', parents=[common], help='lift over the trivial cover equals the coproduct')
    p.add_argument('--strands', type=int, dest='coproduct_strands')
    p.add_argument('--length', type=int, dest='coproduct_length')
    p.add_argument('--random', type=int, dest='random_cases')
    p.add_argument('--max-degree', type=int)
    p.add_argument('--max', type=int, dest='aij_max')

    p = verbs.add_parser('unknot-id', parents=[common], help='two-variable colored unknot identity')
    p.add_argument('--max-size', type=int)

    p = verbs.add_parser('aij', parents=[common], help='A_ij recursion against the Hecke closure')
    p.add_argument('--max', type=int, dest='aij_max')

    p = verbs.add_parser('lift', parents=[common], help='enumerate and evaluate the lifts of a diagram')
    p.add_argument('--chart', help='chart file (default: trivial planar cover)')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--diagram', help='diagram file')
    source.add_argument('--braid', help="braid word such as 's1 -s2'")
    p.add_argument('--strands', type=int, dest='braid_strands')
    p.add_argument('--closure', choices=['planar', 'annular'], default='planar')
    p.add_argument('--target', choices=['trivial', 'gl1'], default='trivial')

    p = verbs.add_parser('effectivity', parents=[common], help='effective markings of a taut triangulation')
    p.add_argument('--triangulation', required=True)
    p.add_argument('--marking', help="one marking such as \"theta, theta''\"")
    p.add_argument('--all-markings', action='store_true')
    p.add_argument('--exists', action='store_true', help='exit 0 iff some marking is effective')

    p = verbs.add_parser('selftest', parents=[common], help='run every property suite')
    p.add_argument('--phase', action='append', help='restrict to the named phase(s)')
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


class CommandRunner:
    """Executes one parsed verb and turns its reports into an exit code."""

    def __init__(self, args: argparse.Namespace, config: Config):
        self.args = args
        self.config = config
        self.writer = ReportWriter()

    def run(self) -> int:
        commands = {
            'dilog': self.dilog,
            'pentagon': self.pentagon,
            'sw-wcf': self.sw_wcf,
            'coproduct': self.coproduct,
            'unknot-id': self.unknot_id,
            'aij': self.aij,
            'lift': self.lift,
            'effectivity': self.effectivity,
            'selftest': self.selftest,
        }
        if self.args.verb not in commands:
            raise ValueError(f"Unsupported verb: {self.args.verb}. Choose from {list(commands.keys())}")
        return commands[self.args.verb]()

    # -------------------------------------------------------------- output
    def emit(self, reports: List[VerificationReport]) -> int:
        if self.args.inject_error and reports:
            reports[-1].inject_fake_residual()
        for report in reports:
            print(self.writer.render(report, self.config.format))
        if len(reports) > 1 and self.config.format == 'text':
            print(self.writer.render_summary(reports))
        if self.args.output:
            single = reports[0] if len(reports) == 1 else merge_reports(self.args.verb, 'all', reports)
            self.writer.save(single, self.args.output)
        return EXIT_VERIFIED if all(r.verified for r in reports) else EXIT_FALSIFIED

    # -------------------------------------------------------------- verbs
    def dilog(self) -> int:
        return self.emit(dilog_report(self.config.max_degree, self.args.which))

    def pentagon(self) -> int:
        if self.args.gl1:
            weight = self.config.gl1_weight if self.args.max_weight is None else self.args.max_weight
            return self.emit([verify_gl1_pentagon(weight, self.args.twisted)])
        return self.emit([verify_pentagon(self.config.max_weight, self.args.twisted)])

    def sw_wcf(self) -> int:
        if self.args.gl1:
            return self.emit([verify_gl1_sw(self.config.gl1_weight if self.args.max_weight is None
                                            else self.args.max_weight)])
        weight = self.config.sw_weight if self.args.max_weight is None else self.args.max_weight
        return self.emit([verify_sw(weight)])

    def coproduct(self) -> int:
        c = self.config
        return self.emit([
            verify_primitivity(c.max_degree),
            verify_aij_coproduct(c.aij_max),
            verify_coproduct_sweep(c.coproduct_strands, c.coproduct_length, c.random_cases, c.seed,
                                   workers=c.workers),
        ])

    def unknot_id(self) -> int:
        return self.emit([verify_colored_unknot(self.config.max_size)])

    def aij(self) -> int:
        return self.emit([verify_aij_hecke(self.config.aij_max, self.config.strand_bound)])

    def lift(self) -> int:
        args = self.args
        if args.diagram:
            diagram = LeafDiagram.load(args.diagram)
        else:
            diagram = LeafDiagram.from_braid(BraidWord.parse(args.braid, args.braid_strands), args.closure)
        if args.chart:
            chart = CoverChart.load(args.chart)
        else:
            chart = CoverChart.trivial_chart('annular' if args.braid and args.closure == 'annular' else 'planar')
        lifts = LiftEngine(chart).enumerate_lifts(diagram)
        value = evaluate(lifts, args.target)
        print(f" {len(lifts)} lifts over a {chart.kind} chart ".center(60, '='))
        print(lifts.table().to_string(index=False))
        print(f"{args.target} value:")
        if isinstance(value, dict):
            for key, v in sorted(value.items()):
                print(f"  open strands on sheets {key}: {v}")
        else:
            print(f"  {value}")
        return EXIT_VERIFIED

    def effectivity(self) -> int:
        args = self.args
        triangulation = TriangulationLoader().load(args.triangulation)
        checker = EffectivityChecker(triangulation)
        if args.marking:
            result = checker.check(Marking.parse(args.marking))
            print(f"{result.marking.render()}: {'effective' if result.effective else 'not effective'}")
            print(f"  witness: {result.witness}" if result.effective else f"  certificate: {result.certificate}")
            return EXIT_VERIFIED if (result.effective or not args.exists) and result.verified else EXIT_FALSIFIED
        if args.all_markings or not args.exists:
            print(checker.marking_table().to_string(index=False))
        effective = checker.effective_markings()
        print(f"effective markings: {', '.join(m.render() for m in effective) or 'none'}")
        code = self.emit([checker.report()])
        if args.exists and not effective:
            return EXIT_FALSIFIED
        return code

    def selftest(self) -> int:
        suite = SelfTest(self.config)
        reports = suite.run(self.args.phase)
        if self.args.inject_error and reports:
            reports[-1].inject_fake_residual()
        print(self.writer.render_summary(reports))
        if self.args.output:
            self.writer.save(merge_reports('selftest', self.config.seed, reports), self.args.output)
        return EXIT_VERIFIED if all(r.verified for r in reports) else EXIT_FALSIFIED


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code else EXIT_VERIFIED
    configure_logging(args.verbose, args.quiet)
    try:
        config = Config.from_args(args)
        return CommandRunner(args, config).run()
    except (ValueError, TypeError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(run())
