#!/usr/bin/env python3
"""
Involutive Analysis - Main Entry Point

Command-line interface for involutive bases, delta-regularity, structure
analysis and free resolutions of polynomial ideals and modules over Q.

Variables are declared in increasing order: in `ring: x, y, z` the first
name x is the smallest variable. This is the reverse of the convention of
many other systems.

Usage Examples:
    python main.py complete problems/janet_example.txt --division janet
    python main.py regularity problems/regularity_13.txt --format text
    python main.py resolve problems/*.txt --workers 4 --output reports/

Exit codes: 0 success, 1 invalid input, 2 divergence witness reported,
3 configured cap exceeded.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import yaml

from concurrency import BatchRunner
from config import COMMANDS, DIVISIONS, FORMATS, ORDERS, AnalysisConfig, load_config
from errors import ProblemSyntaxError
from pipeline import AnalysisPipeline
from problem import load_problem
from reporter import batch_summary, emit, save_report
from utils import APP_LOGGER, setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Involutive bases, delta-regularity, decompositions and free resolutions over Q',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s complete problem.txt --division janet
  %(prog)s analyze problem.txt --format text
  %(prog)s betti a.txt b.txt --workers 2 --output reports/
        """
    )
    parser.add_argument('command', choices=COMMANDS, help='Analysis to run')
    parser.add_argument('problems', nargs='+', help='Problem file(s)')
    parser.add_argument('--division', choices=DIVISIONS, help='Involutive division (default: pommaret)')
    parser.add_argument('--order', choices=ORDERS, help='Term order (default: degrevlex)')
    parser.add_argument('--degcap', type=int, help='Degree cap for completion')
    parser.add_argument('--itercap', type=int, help='Iteration cap for completion')
    parser.add_argument('--seed', type=int, help='Seed for the randomized coordinate search')
    parser.add_argument('--format', choices=FORMATS, help='Output format (default: json)')
    parser.add_argument('--config', help='Configuration file path (YAML)')
    parser.add_argument('--output', help='Report file, or a directory when several problems are given')
    parser.add_argument('--workers', type=int, help='Concurrent jobs for several problem files')
    parser.add_argument('--verify-degree', type=int,
                        help='Check exactness of resolutions degreewise up to this degree')
    parser.add_argument('--timing', action='store_true', help='Include timing in the report')
    parser.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Set logging level (default: WARNING)')
    parser.add_argument('--log-file', help='Log file path (records DEBUG)')
    return parser


def _write(data: bytes, output: Optional[str]):
    if output:
        target = Path(output)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
    else:
        sys.stdout.write(data.decode('utf-8'))
        sys.stdout.flush()


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)

    try:
        setup_logging(log_level=args.log_level, log_file=args.log_file)
    except Exception as e:
        print(f"Failed to set up logging: {e}", file=sys.stderr)
        return 1
    logger = logging.getLogger(APP_LOGGER)
    logger.debug(f"Command line: {' '.join(sys.argv)}")

    try:
        config = load_config(args.config) if args.config else AnalysisConfig()
    except FileNotFoundError:
        print(f"Configuration file not found: {args.config}", file=sys.stderr)
        return 1
    except (yaml.YAMLError, ValueError) as e:
        print(f"Failed to load configuration: {e}", file=sys.stderr)
        return 1

    overrides = {
        'division': args.division,
        'order': args.order,
        'seed': args.seed,
        'max_degree': args.degcap,
        'max_iterations': args.itercap,
        'verify_degree': args.verify_degree,
    }
    output_format = args.format or config.settings.output_format
    pipeline = AnalysisPipeline(config, overrides)

    try:
        if len(args.problems) == 1:
            path = args.problems[0]
            try:
                spec = load_problem(path)
            except FileNotFoundError as e:
                print(str(e), file=sys.stderr)
                return 1
            except ProblemSyntaxError as e:
                print(f"{path}: {e}", file=sys.stderr)
                logger.error(f"{path}: {e}")
                return 1
            report = pipeline.run(args.command, spec)
            _write(emit(report, output_format, args.timing), args.output)
            return report.exit_code

        workers = args.workers or config.settings.max_workers
        runner = BatchRunner(pipeline, max_workers=workers)
        results = runner.run(args.problems, args.command, show_progress=sys.stderr.isatty())
        suffix = 'json' if output_format == 'json' else 'txt'
        for item in results.items:
            if item.report is None:
                print(f"{item.path}: {item.error}", file=sys.stderr)
                continue
            if args.output:
                target = Path(args.output) / f"{Path(item.path).stem}.{suffix}"
                save_report(item.report, str(target), output_format, args.timing)
            else:
                _write(emit(item.report, output_format, args.timing), None)
        print(batch_summary(results, args.command), file=sys.stderr)
        return results.exit_code

    except KeyboardInterrupt:
        logger.info("Interrupted by user (Ctrl+C)")
        print("\nInterrupted by user", file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"Critical error: {e}", exc_info=True)
        print(f"Critical error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
