#!/usr/bin/env python3
"""
Step Scatter workbench
Parameter scans of electron scattering at sharp and smooth potential steps, oracle comparisons and the constants report
"""

import argparse
import logging
import re
import sys
from contextlib import nullcontext
from typing import Dict, List, Optional, TextIO

from pydantic import ValidationError

from dirac_steps import __version__
from dirac_steps.core.config import settings
from dirac_steps.core.errors import DomainError
from dirac_steps.core.scanner import COLUMNS, run_oracle_compare, run_scan, write_csv, write_json
from dirac_steps.core.units import (
    SI,
    de_broglie_period,
    denormalize_time,
    graphene_de_broglie_period,
    natural_de_broglie_period,
    worked_energy_example,
)
from dirac_steps.models.schemas import OutputFormat, ScanMode, ScanRequest

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_USAGE = 2

CONSTANTS_MODE = "constants"

_TAU_PATTERN = re.compile(
    r"^\s*(?P<factor>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)?\s*\*?\s*T_?dB\s*(?:/\s*(?P<divisor>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))?\s*$",
    re.IGNORECASE,
)


# Color codes for terminal output
class Colors:
    GREEN = '\033[92m'
    RED = '\033[91m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    BOLD = '\033[1m'
    END = '\033[0m'


def print_colored(text: str, color: str, stream: Optional[TextIO] = None) -> None:
    """Print text with color"""
    print(f"{color}{text}{Colors.END}", file=stream or sys.stdout)


def parse_tau(text: str, energy: float) -> float:
    """
    Parse a transition constant given as a number or a de Broglie period expression

    Args:
        text: "0.1", "T_dB/40", "2T_dB", "0.5*T_dB/3"
        energy: Incident energy (natural units) defining T_dB = 2 pi / E

    Returns:
        tau in natural units
    """
    try:
        return float(text)
    except ValueError:
        pass
    match = _TAU_PATTERN.match(text)
    if not match:
        raise DomainError(f"cannot parse transition constant {text!r}")
    factor = float(match.group('factor') or 1.0)
    divisor = float(match.group('divisor') or 1.0)
    if divisor == 0:
        raise DomainError(f"zero divisor in {text!r}")
    return factor * natural_de_broglie_period(energy) / divisor


def build_request(args: argparse.Namespace) -> ScanRequest:
    energy = args.energy_ratio * settings.mass
    return ScanRequest(
        mode=ScanMode(args.mode),
        energy_ratio=args.energy_ratio,
        grid_min=args.grid[0],
        grid_max=args.grid[1],
        grid_points=args.points,
        grid_values=args.values,
        tau_list=[parse_tau(text, energy) for text in args.tau or []],
        output_format=OutputFormat(args.format),
        output_path=args.out,
        threshold=args.threshold if args.threshold is not None else settings.oracle_threshold,
        jobs=args.jobs if args.jobs is not None else settings.default_jobs,
    )


def write_rows(rows: List[Dict], request: ScanRequest, summary=None) -> None:
    """Write rows to the requested file, or stdout when no path is given"""
    target = open(request.output_path, 'w', encoding='utf-8', newline='') if request.output_path else nullcontext(sys.stdout)
    with target as stream:
        if request.output_format == OutputFormat.JSON:
            write_json(rows, request, stream, summary)
        else:
            write_csv(rows, COLUMNS[request.mode], stream)


def _flagged(rows: List[Dict]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for row in rows:
        counts[row['regime']] = counts.get(row['regime'], 0) + 1
    return counts


def run_constants(stream: Optional[TextIO] = None) -> Dict:
    """Print the units report and the relativistic-regime energy example"""
    stream = stream or sys.stdout
    report = worked_energy_example()
    periods = {
        'T_dB(E = 2 mc^2) [s]': de_broglie_period(2.0),
        'T_dB graphene [s]': graphene_de_broglie_period(),
        'T_dB natural (E = 2m)': natural_de_broglie_period(2.0),
        'tau = 1 [s]': denormalize_time(1.0),
    }

    print_colored(f"\n{'='*60}", Colors.BLUE, stream)
    print_colored("CONSTANTS", Colors.BOLD, stream)
    print_colored("-" * 60, Colors.BLUE, stream)
    print(f"  Electron mass:      {SI.electron_mass_kg:.9e} kg", file=stream)
    print(f"  Elementary charge:  {SI.elementary_charge_C:.9e} C", file=stream)
    print(f"  Speed of light:     {SI.speed_of_light_mps:.9e} m/s", file=stream)
    print(f"  Planck constant:    {SI.planck_Js:.9e} J s", file=stream)
    print(f"  Reduced Planck:     {SI.hbar_Js:.9e} J s", file=stream)
    for name, value in periods.items():
        print(f"  {name:<26}{value:.6e}", file=stream)

    print_colored("\nENERGY EXAMPLE (v/c = 0.01, 7 V):", Colors.BOLD, stream)
    print_colored("-" * 60, Colors.BLUE, stream)
    print(f"  Rest energy:              {report.rest_energy_J:.4e} J", file=stream)
    print(f"  Kinetic energy:           {report.kinetic_energy_J:.4e} J", file=stream)
    print(f"  Potential energy:         {report.potential_energy_J:.4e} J", file=stream)
    print(f"  Energy ratio:             {report.energy_ratio:.4e}", file=stream)
    print(f"  Non-relativistic total:   {report.nonrelativistic_total_J:.5e} J", file=stream)
    print(f"  Relativistic total:       {report.relativistic_total_J:.5e} J", file=stream)
    print(f"  Relative error (quoted):  {report.quoted_relative_error:.5e}", file=stream)
    print(f"  Relative error (exact):   {report.exact_relative_error:.5e}", file=stream)
    print_colored("=" * 60, Colors.BLUE, stream)
    return {'periods': periods, 'energy_example': report.model_dump()}


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        description='Electron scattering at sharp and smooth potential steps in space and time'
    )
    parser.add_argument('--mode', '-m', required=True,
                        choices=[mode.value for mode in ScanMode] + [CONSTANTS_MODE],
                        help='Scan mode, or "constants" for the units report')
    parser.add_argument('--energy-ratio', '-e', type=float, default=2.0,
                        help='Incident energy over rest mass, E/m (default: 2)')
    parser.add_argument('--grid', '-g', type=float, nargs=2, default=[0.0, 5.0], metavar=('MIN', 'MAX'),
                        help='Grid range of the step height over m, or of N for EM modes (default: 0 5)')
    parser.add_argument('--points', '-n', type=int, default=501, help='Number of grid points (default: 501)')
    parser.add_argument('--values', type=float, nargs='+',
                        help='Explicit grid values; overrides --grid and --points')
    parser.add_argument('--tau', '-t', action='append',
                        help='Transition constant, a number or e.g. "T_dB/40" (repeatable)')
    parser.add_argument('--format', '-f', choices=[fmt.value for fmt in OutputFormat], default='csv',
                        help='Output format (default: csv)')
    parser.add_argument('--out', '-o', help='Output file (default: stdout)')
    parser.add_argument('--threshold', type=float, help='Max-norm threshold of the oracle comparison')
    parser.add_argument('--jobs', '-j', type=int, help='Parallel workers')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    parser.add_argument('--quiet', '-q', action='store_true', help='No progress bars')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else settings.log_level.upper())

    if args.mode == CONSTANTS_MODE:
        run_constants()
        return EXIT_OK

    try:
        request = build_request(args)
    except (ValidationError, DomainError) as e:
        print_colored(f"Error: invalid request: {e}", Colors.RED, sys.stderr)
        return EXIT_USAGE

    # Status goes to stderr when the data itself goes to stdout
    status = sys.stdout if request.output_path else sys.stderr
    print_colored(f"Scanning {request.mode.value} at E/m = {request.energy_ratio}...", Colors.BLUE, status)

    summary = None
    if request.mode == ScanMode.ORACLE_COMPARE:
        rows, summary = run_oracle_compare(request, progress=not args.quiet)
    else:
        rows = run_scan(request, progress=not args.quiet)

    try:
        write_rows(rows, request, summary)
    except OSError as e:
        print_colored(f"Error writing output: {e}", Colors.RED, sys.stderr)
        return EXIT_USAGE

    counts = ", ".join(f"{name}: {count}" for name, count in sorted(_flagged(rows).items()))
    print_colored(f"{len(rows)} row(s) ({counts})", Colors.GREEN, status)
    if request.output_path:
        print_colored(f"Data saved to: {request.output_path}", Colors.GREEN, status)

    if summary is not None:
        color = Colors.GREEN if summary.passed else Colors.RED
        print_colored(
            f"Oracle max deviation {summary.max_deviation:.3e} (threshold {summary.threshold:.1e}, "
            f"{summary.failures} failed point(s)): {'PASS' if summary.passed else 'FAIL'}",
            color,
            status,
        )
        return EXIT_OK if summary.passed else EXIT_THRESHOLD
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
