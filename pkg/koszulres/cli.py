"""Command-line surface: ring files in, reports out.

Exit codes: 0 success, 1 input error, 2 failed verification or broken certificate.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from pyparsing import ParseException, Suppress, Word, alphanums, alphas, delimitedList, restOfLine

from koszulres import report as reports
from koszulres.errors import ConsistencyError, CutoffError, KoszulresError, ProductsNotZeroError, RingInputError
from koszulres.exactlin import Field, parse_field
from koszulres.homalg import compute_homology_algebra
from koszulres.invariants import InvariantInput, invariant_report
from koszulres.koszul import KoszulComplex
from koszulres.polyring import GradedQuotientRing, build_quotient, parse_polynomial
from koszulres.resolution import FAULTS, build_F, inject_fault, syzygy_oracle, verify

logger = logging.getLogger(__name__)

PROG = 'koszulres'
KEYS = ('field', 'vars', 'ideal', 'cutoff', 'depth')

_line = Word(alphas, alphanums + '_')('key') + Suppress(':') + restOfLine('value')
_names = delimitedList(Word(alphas, alphanums + '_'))


@dataclass(frozen=True)
class RingDefinitionFile:
    path: str
    field: str
    vars: Tuple[str, ...]
    ideal: Tuple[Tuple[str, int, int], ...]
    cutoff: Optional[int] = None
    depth: Optional[int] = None


@dataclass(frozen=True)
class EngineOptions:
    cutoff: Optional[int] = None
    max_hdeg: Optional[int] = None
    field: Optional[str] = None
    artinian_search_limit: int = 64
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'EngineOptions':
        return cls(args.cutoff, args.max_hdeg, args.field, args.artinian_search_limit, args.verbose)


def _integer(value: str, key: str, line: int, minimum: int) -> int:
    try:
        number = int(value)
    except ValueError:
        raise RingInputError(f'{key} must be an integer, got "{value}"', line=line) from None
    if number < minimum:
        raise RingInputError(f'{key} must be at least {minimum}', line=line)
    return number


def parse_ring_text(text: str, path: str = '<string>') -> RingDefinitionFile:
    scalars: Dict[str, Tuple[str, int]] = {}
    ideal: List[Tuple[str, int, int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0]
        if not content.strip():
            continue
        try:
            parsed = _line.parseString(content)
        except ParseException as err:
            raise RingInputError('expected "key: value"', line=number, column=err.col) from None
        key, value = parsed['key'], parsed['value']
        if key not in KEYS:
            raise RingInputError(f'unknown key "{key}"', line=number)
        if key == 'ideal':
            # column of each comma-separated polynomial within the raw line
            start = content.index(':') + 1
            for piece in value.split(','):
                column = start + len(piece) - len(piece.lstrip()) + 1
                if piece.strip():
                    ideal.append((piece.strip(), number, column))
                start += len(piece) + 1
            continue
        if key in scalars:
            raise RingInputError(f'duplicate key "{key}"', line=number)
        scalars[key] = (value.strip(), number)
    if 'vars' not in scalars:
        raise RingInputError('missing "vars"')
    if not ideal:
        raise RingInputError('missing "ideal"')
    value, number = scalars['vars']
    try:
        names = tuple(_names.parseString(value, parseAll=True))
    except ParseException as err:
        raise RingInputError('malformed variable list', line=number, column=err.col) from None
    if len(set(names)) != len(names):
        raise RingInputError('variables must be distinct', line=number)
    cutoff = _integer(scalars['cutoff'][0], 'cutoff', scalars['cutoff'][1], 1) if 'cutoff' in scalars else None
    depth = _integer(scalars['depth'][0], 'depth', scalars['depth'][1], 0) if 'depth' in scalars else None
    if depth is not None and depth > len(names):
        raise RingInputError(f'depth {depth} exceeds the number of variables', line=scalars['depth'][1])
    field = scalars.get('field', ('QQ', 0))[0]
    return RingDefinitionFile(path, field, names, tuple(ideal), cutoff, depth)


def read_ring_file(path: Path) -> RingDefinitionFile:
    return parse_ring_text(Path(path).read_text(encoding='utf-8'), str(path))


def load_ring(definition: RingDefinitionFile, options: EngineOptions = EngineOptions()) -> GradedQuotientRing:
    """Build the quotient ring, command-line options taking precedence over the file."""
    field: Field = parse_field(options.field or definition.field)
    generators = []
    for text, line, column in definition.ideal:
        try:
            polynomial = parse_polynomial(text, definition.vars, field)
        except RingInputError as err:
            raise RingInputError(err.reason, line=line, column=column + (err.column or 1) - 1) from None
        if not polynomial.terms:
            raise RingInputError('zero generator', line=line, column=column)
        if not polynomial.is_homogeneous():
            raise RingInputError(f'generator "{text}" is not homogeneous', line=line, column=column)
        if polynomial.degree < 2:
            raise RingInputError(f'generator "{text}" has degree {polynomial.degree} < 2', line=line, column=column)
        generators.append(polynomial)
    cutoff = options.cutoff if options.cutoff is not None else definition.cutoff
    return build_quotient(definition.vars, field, generators, cutoff, options.artinian_search_limit)


class _Stages:
    """Wall-clock time per stage."""

    def __init__(self):
        self.timing: Dict[str, float] = {}

    def run(self, name, function, *args, **kwargs):
        start = time.perf_counter()
        result = function(*args, **kwargs)
        self.timing[name] = time.perf_counter() - start
        return result


def _homology(ring: GradedQuotientRing, options: EngineOptions, stages: _Stages, needed: int = 0):
    if options.max_hdeg is not None and options.max_hdeg < min(ring.n, needed):
        raise CutoffError(f'--max-hdeg {options.max_hdeg} is too small, homology through degree '
                          f'{min(ring.n, needed)} is needed')
    K = KoszulComplex(ring)
    algebra = stages.run('homology', compute_homology_algebra, K, options.max_hdeg)
    euler = algebra.euler_characteristic()
    if ring.artinian and euler not in (None, 0):
        raise ConsistencyError(f'Euler characteristic of the Koszul homology is {euler}, expected 0')
    return algebra


def _invariants(algebra, definition: RingDefinitionFile, stages: _Stages):
    inp = InvariantInput.from_algebra(algebra, definition.depth)
    return stages.run('invariants', invariant_report, inp)


def _parse_triple(text: str) -> Tuple[int, int, int]:
    try:
        triple = tuple(int(k) - 1 for k in text.split(','))
    except ValueError:
        raise RingInputError(f'--triple expects three basis indices i,j,k, got "{text}"') from None
    if len(triple) != 3 or min(triple) < 0:
        raise RingInputError(f'--triple expects three positive basis indices i,j,k, got "{text}"')
    return triple


def cmd_ring_check(args, definition, ring, stages) -> Tuple[Dict, int]:
    return reports.new_report('ring-check', ring, definition.path), 0


def cmd_invariants(args, definition, ring, stages) -> Tuple[Dict, int]:
    report = reports.new_report('invariants', ring, definition.path)
    algebra = _homology(ring, args.options, stages, needed=4)
    reports.add_homology(report, algebra)
    reports.add_massey(report, algebra)
    reports.add_invariants(report, _invariants(algebra, definition, stages))
    return report, 0


def cmd_resolution(args, definition, ring, stages) -> Tuple[Dict, int]:
    report = reports.new_report('resolution', ring, definition.path)
    algebra = _homology(ring, args.options, stages, needed=4)
    invariants = _invariants(algebra, definition, stages)
    F = stages.run('build', build_F, algebra)
    if args.inject_fault:
        logger.warning('injecting fault %s', args.inject_fault)
        F = inject_fault(F, args.inject_fault)
    reports.add_homology(report, algebra)
    reports.add_invariants(report, invariants)
    reports.add_resolution(report, F)
    if not (args.verify or args.inject_fault):
        return report, 0
    verdict = stages.run('verify', verify, F, args.options.verbose)
    expected = [invariants.betti]
    if ring.artinian:
        oracle = stages.run('oracle', syzygy_oracle, ring, 5, args.options.verbose)
        reports.add_oracle(report, oracle)
        expected.append(oracle)
    verdict.betti_match = all(F.ranks == betti for betti in expected)
    if not verdict.betti_match:
        verdict.details.append(f'ranks of F {F.ranks} differ from {expected}')
    reports.add_verification(report, verdict)
    return report, 0 if verdict.passed else 2


def cmd_massey(args, definition, ring, stages) -> Tuple[Dict, int]:
    report = reports.new_report('massey', ring, definition.path)
    algebra = _homology(ring, args.options, stages, needed=4)
    exhibited = stages.run('exhibit', algebra.exhibit_massey_generators)
    reports.add_massey(report, algebra, exhibited)
    if args.triple:
        triple = _parse_triple(args.triple)
        if max(triple) >= algebra.rank(1):
            raise RingInputError(f'--triple index out of range, A_1 has rank {algebra.rank(1)}')
        x, y, z = ({k: 1} for k in triple)
        reports.add_triple(report, algebra, triple, algebra.massey_triple(x, y, z))
    return report, 0


def cmd_oracle_betti(args, definition, ring, stages) -> Tuple[Dict, int]:
    report = reports.new_report('oracle-betti', ring, definition.path)
    betti = stages.run('oracle', syzygy_oracle, ring, args.N, args.options.verbose)
    reports.add_oracle(report, betti)
    return report, 0


COMMANDS = {
    'ring-check': cmd_ring_check,
    'invariants': cmd_invariants,
    'resolution': cmd_resolution,
    'massey': cmd_massey,
    'oracle-betti': cmd_oracle_betti,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file",
        type=Path,
        help="ring definition file (key: value lines with field, vars, ideal, cutoff, depth).")
    common.add_argument("--json",
        action="store_true",
        help="print the machine-readable report.")
    common.add_argument("--cutoff",
        action="store",
        type=int,
        help="largest internal degree computed; required for non-artinian rings.",
        metavar="D")
    common.add_argument("--max-hdeg",
        action="store",
        type=int,
        help="largest homological degree of the Koszul homology computed.",
        metavar="i")
    common.add_argument("--field",
        action="store",
        help="QQ or GF(p), overrides the ring file.")
    common.add_argument("--artinian-search-limit",
        action="store",
        type=int,
        default=64,
        help="degree bound for artinian detection when no cutoff is given.",
        metavar="D")
    common.add_argument("--timing",
        action="store_true",
        help="include per-stage timing in the JSON report.")
    common.add_argument("-v", "--verbose",
        action="store_true",
        help="log progress to stderr and show progress bars.")

    parser = argparse.ArgumentParser(prog=PROG,
        description="Koszul homology, Golod invariants and the truncated minimal resolution of the residue field.")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("ring-check", parents=[common], help="print the Hilbert function of the ring.")
    commands.add_parser("invariants", parents=[common], help="homology ranks, products, a, b and the series.")
    resolution = commands.add_parser("resolution", parents=[common], help="build the resolution F.")
    resolution.add_argument("--verify",
        action="store_true",
        help="check that F is a minimal complex, exact through degree four, with the predicted ranks.")
    resolution.add_argument("--inject-fault",
        action="store",
        choices=FAULTS,
        help=argparse.SUPPRESS)
    massey = commands.add_parser("massey", parents=[common], help="the constrained Massey span.")
    massey.add_argument("--triple",
        action="store",
        help="also compute the Massey product of three basis classes of A_1 (1-based indices).",
        metavar="i,j,k")
    oracle = commands.add_parser("oracle-betti", parents=[common], help="Betti numbers by direct syzygies.")
    oracle.add_argument("-N",
        action="store",
        type=int,
        default=5,
        help="last homological degree.",
        metavar="N")
    return parser


def run(args: argparse.Namespace) -> int:
    args.options = EngineOptions.from_args(args)
    stages = _Stages()
    definition = read_ring_file(args.file)
    ring = stages.run('ring', load_ring, definition, args.options)
    report, code = COMMANDS[args.command](args, definition, ring, stages)
    reports.add_timing(report, stages.timing)
    if args.json:
        print(reports.render_json(report, timing=args.timing))
    else:
        print(reports.render_text(report), end='')
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return run(args)
    except (RingInputError, CutoffError, ProductsNotZeroError, OSError) as err:
        print(f'error: {err}', file=sys.stderr)
        return 1
    except KoszulresError as err:
        print(f'error: {err}', file=sys.stderr)
        return 2
