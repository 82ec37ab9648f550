"""Report assembly and rendering.

A report is a plain dict built section by section; the text and JSON renderers read the same dict, so both carry
the same numbers. Every derived number is tagged with where it came from: the homology engine, the closed-form
layer, or the syzygy oracle.
"""
from __future__ import annotations

import json
import logging
from typing import Dict, List, Optional

import pandas as pd

from koszulres.homalg import HomologyAlgebra
from koszulres.invariants import InvariantReport
from koszulres.polyring import GradedQuotientRing
from koszulres.resolution import ResolutionF, VerificationVerdict

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _tagged(value, provenance: str) -> Dict:
    return {'value': value, 'provenance': provenance}


def new_report(command: str, ring: GradedQuotientRing, source: Optional[str] = None) -> Dict:
    top = ring.socle_degree if ring.artinian else ring.cutoff
    return {
        'schema_version': SCHEMA_VERSION,
        'command': command,
        'ring': {
            'source': source,
            'field': ring.field.name,
            'vars': list(ring.names),
            'ideal': [g.to_string(ring.names, ring.field) for g in ring.generators],
            'artinian': ring.artinian,
            'socle_degree': ring.socle_degree,
            'cutoff': ring.cutoff,
            'hilbert_function': [ring.dim(j) for j in range(top + 1)],
        },
    }


def add_homology(report: Dict, algebra: HomologyAlgebra) -> Dict:
    report['homology'] = {
        'ranks': _tagged([algebra.rank(i) for i in range(1, algebra.max_hdeg + 1)], 'engine'),
        'degrees': {str(i): algebra.basis(i).degrees for i in range(1, algebra.max_hdeg + 1)},
        'products': _tagged(algebra.product_ranks, 'engine'),
        'euler_characteristic': _tagged(algebra.euler_characteristic(), 'engine'),
    }
    return report


def add_massey(report: Dict, algebra: HomologyAlgebra, exhibited: Optional[List[bool]] = None) -> Dict:
    massey = algebra.massey
    field = algebra.field
    report['massey'] = {
        'span_rank': _tagged(massey.span.rank, 'engine'),
        'span': [{str(k): field.format(v) for k, v in sorted(vector.items())} for vector in massey.span.basis],
        'span_cycles': [algebra.K.format(algebra.element(4, vector)) for vector in massey.span.basis],
        'a': _tagged(massey.a, 'engine'),
        'b': _tagged(massey.b, 'engine'),
        'b_from_coker_psi': _tagged(algebra.b_from_psi, 'engine'),
        'kernel_phi1_rank': _tagged(len(algebra.p1), 'engine'),
        'B_size': _tagged(len(algebra.p2), 'engine'),
    }
    if exhibited is not None:
        report['massey']['exhibited'] = exhibited
    return report


def add_triple(report: Dict, algebra: HomologyAlgebra, triple, result) -> Dict:
    field = algebra.field
    report['triple'] = {
        'indices': [i + 1 for i in triple],
        'representative': {str(k): field.format(v) for k, v in sorted(result.representative.items())},
        'cycle': algebra.K.format(algebra.element(4, result.representative)),
        'indeterminacy_rank': result.indeterminacy.rank,
    }
    return report


def add_invariants(report: Dict, invariants: InvariantReport) -> Dict:
    inp = invariants.inp
    report['invariants'] = {
        'n': inp.n,
        'codepth': inp.c,
        'a': [inp.a(i) for i in range(1, 5)],
        'q11': inp.q11, 'q12': inp.q12, 'q13': inp.q13, 'q22': inp.q22,
        'massey_a': inp.massey_rank,
        'b': inp.b,
        'betti': _tagged(invariants.betti, 'formula'),
        'bound': _tagged(invariants.bound, 'formula'),
        'defect': _tagged(invariants.defect, 'formula'),
        'deviations': _tagged(invariants.deviations, 'formula'),
        'denominator': _tagged(invariants.denominator, 'formula'),
        'gamma': _tagged(invariants.gamma, 'formula'),
        'b_prime': _tagged(invariants.b_prime, 'formula'),
        'codepth3_check': invariants.codepth3_ok,
        'gorenstein_classes': invariants.gorenstein_classes,
    }
    return report


def add_resolution(report: Dict, F: ResolutionF) -> Dict:
    report['resolution'] = {
        'ranks': _tagged(F.ranks, 'engine'),
        'layout': {str(k): [f'{group}^{count}' if count > 1 else group for group, count in F.layout(k)]
                   for k in range(6)},
    }
    return report


def add_verification(report: Dict, verdict: VerificationVerdict) -> Dict:
    report['verification'] = {
        'complex_ok': {str(k): v for k, v in sorted(verdict.complex_ok.items())},
        'exact_ok': {str(k): v for k, v in sorted(verdict.exact_ok.items())},
        'augmentation_ok': verdict.augmentation_ok,
        'minimal_ok': verdict.minimal_ok,
        'betti_match': verdict.betti_match,
        'truncated': verdict.truncated,
        'passed': verdict.passed,
        'details': list(verdict.details),
    }
    return report


def add_oracle(report: Dict, betti: List[int]) -> Dict:
    report['oracle'] = {'betti': _tagged(betti, 'oracle')}
    return report


def add_timing(report: Dict, timing: Dict[str, float]) -> Dict:
    report['timing'] = {stage: round(seconds, 3) for stage, seconds in timing.items()}
    return report


def render_json(report: Dict, timing: bool = False) -> str:
    body = {k: v for k, v in report.items() if timing or k != 'timing'}
    return json.dumps(body, indent=2)


def series_table(report: Dict) -> Optional[pd.DataFrame]:
    """Betti numbers, bound and defect per homological degree, with the oracle column when present."""
    columns = {}
    if 'invariants' in report:
        for key in ('betti', 'bound', 'defect'):
            columns[key] = report['invariants'][key]['value']
    if 'resolution' in report:
        columns['rank F'] = report['resolution']['ranks']['value']
    if 'oracle' in report:
        columns['oracle'] = report['oracle']['betti']['value']
    if not columns:
        return None
    length = min(len(v) for v in columns.values())
    frame = pd.DataFrame({k: v[:length] for k, v in columns.items()})
    frame.index.name = 'i'
    return frame


def _format_value(value) -> str:
    if isinstance(value, dict) and set(value) == {'value', 'provenance'}:
        return f'{_format_value(value["value"])}  [{value["provenance"]}]'
    if isinstance(value, (list, tuple)):
        return '(' + ', '.join(_format_value(v) for v in value) + ')'
    if isinstance(value, dict):
        return ', '.join(f'{k}={_format_value(v)}' for k, v in value.items())
    if value is None:
        return '-'
    return str(value)


def render_text(report: Dict) -> str:
    lines = [f'koszulres report ({report["command"]})']
    ring = report['ring']
    hilbert = pd.DataFrame({'dim R_j': ring['hilbert_function']})
    hilbert.index.name = 'j'
    for section, content in report.items():
        if not isinstance(content, dict):
            continue
        lines.append('')
        lines.append(f'[{section}]')
        for key, value in content.items():
            if section == 'ring' and key == 'hilbert_function':
                continue
            if isinstance(value, list) and value and isinstance(value[0], (dict, str)) and key != 'ideal':
                lines.append(f'{key}:')
                lines.extend(f'  {_format_value(v)}' for v in value)
            else:
                lines.append(f'{key}: {_format_value(value)}')
        if section == 'ring':
            lines.append(hilbert.T.to_string())
    table = series_table(report)
    if table is not None:
        lines.append('')
        lines.append(table.T.to_string())
    return '\n'.join(lines) + '\n'
