"""Command-line front end.

Each subcommand drives one verification pipeline and emits a
deterministic JSON report plus a short text summary.  Exit codes:
0 = pass, 1 = fail (a verified inequality), 2 = inconclusive
(stabilization budget exhausted), 3 = usage or configuration error.
"""

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .ffield import Field
from .galois import build_constant_context, build_cyclotomic_context
from .gring import decompose, rep_of_character
from .lvalue import (
    Verdict, artin_compare, euler_product, verify_class_formula,
    zeta_monic_sum_oracle, _compare_gring, _compare_laurents,
)
from .ring import parse_poly, render_laurent
from .tmodule import UnsupportedContextError, make_carlitz_power
from .trace import (
    TauSheafLine, parse_instance, verify_trace_formula,
    verify_trace_formula_equivariant,
)
from .ring import Poly

SCHEMA = 'tmodl-report/1'

COMMANDS = ('zeta', 'lvalue', 'artin', 'class-formula', 'trace-check')

_EXIT = {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}


class ConfigError(Exception):
    pass


class RunConfig:
    """A fully validated run description.

    Only the fields meaningful for `command` are consulted; the rest
    keep their defaults so that serialization stays canonical.
    """

    FIELDS = ('command', 'q', 'n', 'carlitz', 'context', 'prec',
              'degree_bound', 'variant', 'character', 'demo', 'instance',
              'out', 'workers')

    def __init__(self, command, q=2, n=1, carlitz=1, context='trivial',
                 prec=6, degree_bound=None, variant='equivariant',
                 character=None, demo=None, instance=None, out=None,
                 workers=1):
        self.command = command
        self.q = q
        self.n = n
        self.carlitz = carlitz
        self.context = context
        self.prec = prec
        self.degree_bound = degree_bound
        self.variant = variant
        self.character = character
        self.demo = demo
        self.instance = instance
        self.out = out
        self.workers = workers

    def serialize(self):
        return {f: getattr(self, f) for f in self.FIELDS}

    @staticmethod
    def from_dict(doc):
        doc = dict(doc)
        command = doc.pop('command', None)
        unknown = set(doc) - set(RunConfig.FIELDS)
        if command is None or unknown:
            raise ConfigError('bad config keys: %s'
                              % ', '.join(sorted(unknown)) if unknown
                              else 'config missing a command')
        return RunConfig(command, **doc)

    def __eq__(self, other):
        return (isinstance(other, RunConfig)
                and self.serialize() == other.serialize())

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError('unknown command %r' % self.command)
        if not _is_prime(self.q):
            raise ConfigError('q must be prime, got %r' % self.q)
        if not isinstance(self.prec, int) or self.prec < 1:
            raise ConfigError('prec must be a positive integer')
        if self.degree_bound is not None and self.degree_bound < self.prec:
            raise ConfigError('degree bound below precision')
        if self.command == 'trace-check':
            if (self.demo is None) == (self.instance is None):
                raise ConfigError('trace-check needs exactly one of '
                                  '--demo or --instance')
        if self.command in ('lvalue', 'artin', 'class-formula'):
            k = Field.prime(self.q)
            ctx = _build_context(k, self.context)
            if ctx.group.order % self.q == 0:
                raise ConfigError('|G| = %d is divisible by p = %d'
                                  % (ctx.group.order, self.q))
            if self.command == 'artin' and self.character is None:
                raise ConfigError('artin needs --character')
            if self.variant in ('hom', 'tensor') and self.character is None:
                raise ConfigError('variant %r needs --character'
                                  % self.variant)


def _is_prime(n):
    if not isinstance(n, int) or n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _build_context(k, spec):
    kind, _, arg = spec.partition(':')
    if kind == 'trivial':
        return build_constant_context(k, 1)
    if kind == 'constant':
        try:
            return build_constant_context(k, int(arg))
        except ValueError:
            raise ConfigError('constant context needs an integer degree')
    if kind == 'cyclotomic':
        if not arg:
            raise ConfigError('cyclotomic context needs a conductor')
        return build_cyclotomic_context(k, parse_poly(k, arg))
    raise ConfigError('unknown context %r' % spec)


def _character_index(ctx, spec):
    parts = [int(x) for x in str(spec).split(',')] if spec not in (None, '') \
        else []
    n = len(ctx.group.orders)
    parts = (parts + [0] * n)[:n]
    return tuple(x % o for x, o in zip(parts, ctx.group.orders))


def _show_gring(u):
    return {('+'.join(str(x) for x in g) or 'e'): render_laurent(c)
            for g, c in sorted(u.coeffs.items())}


# -- pipelines ----------------------------------------------------------

def _run_zeta(cfg):
    k = Field.prime(cfg.q)
    ctx = build_constant_context(k, 1)
    E = make_carlitz_power(k, cfg.n)
    ep = euler_product(E, ctx, 'equivariant', cfg.prec,
                       degree_bound=cfg.degree_bound)
    got = ep.value.coeffs[ctx.group.identity()]
    oracle = zeta_monic_sum_oracle(k, cfg.n, cfg.prec)
    v = _compare_laurents(got, oracle, cfg.prec,
                          'Euler product vs monic-sum oracle', {})
    body = {'euler_product': render_laurent(got),
            'oracle': render_laurent(oracle),
            'ledger': ep.ledger}
    return v, body


def _run_lvalue(cfg):
    k = Field.prime(cfg.q)
    ctx = _build_context(k, cfg.context)
    E = make_carlitz_power(k, cfg.carlitz)
    kw = {'degree_bound': cfg.degree_bound}
    if cfg.variant in ('hom', 'tensor'):
        table = decompose(ctx.group, k)
        kw['rho'] = rep_of_character(table,
                                     _character_index(ctx, cfg.character))
        kw['field'] = table.splitting_field
    ep = euler_product(E, ctx, cfg.variant, cfg.prec, **kw)
    wide = euler_product(E, ctx, cfg.variant, cfg.prec,
                         **{**kw, 'degree_bound':
                            (cfg.degree_bound or cfg.prec) + 2})
    if cfg.variant == 'equivariant':
        v = _compare_gring(ep.value, wide.value, cfg.prec,
                           'truncation stability under degree-bound '
                           'enlargement', {})
        shown = _show_gring(ep.value)
    else:
        v = _compare_laurents(ep.value, wide.value, cfg.prec,
                              'truncation stability under degree-bound '
                              'enlargement', {})
        shown = render_laurent(ep.value)
    return v, {'value': shown, 'ledger': ep.ledger}


def _run_artin(cfg):
    k = Field.prime(cfg.q)
    ctx = _build_context(k, cfg.context)
    table = decompose(ctx.group, k)
    rho = rep_of_character(table, _character_index(ctx, cfg.character))
    bundle = artin_compare(cfg.n, ctx, rho, table.splitting_field, cfg.prec)
    checks = [bundle['tensor_vs_def'], bundle['hom_vs_def'],
              bundle['witness']] + bundle['per_prime']
    v = _worst(checks, 'Artin L-value consistency')
    body = {'tensor_vs_def': bundle['tensor_vs_def'].serialize(),
            'hom_vs_def': bundle['hom_vs_def'].serialize(),
            'witness': bundle['witness'].serialize(),
            'per_prime': [p.serialize() for p in bundle['per_prime']],
            'ledger': bundle['frobenius'].ledger}
    return v, body


def _run_class_formula(cfg):
    k = Field.prime(cfg.q)
    ctx = _build_context(k, cfg.context)
    E = make_carlitz_power(k, cfg.carlitz)
    kw = {}
    if cfg.variant in ('hom', 'tensor'):
        table = decompose(ctx.group, k)
        kw['rho'] = rep_of_character(table,
                                     _character_index(ctx, cfg.character))
        kw['field'] = table.splitting_field
    v = verify_class_formula(E, ctx, cfg.variant, cfg.prec, **kw)
    body = {'ledger': v.data.get('ledger', [])}
    for key in ('lhs', 'rhs', 'index', 'class_size'):
        if key in v.data:
            body[key] = v.serialize().get(key)
    if 'class_dim' in v.data:
        body['class_dim'] = v.data['class_dim']
    return v, body


def _qpower_demo(k):
    return TauSheafLine(k, k, 1, {1: [[Poly.one(k)]]})


def _run_trace_check(cfg):
    k = Field.prime(cfg.q)
    if cfg.demo is not None:
        if cfg.demo != 'qpower':
            raise ConfigError('unknown demo %r' % cfg.demo)
        sheaf = _qpower_demo(k)
    else:
        try:
            with open(cfg.instance) as fh:
                sheaf = parse_instance(fh.read())
        except OSError as e:
            raise ConfigError('cannot read instance %s: %s'
                              % (cfg.instance, e))
        except ValueError as e:
            raise ConfigError('bad instance %s: %s' % (cfg.instance, e))
        if sheaf.base.p != cfg.q:
            raise ConfigError('instance is over p = %d, config says %d'
                              % (sheaf.base.p, cfg.q))
    if sheaf.group is not None and sheaf.group.order > 1:
        if sheaf.group.order % cfg.q == 0:
            raise ConfigError('|G| divisible by the characteristic')
        table = decompose(sheaf.group, sheaf.base)
        v = verify_trace_formula_equivariant(sheaf, table, cfg.prec)
    else:
        v = verify_trace_formula(sheaf, cfg.prec)
    return v, {k2: v2 for k2, v2 in v.serialize().items()
               if k2 not in ('status', 'detail', 'first_difference')}


def _worst(verdicts, detail):
    order = (Verdict.FAIL, Verdict.INCONCLUSIVE, Verdict.PASS)
    for status in order:
        for v in verdicts:
            if v.status == status:
                if status == Verdict.PASS:
                    return Verdict(status, detail)
                out = Verdict(status, '%s: %s' % (detail, v.detail),
                              first_difference=v.first_difference)
                return out
    return Verdict(Verdict.PASS, detail)


_PIPELINES = {
    'zeta': _run_zeta,
    'lvalue': _run_lvalue,
    'artin': _run_artin,
    'class-formula': _run_class_formula,
    'trace-check': _run_trace_check,
}


# -- reports ------------------------------------------------------------

def run(cfg):
    """Execute a validated config; returns (exit_code, report_dict)."""
    try:
        cfg.validate()
    except ConfigError as e:
        return 3, _report(cfg, Verdict(Verdict.FAIL, str(e)), {},
                          error=str(e))
    try:
        verdict, body = _PIPELINES[cfg.command](cfg)
    except ConfigError as e:
        return 3, _report(cfg, Verdict(Verdict.FAIL, str(e)), {},
                          error=str(e))
    except UnsupportedContextError as e:
        return 3, _report(cfg, Verdict(Verdict.FAIL, str(e)), {},
                          error=str(e))
    return _EXIT[verdict.status], _report(cfg, verdict, body)


def _report(cfg, verdict, body, error=None):
    doc = {'schema': SCHEMA,
           'config': cfg.serialize(),
           'status': verdict.status if error is None else 'error',
           'detail': verdict.detail}
    if error is not None:
        doc['error'] = error
    if verdict.first_difference is not None:
        doc['first_difference'] = verdict.first_difference
    doc.update(body)
    return doc


def render_report(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + '\n'


def summarize(doc):
    lines = ['%s: %s' % (doc['config']['command'], doc['status'])]
    if doc.get('detail'):
        lines.append('  ' + doc['detail'])
    if 'first_difference' in doc:
        lines.append('  first differing exponent: %d'
                     % doc['first_difference'])
    if 'error' in doc:
        lines.append('  error: ' + doc['error'])
    return '\n'.join(lines) + '\n'


def emit_report(doc, out=None, stream=None):
    stream = stream or sys.stdout
    text = render_report(doc)
    if out:
        try:
            with open(out, 'w') as fh:
                fh.write(text)
        except OSError as e:
            raise ConfigError('cannot write report %s: %s' % (out, e))
    else:
        stream.write(text)
    stream.write(summarize(doc))


# -- argument handling --------------------------------------------------

def _parser():
    top = argparse.ArgumentParser(prog='tmodl', description=__doc__)
    sub = top.add_subparsers(dest='command')

    def common(p):
        p.add_argument('--q', type=int, default=2,
                       help='prime base field size')
        p.add_argument('--prec', type=int, default=6,
                       help='truncation precision N')
        p.add_argument('--degree-bound', type=int, default=None,
                       help='prime degree cutoff (default: N)')
        p.add_argument('--out', default=None, help='JSON report path')
        p.add_argument('--config', default=None,
                       help='TOML config file (overrides other flags)')
        p.add_argument('--workers', type=int, default=1,
                       help='worker count hint (output is canonical '
                            'regardless)')

    p = sub.add_parser('zeta', help='Carlitz zeta vs monic-sum oracle')
    p.add_argument('--n', type=int, default=1, help='weight')
    common(p)

    p = sub.add_parser('lvalue', help='equivariant or twisted L-value')
    p.add_argument('--carlitz', type=int, default=1,
                   help='Carlitz tensor power')
    p.add_argument('--context', default='trivial')
    p.add_argument('--variant', default='equivariant',
                   choices=['equivariant', 'hom', 'tensor'])
    p.add_argument('--character', default=None)
    common(p)

    p = sub.add_parser('artin', help='Artin L-value consistency bundle')
    p.add_argument('--n', type=int, default=1, help='weight')
    p.add_argument('--context', default='cyclotomic:t^2+t+1')
    p.add_argument('--character', default=None)
    common(p)

    p = sub.add_parser('class-formula', help='class number formula check')
    p.add_argument('--carlitz', type=int, default=1,
                   help='Carlitz tensor power')
    p.add_argument('--context', default='trivial')
    p.add_argument('--variant', default='equivariant',
                   choices=['equivariant', 'hom', 'tensor'])
    p.add_argument('--character', default=None)
    common(p)

    p = sub.add_parser('trace-check', help='trace formula verifier')
    p.add_argument('--demo', default=None, choices=['qpower'])
    p.add_argument('--instance', default=None,
                   help='instance descriptor file')
    common(p)
    return top


def config_from_args(argv):
    ns = _parser().parse_args(argv)
    if ns.command is None:
        raise ConfigError('no command given')
    if ns.config is not None:
        try:
            with open(ns.config, 'rb') as fh:
                doc = tomllib.load(fh)
        except OSError as e:
            raise ConfigError('cannot read config %s: %s' % (ns.config, e))
        except tomllib.TOMLDecodeError as e:
            raise ConfigError('bad config %s: %s' % (ns.config, e))
        doc.setdefault('command', ns.command)
        return RunConfig.from_dict(doc)
    kw = {k.replace('-', '_'): v for k, v in vars(ns).items()
          if k not in ('command', 'config') and v is not None}
    allowed = {k: v for k, v in kw.items() if k in RunConfig.FIELDS}
    return RunConfig(ns.command, **allowed)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except ConfigError as e:
        sys.stderr.write('error: %s\n' % e)
        return 3
    except SystemExit as e:
        return 0 if not e.code else 3
    code, doc = run(cfg)
    try:
        emit_report(doc, cfg.out)
    except ConfigError as e:
        sys.stderr.write('error: %s\n' % e)
        return 3
    return code


if __name__ == '__main__':
    sys.exit(main())
