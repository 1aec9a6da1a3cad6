"""Driving the verification pipelines through the CLI layer.

Every subcommand produces a versioned JSON report whose config block
round-trips, and two runs of the same config are byte-identical.  Exit
codes separate "theory violated" (1) from "search budget exhausted" (2)
and from configuration mistakes (3).
"""

from tmodl.cli import RunConfig, render_report, run, summarize

# a zeta check, entirely in memory
cfg = RunConfig('zeta', q=2, n=1, prec=6)
code, doc = run(cfg)
print(summarize(doc))
print('exit code: %d' % code)
print('schema: %s' % doc['schema'])
print()

# determinism: identical config, byte-identical report
again = render_report(run(RunConfig('zeta', q=2, n=1, prec=6))[1])
print('byte-stable: %s' % (render_report(doc) == again))

# config round-trip through the report
assert RunConfig.from_dict(doc['config']) == cfg
print('config round-trips: True')
print()

# a bad config never reaches the pipelines
code, doc = run(RunConfig('zeta', q=4, prec=6))
print('q = 4 rejected with exit code %d: %s' % (code, doc['error']))

# the same runs are available from the shell:
#   tmodl zeta --q 2 --n 1 --prec 8
#   tmodl class-formula --q 2 --carlitz 1 --context trivial --prec 8
#   tmodl artin --q 2 --context cyclotomic:t^2+t+1 --character 1 --prec 6
#   tmodl trace-check --q 2 --demo qpower --prec 6
