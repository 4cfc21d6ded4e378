#!/usr/bin/env python3
#
# epiplace = sensor placement by expected epistemic-uncertainty reduction
# Copyright (C)2026 The EpiPlace Project
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
main.py - Subcommand launcher for the EpiPlace suite
"""

import sys,os

usage_txt = """
USAGE: {pn} <subcommand> [opts] [args]

Subcommands:
  gen-tasks   Generate a synthetic task file
  train       Train a model and write a checkpoint
  predict     Write per-target predictive mean and variance decomposition
  place       Choose sensor locations greedily or at random
  evaluate    Score placements (or run the full placement experiment)
  plot        Render a metrics file as SVG
  selftest    Run the embedded property suite

Run '{pn} <subcommand> --help' for the options of each subcommand.
"""

def die_style(e):
	"(die function, exit status, message template) for an exception"
	from epiplace.util import die,ydie,rdie
	return [
		(ydie,2,'EpiPlace Unhandled Exception ({n}): {m}'),
		(die, 1,'{m}'),
		(ydie,2,'{m}'),
		(ydie,2,'EpiPlace Error ({n}): {m}'),
		(rdie,2,'EpiPlace Fatal Error ({n}): {m}')
	][getattr(e,'mmcode',0)]

def dispatch(argv,prog_name='epiplace'):
	"""
	Run one subcommand in-process.  Returns the exit status: 0 on success,
	1 on usage errors, 2 on runtime errors.
	"""
	import runpy
	from epiplace.globalvars import g

	if not argv or argv[0] in ('-h','--help'):
		g.stderr.write(usage_txt.format(pn=prog_name).lstrip())
		return 0 if argv else 1

	sub = argv[0]
	if sub not in g.subcommands:
		g.stderr.write("'{}': unknown subcommand\n".format(sub))
		g.stderr.write(usage_txt.format(pn=prog_name).lstrip())
		return 1

	saved_argv = sys.argv
	sys.argv = ['{}-{}'.format(prog_name,sub)] + list(argv[1:])
	g.prog_name = '{} {}'.format(prog_name,sub)

	try:
		runpy.run_module('epiplace.main_' + sub.replace('-','_'),run_name='__main__',alter_sys=False)
	except SystemExit as e:
		return e.code if isinstance(e.code,int) else (0 if e.code is None else 1)
	except KeyboardInterrupt:
		g.stderr.write('\nUser interrupt\n')
		return 1
	except Exception as e:
		if os.getenv('EPIPLACE_TRACEBACK') or g.traceback:
			raise
		try: m = '{}'.format(e.args[0])
		except: m = repr(e)
		func,ev,fs = die_style(e)
		try:
			func(ev,fs.format(n=type(e).__name__,m=m))
		except SystemExit as se:
			return se.code
	finally:
		sys.argv = saved_argv

	return 0

def launch():
	sys.exit(dispatch(sys.argv[1:],os.path.basename(sys.argv[0])))
