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
opts.py:  EpiPlace-specific options processing after generic processing by share.Opts
"""
import sys,os

class opt_cls(object):
	# library code may log before (or without) opts.init()
	quiet   = None
	verbose = None
	debug   = None
	threads = None
opt = opt_cls()

from epiplace.exception import UserOptError
from epiplace.globalvars import g
import epiplace.share.Opts
from epiplace.util import *

def usage():
	sys.stderr.write('USAGE: {} {}\n'.format(g.prog_name,usage_txt))
	sys.exit(1)

def fmt_opt(o):
	return '--' + o.replace('_','-')

def opt_preproc_debug(po):
	d = (
		('Cmdline',            ' '.join(sys.argv)),
		('Short opts',         po.short_opts),
		('Long opts',          po.long_opts),
		('User-selected opts', po.user_opts),
		('Cmd args',           po.cmd_args),
	)
	msg('\n=== opts.py debug ===')
	for e in d:
		msg('    {:<20}: {}'.format(*e))

def opt_postproc_debug():
	a = [k for k in dir(opt) if k[:2] != '__' and getattr(opt,k) != None]
	b = [k for k in dir(opt) if k[:2] != '__' and getattr(opt,k) == None]
	msg('    Opts after processing:')
	for k in a:
		v = getattr(opt,k)
		msg('        {:18}: {!r:<6} [{}]'.format(k,v,type(v).__name__))
	msg("    Opts set to 'None':")
	msg('        {}\n'.format('\n        '.join(b)))
	msg('\n=== end opts.py debug ===\n')

def init_color():
	if g.color: # EPIPLACE_DISABLE_COLOR sets this to False
		from epiplace.color import start_mscolor,init_color
		if g.platform == 'win':
			start_mscolor()
		init_color()
	else:
		from epiplace.color import disable_color
		disable_color()

def override_globals_from_env():
	for name in g.env_opts:
		disable = name[:17] == 'EPIPLACE_DISABLE_'
		val = os.getenv(name) # os.getenv() returns None if env var is unset
		if val: # exclude empty string values; string value of '0' or 'false' sets variable to False
			gname = name[(9,17)[disable]:].lower()
			setattr(g,gname,set_for_type(val,getattr(g,gname),name,disable))

common_opts_data = """
-q, --quiet           Produce quieter output
-v, --verbose         Produce more verbose output
--, --threads=      n Use at most 'n' worker threads (default: 1, bit-deterministic)
--, --version         Print version information and exit
"""

def init(opts_data,argv=None,add_opts=[]):
	"""
	Parse the command line, apply environment overrides to g, check user-set
	opts and return the non-option arguments.
	"""

	opts_data['text']['options'] = opts_data['text']['options'].rstrip() + common_opts_data

	# po: user_opts cmd_args short_opts long_opts
	po = epiplace.share.Opts.parse_opts(opts_data,argv=argv,prog_name=g.prog_name)

	override_globals_from_env()

	if g.debug_opts:
		opt_preproc_debug(po)

	# Copy parsed opts to opt, setting values to None if not set by user
	for o in  (
			tuple(s.rstrip('=') for s in po.long_opts)
			+ tuple(add_opts)
			+ g.required_opts ):
		setattr(opt,o,po.user_opts[o] if o in po.user_opts else None)

	# Make this available to usage()
	global usage_txt
	usage_txt = opts_data['text']['usage'].strip()

	if opt.version:
		Die(0,fmt("""
			{pn} version {g.version}
			Part of the {g.proj_name} suite, a sensor-placement toolkit driven by
			expected epistemic-uncertainty reduction.  Copyright (C){g.Cdates} {g.author}
		""".format(g=g,pn=g.prog_name.upper()),indent='    ').rstrip())

	init_color()

	if opts_data['do_help']:
		epiplace.share.Opts.print_help(opts_data) # exits

	if opt.quiet is None and g.quiet:
		opt.quiet = True

	if opt.verbose:
		opt.quiet = None

	if g.debug:
		opt.debug = True

	# Check user-set opts without modifying them
	check_usr_opts(po.user_opts)

	if g.debug_opts:
		opt_postproc_debug()

	return po.cmd_args

def check_usr_opts(usr_opts): # Raises an exception if any check fails

	def opt_compares(val,op_str,target,desc):
		import operator as o
		op_f = { '<':o.lt, '<=':o.le, '>':o.gt, '>=':o.ge, '=':o.eq }[op_str]
		if not op_f(val,target):
			raise UserOptError('{}: invalid {} (not {} {})'.format(val,desc,op_str,target))

	def opt_is_int(val,desc):
		if not is_int(val):
			raise UserOptError('{!r}: invalid {} (not an integer)'.format(val,desc))

	def opt_is_float(val,desc):
		if not is_float(val):
			raise UserOptError('{!r}: invalid {} (not a floating-point number)'.format(val,desc))

	def opt_is_in_list(val,tlist,desc):
		if val not in tlist:
			fs = '{!r}: invalid {} (valid choices: {})'
			raise UserOptError(fs.format(val,desc,fmt_list(tlist)))

	def chk_int_ge(lim):
		def f(key,val,desc):
			opt_is_int(val,desc)
			opt_compares(int(val),'>=',lim,desc)
		return f

	def chk_pos_float(key,val,desc):
		opt_is_float(val,desc)
		opt_compares(float(val),'>',0,desc)

	def chk_scenario(key,val,desc):
		opt_is_in_list(val,g.scenarios,desc)

	def chk_acquisition(key,val,desc):
		opt_is_in_list(val,g.acquisition_modes,desc)

	def chk_break(key,val,desc):
		from epiplace.selftest import fault_names
		opt_is_in_list(val,fault_names,desc)

	def chk_placement(key,val,desc):
		for fn in val.split(','):
			check_infile(fn)

	def chk_random_seeds(key,val,desc):
		for s in val.split(','):
			opt_is_int(s,desc)
			opt_compares(int(s),'>=',0,desc)

	cfuncs = { k:v for k,v in locals().items() if k.startswith('chk_') }
	for k in ('n_tasks','n_targets','epochs','patience','n_sensors','threads','components','batch'):
		cfuncs['chk_'+k] = chk_int_ge(1)
	for k in ('nc_min','nc_max','n_bumps','seed','task_index'):
		cfuncs['chk_'+k] = chk_int_ge(0)
	cfuncs['chk_lr'] = chk_pos_float

	for key in usr_opts:
		val = getattr(opt,key)
		desc = 'parameter for {!r} option'.format(fmt_opt(key))

		if key in g.infile_opts:
			check_infile(val) # raises FileNotFound on error
		elif 'chk_'+key in cfuncs:
			cfuncs['chk_'+key](key,val,desc)
		elif g.debug:
			msg('check_usr_opts(): No test for opt {!r}'.format(key))

def get_run_config(keymap):
	"""
	Resolve the run configuration: defaults < --config file < command-line flags.
	'keymap' maps option names to RunConfig keys.
	"""
	from epiplace.cfg import RunConfig
	cfg = RunConfig(opt.config)
	flags = { k:getattr(opt,o) for o,k in keymap.items() if getattr(opt,o,None) is not None }
	if opt.threads:
		flags['threads'] = opt.threads
	cfg.update(flags,src='command line')
	cfg.validate()
	if g.debug:
		msg('Resolved run configuration:\n' + cfg.format())
	return cfg
