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
epiplace gen-tasks: Generate a synthetic task file
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Generate a reproducible file of synthetic regression tasks',
		'usage':'[opts] --out <file>',
		'options': """
-h, --help            Print this help message
-c, --config=       f Read run parameters from config file 'f'
-S, --scenario=     s Task family: {sc} (default: {g.scenarios[0]})
-n, --n-tasks=      n Number of tasks to generate (default: 32)
-t, --n-targets=    n Number of target points per task (default: 100)
--, --nc-min=       n Minimum context size (default: 0)
--, --nc-max=       n Maximum context size (default: 5)
--, --n-bumps=      n Number of Gaussian bumps per 2D field (default: 3)
-s, --seed=         n Task generation seed (default: 0)
-o, --out=          f Write tasks to file 'f'
""",
	'notes': """
Scenarios:
  noisy    1D, y = sin(x) plus noise whose spread peaks near x = 0.5
  multifn  1D, y = sin(x) or cos(x) for x < 0 (fair coin per task), sin(x) for x >= 0
  field2d  2D, sum of random Gaussian bumps with small additive noise
{n}"""
	},
	'code': {
		'options': lambda s: s.format(sc=fmt_list(g.scenarios,fmt='no_quotes'),g=g),
		'notes': lambda s: s.format(n=help_notes('config')),
	}
}

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()
if not opt.out:
	raise UserOptError('--out: option is required')

cfg = opts.get_run_config({
	'scenario':  'scenario',
	'n_tasks':   'n_tasks',
	'n_targets': 'n_targets',
	'nc_min':    'nc_min',
	'nc_max':    'nc_max',
	'n_bumps':   'n_bumps',
	'seed':      'task_seed',
})

from epiplace.tasks import generate,write_tasks

ts = generate(
	cfg.scenario,
	cfg.task_seed,
	n_tasks  = cfg.n_tasks,
	nc_range = (cfg.nc_min,cfg.nc_max),
	n_t      = cfg.n_targets,
	n_bumps  = cfg.n_bumps )

write_tasks(ts,opt.out)
cfg.write_echo(opt.out)
