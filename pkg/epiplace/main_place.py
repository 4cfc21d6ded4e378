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
epiplace place: Choose sensor locations among a task's target points
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Place sensors greedily by expected variance reduction, or at random',
		'usage':'[opts] --ckpt <file> --tasks <file> --out <file>',
		'options': """
-h, --help            Print this help message
-c, --config=       f Read run parameters from config file 'f'
-C, --ckpt=         f Model checkpoint
-T, --tasks=        f Task file
-i, --task-index=   n Index of the task whose targets are the candidates
                      (default: 0)
-a, --acquisition=  a Acquisition: {am} (default: ep)
-n, --n-sensors=    n Number of sensors to place (default: 3)
-s, --seed=         n Seed for random placement (default: 0)
-r, --refresh-predictions Recompute pseudo-values against the growing
                      pseudo-context at every step
-o, --out=          f Write the placement to file 'f'
""",
	'notes': """
Candidates are the target points of the selected task; placement starts from
an empty context.  At each step every remaining candidate is scored by the
mean predicted variance over the targets after adding it to the context with
the model's predicted mean in place of the unknown measurement ('var': total
variance, 'ep': epistemic variance).  The lowest score wins; ties go to the
lowest candidate index.
{t}"""
	},
	'code': {
		'options': lambda s: s.format(am=fmt_list(g.acquisition_modes,fmt='no_quotes')),
		'notes': lambda s: s.format(t=help_notes('threads')),
	}
}

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()
if not opt.out:
	raise UserOptError('--out: option is required')

cfg = opts.get_run_config({
	'ckpt':                'ckpt',
	'tasks':               'tasks',
	'task_index':          'task_index',
	'acquisition':         'acquisition',
	'n_sensors':           'n_sensors',
	'seed':                'placement_seed',
	'refresh_predictions': 'refresh_predictions',
})

for k in ('tasks',) + ((),('ckpt',))[cfg.acquisition != 'random']:
	if not getattr(cfg,k):
		raise UserOptError('--{}: option is required'.format(k))

from epiplace.tasks import read_tasks
from epiplace.checkpoint import load_checkpoint
from epiplace.placement import greedy_place,random_place,write_placement

ts = read_tasks(cfg.tasks)
task = ts.task(cfg.task_index)

if cfg.acquisition == 'random':
	pr = random_place(task.tx,cfg.n_sensors,cfg.placement_seed,d=ts.d,task_index=cfg.task_index)
else:
	params,hist,tc = load_checkpoint(cfg.ckpt,expect={'d':ts.d})
	if cfg.acquisition == 'ep' and params.K == 1:
		ymsg('Warning: a K=1 model has no epistemic variance, so every epistemic score is 0 and\n'
			+ 'tie-breaking (lowest candidate index) decides each step')
	pr = greedy_place(params,task.tx,task.tx,cfg.n_sensors,cfg.acquisition,
		refresh_predictions = cfg.refresh_predictions,
		threads             = cfg.threads,
		task_index          = cfg.task_index )

qmsg('Selected candidate{}: {}'.format(suf(pr.selected),' '.join(map(str,pr.selected))))
write_placement(pr,opt.out)
cfg.write_echo(opt.out)
