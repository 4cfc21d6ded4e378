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
epiplace evaluate: RMSE and NLL against ground truth for placed sensors
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Evaluate sensor placements on one task, or run the full placement experiment',
		'usage':'[opts] --ckpt <file> --tasks <file> --out <file>',
		'options': """
-h, --help            Print this help message
-c, --config=       f Read run parameters from config file 'f'
-C, --ckpt=         f Model checkpoint
-T, --tasks=        f Task file
-i, --task-index=   n Index of the evaluation task (default: 0)
-P, --placement=    f Comma-separated list of placement files to evaluate
-n, --n-sensors=    n Sensors per mode when no placement files are given
                      (default: 3)
-r, --refresh-predictions Refresh pseudo-values at every greedy step
-o, --out=          f Write metrics (CSV) to file 'f'
""",
	'notes': """
Every prefix of every placement is scored by conditioning the model on the
TRUE values at the selected locations.  Without --placement, placements are
made here for every mode in the 'eval_modes' config key, random placement
once per seed in 'random_seeds'.  Random rows are written per seed, followed
by seed-averaged rows with an empty seed column.  A row with mode 'prior'
and n_sensors 0 records the empty-context prediction.
When --n-sensors equals the number of targets, a warning is printed if 'ep'
placement ends with a higher mean NLL than it had after one sensor.
{t}"""
	},
	'code': {
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
	'n_sensors':           'n_sensors',
	'refresh_predictions': 'refresh_predictions',
})

for k in ('ckpt','tasks'):
	if not getattr(cfg,k):
		raise UserOptError('--{}: option is required'.format(k))

from epiplace.tasks import read_tasks
from epiplace.checkpoint import load_checkpoint
from epiplace.placement import read_placement
from epiplace.evaluate import evaluate_placements,run_placement_experiment,emit_metrics,check_information_monotone

ts = read_tasks(cfg.tasks)
task = ts.task(cfg.task_index)
params,hist,tc = load_checkpoint(cfg.ckpt,expect={'d':ts.d})

if opt.placement:
	placements = [read_placement(fn) for fn in opt.placement.split(',')]
	table = evaluate_placements(params,task,placements,threads=cfg.threads)
else:
	table = run_placement_experiment(params,task,
		n_sensors_max = cfg.n_sensors,
		modes         = cfg.str_list('eval_modes'),
		random_seeds  = cfg.int_list('random_seeds'),
		refresh       = cfg.refresh_predictions,
		threads       = cfg.threads )
	if cfg.n_sensors == task.nt and 'ep' in cfg.str_list('eval_modes'):
		try:
			check_information_monotone(table,'ep')
		except InformationCheckError as e:
			ymsg('Warning: ' + e.args[0])

emit_metrics(table,opt.out)
cfg.write_echo(opt.out)
