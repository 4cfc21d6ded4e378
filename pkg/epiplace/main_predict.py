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
epiplace predict: Per-target predictive mean and variance decomposition
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Predict at every target of one task, conditioning on its context',
		'usage':'[opts] --ckpt <file> --tasks <file> --out <file>',
		'options': """
-h, --help            Print this help message
-c, --config=       f Read run parameters from config file 'f'
-C, --ckpt=         f Model checkpoint
-T, --tasks=        f Task file
-i, --task-index=   n Index of the task to predict (default: 0)
-n, --no-context      Ignore the task's context and predict from the prior
-o, --out=          f Write predictions (CSV) to file 'f'
""",
	'notes': """
Output columns: index, the target coordinates (x, or x1 and x2), mean,
var_total, var_epistemic, var_aleatoric.  var_total equals var_epistemic
plus var_aleatoric.

'epiplace plot --predictions' draws 1D prediction files as uncertainty curves.
"""
	}
}

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()
if not opt.out:
	raise UserOptError('--out: option is required')

cfg = opts.get_run_config({
	'ckpt':       'ckpt',
	'tasks':      'tasks',
	'task_index': 'task_index',
})

for k in ('ckpt','tasks'):
	if not getattr(cfg,k):
		raise UserOptError('--{}: option is required'.format(k))

from epiplace.tasks import read_tasks
from epiplace.checkpoint import load_checkpoint
from epiplace.model import predict
from epiplace.evaluate import emit_predictions

ts = read_tasks(cfg.tasks)
task = ts.task(cfg.task_index)
params,hist,tc = load_checkpoint(cfg.ckpt,expect={'d':ts.d})

nc = 0 if opt.no_context else task.nc
qmsg('Predicting {} target{} from {} context point{}'.format(task.nt,suf(task.nt),nc,suf(nc)))
context = (task.cx[:nc],task.cy[:nc])
emit_predictions(task.tx,predict(params,context,task.tx),opt.out)
cfg.write_echo(opt.out)
