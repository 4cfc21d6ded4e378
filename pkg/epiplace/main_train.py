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
epiplace train: Train a model on a task file and write a checkpoint
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Train a ConvCNP with a mixture density head on a task file',
		'usage':'[opts] --tasks <file> --out-ckpt <file>',
		'options': """
-h, --help            Print this help message
-c, --config=       f Read run parameters from config file 'f'
-T, --tasks=        f Training tasks
-V, --val-tasks=    f Validation tasks (default: the training tasks)
-e, --epochs=       n Maximum number of epochs (default: 500)
-p, --patience=     n Stop after 'n' epochs without validation improvement
                      (default: 25)
-l, --lr=           r Adam learning rate (default: 0.001)
-K, --components=   n Number of mixture components (default: 2)
-s, --seed=         n Seed for parameter initialization and task shuffling
                      (default: 0)
-o, --out-ckpt=     f Write the best-validation checkpoint to file 'f'
-H, --out-history=  f Write per-epoch training history (CSV) to file 'f'
""",
	'notes': """
The checkpoint stores the parameters from the epoch with the lowest
validation NLL, the model and training configuration, and the loss history.
With K = 1 the model has no epistemic channel: every epistemic variance it
predicts is exactly zero.
{n}{t}"""
	},
	'code': {
		'notes': lambda s: s.format(n=help_notes('config'),t=help_notes('threads')),
	}
}

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()
if not opt.out_ckpt:
	raise UserOptError('--out-ckpt: option is required')

cfg = opts.get_run_config({
	'tasks':      'tasks',
	'val_tasks':  'val_tasks',
	'epochs':     'epochs',
	'patience':   'patience',
	'lr':         'lr',
	'components': 'components',
	'seed':       'train_seed',
})

if not cfg.tasks:
	raise UserOptError('--tasks: option is required (or set tasks in the config file)')

from epiplace.tasks import read_tasks,value_stats
from epiplace.model import ModelParams,make_grid
from epiplace.train import fit,seed_streams,write_history
from epiplace.checkpoint import save_checkpoint

train_ts = read_tasks(cfg.tasks)
val_ts = read_tasks(cfg.val_tasks) if cfg.val_tasks else None
if val_ts and val_ts.d != train_ts.d:
	raise TaskRangeError('validation tasks are {}D, training tasks {}D'.format(val_ts.d,train_ts.d))

mc = cfg.model_config(train_ts.scenario)
tc = cfg.train_config()
params = ModelParams.init(mc,make_grid(train_ts.scenario,mc.grid_nodes),seed_streams(tc.seed)[0])
params.y_mean,params.y_std = value_stats(train_ts)
vmsg('Model: {}, {} parameters'.format(mc,params.n_params()))

best,hist = fit(tc,params,train_ts,val_ts,threads=cfg.threads)

save_checkpoint(best,hist,tc,opt.out_ckpt)
cfg.write_echo(opt.out_ckpt)
if opt.out_history:
	write_history(hist,opt.out_history)
