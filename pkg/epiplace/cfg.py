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
cfg.py:  Run configuration for EpiPlace subcommands: defaults, config file, flags
"""

import os,re
from collections import OrderedDict

from epiplace.globalvars import *
from epiplace.util import *

# key: (default, group)
_defaults = (
	('scenario',            'noisy',   'tasks'),
	('n_tasks',             32,        'tasks'),
	('n_targets',           100,       'tasks'),
	('nc_min',              0,         'tasks'),
	('nc_max',              5,         'tasks'),
	('n_bumps',             3,         'tasks'),
	('task_seed',           0,         'tasks'),

	('components',          2,         'model'),
	('grid_nodes',          0,         'model'), # 0: scenario default
	('depth',               6,         'model'),
	('width',               32,        'model'),
	('kernel_size',         5,         'model'),
	('head_width',          32,        'model'),
	('head_depth',          2,         'model'),
	('position_map',        False,     'model'),

	('lr',                  1e-3,      'train'),
	('beta1',               0.9,       'train'),
	('beta2',               0.999,     'train'),
	('adam_eps',            1e-8,      'train'),
	('epochs',              500,       'train'),
	('patience',            25,        'train'),
	('batch',               1,         'train'),
	('resample_context',    True,      'train'),
	('train_seed',          0,         'train'),

	('acquisition',         'ep',      'placement'),
	('n_sensors',           3,         'placement'),
	('refresh_predictions', False,     'placement'),
	('placement_seed',      0,         'placement'),
	('random_seeds',        '0,1,2',   'placement'),
	('eval_modes',          'var,ep,random', 'placement'),
	('task_index',          0,         'placement'),

	('threads',             1,         'run'),
	('tasks',               '',        'run'),
	('val_tasks',           '',        'run'),
	('ckpt',                '',        'run'),
)

class RunConfig(object):
	"""
	Flat key = value run configuration.  Precedence: defaults < config file < flags.
	"""
	defaults  = OrderedDict((k,v) for k,v,grp in _defaults)
	groups    = OrderedDict((k,grp) for k,v,grp in _defaults)
	path_keys = ('tasks','val_tasks','ckpt')
	line_pat  = r'^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)$'

	def __init__(self,fn=None):
		self.fn = fn
		self.src = {}
		for k,v in self.defaults.items():
			setattr(self,k,v)
			self.src[k] = 'default'
		if fn:
			self.load(fn)

	def load(self,fn):
		lines = get_data_from_file(fn,'run configuration').splitlines()
		fdir = os.path.dirname(fn)
		for lineno,line in enumerate(lines,1):
			line = strip_comments(line).strip()
			if line == '':
				continue
			m = re.match(self.line_pat,line)
			if not m:
				raise CfgFileParseError('Parse error in file {!r}, line {}'.format(fn,lineno))
			key,val = m[1],m[2]
			if key not in self.defaults:
				raise UnknownCfgKey('{!r}: unknown configuration key in file {!r}, line {}'.format(key,fn,lineno))
			if key in self.path_keys and val and not os.path.isabs(val):
				val = os.path.join(fdir,val)
			self.set(key,val,src=fn)

	def set(self,key,val,src):
		if key not in self.defaults:
			raise UnknownCfgKey('{!r}: unknown configuration key'.format(key))
		setattr(self,key,set_for_type(val,self.defaults[key],key,src=src))
		self.src[key] = src

	def update(self,d,src='command line'):
		for k,v in d.items():
			self.set(k,v,src)

	def get(self,key):
		return getattr(self,key)

	def int_list(self,key):
		return [int(s) for s in getattr(self,key).split(',') if s.strip() != '']

	def str_list(self,key):
		return [s.strip() for s in getattr(self,key).split(',') if s.strip() != '']

	def validate(self):

		def die_bad(key,cond):
			raise UserOptError('{} = {!r}: invalid value ({}) [source: {}]'.format(
				key, getattr(self,key), cond, self.src[key] ))

		def chk_ge(key,lim):
			if getattr(self,key) < lim:
				die_bad(key,'must be >= {}'.format(lim))

		def chk_choice(key,choices):
			if getattr(self,key) not in choices:
				die_bad(key,'valid choices: {}'.format(fmt_list(choices)))

		chk_choice('scenario',g.scenarios)
		chk_choice('acquisition',g.acquisition_modes)

		for k in ('n_tasks','n_targets','components','depth','width','kernel_size',
				'head_width','epochs','patience','batch','n_sensors','threads'):
			chk_ge(k,1)
		for k in ('nc_min','nc_max','n_bumps','task_seed','train_seed','placement_seed',
				'head_depth','task_index','grid_nodes'):
			chk_ge(k,0)

		if self.nc_min > self.nc_max:
			die_bad('nc_min','greater than nc_max ({})'.format(self.nc_max))
		if self.nc_max > self.n_targets:
			die_bad('nc_max','greater than n_targets ({})'.format(self.n_targets))
		if self.grid_nodes and self.grid_nodes < 8:
			die_bad('grid_nodes','must be 0 or >= 8')
		if self.kernel_size % 2 == 0:
			die_bad('kernel_size','must be odd')
		if not self.lr > 0:
			die_bad('lr','must be > 0')
		if not self.adam_eps > 0:
			die_bad('adam_eps','must be > 0')
		for k in ('beta1','beta2'):
			if not 0 <= getattr(self,k) < 1:
				die_bad(k,'must be in [0,1)')

		for s in self.str_list('random_seeds'):
			if not is_int(s) or int(s) < 0:
				die_bad('random_seeds','comma-separated non-negative integers required')
		if not self.str_list('random_seeds'):
			die_bad('random_seeds','at least one seed required')

		modes = self.str_list('eval_modes')
		if not modes:
			die_bad('eval_modes','at least one mode required')
		for m in modes:
			if m not in g.acquisition_modes:
				die_bad('eval_modes','valid choices: {}'.format(fmt_list(g.acquisition_modes)))

		return True

	def fmt_val(self,key):
		v = getattr(self,key)
		if type(v) == bool:
			return ('false','true')[v]
		return repr(v) if type(v) == float else str(v)

	def format(self):
		return ''.join('{} = {}\n'.format(k,self.fmt_val(k)) for k in sorted(self.defaults))

	def write_echo(self,out_path):
		"write the resolved configuration to the sibling file '<out_path>.cfg'"
		write_data_to_file(out_path+'.cfg',self.format(),'resolved run configuration')

	def model_config(self,scenario=None):
		from epiplace.model import ModelConfig
		from epiplace.tasks import scenario_info
		d = scenario_info(scenario or self.scenario).d
		return ModelConfig(
			d            = d,
			components   = self.components,
			grid_nodes   = self.grid_nodes,
			depth        = self.depth,
			width        = self.width,
			kernel_size  = self.kernel_size,
			head_width   = self.head_width,
			head_depth   = self.head_depth,
			position_map = self.position_map )

	def train_config(self):
		from epiplace.train import TrainConfig
		return TrainConfig(
			epochs           = self.epochs,
			lr               = self.lr,
			beta1            = self.beta1,
			beta2            = self.beta2,
			adam_eps         = self.adam_eps,
			batch            = self.batch,
			patience         = self.patience,
			resample_context = self.resample_context,
			seed             = self.train_seed )
