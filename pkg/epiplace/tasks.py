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
tasks.py:  Synthetic task generators and the task file format
"""

import re
from collections import namedtuple,OrderedDict
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.model import Observation

ScenarioInfo = namedtuple('ScenarioInfo',['name','d','lower','upper','desc'])

scenarios = OrderedDict([
	('noisy',   ScenarioInfo('noisy',  1,(-2.,),(2.,),'sin(x) with a heteroscedastic noise spike at x = 0.5')),
	('multifn', ScenarioInfo('multifn',1,(-2.,),(2.,),'sin or cos for x < 0, sin for x >= 0, noiseless')),
	('field2d', ScenarioInfo('field2d',2,(0.,0.),(1.,1.),'sum of random Gaussian bumps on the unit square')),
])

def scenario_info(name):
	try:
		return scenarios[name]
	except KeyError:
		raise TaskRangeError('{!r}: unknown scenario (choose from {})'.format(name,fmt_list(scenarios)))

func_tags = ('sin','cos','na')

class Task(object):
	"""
	Context points cx [N_c × d] with values cy, target points tx [N_t × d] with
	values ty, and the tag of the function that generated them
	"""

	def __init__(self,cx,cy,tx,ty,tag='na'):
		self.cx = np.asarray(cx,dtype=np.float64)
		self.cy = np.asarray(cy,dtype=np.float64).reshape(-1)
		self.tx = np.asarray(tx,dtype=np.float64)
		self.ty = np.asarray(ty,dtype=np.float64).reshape(-1)
		self.tag = tag
		if self.tx.ndim == 1:
			self.tx = self.tx.reshape(-1,1)
		self.cx = self.cx.reshape(-1,self.tx.shape[1])

	@property
	def d(self):
		return self.tx.shape[1]

	@property
	def nc(self):
		return self.cy.size

	@property
	def nt(self):
		return self.ty.size

	@property
	def context(self):
		return [Observation(tuple(p),float(v)) for p,v in zip(self.cx,self.cy)]

	@property
	def targets(self):
		return [Observation(tuple(p),float(v)) for p,v in zip(self.tx,self.ty)]

	@property
	def target_points(self):
		return [tuple(p) for p in self.tx]

	def __eq__(self,other):
		return (isinstance(other,Task)
			and self.tag == other.tag
			and all(np.array_equal(getattr(self,k),getattr(other,k)) for k in ('cx','cy','tx','ty')) )

	def __repr__(self):
		return 'Task(nc={}, nt={}, tag={!r})'.format(self.nc,self.nt,self.tag)

class TaskSet(object):

	def __init__(self,scenario,d,seed,tasks):
		self.scenario = scenario
		self.d = d
		self.seed = seed
		self.tasks = list(tasks)

	def __len__(self):
		return len(self.tasks)

	def __getitem__(self,idx):
		return self.tasks[idx]

	def __iter__(self):
		return iter(self.tasks)

	def __eq__(self,other):
		return (isinstance(other,TaskSet)
			and (self.scenario,self.d,self.seed) == (other.scenario,other.d,other.seed)
			and self.tasks == other.tasks )

	def task(self,idx):
		if not 0 <= idx < len(self.tasks):
			raise TaskRangeError('task index {} out of range (task set has {} task{})'.format(
				idx,len(self.tasks),suf(len(self.tasks))))
		return self.tasks[idx]

def check_ranges(n_tasks,nc_range,n_t,n_bumps=0):
	nc_min,nc_max = nc_range
	if n_tasks < 1:
		raise TaskRangeError('n_tasks = {}: must be >= 1'.format(n_tasks))
	if n_t < 1:
		raise TaskRangeError('n_t = {}: must be >= 1'.format(n_t))
	if not 0 <= nc_min <= nc_max <= n_t:
		raise TaskRangeError('context range {}–{} not within 0–{}'.format(nc_min,nc_max,n_t))
	if n_bumps < 0:
		raise TaskRangeError('n_bumps = {}: must be >= 0'.format(n_bumps))

def _make_task(rng,tx,ty,nc_range,tag):
	nc = int(rng.integers(nc_range[0],nc_range[1]+1))
	idx = rng.choice(tx.shape[0],nc,replace=False)
	return Task(tx[idx],ty[idx],tx,ty,tag)

def noise_std(x):
	"noise standard deviation of the noisy scenario: base level plus a spike at x = 0.5"
	return 0.05 + 0.5*np.exp(-(x-0.5)**2 / (2*0.25**2))

def gen_noisy_1d(seed,n_tasks=32,nc_range=(0,5),n_t=100):
	check_ranges(n_tasks,nc_range,n_t)
	rng = np.random.default_rng(seed)
	tasks = []
	for _ in range(n_tasks):
		x = rng.uniform(-2.,2.,n_t)
		y = np.sin(x) + rng.standard_normal(n_t) * noise_std(x)
		tasks.append(_make_task(rng,x.reshape(-1,1),y,nc_range,'na'))
	return TaskSet('noisy',1,seed,tasks)

def multifn_values(tag,x):
	left = { 'sin':np.sin, 'cos':np.cos }[tag]
	return np.where(x < 0,left(x),np.sin(x))

def gen_multifn_1d(seed,n_tasks=32,nc_range=(0,5),n_t=100):
	check_ranges(n_tasks,nc_range,n_t)
	rng = np.random.default_rng(seed)
	tasks = []
	for _ in range(n_tasks):
		tag = 'sin' if rng.random() < 0.5 else 'cos'
		x = rng.uniform(-2.,2.,n_t)
		tasks.append(_make_task(rng,x.reshape(-1,1),multifn_values(tag,x),nc_range,tag))
	return TaskSet('multifn',1,seed,tasks)

def field_values(x,amps,centers,widths):
	"noise-free sum of Gaussian bumps at points x [N × 2]"
	f = np.zeros(x.shape[0])
	for a,c,w in zip(amps,centers,widths):
		f += a * np.exp(-np.sum((x-c)**2,axis=1) / (2*w*w))
	return f

def gen_field_2d(seed,n_tasks=32,nc_range=(0,5),n_t=100,n_bumps=3):
	check_ranges(n_tasks,nc_range,n_t,n_bumps)
	rng = np.random.default_rng(seed)
	tasks = []
	for _ in range(n_tasks):
		amps    = rng.uniform(-1.,1.,n_bumps)
		centers = rng.uniform(0.,1.,(n_bumps,2))
		widths  = rng.uniform(0.1,0.3,n_bumps)
		x = rng.uniform(0.,1.,(n_t,2))
		y = field_values(x,amps,centers,widths) + rng.normal(0.,0.05,n_t)
		tasks.append(_make_task(rng,x,y,nc_range,'na'))
	return TaskSet('field2d',2,seed,tasks)

def generate(scenario,seed,n_tasks=32,nc_range=(0,5),n_t=100,n_bumps=3):
	scenario_info(scenario)
	if scenario == 'field2d':
		return gen_field_2d(seed,n_tasks,nc_range,n_t,n_bumps)
	return { 'noisy':gen_noisy_1d, 'multifn':gen_multifn_1d }[scenario](seed,n_tasks,nc_range,n_t)

def value_stats(ts):
	"(mean, std) of all target values in a task set; std falls back to 1 for constant data"
	ys = np.concatenate([t.ty for t in ts.tasks]) if len(ts) else np.zeros(0)
	if ys.size == 0:
		return 0.,1.
	std = float(np.std(ys))
	return float(np.mean(ys)),(std if std > 1e-12 else 1.)

# task file

def _fmt_obs(p,v):
	return ','.join(fmt_float(c) for c in p) + ':' + fmt_float(v)

def format_tasks(ts):
	lines = ['{} v{} scenario={} d={} seed={}'.format(g.tasks_magic,g.tasks_versions[-1],ts.scenario,ts.d,ts.seed)]
	for t in ts.tasks:
		lines.append(' '.join(
			['NC={}'.format(t.nc),'NT={}'.format(t.nt),'TAG={}'.format(t.tag)]
			+ [_fmt_obs(p,v) for p,v in zip(t.cx,t.cy)]
			+ ['|']
			+ [_fmt_obs(p,v) for p,v in zip(t.tx,t.ty)] ))
	lines.append('END tasks={}'.format(len(ts.tasks)))
	return '\n'.join(lines) + '\n'

def write_tasks(ts,path):
	write_data_to_file(path,format_tasks(ts),'task set')

def _parse_task_line(line,d,fn,lineno):

	def err(s):
		raise TaskFileParseError('{}, line {}: {}'.format(fn,lineno,s))

	def parse_obs(tok):
		try:
			p,v = tok.split(':')
			coords = [float(c) for c in p.split(',')]
			v = float(v)
		except ValueError:
			err('{!r}: malformed observation'.format(tok))
		if len(coords) != d:
			err('{!r}: expected {} coordinate{}'.format(tok,d,suf(d)))
		if not (np.isfinite(coords).all() and np.isfinite(v)):
			err('{!r}: non-finite value'.format(tok))
		return coords,v

	toks = line.split()
	m = [re.match(p,t) for p,t in zip((r'^NC=(\d+)$',r'^NT=(\d+)$',r'^TAG=(\w+)$'),toks[:3])]
	if len(toks) < 4 or not all(m):
		err('malformed task header')
	nc,nt,tag = int(m[0][1]),int(m[1][1]),m[2][1]
	if tag not in func_tags:
		err('{!r}: unknown function tag'.format(tag))
	if toks.count('|') != 1:
		err('context/target separator missing')
	sep = toks.index('|')
	ctx = [parse_obs(t) for t in toks[3:sep]]
	tgt = [parse_obs(t) for t in toks[sep+1:]]
	if len(ctx) != nc or len(tgt) != nt:
		err('found {} context and {} target observations (header says {} and {})'.format(len(ctx),len(tgt),nc,nt))

	def arrays(obs):
		return np.array([o[0] for o in obs]).reshape(-1,d),np.array([o[1] for o in obs])

	return Task(*arrays(ctx),*arrays(tgt),tag)

def read_tasks(path):
	data = get_data_from_file(path,'task set')
	if data == '':
		raise TaskFileTruncated('{}: file is empty'.format(path))
	lines = data.split('\n')
	if lines[-1] != '':
		raise TaskFileTruncated('{}, line {}: file truncated (no final newline)'.format(path,len(lines)))
	lines = lines[:-1]

	hdr = lines[0].split()
	if len(hdr) >= 2 and hdr[0] == g.tasks_magic and hdr[1][:1] == 'v' and hdr[1][1:] not in g.tasks_versions:
		raise TaskFileVersionError('{}, line 1: unsupported task file version {!r} (supported: {})'.format(
			path,hdr[1][1:],fmt_list(g.tasks_versions,fmt='no_quotes')))
	m = re.match(r'^{} v(\S+) scenario=(\w+) d=([12]) seed=(\d+)$'.format(g.tasks_magic),lines[0])
	if not m:
		raise TaskFileParseError('{}, line 1: malformed header'.format(path))
	scenario,d,seed = m[2],int(m[3]),int(m[4])
	if scenario not in scenarios or scenarios[scenario].d != d:
		raise TaskFileParseError('{}, line 1: scenario {!r} with d={} not recognized'.format(path,scenario,d))

	body,declared = lines[1:],None
	if body and body[-1].startswith('END'):
		m = re.match(r'^END tasks=(\d+)$',body[-1])
		if not m:
			raise TaskFileParseError('{}, line {}: malformed END record'.format(path,len(lines)))
		body,declared = body[:-1],int(m[1])

	tasks = [_parse_task_line(l,d,path,n) for n,l in enumerate(body,2)]
	if declared is None:
		raise TaskFileTruncated('{}: file truncated after line {} (END record missing)'.format(path,len(lines)))
	if declared != len(tasks):
		raise TaskFileTruncated('{}: {} of {} tasks present'.format(path,len(tasks),declared))
	dmsg('Read {} task{} from {!r}'.format(len(tasks),suf(tasks),path))
	return TaskSet(scenario,d,seed,tasks)
