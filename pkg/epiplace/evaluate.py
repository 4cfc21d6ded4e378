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
evaluate.py:  RMSE / NLL metrics and the sensors-vs-error placement experiment
"""

from collections import namedtuple
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.model import predict
from epiplace.uncertainty import decompose,mixture_nll,UncertaintyDecomposition
from epiplace.placement import greedy_place,random_place

def rmse(pred,truth):
	pred = np.asarray(pred,dtype=np.float64).reshape(-1)
	truth = np.asarray(truth,dtype=np.float64).reshape(-1)
	if pred.size != truth.size or pred.size == 0:
		raise MetricsLengthError('rmse: {} predictions for {} truths'.format(pred.size,truth.size))
	return float(np.sqrt(np.mean((pred-truth)**2)))

def mean_nll(mixtures,truths):
	truths = np.asarray(truths,dtype=np.float64).reshape(-1)
	if len(mixtures) != truths.size or truths.size == 0:
		raise MetricsLengthError('mean_nll: {} predictions for {} truths'.format(len(mixtures),truths.size))
	return float(np.mean([mixture_nll(m,y) for m,y in zip(mixtures,truths)]))

# seed is None for deterministic modes and for seed-averaged random rows
MetricsRow = namedtuple('MetricsRow',g.metrics_fields)

class MetricsTable(object):

	def __init__(self,rows=()):
		self.rows = list(rows)

	def add(self,mode,model_k,n_sensors,seed,rmse,mean_nll):
		self.rows.append(MetricsRow(mode,int(model_k),int(n_sensors),seed,float(rmse),float(mean_nll)))

	def __len__(self):
		return len(self.rows)

	def __eq__(self,other):
		return isinstance(other,MetricsTable) and self.rows == other.rows

	@classmethod
	def merge(cls,tables):
		"rows of several tables, in order; a (mode, K, n_sensors, seed) key may occur only once"
		out = cls()
		seen = set()
		for t in tables:
			for r in t.rows:
				key = (r.mode,r.model_k,r.n_sensors,r.seed)
				if key in seen:
					raise MetricsFileError('duplicate metrics row (mode={}, model_k={}, n_sensors={}, seed={})'.format(
						r.mode,r.model_k,r.n_sensors,'' if r.seed is None else r.seed))
				seen.add(key)
				out.rows.append(r)
		return out

	def curves(self):
		"""
		{label: [(n, rmse, mean_nll), …]} for plotting: the prior and per-seed
		rows are left out
		"""
		ks = sorted({r.model_k for r in self.rows})
		out = {}
		for r in self.rows:
			if r.mode == 'prior' or r.seed is not None or r.n_sensors < 1:
				continue
			label = r.mode if len(ks) == 1 else '{} K={}'.format(r.mode,r.model_k)
			out.setdefault(label,[]).append((r.n_sensors,r.rmse,r.mean_nll))
		return { k:sorted(v) for k,v in out.items() }

def check_information_monotone(table,mode='ep'):
	"""
	Weak sanity check for an experiment run up to every candidate: the mean NLL
	with the most sensors must not exceed the mean NLL with one sensor.
	Returns the two values.
	"""
	rows = sorted((r for r in table.rows if r.mode == mode and r.seed is None and r.n_sensors >= 1),
		key = lambda r: r.n_sensors )
	if not rows:
		raise EmptyTableError('metrics table has no {!r} rows'.format(mode))
	first,last = rows[0],rows[-1]
	if last.mean_nll > first.mean_nll:
		raise InformationCheckError('{} placement: mean NLL with {} sensors ({}) exceeds mean NLL with {} ({})'.format(
			mode,last.n_sensors,fmt_float(last.mean_nll),first.n_sensors,fmt_float(first.mean_nll)))
	return first.mean_nll,last.mean_nll

def _context_for(task,cand_idx,selected):
	"evaluation context: selected candidate locations paired with their TRUE values"
	ti = [cand_idx[i] for i in selected]
	return task.tx[ti],task.ty[ti]

def _candidate_indices(task,candidates):
	if candidates is None:
		return list(range(task.nt))
	cand_idx = [int(i) for i in candidates]
	for i in cand_idx:
		if not 0 <= i < task.nt:
			raise CandidateIndexError('candidate index {} out of range (task has {} target{})'.format(i,task.nt,suf(task.nt)))
	return cand_idx

def evaluate_placements(params,task,placements,candidates=None,context_hook=None,threads=1):
	"""
	Score every prefix of every placement by conditioning on the ground truth
	at the selected locations.  'candidates' lists the target indices that
	placement indices refer to (default: all targets).  Random placements are
	reported per seed plus a seed-averaged row.
	"""
	cand_idx = _candidate_indices(task,candidates)
	K = params.K

	for pr in placements:
		for i in pr.selected:
			if not 0 <= i < len(cand_idx):
				raise CandidateIndexError('{} placement: candidate index {} out of range ({} candidate{} in task)'.format(
					pr.mode,i,len(cand_idx),suf(len(cand_idx))))

	jobs = [(pr,n) for pr in placements for n in range(1,pr.n_sensors+1)]

	def score(job):
		pr,n = job
		ctx = _context_for(task,cand_idx,pr.selected[:n])
		if context_hook:
			context_hook(pr.mode,pr.seed,n,ctx)
		mix = predict(params,ctx,task.tx)
		return rmse([decompose(m).mean for m in mix],task.ty),mean_nll(mix,task.ty)

	results = dict(zip([(id(pr),n) for pr,n in jobs],parallel_map(score,jobs,threads)))

	table = MetricsTable()
	prior = predict(params,[],task.tx)
	table.add('prior',K,0,None,rmse([decompose(m).mean for m in prior],task.ty),mean_nll(prior,task.ty))

	modes = []
	for pr in placements:
		if pr.mode not in modes:
			modes.append(pr.mode)

	for mode in modes:
		prs = [pr for pr in placements if pr.mode == mode]
		if mode == 'random':
			for pr in prs:
				for n in range(1,pr.n_sensors+1):
					table.add(mode,K,n,pr.seed,*results[(id(pr),n)])
			for n in range(1,max(pr.n_sensors for pr in prs)+1):
				v = [results[(id(pr),n)] for pr in prs if pr.n_sensors >= n]
				table.add(mode,K,n,None,np.mean([e[0] for e in v]),np.mean([e[1] for e in v]))
		else:
			for pr in prs:
				for n in range(1,pr.n_sensors+1):
					table.add(mode,K,n,None,*results[(id(pr),n)])

	return table

def run_placement_experiment(params,eval_task,candidates=None,n_sensors_max=3,
		modes         = ('var','ep','random'),
		random_seeds  = (0,1,2),
		refresh       = False,
		context_hook  = None,
		predictor     = None,
		threads       = 1 ):
	"place sensors with every requested mode, then evaluate every prefix against ground truth"
	if n_sensors_max < 1:
		raise PlacementRangeError('n_sensors_max = {}: at least one sensor must be placed'.format(n_sensors_max))
	cand_idx = _candidate_indices(eval_task,candidates)
	cand_pts = eval_task.tx[cand_idx]

	placements = []
	for mode in modes:
		if mode == 'random':
			for s in random_seeds:
				placements.append(random_place(cand_pts,n_sensors_max,s,d=params.d))
		else:
			qmsg('Placing {} sensor{} with acquisition {!r}'.format(n_sensors_max,suf(n_sensors_max),mode))
			placements.append(greedy_place(params,cand_pts,eval_task.tx,n_sensors_max,mode,
				refresh_predictions = refresh,
				predictor           = predictor,
				threads             = threads ))

	return evaluate_placements(params,eval_task,placements,cand_idx,context_hook,threads)

# metrics file

def format_metrics(table):
	if not len(table):
		raise EmptyTableError('metrics table is empty')
	out = [','.join(g.metrics_fields)]
	for r in table.rows:
		out.append('{},{},{},{},{},{}'.format(
			r.mode,r.model_k,r.n_sensors,'' if r.seed is None else r.seed,fmt_float(r.rmse),fmt_float(r.mean_nll)))
	return '\n'.join(out) + '\n'

def emit_metrics(table,path):
	write_data_to_file(path,format_metrics(table),'metrics')

def parse_metrics(text,fn='metrics'):
	lines = text.splitlines()
	if not lines or lines[0] != ','.join(g.metrics_fields):
		raise MetricsFileError('{}: missing or incorrect header (expected {!r})'.format(fn,','.join(g.metrics_fields)))
	table = MetricsTable()
	for n,l in enumerate(lines[1:],2):
		f = l.split(',')
		try:
			assert len(f) == len(g.metrics_fields)
			table.add(f[0],int(f[1]),int(f[2]),None if f[3] == '' else int(f[3]),float(f[4]),float(f[5]))
		except (AssertionError,ValueError):
			raise MetricsFileError('{}, line {}: malformed metrics row'.format(fn,n))
	if not len(table):
		raise EmptyTableError('{}: metrics file has no rows'.format(fn))
	return table

def read_metrics(path):
	return parse_metrics(get_data_from_file(path,'metrics'),path)

def emit_plot(table,path):
	from epiplace.svgplot import render_metrics
	if not len(table):
		raise EmptyTableError('metrics table is empty')
	write_data_to_file(path,render_metrics(table),'plot')

# predictions file

PredictionTable = namedtuple('PredictionTable',['x','mean','var_total','var_epistemic','var_aleatoric'])

def prediction_columns(d):
	return ['index'] + (['x'] if d == 1 else ['x{}'.format(i+1) for i in range(d)]) + list(UncertaintyDecomposition._fields)

def format_predictions(tx,mixtures):
	tx = np.asarray(tx,dtype=np.float64).reshape(len(mixtures),-1)
	out = [','.join(prediction_columns(tx.shape[1]))]
	for n,(x,m) in enumerate(zip(tx,mixtures)):
		out.append(','.join([str(n)] + [fmt_float(c) for c in x] + [fmt_float(v) for v in decompose(m)]))
	return '\n'.join(out) + '\n'

def emit_predictions(tx,mixtures,path):
	write_data_to_file(path,format_predictions(tx,mixtures),'predictions')

def parse_predictions(text,fn='predictions'):
	lines = text.splitlines()
	hdr = lines[0].split(',') if lines else []
	d = len(hdr) - 5
	if d not in (1,2) or hdr != prediction_columns(d):
		raise PredictionsFileError('{}: missing or incorrect header'.format(fn))
	rows = []
	for n,l in enumerate(lines[1:],2):
		f = l.split(',')
		try:
			assert len(f) == len(hdr) and int(f[0]) == n-2
			rows.append([float(v) for v in f[1:]])
		except (AssertionError,ValueError):
			raise PredictionsFileError('{}, line {}: malformed prediction row'.format(fn,n))
	if not rows:
		raise EmptyTableError('{}: predictions file has no rows'.format(fn))
	a = np.array(rows)
	return PredictionTable(a[:,:d],*(a[:,d+i] for i in range(4)))

def read_predictions(path):
	return parse_predictions(get_data_from_file(path,'predictions'),path)

def emit_uncertainty_plot(panels,path):
	"panels: (title, PredictionTable) pairs, drawn side by side"
	from epiplace.svgplot import render_uncertainty
	if not panels:
		raise EmptyTableError('no predictions to plot')
	for title,pt in panels:
		if pt.x.shape[1] != 1:
			raise PredictionsFileError('{}: {}-dimensional predictions cannot be drawn as uncertainty curves'.format(
				title,pt.x.shape[1]))
	write_data_to_file(path,render_uncertainty(panels),'plot')
