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
placement.py:  Acquisition scoring and greedy / random sensor placement
"""

import re
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.model import predict,as_points,context_arrays
from epiplace.uncertainty import decompose

score_fields = { 'var':'var_total', 'ep':'var_epistemic' }

class CandidateSet(object):
	"Ordered finite set of candidate sensor locations"

	def __init__(self,points,d):
		self.points = as_points(points,d)
		if not len(self.points):
			raise PlacementRangeError('candidate set is empty')

	def __len__(self):
		return self.points.shape[0]

	def __getitem__(self,idx):
		return tuple(float(c) for c in self.points[idx])

	def check_grid(self,grid):
		bad = grid.outside(self.points)
		if len(bad):
			i = int(bad[0])
			raise PlacementRangeError('candidate {} at {} lies outside the model grid {}–{}'.format(
				i,self[i],grid.lower,grid.upper))

def as_candidates(c,d):
	return c if isinstance(c,CandidateSet) else CandidateSet(c,d)

class AcquisitionScores(object):
	"""
	Per-candidate mean hypothetical posterior variance (total for mode 'var',
	epistemic for mode 'ep').  Lower is better.
	"""
	def __init__(self,mode,scores):
		self.mode = mode
		self.scores = np.asarray(scores,dtype=np.float64)

	def __len__(self):
		return self.scores.size

	def argmin(self,exclude=()):
		return argmin_lowest(self.scores,exclude)

class PlacementResult(object):

	def __init__(self,mode,selected,points,
			scores       = None,
			yhat         = None,
			step_scores  = None,
			pseudo_context = None,
			refresh      = False,
			seed         = None,
			n_candidates = None,
			task_index   = None ):
		self.mode           = mode
		self.selected       = [int(i) for i in selected]
		self.points         = [tuple(float(c) for c in p) for p in points]
		self.scores         = scores
		self.yhat           = yhat
		self.step_scores    = step_scores
		self.pseudo_context = pseudo_context
		self.refresh        = refresh
		self.seed           = seed
		self.n_candidates   = n_candidates
		self.task_index     = task_index

	@property
	def n_sensors(self):
		return len(self.selected)

	def __eq__(self,other):
		return (isinstance(other,PlacementResult)
			and (self.mode,self.selected,self.points,self.refresh,self.seed,self.n_candidates)
				== (other.mode,other.selected,other.points,other.refresh,other.seed,other.n_candidates)
			and self.scores == other.scores
			and self.yhat == other.yhat )

def argmin_lowest(scores,exclude=()):
	"index of the smallest score, lowest index on ties, skipping 'exclude'"
	best = None
	for i,s in enumerate(scores):
		if i in exclude:
			continue
		if best is None or s < scores[best]:
			best = i
	return best

def mean_variance(mixtures,mode):
	"mean over targets of the total or epistemic variance"
	f = score_fields[mode]
	return float(np.mean([getattr(decompose(m),f) for m in mixtures]))

def _check_mode(mode):
	if mode not in score_fields:
		raise PlacementRangeError('{!r}: invalid acquisition mode (choose from {})'.format(mode,fmt_list(score_fields)))

def _pseudo_values(params,context,cands,indices,predictor,threads):
	def one(i):
		y = decompose(predictor(params,context,[cands[i]])[0]).mean
		if not np.isfinite(y):
			raise NonFinitePrediction('non-finite prediction at candidate {} ({})'.format(i,cands[i]))
		return y
	return parallel_map(one,indices,threads)

def _hypothetical_scores(params,context,cands,yhat,targets,mode,indices,predictor,threads):
	cx,cy = context
	def one(i):
		ctx = (np.vstack([cx,cands.points[i:i+1]]),np.append(cy,yhat[i]))
		s = mean_variance(predictor(params,ctx,targets),mode)
		if not np.isfinite(s):
			raise NonFinitePrediction('non-finite acquisition score at candidate {} ({})'.format(i,cands[i]))
		return s
	return parallel_map(one,indices,threads)

def acquisition_scores(params,context,candidates,targets,mode,
		predictor     = None,
		threads       = 1,
		pseudo_values = None ):
	"""
	For every candidate x_i: substitute the predicted mean ŷ_i for the unknown
	measurement, add (x_i, ŷ_i) to the context, and score the mean predicted
	variance over the targets.
	"""
	_check_mode(mode)
	predictor = predictor or predict
	cands = as_candidates(candidates,params.d)
	cands.check_grid(params.grid)
	targets = as_points(targets,params.d)
	if not len(targets):
		raise PlacementRangeError('target set is empty')
	ctx = context_arrays(context,params.d)
	idx = range(len(cands))
	yhat = pseudo_values if pseudo_values is not None else _pseudo_values(params,ctx,cands,idx,predictor,threads)
	return AcquisitionScores(mode,_hypothetical_scores(params,ctx,cands,yhat,targets,mode,idx,predictor,threads))

def greedy_place(params,candidates,targets,n_sensors,mode='ep',
		refresh_predictions = False,
		initial_context     = None,
		predictor           = None,
		threads             = 1,
		task_index          = None ):
	"""
	Greedy selection of n_sensors candidates.  Pseudo-values ŷ are computed
	once against the initial context unless refresh_predictions is set, in
	which case they are recomputed against the growing pseudo-context at every
	step after the first.
	"""
	_check_mode(mode)
	predictor = predictor or predict
	cands = as_candidates(candidates,params.d)
	cands.check_grid(params.grid)
	targets = as_points(targets,params.d)
	if not len(targets):
		raise PlacementRangeError('target set is empty')
	N = len(cands)
	if not 1 <= n_sensors <= N:
		raise PlacementRangeError('n_sensors = {}: must be between 1 and the number of candidates ({})'.format(n_sensors,N))

	cx,cy = context_arrays(initial_context or [],params.d)
	yhat = _pseudo_values(params,(cx,cy),cands,range(N),predictor,threads)

	selected,chosen,yhat_used,step_scores = [],[],[],[]
	for step in range(1,n_sensors+1):
		remaining = [i for i in range(N) if i not in selected]
		if refresh_predictions and step > 1:
			for i,y in zip(remaining,_pseudo_values(params,(cx,cy),cands,remaining,predictor,threads)):
				yhat[i] = y
		sc = np.full(N,np.nan)
		sc[remaining] = _hypothetical_scores(params,(cx,cy),cands,yhat,targets,mode,remaining,predictor,threads)
		best = argmin_lowest(sc,set(selected))
		selected.append(best)
		chosen.append(float(sc[best]))
		yhat_used.append(float(yhat[best]))
		step_scores.append(sc)
		cx = np.vstack([cx,cands.points[best:best+1]])
		cy = np.append(cy,yhat[best])
		vmsg('Step {}: candidate {} at ({})  ŷ = {}  score = {}'.format(
			step,best,_fmt_point(cands[best]),fmt_float(yhat[best]),fmt_float(sc[best])))

	return PlacementResult(
		mode           = mode,
		selected       = selected,
		points         = [cands[i] for i in selected],
		scores         = chosen,
		yhat           = yhat_used,
		step_scores    = step_scores,
		pseudo_context = (cx,cy),
		refresh        = refresh_predictions,
		n_candidates   = N,
		task_index     = task_index )

def random_place(candidates,n_sensors,seed,d=1,task_index=None):
	"uniform sample without replacement, fully determined by seed"
	cands = as_candidates(candidates,d)
	N = len(cands)
	if not 1 <= n_sensors <= N:
		raise PlacementRangeError('n_sensors = {}: must be between 1 and the number of candidates ({})'.format(n_sensors,N))
	sel = [int(i) for i in np.random.default_rng(seed).choice(N,n_sensors,replace=False)]
	return PlacementResult(
		mode         = 'random',
		selected     = sel,
		points       = [cands[i] for i in sel],
		seed         = seed,
		n_candidates = N,
		task_index   = task_index )

# placement file

def _fmt_point(p):
	return ','.join(fmt_float(c) for c in p)

def _fmt_opt(v):
	if v is None: return '-'
	if type(v) == bool: return ('false','true')[v]
	return str(v)

def format_placement(pr,with_scores=True):
	lines = [
		'{} v{}'.format(g.placement_magic,g.placement_version),
		'OPTIONS mode={} refresh={} seed={} n_candidates={} n_sensors={} task_index={}'.format(
			pr.mode,_fmt_opt(pr.refresh),_fmt_opt(pr.seed),_fmt_opt(pr.n_candidates),pr.n_sensors,_fmt_opt(pr.task_index)) ]
	for n,(i,p) in enumerate(zip(pr.selected,pr.points)):
		lines.append('STEP {} index={} point={} yhat={} score={}'.format(
			n+1,i,_fmt_point(p),
			fmt_float(pr.yhat[n]) if pr.yhat else '-',
			fmt_float(pr.scores[n]) if pr.scores else '-' ))
	if with_scores and pr.step_scores:
		for n,sc in enumerate(pr.step_scores):
			lines.append('SCORES {} {}'.format(n+1,' '.join('-' if np.isnan(s) else fmt_float(s) for s in sc)))
	lines.append('SELECTED {}'.format(' '.join(map(str,pr.selected))))
	return '\n'.join([make_chksum_6(' '.join(lines))] + lines) + '\n'

def write_placement(pr,path,with_scores=True):
	write_data_to_file(path,format_placement(pr,with_scores),'placement')

def parse_placement(text,fn='placement'):

	def err(n,s):
		raise PlacementFileError('{}, line {}: {}'.format(fn,n,s))

	lines = text.splitlines()
	if len(lines) < 4:
		raise PlacementFileError('{}: placement file too short'.format(fn))
	if not is_chksum_6(lines[0]):
		err(1,'missing checksum')
	if lines[0] != make_chksum_6(' '.join(lines[1:])):
		raise PlacementFileError('{}: placement data does not match checksum'.format(fn))
	if lines[1] != '{} v{}'.format(g.placement_magic,g.placement_version):
		err(2,'unrecognized header {!r}'.format(lines[1]))

	m = re.match(r'^OPTIONS mode=(\w+) refresh=(true|false) seed=(\S+) n_candidates=(\S+) n_sensors=(\d+) task_index=(\S+)$',lines[2])
	if not m or m[1] not in ('var','ep','random'):
		err(3,'malformed options record')

	def opt_int(s):
		return None if s == '-' else int(s)

	try:
		mode,refresh,seed,ncand,nsens,tidx = m[1],m[2] == 'true',opt_int(m[3]),opt_int(m[4]),int(m[5]),opt_int(m[6])
	except ValueError:
		err(3,'malformed options record')

	sel,pts,yhat,scores,step_scores = [],[],[],[],[]
	for n,l in enumerate(lines[3:],4):
		if l.startswith('STEP '):
			ms = re.match(r'^STEP (\d+) index=(\d+) point=(\S+) yhat=(\S+) score=(\S+)$',l)
			if not ms or int(ms[1]) != len(sel)+1:
				err(n,'malformed step record')
			try:
				pts.append(tuple(float(c) for c in ms[3].split(',')))
				if ms[4] != '-': yhat.append(float(ms[4]))
				if ms[5] != '-': scores.append(float(ms[5]))
			except ValueError:
				err(n,'malformed number in step record')
			sel.append(int(ms[2]))
		elif l.startswith('SCORES '):
			try:
				step_scores.append(np.array([np.nan if s == '-' else float(s) for s in l.split()[2:]]))
			except ValueError:
				err(n,'malformed number in score record')
		elif l.startswith('SELECTED'):
			if l.split()[1:] != [str(i) for i in sel] or n != len(lines):
				err(n,'selection record does not match step records')
		else:
			err(n,'unrecognized record')

	if not lines[-1].startswith('SELECTED') or len(sel) != nsens:
		raise PlacementFileError('{}: incomplete placement ({} of {} steps)'.format(fn,len(sel),nsens))

	return PlacementResult(
		mode         = mode,
		selected     = sel,
		points       = pts,
		scores       = scores or None,
		yhat         = yhat or None,
		step_scores  = step_scores or None,
		refresh      = refresh,
		seed         = seed,
		n_candidates = ncand,
		task_index   = tidx )

def read_placement(path):
	return parse_placement(get_data_from_file(path,'placement'),path)
