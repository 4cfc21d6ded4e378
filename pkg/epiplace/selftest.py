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
selftest.py:  Fast embedded property suite for the 'selftest' subcommand
"""

import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.tensor import *
from epiplace.uncertainty import MixtureParams,decompose
from epiplace.model import ModelConfig,ModelParams,GridSpec,predict,as_points
from epiplace.tasks import Task
from epiplace.placement import greedy_place,mean_variance,argmin_lowest

fault_names = ('decomposition','gradient','greedy')

grad_tol = 1e-4
decomp_tol = 1e-10

def random_mixtures(n,seed=0,K_max=5):
	rng = np.random.default_rng(seed)
	ret = []
	for i in range(n):
		K = int(rng.integers(1,K_max+1))
		w = rng.dirichlet(np.ones(K))
		ret.append(MixtureParams(w,rng.normal(0,3,K),rng.uniform(g.var_floor,4,K)))
	return ret

def tiny_model(seed=0,d=1,components=2,nodes=32,width=8,depth=2,position_map=True):
	"""
	Small randomly initialized model.  Biases and the position map are random
	too, so every relu sees inputs away from zero.
	"""
	mc = ModelConfig(d=d,components=components,depth=depth,width=width,kernel_size=3,head_width=width,head_depth=1,position_map=position_map)
	grid = GridSpec((-2.2,)*d,(2.2,)*d,(nodes,)*d)
	params = ModelParams.init(mc,grid,seed)
	rng = np.random.default_rng(seed + 1000)
	for k,t in params.named_tensors():
		if k.endswith('.bias') or k.endswith('position_map'):
			t.data = rng.normal(0,0.5,t.shape)
	return params

def tiny_tasks(n,seed=0,d=1,nc=3,nt=5):
	rng = np.random.default_rng(seed)
	return [Task(rng.uniform(-2,2,(nc,d)),rng.normal(0,1,nc),rng.uniform(-2,2,(nt,d)),rng.normal(0,1,nt)) for i in range(n)]

def tasks_loss(params,tasks):
	from epiplace.train import nll_loss
	loss = nll_loss(params,tasks[0])
	for t in tasks[1:]:
		loss = loss + nll_loss(params,t)
	return loss * (1/len(tasks))

def smooth_tiny_model(tasks,seed=0,margin=1e-4,**kwargs):
	"first tiny model, searching upward from 'seed', whose relus all clear 'margin'"
	for s in range(seed,seed+200):
		params = tiny_model(s,**kwargs)
		if ComputeGraph.from_output(tasks_loss(params,tasks)).relu_margin() > margin:
			return params
	raise SelftestFailure('no tiny model with relu margin > {} found'.format(margin))

def op_cases(rng):
	"(name, function of x, initial x) for every differentiable primitive"
	A = rng.normal(size=(3,4))
	w2 = Tensor(rng.normal(size=(2,3,3)))
	w3 = Tensor(rng.normal(size=(2,3,3,3)))
	b = Tensor(rng.normal(size=2))
	away = lambda shape: Tensor(rng.uniform(0.2,1.5,shape) * rng.choice([-1,1],shape))
	return [
		('add',        lambda x: (x + A).sum(),                          Tensor(rng.normal(size=(3,4)))),
		('sub',        lambda x: (A - x*x).sum(),                        Tensor(rng.normal(size=(3,4)))),
		('mul',        lambda x: (x * x[0]).sum(),                       Tensor(rng.normal(size=(3,4)))),
		('div',        lambda x: (A / (x*x + 1)).sum(),                  Tensor(rng.normal(size=(3,4)))),
		('pow',        lambda x: ((x*x + 1) ** 1.5).sum(),               Tensor(rng.normal(size=(3,4)))),
		('exp',        lambda x: exp(x).mean(),                          Tensor(rng.normal(size=(3,4)))),
		('log',        lambda x: log(x*x + 0.5).sum(),                   Tensor(rng.normal(size=(3,4)))),
		('relu',       lambda x: (relu(x) * A).sum(),                    away((3,4))),
		('softplus',   lambda x: (softplus(x) * A).sum(),                Tensor(rng.normal(size=(3,4)))),
		('clamp_min',  lambda x: (clamp_min(x,0.) * A).sum(),            away((3,4))),
		('matmul',     lambda x: (matmul(x,Tensor(A)) ** 2.).sum(),      Tensor(rng.normal(size=(2,3)))),
		('dense',      lambda x: (dense(x,Tensor(A.T),Tensor(A[0])) ** 2.).sum(), Tensor(rng.normal(size=(5,3)))),
		('conv1d',     lambda x: (conv_same(x,w2,b) ** 2.).sum(),        Tensor(rng.normal(size=(3,7)))),
		('conv2d',     lambda x: (conv_same(x,w3,b) ** 2.).sum(),        Tensor(rng.normal(size=(3,5,4)))),
		('softmax',    lambda x: (softmax_rows(x) * A).sum(),            Tensor(rng.normal(size=(3,4)))),
		('logsumexp',  lambda x: (logsumexp_rows(x) * A[:,0]).sum(),     Tensor(rng.normal(size=(3,4)))),
		('reshape',    lambda x: (x.reshape(4,3).transpose() * A).sum(), Tensor(rng.normal(size=(3,4)))),
		('getitem',    lambda x: (x[1:,::2] ** 2.).sum(),                Tensor(rng.normal(size=(3,4)))),
		('stack',      lambda x: (stack([x,x*x],axis=1) ** 2.).mean(),   Tensor(rng.normal(size=(3,4)))),
		('concat',     lambda x: (concat([x,exp(x)],axis=0) * 2.).sum(), Tensor(rng.normal(size=(3,4)))),
	]

class SelfTest(object):

	def __init__(self,fault=None):
		if fault is not None and fault not in fault_names:
			raise SelftestFailure('{!r}: unknown fault (choose from {})'.format(fault,fmt_list(fault_names)))
		self.fault = fault
		self.passed = 0

	def check(self,ok,invariant,detail):
		if not ok:
			raise SelftestFailure('selftest: invariant violated: {} ({})'.format(invariant,detail))
		self.passed += 1
		vmsg('  {}: OK'.format(invariant))

	def decomposition(self):
		for n,m in enumerate(random_mixtures(200,seed=1)):
			u = decompose(m)
			al = 0. if self.fault == 'decomposition' else u.var_aleatoric
			err = abs(u.var_total - (u.var_epistemic + al)) / max(1.,abs(u.var_total))
			if err > decomp_tol or u.var_epistemic < -decomp_tol or al < 0:
				self.check(False,'total variance = epistemic + aleatoric','mixture {}: relative error {:.3g}'.format(n,err))
		single = decompose(MixtureParams([1.],[0.7],[0.3]))
		self.check(single.var_epistemic == 0.,'single component has no epistemic variance',single.var_epistemic)
		self.check(True,'total variance = epistemic + aleatoric','200 random mixtures')

	def _grad(self,name,f,x0,max_coords=None):
		if self.fault == 'gradient':
			fb = f
			f = lambda x: fb(x) + Tensor(0.01*x.data.sum())
		err = grad_check(f,x0,h=1e-5,max_coords=max_coords)
		self.check(err < grad_tol,'gradient check ({})'.format(name),'max relative error {:.3g}'.format(err))

	def gradient(self):
		rng = np.random.default_rng(2)
		for name,f,x0 in op_cases(rng):
			self._grad(name,f,x0)
		tasks = tiny_tasks(2,seed=3)
		params = smooth_tiny_model(tasks,seed=3,nodes=16)
		for k,t in params.named_tensors():
			self._grad('model '+k,lambda x: tasks_loss(params,tasks),t,max_coords=3)

	def greedy(self):
		params = tiny_model(seed=4,nodes=16)
		rng = np.random.default_rng(4)
		cands = np.linspace(-1.8,1.8,6)
		targets = rng.uniform(-2,2,8)
		pr = greedy_place(params,cands,targets,3,mode='var')
		selected = list(pr.selected)
		if self.fault == 'greedy':
			selected[0] = (selected[0] + 1) % len(cands)

		# exhaustive rescoring of every remaining candidate at every step
		yhat = [decompose(predict(params,[],[c])[0]).mean for c in cands]
		cx,cy = np.zeros((0,1)),np.zeros(0)
		for step,got in enumerate(selected,1):
			scores = [np.nan] * len(cands)
			for i in range(len(cands)):
				if i not in selected[:step-1]:
					ctx = (np.vstack([cx,[[cands[i]]]]),np.append(cy,yhat[i]))
					scores[i] = mean_variance(predict(params,ctx,targets),'var')
			best = argmin_lowest(scores,set(selected[:step-1]))
			self.check(best == got,'greedy choice equals exhaustive argmin',
				'step {}: greedy chose {}, exhaustive scan gives {}'.format(step,got,best))
			cx = np.vstack([cx,[[cands[best]]]])
			cy = np.append(cy,yhat[best])

	def run(self):
		for name in fault_names:
			qmsg_r('Checking {}...'.format(name))
			getattr(self,name)()
			qmsg('OK')
		return self.passed

def run_selftest(break_=None):
	"run the suite, raising SelftestFailure on the first violated invariant"
	n = SelfTest(break_).run()
	gmsg('{} checks passed'.format(n))
	return n
