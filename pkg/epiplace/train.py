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
train.py:  Mixture-NLL training with adaptive-moment updates and early stopping
"""

import time
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.tensor import backward,no_grad
from epiplace.model import forward
from epiplace.uncertainty import mixture_nll_batch
from epiplace.tasks import Task

class TrainConfig(object):

	keys = ('epochs','lr','beta1','beta2','adam_eps','batch','patience','resample_context','seed')

	def __init__(self,epochs=500,lr=1e-3,beta1=0.9,beta2=0.999,adam_eps=1e-8,batch=1,patience=25,
			resample_context=True,seed=0):
		self.epochs   = epochs
		self.lr       = lr
		self.beta1    = beta1
		self.beta2    = beta2
		self.adam_eps = adam_eps
		self.batch    = batch
		self.patience = patience
		self.resample_context = resample_context
		self.seed     = seed
		self.validate()

	def validate(self):
		def bad(k,cond):
			raise TrainConfigError('train {} = {!r}: {}'.format(k,getattr(self,k),cond))
		if not self.lr > 0:                   bad('lr','must be > 0')
		if self.patience < 1:                 bad('patience','must be >= 1')
		if self.epochs < 1:                   bad('epochs','must be >= 1')
		if self.batch < 1:                    bad('batch','must be >= 1')
		if not 0 <= self.beta1 < 1:           bad('beta1','must be in [0,1)')
		if not 0 <= self.beta2 < 1:           bad('beta2','must be in [0,1)')
		if not self.adam_eps > 0:             bad('adam_eps','must be > 0')
		return True

	def items(self):
		return [(k,getattr(self,k)) for k in self.keys]

	def __eq__(self,other):
		return isinstance(other,TrainConfig) and self.items() == other.items()

	def __repr__(self):
		return 'TrainConfig({})'.format(', '.join('{}={!r}'.format(k,v) for k,v in self.items()))

class TrainHistory(object):
	"Per-epoch train and validation NLL and elapsed wall time"

	def __init__(self,train_nll=(),val_nll=(),wall_time=None):
		self.train_nll = list(train_nll)
		self.val_nll   = list(val_nll)
		self.wall_time = list(wall_time) if wall_time is not None else [0.] * len(self.train_nll)

	def append(self,train_nll,val_nll,wall_time):
		self.train_nll.append(train_nll)
		self.val_nll.append(val_nll)
		self.wall_time.append(wall_time)

	def __len__(self):
		return len(self.val_nll)

	@property
	def best_epoch(self):
		"0-based index of the first epoch with minimal validation NLL"
		return int(np.argmin(self.val_nll)) if self.val_nll else None

	def __eq__(self,other):
		return (isinstance(other,TrainHistory)
			and self.train_nll == other.train_nll
			and self.val_nll == other.val_nll )

	def format_csv(self):
		out = [','.join(g.history_fields)]
		for i,(a,b,t) in enumerate(zip(self.train_nll,self.val_nll,self.wall_time)):
			out.append('{},{},{},{:.3f}'.format(i+1,fmt_float(a),fmt_float(b),t))
		out.append('# best_epoch={}'.format(self.best_epoch + 1 if len(self) else ''))
		return '\n'.join(out) + '\n'

def write_history(hist,path):
	write_data_to_file(path,hist.format_csv(),'training history')

def seed_streams(seed):
	"independent (parameter init, task shuffling) seed sequences derived from one seed"
	return np.random.SeedSequence(seed).spawn(2)

def nll_loss(params,task):
	"mean per-target mixture NLL of a task, differentiable"
	batch = forward(params,(task.cx,task.cy),task.tx)
	return mixture_nll_batch(batch,task.ty).mean()

def resplit_task(rng,task,nc_range):
	"the task with a fresh context subset of its targets, of size drawn from nc_range"
	nc = min(int(rng.integers(nc_range[0],nc_range[1]+1)),task.nt)
	idx = np.sort(rng.choice(task.nt,nc,replace=False))
	return Task(task.tx[idx],task.ty[idx],task.tx,task.ty,task.tag)

def mean_task_nll(params,tasks,threads=1):
	"mean over tasks of nll_loss, with gradients disabled"
	def one(t):
		with no_grad():
			return nll_loss(params,t).item()
	return float(np.mean(parallel_map(one,tasks,threads)))

class Adam(object):
	"adaptive moment estimation over all tensors of a ModelParams, updated in place"

	def __init__(self,params,lr=1e-3,beta1=0.9,beta2=0.999,eps=1e-8):
		self.params = params
		self.lr,self.beta1,self.beta2,self.eps = lr,beta1,beta2,eps
		self.t = 0
		self.m = { k:np.zeros(t.shape) for k,t in params.named_tensors() }
		self.v = { k:np.zeros(t.shape) for k,t in params.named_tensors() }

	def step(self):
		self.t += 1
		b1,b2 = self.beta1,self.beta2
		c1,c2 = 1 - b1**self.t,1 - b2**self.t
		for k,t in self.params.named_tensors():
			if t.grad is None:
				continue
			gr = t.grad
			self.m[k] = b1*self.m[k] + (1-b1)*gr
			self.v[k] = b2*self.v[k] + (1-b2)*gr*gr
			t.data -= self.lr * (self.m[k]/c1) / (np.sqrt(self.v[k]/c2) + self.eps)

def grad_norm(params):
	return float(np.sqrt(sum(np.sum(t.grad**2) for k,t in params.named_tensors() if t.grad is not None)))

def fit(config,model,train_tasks,val_tasks=None,threads=1):
	"""
	Train 'model' in place on shuffled tasks; stop when validation NLL has not
	improved for config.patience epochs.  Returns a copy of the parameters from
	the best validation epoch, and the history.  With no validation tasks the
	training tasks are used for validation.
	With config.resample_context each training task gets a fresh context split
	every epoch, sized within the range of context counts in the training set.
	"""
	config.validate()
	if not len(train_tasks):
		raise TrainConfigError('training task set is empty')
	if val_tasks is None or not len(val_tasks):
		val_tasks = train_tasks

	params = model
	rng = np.random.default_rng(seed_streams(config.seed)[1])
	optimizer = Adam(params,config.lr,config.beta1,config.beta2,config.adam_eps)
	hist = TrainHistory()
	best,best_val,since_best = None,np.inf,0
	n = len(train_tasks)
	nc_range = (min(t.nc for t in train_tasks),max(t.nc for t in train_tasks))
	t0 = time.time()

	qmsg('Training {} parameters on {} task{} (validation: {} task{})'.format(
		params.n_params(),n,suf(n),len(val_tasks),suf(len(val_tasks))))

	for epoch in range(1,config.epochs+1):
		order = rng.permutation(n)
		total = 0.
		for start in range(0,n,config.batch):
			idx = order[start:start+config.batch]
			params.zero_grad()
			for i in idx:
				task = train_tasks[i]
				if config.resample_context:
					task = resplit_task(rng,task,nc_range)
				loss = nll_loss(params,task)
				v = loss.item()
				if not np.isfinite(v):
					raise NonFiniteLoss('epoch {}, task {}: non-finite training loss ({})'.format(epoch,int(i),v))
				backward(loss * (1/len(idx)))
				total += v
			if g.debug:
				dmsg('  epoch {} batch {}: gradient norm {:.6g}'.format(epoch,start//config.batch+1,grad_norm(params)))
			optimizer.step()

		val = mean_task_nll(params,val_tasks,threads)
		if not np.isfinite(val):
			raise NonFiniteLoss('epoch {}: non-finite validation loss ({})'.format(epoch,val))
		hist.append(total/n,val,time.time()-t0)

		if val < best_val:
			best,best_val,since_best = params.copy(),val,0
		else:
			since_best += 1

		qmsg('Epoch {:>4}  train NLL {:>10.5f}  val NLL {:>10.5f}  {}{}'.format(
			epoch,total/n,val,secs_to_hms(time.time()-t0),('',' *')[since_best == 0]))

		if since_best >= config.patience:
			qmsg('Validation NLL not improved for {} epoch{}, stopping'.format(since_best,suf(since_best)))
			break

	vmsg('Best epoch: {} (validation NLL {})'.format(hist.best_epoch+1,fmt_float(best_val)))
	return best,hist
