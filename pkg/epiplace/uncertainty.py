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
uncertainty.py:  Gaussian-mixture moments, epistemic/aleatoric decomposition, mixture NLL
"""

from collections import namedtuple
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import TensorValueError
from epiplace.tensor import Tensor,log,clamp_min,logsumexp_rows

LOG_2PI = np.log(2*np.pi)

UncertaintyDecomposition = namedtuple('UncertaintyDecomposition',
	['mean','var_total','var_epistemic','var_aleatoric'])

# per-target mixture tensors of shape [M × K] on the differentiable path
MixtureBatch = namedtuple('MixtureBatch',['weights','means','variances'])

class MixtureParams(object):
	"""
	One univariate Gaussian mixture: weights π_k, component means μ_k and
	component variances σ²_k
	"""

	def __init__(self,weights,means,variances,check=True):
		self.weights   = np.array(weights,dtype=np.float64).reshape(-1)
		self.means     = np.array(means,dtype=np.float64).reshape(-1)
		self.variances = np.array(variances,dtype=np.float64).reshape(-1)
		if check:
			self.validate()

	@property
	def K(self):
		return self.weights.size

	def validate(self):
		w,mu,var = self.weights,self.means,self.variances
		if not (w.size == mu.size == var.size) or w.size == 0:
			raise TensorValueError('invalid mixture: component array lengths {}, {}, {}'.format(w.size,mu.size,var.size))
		if not (np.isfinite(w).all() and np.isfinite(mu).all() and np.isfinite(var).all()):
			raise TensorValueError('invalid mixture: non-finite parameter')
		if abs(w.sum() - 1) > 1e-9 or (w < 0).any() or (w > 1).any():
			raise TensorValueError('invalid mixture: weights {} do not form a distribution'.format(list(w)))
		if (var < g.var_floor).any():
			raise TensorValueError('invalid mixture: variance {} below floor {}'.format(var.min(),g.var_floor))
		return True

	def __eq__(self,other):
		return (isinstance(other,MixtureParams)
			and np.array_equal(self.weights,other.weights)
			and np.array_equal(self.means,other.means)
			and np.array_equal(self.variances,other.variances) )

	def __repr__(self):
		return 'MixtureParams(weights={}, means={}, variances={})'.format(
			list(self.weights),list(self.means),list(self.variances))

def mixture_moments(m):
	"(mean, total variance) of a mixture"
	w,mu = m.weights,m.means
	mean = np.sum(w*mu)
	return float(mean),float(np.sum(w*m.variances) + np.sum(w*mu*mu) - mean*mean)

def decompose(m):
	"""
	Split the mixture's total variance into the weighted disagreement of the
	component means (epistemic) and the weighted component variance (aleatoric).
	Nothing is clamped here.
	"""
	mean,var_total = mixture_moments(m)
	d = m.means - mean
	return UncertaintyDecomposition(
		mean          = mean,
		var_total     = var_total,
		var_epistemic = float(np.sum(m.weights*d*d)),
		var_aleatoric = float(np.sum(m.weights*m.variances)) )

def _component_log_density(y,mu,var):
	d = y - mu
	return -0.5 * (log(var * (2*np.pi)) + d*d/var) if isinstance(var,Tensor) else \
		-0.5 * (np.log(var * (2*np.pi)) + d*d/var)

def mixture_nll(m,y):
	"""
	−log Σ_k π_k N(y; μ_k, σ²_k), via a max-shifted logsumexp with log π_k
	floored at log(1e-12).  Given a MixtureBatch, returns the per-target NLL
	tensor (see mixture_nll_batch).
	"""
	if isinstance(m,MixtureBatch):
		return mixture_nll_batch(m,y)
	a = np.log(np.maximum(m.weights,g.log_weight_floor)) + _component_log_density(float(y),m.means,m.variances)
	amax = a.max()
	return float(-(amax + np.log(np.sum(np.exp(a - amax)))))

def mixture_nll_batch(batch,y):
	"differentiable per-target mixture NLL, returns a Tensor of shape [M]"
	y = np.asarray(y,dtype=np.float64).reshape(-1,1)
	logw = log(clamp_min(batch.weights,g.log_weight_floor))
	return -logsumexp_rows(logw + _component_log_density(Tensor(y),batch.means,batch.variances))

def mixtures_from_batch(batch):
	"split a MixtureBatch into a list of MixtureParams, one per target"
	w,mu,var = (t.data if isinstance(t,Tensor) else np.asarray(t) for t in batch)
	return [MixtureParams(w[j],mu[j],var[j]) for j in range(w.shape[0])]
