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
model.py:  Convolutional conditional neural process with a mixture-density output head
"""

from collections import namedtuple,OrderedDict
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.tensor import *
from epiplace.uncertainty import MixtureBatch,mixtures_from_batch

Observation = namedtuple('Observation',['point','value'])
FeatureGrid = namedtuple('FeatureGrid',['grid','channels'])

def Point(*coords):
	return tuple(float(c) for c in coords)

default_grid_nodes = { 1:128, 2:48 }

class GridSpec(object):
	"Uniform grid: per-dimension lower bound, upper bound and node count"

	def __init__(self,lower,upper,nodes):
		self.lower = tuple(float(v) for v in lower)
		self.upper = tuple(float(v) for v in upper)
		self.nodes = tuple(int(n) for n in nodes)
		if not (len(self.lower) == len(self.upper) == len(self.nodes)) or self.d not in (1,2):
			raise ModelConfigError('grid: inconsistent or unsupported dimensionality ({}, {}, {})'.format(
				self.lower,self.upper,self.nodes))
		for lo,hi,n in zip(self.lower,self.upper,self.nodes):
			if not hi > lo:
				raise ModelConfigError('grid: upper bound {} not greater than lower bound {}'.format(hi,lo))
			if n < 8:
				raise ModelConfigError('grid: {} nodes per dimension (minimum is 8)'.format(n))

	@classmethod
	def for_domain(cls,lower,upper,nodes,pad=None):
		"grid over a domain box, padded on each side by a fraction of its width"
		pad = g.grid_pad if pad is None else pad
		lo = [a - pad*(b-a) for a,b in zip(lower,upper)]
		hi = [b + pad*(b-a) for a,b in zip(lower,upper)]
		return cls(lo,hi,nodes)

	@property
	def d(self):
		return len(self.nodes)

	@property
	def shape(self):
		return self.nodes

	@property
	def size(self):
		return int(np.prod(self.nodes))

	@property
	def spacing(self):
		return tuple((hi-lo)/(n-1) for lo,hi,n in zip(self.lower,self.upper,self.nodes))

	def axes(self):
		return [np.linspace(lo,hi,n) for lo,hi,n in zip(self.lower,self.upper,self.nodes)]

	def points(self):
		"[G × d] node coordinates in row-major node order"
		mesh = np.meshgrid(*self.axes(),indexing='ij')
		return np.stack([m.reshape(-1) for m in mesh],axis=1)

	def outside(self,pts,margin=1.):
		"indices of points lying outside the grid box by more than 'margin' spacings"
		lo = np.array(self.lower) - margin*np.array(self.spacing)
		hi = np.array(self.upper) + margin*np.array(self.spacing)
		return np.nonzero(((pts < lo) | (pts > hi)).any(axis=1))[0]

	def __eq__(self,other):
		return isinstance(other,GridSpec) and (self.lower,self.upper,self.nodes) == (other.lower,other.upper,other.nodes)

	def __repr__(self):
		return 'GridSpec(lower={}, upper={}, nodes={})'.format(self.lower,self.upper,self.nodes)

def make_grid(scenario,nodes=0):
	"padded grid for a scenario's domain; nodes=0 selects the per-dimensionality default"
	from epiplace.tasks import scenario_info
	si = scenario_info(scenario)
	n = nodes or default_grid_nodes[si.d]
	return GridSpec.for_domain(si.lower,si.upper,(n,)*si.d)

class ModelConfig(object):

	keys = ('d','components','depth','width','kernel_size','head_width','head_depth','position_map')

	def __init__(self,
			d            = 1,
			components   = 2,
			grid_nodes   = 0,
			depth        = 6,
			width        = 32,
			kernel_size  = 5,
			head_width   = 32,
			head_depth   = 2,
			position_map = False ):
		self.d            = d
		self.components   = components
		self.grid_nodes   = grid_nodes
		self.depth        = depth
		self.width        = width
		self.kernel_size  = kernel_size
		self.head_width   = head_width
		self.head_depth   = head_depth
		self.position_map = position_map
		self.validate()

	def validate(self):
		def bad(k,cond):
			raise ModelConfigError('model {} = {!r}: {}'.format(k,getattr(self,k),cond))
		if self.d not in (1,2):          bad('d','must be 1 or 2')
		if self.components < 1:          bad('components','must be >= 1')
		if self.depth < 1:               bad('depth','must be >= 1')
		if self.width < 1:               bad('width','must be >= 1')
		if self.kernel_size % 2 != 1:    bad('kernel_size','must be odd')
		if self.head_width < 1:          bad('head_width','must be >= 1')
		if self.head_depth < 0:          bad('head_depth','must be >= 0')
		if self.grid_nodes and self.grid_nodes < 8:
			bad('grid_nodes','must be 0 or >= 8')
		return True

	def items(self):
		return [(k,getattr(self,k)) for k in self.keys]

	def __eq__(self,other):
		return isinstance(other,ModelConfig) and self.items() == other.items()

	def __repr__(self):
		return 'ModelConfig({})'.format(', '.join('{}={!r}'.format(k,v) for k,v in self.items()))

class ModelParams(object):
	"""
	All learnable tensors, keyed by name in a fixed order, plus the grid and
	the (non-learned) target normalization statistics
	"""

	def __init__(self,config,grid,tensors,y_mean=0.,y_std=1.):
		if grid.d != config.d:
			raise ModelConfigError('grid dimensionality {} does not match model dimensionality {}'.format(grid.d,config.d))
		self.config = config
		self.grid = grid
		self.tensors = OrderedDict(tensors)
		self.y_mean = float(y_mean)
		self.y_std = float(y_std)

	@property
	def K(self):
		return self.config.components

	@property
	def d(self):
		return self.config.d

	@staticmethod
	def shapes(config,grid):
		c = config
		ks = (c.kernel_size,) * c.d
		ret = [('encoder.log_lengthscale',()),('decoder.log_lengthscale',())]
		for i in range(c.depth):
			ret.append(('backbone.{}.kernel'.format(i),(c.width,(2 if i == 0 else c.width+2)) + ks))
			ret.append(('backbone.{}.bias'.format(i),(c.width,)))
		if c.position_map:
			ret.append(('backbone.position_map',(c.width,) + grid.nodes))
		n_in = c.width
		for j in range(c.head_depth):
			ret.append(('head.{}.weight'.format(j),(c.head_width,n_in)))
			ret.append(('head.{}.bias'.format(j),(c.head_width,)))
			n_in = c.head_width
		ret.append(('head.{}.weight'.format(c.head_depth),(3*c.components,n_in)))
		ret.append(('head.{}.bias'.format(c.head_depth),(3*c.components,)))
		return ret

	@classmethod
	def zeros(cls,config,grid):
		return cls(config,grid,[(k,Tensor(np.zeros(s),requires_grad=True)) for k,s in cls.shapes(config,grid)])

	@classmethod
	def init(cls,config,grid,seed):
		"""
		Uniform ±sqrt(6/(fan_in+fan_out)) weights, zero biases and position map,
		both log-lengthscales at log(2 × grid spacing).  Deterministic in seed.
		"""
		rng = np.random.default_rng(seed)
		log_ls = np.log(2*min(grid.spacing))
		tensors = []
		for name,shape in cls.shapes(config,grid):
			if name.endswith('log_lengthscale'):
				a = np.array(log_ls)
			elif name.endswith('.kernel') or name.endswith('.weight'):
				rf = int(np.prod(shape[2:]))
				fan_out,fan_in = shape[0]*rf,shape[1]*rf
				bound = np.sqrt(6/(fan_in+fan_out))
				a = rng.uniform(-bound,bound,size=shape)
			else:
				a = np.zeros(shape)
			tensors.append((name,Tensor(a,requires_grad=True)))
		return cls(config,grid,tensors)

	def __getitem__(self,name):
		return self.tensors[name]

	def named_tensors(self):
		return list(self.tensors.items())

	def zero_grad(self):
		for t in self.tensors.values():
			t.zero_grad()

	def copy(self):
		return type(self)(
			self.config,
			self.grid,
			[(k,Tensor(t.data.copy(),requires_grad=t.requires_grad)) for k,t in self.tensors.items()],
			self.y_mean,
			self.y_std )

	def n_params(self):
		return sum(t.size for t in self.tensors.values())

	def __eq__(self,other):
		return (isinstance(other,ModelParams)
			and self.config == other.config
			and self.grid == other.grid
			and (self.y_mean,self.y_std) == (other.y_mean,other.y_std)
			and list(self.tensors) == list(other.tensors)
			and all(np.array_equal(t.data,other.tensors[k].data) for k,t in self.tensors.items()) )

def as_points(pts,d):
	"coerce a list of points (tuples or scalars) to an [M × d] array"
	a = np.asarray(pts,dtype=np.float64)
	if a.size == 0:
		return np.zeros((0,d))
	if a.ndim <= 1 and d == 1:
		return a.reshape(-1,1)
	if a.ndim == 2 and a.shape[1] == d:
		return a
	raise TensorShapeError('points of shape {} do not match model dimensionality {}'.format(a.shape,d))

def context_arrays(context,d):
	"(points [N × d], values [N]) from a list of Observation or a pair of arrays"
	if isinstance(context,tuple) and len(context) == 2 and isinstance(context[0],np.ndarray):
		cx,cy = context
	else:
		cx = [o.point for o in context]
		cy = [o.value for o in context]
	cx = as_points(cx,d)
	cy = np.asarray(cy,dtype=np.float64).reshape(-1)
	if cx.shape[0] != cy.shape[0]:
		raise TensorShapeError('context has {} points but {} values'.format(cx.shape[0],cy.shape[0]))
	return cx,cy

def _sq_dists(a,b):
	"pairwise squared distances between rows of a [N × d] and b [M × d]"
	return sum((a[:,None,i] - b[None,:,i])**2 for i in range(a.shape[1]))

def _rbf(d2,lengthscale):
	return exp(Tensor(-0.5*d2) / (lengthscale*lengthscale))

def set_conv_encode(context,grid,lengthscale):
	"""
	Project a context set onto the grid: channel 0 is the kernel density,
	channel 1 the density-normalized data.
	"""
	cx,cy = context_arrays(context,grid.d)
	if cx.shape[0] == 0:
		return FeatureGrid(grid,Tensor(np.zeros((2,)+grid.nodes)))
	w = _rbf(_sq_dists(grid.points(),cx),as_tensor(lengthscale)) # [G × N]
	density = w.sum(axis=1)
	data = matmul(w,Tensor(cy)) / (density + g.setconv_eps)
	return FeatureGrid(grid,stack([density,data]).reshape((2,)+grid.nodes))

def backbone_apply(fg,params):
	"""
	Stride-1 residual conv stack: relu(conv) per layer, the position map added
	after layer 0, and a skip connection into every second layer after that.
	Layers after the first see the density and data channels again, stacked
	under the hidden channels.
	"""
	if fg.channels.shape[0] != 2:
		raise TensorShapeError('backbone: input has {} channels (expected 2)'.format(fg.channels.shape[0]))
	x = fg.channels
	h,skip = x,None
	for i in range(params.config.depth):
		if i:
			h = concat([h,x])
		h = relu(conv_same(h,params['backbone.{}.kernel'.format(i)],params['backbone.{}.bias'.format(i)]))
		if i == 0:
			if params.config.position_map:
				h = h + params['backbone.position_map']
			skip = h
		elif i % 2 == 0:
			h = h + skip
			skip = h
	return FeatureGrid(fg.grid,h)

def decode_at(fg,targets,lengthscale):
	"kernel-weighted interpolation of the feature grid at off-grid targets, [M × C]"
	grid = fg.grid
	tx = as_points(targets,grid.d)
	bad = grid.outside(tx)
	if len(bad):
		raise GridRangeError('target {} at {} lies outside the grid box {}–{}'.format(
			int(bad[0]),tuple(tx[bad[0]]),grid.lower,grid.upper))
	C = fg.channels.shape[0]
	w = _rbf(_sq_dists(tx,grid.points()),as_tensor(lengthscale)) # [M × G]
	feats = matmul(w,fg.channels.reshape(C,grid.size).transpose())
	return feats / (w.sum(axis=1) + g.setconv_eps).reshape(tx.shape[0],1)

def mdn_head_batch(features,params):
	"MixtureBatch tensors for [M × width] features, in original (unstandardized) units"
	c = params.config
	K = c.components
	if features.ndim != 2 or features.shape[1] != c.width:
		raise TensorShapeError('head: feature shape {} does not match input width {}'.format(features.shape,c.width))
	h = features
	for j in range(c.head_depth):
		h = relu(dense(h,params['head.{}.weight'.format(j)],params['head.{}.bias'.format(j)]))
	raw = dense(h,params['head.{}.weight'.format(c.head_depth)],params['head.{}.bias'.format(c.head_depth)])
	return MixtureBatch(
		weights   = softmax_rows(raw[:,0:K]),
		means     = raw[:,K:2*K] * params.y_std + params.y_mean,
		variances = softplus(raw[:,2*K:3*K]) * (params.y_std**2) + g.var_floor )

def mdn_head(features,params):
	return mixtures_from_batch(mdn_head_batch(features,params))

def canonical_context(cx,cy):
	"sort context rows so that encoding does not depend on input order"
	if cx.shape[0] < 2:
		return cx,cy
	idx = np.lexsort((cy,) + tuple(cx[:,i] for i in reversed(range(cx.shape[1]))))
	return cx[idx],cy[idx]

def forward(params,context,targets):
	"differentiable predictive MixtureBatch for 'targets' given 'context'"
	cx,cy = canonical_context(*context_arrays(context,params.d))
	cy = (cy - params.y_mean) / params.y_std
	fg = set_conv_encode((cx,cy),params.grid,exp(params['encoder.log_lengthscale']))
	fg = backbone_apply(fg,params)
	feats = decode_at(fg,targets,exp(params['decoder.log_lengthscale']))
	return mdn_head_batch(feats,params)

def predict(params,context,targets):
	"list of MixtureParams, one per target"
	with no_grad():
		return mixtures_from_batch(forward(params,context,targets))
