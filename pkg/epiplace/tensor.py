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
tensor.py:  Dense float64 tensors with define-by-run reverse-mode autodiff
"""

import threading
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from epiplace.exception import TensorShapeError,TensorValueError,KernelSizeError

_state = threading.local()

def grad_enabled():
	return getattr(_state,'enabled',True)

class no_grad(object):
	"Forward ops executed inside this context record nothing (per thread)"

	def __enter__(self):
		self.prev = grad_enabled()
		_state.enabled = False
		return self

	def __exit__(self,*args):
		_state.enabled = self.prev

class Tensor(object):

	__array_ufunc__ = None # ndarray <op> Tensor defers to the Tensor's reflected method

	def __init__(self,data,requires_grad=False,_ctx=None):
		if isinstance(data,np.ndarray) and data.dtype == np.float64:
			self.data = data
		else:
			self.data = np.array(data,dtype=np.float64)
		self.requires_grad = requires_grad
		self.grad = None
		self._ctx = _ctx

	def __repr__(self):
		return 'Tensor(shape={}, requires_grad={})'.format(self.shape,self.requires_grad)

	@property
	def shape(self): return self.data.shape

	@property
	def ndim(self): return self.data.ndim

	@property
	def size(self): return self.data.size

	@property
	def values(self):
		"row-major flat view of the data"
		return self.data.reshape(-1)

	def numpy(self): return self.data

	def item(self): return float(self.data.reshape(-1)[0])

	def detach(self): return Tensor(self.data)

	def zero_grad(self):
		self.grad = None

	def __add__(self,other):      return Add.apply(self,other)
	def __radd__(self,other):     return Add.apply(other,self)
	def __sub__(self,other):      return Sub.apply(self,other)
	def __rsub__(self,other):     return Sub.apply(other,self)
	def __mul__(self,other):      return Mul.apply(self,other)
	def __rmul__(self,other):     return Mul.apply(other,self)
	def __truediv__(self,other):  return Div.apply(self,other)
	def __rtruediv__(self,other): return Div.apply(other,self)
	def __neg__(self):            return Neg.apply(self)
	def __pow__(self,p):          return Pow.apply(self,p=float(p))
	def __matmul__(self,other):   return MatMul.apply(self,other)
	def __getitem__(self,idx):    return GetItem.apply(self,idx=idx)

	def sum(self,axis=None,keepdims=False):  return Sum.apply(self,axis=axis,keepdims=keepdims)
	def mean(self,axis=None,keepdims=False): return Mean.apply(self,axis=axis,keepdims=keepdims)
	def reshape(self,*shape):                return Reshape.apply(self,shape=shape)
	def transpose(self,*axes):               return Transpose.apply(self,axes=axes or None)

	def exp(self):      return Exp.apply(self)
	def log(self):      return Log.apply(self)
	def relu(self):     return Relu.apply(self)
	def softplus(self): return Softplus.apply(self)

def as_tensor(x):
	return x if isinstance(x,Tensor) else Tensor(x)

class Function(object):
	"""
	An operation node.  forward() receives the parents' arrays; backward()
	receives the output gradient and returns one gradient (or None) per parent.
	"""
	parents = ()

	@classmethod
	def apply(cls,*args,**kwargs):
		ctx = cls()
		parents = [as_tensor(a) for a in args]
		out = ctx.forward(*[p.data for p in parents],**kwargs)
		if grad_enabled() and any(p.requires_grad for p in parents):
			ctx.parents = parents
			return Tensor(out,requires_grad=True,_ctx=ctx)
		return Tensor(out)

	def forward(self,*args,**kwargs):
		raise NotImplementedError

	def backward(self,g):
		raise NotImplementedError

def unbroadcast(g,shape):
	"sum a broadcast gradient back down to 'shape'"
	if g.shape == shape:
		return g
	while g.ndim > len(shape):
		g = g.sum(axis=0)
	for i,n in enumerate(shape):
		if n == 1 and g.shape[i] != 1:
			g = g.sum(axis=i,keepdims=True)
	return g

# elementwise

class Add(Function):
	def forward(self,a,b):
		self.sa,self.sb = a.shape,b.shape
		return a + b
	def backward(self,g):
		return unbroadcast(g,self.sa),unbroadcast(g,self.sb)

class Sub(Function):
	def forward(self,a,b):
		self.sa,self.sb = a.shape,b.shape
		return a - b
	def backward(self,g):
		return unbroadcast(g,self.sa),unbroadcast(-g,self.sb)

class Mul(Function):
	def forward(self,a,b):
		self.a,self.b = a,b
		return a * b
	def backward(self,g):
		return unbroadcast(g*self.b,self.a.shape),unbroadcast(g*self.a,self.b.shape)

class Div(Function):
	def forward(self,a,b):
		self.a,self.b = a,b
		return a / b
	def backward(self,g):
		return (
			unbroadcast(g/self.b,self.a.shape),
			unbroadcast(-g*self.a/(self.b*self.b),self.b.shape) )

class Neg(Function):
	def forward(self,a):
		return -a
	def backward(self,g):
		return (-g,)

class Pow(Function):
	def forward(self,a,p):
		self.a,self.p = a,p
		return a ** p
	def backward(self,g):
		return (g * self.p * self.a ** (self.p-1),)

class Exp(Function):
	def forward(self,a):
		self.out = np.exp(a)
		return self.out
	def backward(self,g):
		return (g*self.out,)

class Log(Function):
	def forward(self,a):
		if not np.all(a > 0):
			raise TensorValueError('log of non-positive value ({})'.format(float(a[a <= 0].reshape(-1)[0])))
		self.a = a
		return np.log(a)
	def backward(self,g):
		return (g/self.a,)

class Relu(Function):
	def forward(self,a):
		self.a = a
		return np.maximum(a,0.)
	def backward(self,g):
		return (g*(self.a > 0),)

class Softplus(Function):
	def forward(self,a):
		self.a = a
		return np.maximum(a,0.) + np.log1p(np.exp(-np.abs(a)))
	def backward(self,g):
		return (g*0.5*(1. + np.tanh(0.5*self.a)),)

class ClampMin(Function):
	def forward(self,a,lo):
		self.mask = a > lo
		return np.maximum(a,lo)
	def backward(self,g):
		return (g*self.mask,)

# reductions and shape ops

class Sum(Function):
	def forward(self,a,axis,keepdims):
		self.shape,self.axis,self.keepdims = a.shape,axis,keepdims
		return np.sum(a,axis=axis,keepdims=keepdims)
	def backward(self,g):
		if self.axis is not None and not self.keepdims:
			g = np.expand_dims(g,self.axis)
		return (np.broadcast_to(g,self.shape).copy(),)

class Mean(Function):
	def forward(self,a,axis,keepdims):
		self.shape,self.axis,self.keepdims = a.shape,axis,keepdims
		out = np.mean(a,axis=axis,keepdims=keepdims)
		self.n = a.size // max(np.size(out),1) if a.size else 1
		return out
	def backward(self,g):
		if self.axis is not None and not self.keepdims:
			g = np.expand_dims(g,self.axis)
		return (np.broadcast_to(g/self.n,self.shape).copy(),)

class Reshape(Function):
	def forward(self,a,shape):
		self.shape = a.shape
		if len(shape) == 1 and isinstance(shape[0],(tuple,list)):
			shape = tuple(shape[0])
		return a.reshape(shape)
	def backward(self,g):
		return (g.reshape(self.shape),)

class Transpose(Function):
	def forward(self,a,axes):
		if axes is not None and len(axes) == 1 and isinstance(axes[0],(tuple,list)):
			axes = tuple(axes[0])
		self.axes = axes
		return np.transpose(a,axes)
	def backward(self,g):
		return (np.transpose(g,None if self.axes is None else np.argsort(self.axes)),)

class GetItem(Function):
	def forward(self,a,idx):
		self.shape,self.idx = a.shape,idx
		return np.array(a[idx])
	def backward(self,g):
		ga = np.zeros(self.shape)
		np.add.at(ga,self.idx,g)
		return (ga,)

class Stack(Function):
	def forward(self,*arrays,axis=0):
		self.axis = axis
		return np.stack(arrays,axis=axis)
	def backward(self,g):
		return tuple(np.take(g,i,axis=self.axis) for i in range(g.shape[self.axis]))

class Concat(Function):
	def forward(self,*arrays,axis=0):
		self.axis = axis
		self.splits = np.cumsum([a.shape[axis] for a in arrays])[:-1]
		return np.concatenate(arrays,axis=axis)
	def backward(self,g):
		return tuple(np.split(g,self.splits,axis=self.axis))

class MatMul(Function):
	def forward(self,a,b):
		if a.ndim != 2 or b.ndim not in (1,2) or a.shape[1] != b.shape[0]:
			raise TensorShapeError('matmul: shapes {} and {} do not conform'.format(a.shape,b.shape))
		self.a,self.b = a,b
		return a @ b
	def backward(self,g):
		if self.b.ndim == 1:
			return np.outer(g,self.b),self.a.T @ g
		return g @ self.b.T,self.a.T @ g

# network layers

class Dense(Function):
	"out = x·wᵀ + b for x of shape [n_in] or [N × n_in]"
	def forward(self,x,w,b):
		if (x.ndim not in (1,2) or w.ndim != 2 or b.shape != (w.shape[0],)
				or x.shape[-1] != w.shape[1]):
			raise TensorShapeError('dense: input shape {} does not conform to weight shape {} (bias {})'.format(
				x.shape,w.shape,b.shape))
		self.x,self.w = x,w
		return x @ w.T + b
	def backward(self,g):
		x = self.x
		if x.ndim == 1:
			return g @ self.w,np.outer(g,x),g
		return g @ self.w,g.T @ x,g.sum(axis=0)

class ConvSame(Function):
	"""
	Stride-1 cross-correlation with zero padding over 1 or 2 spatial axes.
	x: [C_in × L] or [C_in × H × W]; w: [C_out × C_in × k…]; b: [C_out]
	"""
	def forward(self,x,w,b):
		nsp = x.ndim - 1
		if nsp not in (1,2) or w.ndim != nsp + 2:
			raise TensorShapeError('conv_same: input shape {} and kernel shape {} do not conform'.format(x.shape,w.shape))
		ks = w.shape[2:]
		if any(k % 2 == 0 for k in ks):
			raise KernelSizeError('conv_same: kernel size {} is not odd'.format('×'.join(map(str,ks))))
		if x.shape[0] != w.shape[1]:
			raise TensorShapeError('conv_same: input has {} channels, kernel expects {}'.format(x.shape[0],w.shape[1]))
		if b.shape != (w.shape[0],):
			raise TensorShapeError('conv_same: bias shape {} does not match {} output channels'.format(b.shape,w.shape[0]))

		pads = [(0,0)] + [(k//2,k//2) for k in ks]
		xp = np.pad(x,pads)
		win = sliding_window_view(xp,ks,axis=tuple(range(1,nsp+1))) # [C_in, spatial…, k…]
		kax = tuple(range(nsp+1,2*nsp+1))
		out = np.tensordot(w,win,axes=((1,)+tuple(range(2,nsp+2)),(0,)+kax))
		self.xshape,self.xp_shape,self.w,self.win,self.ks,self.nsp = x.shape,xp.shape,w,win,ks,nsp
		return out + b.reshape((-1,)+(1,)*nsp)

	def backward(self,g):
		nsp,ks,w = self.nsp,self.ks,self.w
		sp = tuple(range(1,nsp+1))
		gb = g.sum(axis=sp)
		gw = np.tensordot(g,self.win,axes=(sp,sp))
		gxp = np.zeros(self.xp_shape)
		if nsp == 1:
			L = self.xshape[1]
			for t in range(ks[0]):
				gxp[:,t:t+L] += w[:,:,t].T @ g
			p = ks[0]//2
			gx = gxp[:,p:p+L]
		else:
			H,W = self.xshape[1:]
			for s in range(ks[0]):
				for t in range(ks[1]):
					gxp[:,s:s+H,t:t+W] += np.tensordot(w[:,:,s,t],g,axes=([0],[0]))
			ph,pw = ks[0]//2,ks[1]//2
			gx = gxp[:,ph:ph+H,pw:pw+W]
		return gx,gw,gb

class SoftmaxRows(Function):
	def forward(self,a):
		if a.ndim == 0 or a.shape[-1] < 1:
			raise TensorShapeError('softmax_rows: trailing axis must be nonempty (shape {})'.format(a.shape))
		e = np.exp(a - a.max(axis=-1,keepdims=True))
		self.out = e / e.sum(axis=-1,keepdims=True)
		return self.out
	def backward(self,g):
		s = self.out
		return (s * (g - (g*s).sum(axis=-1,keepdims=True)),)

class LogSumExpRows(Function):
	def forward(self,a):
		if a.ndim == 0 or a.shape[-1] < 1:
			raise TensorShapeError('logsumexp_rows: trailing axis must be nonempty (shape {})'.format(a.shape))
		m = a.max(axis=-1,keepdims=True)
		e = np.exp(a - m)
		se = e.sum(axis=-1,keepdims=True)
		self.soft = e / se
		return (m + np.log(se))[...,0]
	def backward(self,g):
		return (g[...,None] * self.soft,)

# functional API

def dense(x,w,b):
	return Dense.apply(x,w,b)

def conv_same(x,kernels,bias):
	return ConvSame.apply(x,kernels,bias)

_activations = {
	'relu':     Relu,
	'softplus': Softplus,
	'exp':      Exp,
	'log':      Log,
}

def activation(kind,x):
	try:
		return _activations[kind].apply(x)
	except KeyError:
		raise TensorValueError('{!r}: unknown activation (choose from {})'.format(kind,', '.join(_activations)))

def relu(x):     return Relu.apply(x)
def softplus(x): return Softplus.apply(x)
def exp(x):      return Exp.apply(x)
def log(x):      return Log.apply(x)

def softmax_rows(x):   return SoftmaxRows.apply(x)
def logsumexp_rows(x): return LogSumExpRows.apply(x)

def clamp_min(x,lo):   return ClampMin.apply(x,lo=lo)

def stack(tensors,axis=0):  return Stack.apply(*tensors,axis=axis)
def concat(tensors,axis=0): return Concat.apply(*tensors,axis=axis)

def matmul(a,b): return MatMul.apply(a,b)

class ComputeGraph(object):
	"""
	Nodes reachable from an output through requires_grad parents, in
	topological order (every node after all of its inputs).
	"""
	def __init__(self,nodes):
		self.nodes = nodes

	@property
	def ops(self):
		return [n._ctx for n in self.nodes if n._ctx is not None]

	@classmethod
	def from_output(cls,out):
		order,seen = [],set()
		stack = [(out,False)]
		while stack:
			node,expanded = stack.pop()
			if expanded:
				order.append(node)
				continue
			if id(node) in seen:
				continue
			seen.add(id(node))
			stack.append((node,True))
			if node._ctx is not None:
				for p in reversed(node._ctx.parents):
					if p.requires_grad and id(p) not in seen:
						stack.append((p,False))
		return cls(order)

	def relu_margin(self):
		"smallest |input| seen by any relu in the graph (inf if none)"
		m = [np.abs(op.a).min() for op in self.ops if isinstance(op,Relu) and op.a.size]
		return min(m) if m else np.inf

def backward(loss,graph=None):
	"""
	Populate .grad on every leaf tensor with requires_grad set that the loss
	depends on.  Leaf gradients accumulate across calls.
	"""
	if loss.size != 1:
		raise TensorShapeError('backward: loss must be a scalar (shape {})'.format(loss.shape))
	if graph is None:
		graph = ComputeGraph.from_output(loss)

	grads = { id(loss): np.ones_like(loss.data) }
	for node in reversed(graph.nodes):
		gn = grads.pop(id(node),None)
		if gn is None:
			continue
		if node._ctx is None:
			if node.requires_grad:
				node.grad = gn.copy() if node.grad is None else node.grad + gn
			continue
		for p,gp in zip(node._ctx.parents,node._ctx.backward(gn)):
			if gp is None or not p.requires_grad:
				continue
			grads[id(p)] = gp if id(p) not in grads else grads[id(p)] + gp

	return graph

def _scalar(v,desc):
	v = float(v.data.reshape(-1)[0]) if isinstance(v,Tensor) else float(v)
	if not np.isfinite(v):
		raise TensorValueError('grad_check: non-finite function value at {}'.format(desc))
	return v

def grad_check(f,x0,h=1e-5,max_coords=None,seed=0):
	"""
	Compare the analytic gradient of scalar-valued f at x0 with central
	differences.  Returns max |analytic - numeric| / max(1, |analytic|).
	"""
	if not h > 0:
		raise TensorValueError('grad_check: step must be positive (got {})'.format(h))
	if not x0.data.flags.c_contiguous:
		x0.data = np.ascontiguousarray(x0.data)

	x0.requires_grad = True
	x0.zero_grad()
	out = f(x0)
	_scalar(out,'x0')
	if isinstance(out,Tensor) and out._ctx is not None:
		backward(out)
	analytic = (x0.grad if x0.grad is not None else np.zeros(x0.shape)).reshape(-1)

	flat = x0.data.reshape(-1)
	n = flat.size
	if max_coords is None or max_coords >= n:
		coords = range(n)
	else:
		coords = np.sort(np.random.default_rng(seed).choice(n,max_coords,replace=False))

	err = 0.
	with no_grad():
		for i in coords:
			orig = flat[i]
			flat[i] = orig + h
			fp = _scalar(f(x0),'coordinate {} + h'.format(i))
			flat[i] = orig - h
			fm = _scalar(f(x0),'coordinate {} - h'.format(i))
			flat[i] = orig
			a = analytic[i]
			err = max(err,abs(a - (fp-fm)/(2*h)) / max(1.,abs(a)))

	x0.zero_grad()
	return err
