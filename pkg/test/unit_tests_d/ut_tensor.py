#!/usr/bin/env python3
"""
test/unit_tests_d/ut_tensor: autodiff tensor core unit test for the EpiPlace suite
"""

import numpy as np
from epiplace.common import *
from epiplace.tensor import *

def naive_conv1d(x,w,b):
	C_out,C_in,k = w.shape
	L = x.shape[1]
	p = k//2
	xp = np.pad(x,((0,0),(p,p)))
	out = np.zeros((C_out,L))
	for o in range(C_out):
		for i in range(L):
			out[o,i] = b[o] + sum(w[o,c,t]*xp[c,i+t] for c in range(C_in) for t in range(k))
	return out

def naive_conv2d(x,w,b):
	C_out,C_in,kh,kw = w.shape
	H,W = x.shape[1:]
	xp = np.pad(x,((0,0),(kh//2,kh//2),(kw//2,kw//2)))
	out = np.zeros((C_out,H,W))
	for o in range(C_out):
		for i in range(H):
			for j in range(W):
				out[o,i,j] = b[o] + np.sum(w[o]*xp[:,i:i+kh,j:j+kw])
	return out

class unit_test(object):

	def run_test(self,name,ut):

		rng = np.random.default_rng(11)

		msg_r('Testing elementwise ops and broadcasting...')
		a = Tensor(rng.normal(size=(3,4)),requires_grad=True)
		b = Tensor(rng.normal(size=4),requires_grad=True)
		loss = ((a * b) + a / (b*b + 1.)).sum()
		backward(loss)
		assert a.grad.shape == (3,4) and b.grad.shape == (4,)
		assert np.allclose(a.grad, b.data + 1/(b.data**2 + 1))
		vmsg('')
		msg('OK')

		msg_r('Testing scalar op: (2 * x + 3).sum()...')
		x = Tensor([1.,2.,3.],requires_grad=True)
		out = (x * 2. + 3.).sum()
		assert out.item() == 21.
		backward(out)
		assert np.array_equal(x.grad,np.array([2.,2.,2.]))
		msg('OK')

		msg_r('Testing gradient accumulation across backward calls...')
		x = Tensor([1.,-2.],requires_grad=True)
		backward((x*x).sum())
		backward((x*x).sum())
		assert np.array_equal(x.grad,np.array([4.,-8.]))
		x.zero_grad()
		assert x.grad is None
		msg('OK')

		msg_r('Testing no_grad()...')
		x = Tensor([1.,2.],requires_grad=True)
		with no_grad():
			y = (x * x).sum()
		assert y._ctx is None and not y.requires_grad
		assert grad_enabled()
		msg('OK')

		msg_r('Testing ComputeGraph ordering...')
		x = Tensor(rng.normal(size=3),requires_grad=True)
		h = relu(x * 2.)
		out = (h + exp(x)).sum()
		graph = ComputeGraph.from_output(out)
		pos = { id(n):i for i,n in enumerate(graph.nodes) }
		for n in graph.nodes:
			if n._ctx is not None:
				for p in n._ctx.parents:
					if p.requires_grad:
						assert pos[id(p)] < pos[id(n)]
		assert graph.nodes[-1] is out
		assert len([op for op in graph.ops if isinstance(op,Relu)]) == 1
		msg('OK')

		msg_r('Testing conv_same against a naive loop (1D and 2D)...')
		for k in (1,3,5):
			x = rng.normal(size=(2,9))
			w = rng.normal(size=(3,2,k))
			b = rng.normal(size=3)
			assert np.allclose(conv_same(Tensor(x),Tensor(w),Tensor(b)).data,naive_conv1d(x,w,b),atol=1e-12)
		x = rng.normal(size=(2,6,5))
		w = rng.normal(size=(3,2,3,3))
		b = rng.normal(size=3)
		assert np.allclose(conv_same(Tensor(x),Tensor(w),Tensor(b)).data,naive_conv2d(x,w,b),atol=1e-12)

		# identity kernel passes input through
		x = rng.normal(size=(1,7))
		assert np.array_equal(conv_same(Tensor(x),Tensor([[[0.,1.,0.]]]),Tensor([0.])).data,x)

		# 3-tap kernel [1,1,1] on a unit impulse, zero padding at the edges
		imp = np.zeros((1,5)); imp[0,0] = 1.
		assert np.array_equal(conv_same(Tensor(imp),Tensor([[[1.,1.,1.]]]),Tensor([0.])).data,np.array([[1.,1.,0.,0.,0.]]))
		msg('OK')

		msg_r('Testing dense()...')
		x = rng.normal(size=(4,3))
		w = rng.normal(size=(2,3))
		bb = rng.normal(size=2)
		assert np.allclose(dense(Tensor(x),Tensor(w),Tensor(bb)).data,x @ w.T + bb)
		assert dense(Tensor(x[0]),Tensor(w),Tensor(bb)).shape == (2,)
		msg('OK')

		msg_r('Testing stable softmax and logsumexp...')
		big = Tensor([[1000.,1000.],[-1000.,0.]])
		s = softmax_rows(big).data
		assert np.allclose(s,[[0.5,0.5],[0.,1.]])
		lse = logsumexp_rows(big).data
		assert np.allclose(lse,[1000.+np.log(2.),0.])
		assert np.isfinite(softplus(Tensor([800.,-800.])).data).all()
		msg('OK')

		msg_r('Testing activation()...')
		v = Tensor([-1.,0.5])
		assert np.array_equal(activation('relu',v).data,[0.,0.5])
		assert np.allclose(activation('softplus',v).data,np.log1p(np.exp(v.data)))
		msg('OK')

		msg_r('Testing grad_check on every primitive (20 random inputs each)...')
		from epiplace.selftest import op_cases
		rounds = 3 if opt.fast else 20
		worst = 0.
		for r in range(rounds):
			for desc,f,x0 in op_cases(np.random.default_rng(100+r)):
				err = grad_check(f,x0,h=1e-5)
				assert err < 1e-4, '{}: grad_check error {}'.format(desc,err)
				worst = max(worst,err)
		vmsg('\n  worst relative error: {:.3g}'.format(worst))
		msg('OK')

		msg_r('Testing grad_check subsampling and detection of a wrong gradient...')
		x0 = Tensor(rng.normal(size=(10,10)))
		assert grad_check(lambda x: (x*x).sum(),x0,max_coords=7,seed=3) < 1e-6
		# detached term: the numeric gradient sees it, the analytic one does not
		assert grad_check(lambda x: (x*x).sum() + Tensor((x.data**2).sum()),x0) > 1e-2
		msg('OK')

		msg_r('Testing error handling...')
		vmsg('')
		bad_data = (
			('matmul shapes', 'TensorShapeError', 'do not conform',  lambda: matmul(Tensor(np.ones((2,3))),Tensor(np.ones((2,3))))),
			('dense shapes',  'TensorShapeError', 'does not conform',lambda: dense(Tensor(np.ones(4)),Tensor(np.ones((2,3))),Tensor(np.ones(2)))),
			('even kernel',   'KernelSizeError',  'not odd',         lambda: conv_same(Tensor(np.ones((1,5))),Tensor(np.ones((1,1,2))),Tensor([0.]))),
			('conv channels', 'TensorShapeError', 'channels',        lambda: conv_same(Tensor(np.ones((2,5))),Tensor(np.ones((1,1,3))),Tensor([0.]))),
			('log domain',    'TensorValueError', 'non-positive',    lambda: log(Tensor([1.,0.]))),
			('softmax empty', 'TensorShapeError', 'nonempty',        lambda: softmax_rows(Tensor(np.ones((2,0))))),
			('activation',    'TensorValueError', 'unknown activation',lambda: activation('tanh',Tensor([1.]))),
			('nonscalar loss','TensorShapeError', 'must be a scalar',lambda: backward(Tensor([1.,2.],requires_grad=True))),
			('grad_check h',  'TensorValueError', 'step must be positive',lambda: grad_check(lambda x: x.sum(),Tensor([1.]),h=0)),
			('nonfinite f',   'TensorValueError', 'non-finite',      lambda: grad_check(lambda x: (x * np.inf).sum(),Tensor([-1.]))),
		)
		ut.process_bad_data(bad_data)
		msg('OK')

		return True
