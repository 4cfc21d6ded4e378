#!/usr/bin/env python3
"""
test/unit_tests_d/ut_train: training loop, optimizer and loss gradient unit test for the EpiPlace suite
"""

import os
import numpy as np
from epiplace.common import *
from epiplace.tensor import Tensor,grad_check,backward
from epiplace.model import ModelConfig,ModelParams,make_grid
from epiplace.tasks import Task,gen_noisy_1d
from epiplace.train import *

def small_model(seed):
	mc = ModelConfig(components=2,depth=2,width=4,kernel_size=3,head_width=4,head_depth=1)
	return ModelParams.init(mc,make_grid('noisy',16),seed_streams(seed)[0])

class unit_test(object):

	def run_test(self,name,ut):
		from epiplace.selftest import tiny_tasks,smooth_tiny_model,tasks_loss

		msg_r('Testing seed streams...')
		a,b = seed_streams(5)
		assert np.random.default_rng(a).random() == np.random.default_rng(seed_streams(5)[0]).random()
		assert np.random.default_rng(a).random() != np.random.default_rng(b).random()
		msg('OK')

		msg_r('Testing Adam step...')
		p = small_model(0)
		t = p['encoder.log_lengthscale']
		x0 = t.item()
		t.grad = np.array(2.)
		Adam(p,lr=0.01).step()
		assert abs(t.item() - (x0 - 0.01)) < 1e-9
		# tensors without a gradient are left alone
		assert np.array_equal(p['decoder.log_lengthscale'].data,small_model(0)['decoder.log_lengthscale'].data)
		msg('OK')

		one_task = gen_noisy_1d(4,n_tasks=1,nc_range=(2,2),n_t=20)[0]

		msg_r('Testing that one small Adam step lowers the loss...')
		for s in range(10):
			p = small_model(s)
			p.zero_grad()
			loss = nll_loss(p,one_task)
			backward(loss)
			Adam(p,lr=1e-5).step()
			assert nll_loss(p,one_task).item() < loss.item(), s
		msg('OK')

		msg_r('Testing gradient zeroing between steps...')
		p = small_model(1)
		def grad_step(zero=True):
			if zero:
				p.zero_grad()
			backward(nll_loss(p,one_task))
			return grad_norm(p)
		n1 = grad_step()
		assert n1 > 0 and grad_step() == n1
		assert abs(grad_step(zero=False) - 2*n1) < 1e-9 * n1
		msg('OK')

		msg_r('Testing context resampling...')
		rng = np.random.default_rng(0)
		sizes = set()
		for i in range(40):
			t = resplit_task(rng,one_task,(1,4))
			sizes.add(t.nc)
			assert np.array_equal(t.tx,one_task.tx) and np.array_equal(t.ty,one_task.ty)
			for x,y in zip(t.cx,t.cy):
				j = np.nonzero(one_task.tx[:,0] == x[0])[0]
				assert len(j) and one_task.ty[j[0]] == y
		assert sizes == {1,2,3,4}
		assert resplit_task(np.random.default_rng(3),one_task,(2,2)) == resplit_task(np.random.default_rng(3),one_task,(2,2))
		assert resplit_task(rng,one_task,(50,50)).nc == one_task.nt
		msg('OK')

		msg_r('Testing loss gradient for every parameter tensor of a tiny model...')
		tasks = tiny_tasks(5,seed=8)
		params = smooth_tiny_model(tasks,seed=0,nodes=32)
		assert params.K == 2 and params.config.depth == 2 and params.config.width == 8
		worst = 0.
		for k,t in params.named_tensors():
			err = grad_check(lambda x: tasks_loss(params,tasks),t,h=1e-5,max_coords=3 if opt.fast else 12)
			assert err < 1e-4, '{}: grad_check error {}'.format(k,err)
			worst = max(worst,err)
		vmsg('\n  worst relative error: {:.3g}'.format(worst))
		msg('OK')

		msg_r('Testing fit() determinism and best-epoch bookkeeping...')
		train = gen_noisy_1d(1,n_tasks=4,nc_range=(0,3),n_t=12)
		val = gen_noisy_1d(2,n_tasks=2,nc_range=(0,3),n_t=12)
		cfg = TrainConfig(epochs=6,lr=1e-2,patience=2,seed=3)
		before = [Task(t.cx.copy(),t.cy.copy(),t.tx.copy(),t.ty.copy(),t.tag) for t in train]
		best1,h1 = fit(cfg,small_model(3),train,val)
		assert list(train) == before
		best2,h2 = fit(cfg,small_model(3),train,val)
		assert best1 == best2 and h1 == h2
		assert 1 <= len(h1) <= 6
		assert mean_task_nll(best1,val) == h1.val_nll[h1.best_epoch]
		best3,h3 = fit(TrainConfig(epochs=6,lr=1e-2,patience=2,seed=3,resample_context=False),small_model(3),train,val)
		assert not h3 == h1
		if len(h1) < cfg.epochs:
			assert len(h1) - 1 - h1.best_epoch >= cfg.patience
		msg('OK')

		msg_r('Testing that training lowers the loss...')
		one = gen_noisy_1d(4,n_tasks=1,nc_range=(2,2),n_t=20)
		best,h = fit(TrainConfig(epochs=30,lr=1e-2,patience=30,seed=0),small_model(0),one)
		assert min(h.val_nll) < h.val_nll[0], h.val_nll
		msg('OK')

		msg_r('Testing threaded validation loss...')
		assert mean_task_nll(best1,train,threads=3) == mean_task_nll(best1,train,threads=1)
		msg('OK')

		msg_r('Testing training history file...')
		hist = TrainHistory([2.,1.5,1.25],[2.5,1.,1.75],[0.1,0.2,0.3])
		assert hist.best_epoch == 1
		lines = hist.format_csv().splitlines()
		assert lines[0] == 'epoch,train_nll,val_nll,wall_time'
		assert lines[2] == '2,1.5,1,0.200'
		assert lines[-1] == '# best_epoch=2'
		fn = os.path.join(ut.tmpdir(),'ut.history.csv')
		write_history(hist,fn)
		assert open(fn).read() == hist.format_csv()
		msg('OK')

		bad = small_model(0)
		bad['head.1.bias'].data[2:4] = np.nan

		msg_r('Testing error handling...')
		vmsg('')
		bad_data = (
			('lr',         'TrainConfigError','lr = 0: must be > 0',  lambda: TrainConfig(lr=0)),
			('patience',   'TrainConfigError','must be >= 1',         lambda: TrainConfig(patience=0)),
			('beta2',      'TrainConfigError',r'must be in \[0,1\)',  lambda: TrainConfig(beta2=1.)),
			('empty set',  'TrainConfigError','training task set is empty',lambda: fit(TrainConfig(epochs=1),small_model(0),[])),
			('nan loss',   'NonFiniteLoss',   'non-finite training loss',  lambda: fit(TrainConfig(epochs=1),bad,train)),
		)
		ut.process_bad_data(bad_data)
		msg('OK')

		return True
