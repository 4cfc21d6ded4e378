#!/usr/bin/env python3
"""
test/unit_tests_d/ut_cli: subcommand launcher unit test for the EpiPlace suite
"""

import os,io,shutil
from epiplace.common import *
from epiplace.main import dispatch
from epiplace.placement import PlacementResult,write_placement

run_cfg = """
scenario = noisy
n_tasks = 4
n_targets = 12
nc_min = 1
nc_max = 3
depth = 2
width = 4
kernel_size = 3
head_width = 4
head_depth = 1
grid_nodes = 16
epochs = 2
n_sensors = 2
random_seeds = 0,1
"""

class unit_test(object):

	def run_test(self,name,ut):

		saved = (dict(opt.__dict__),g.prog_name,g.stdout,g.stderr)
		log = []

		def run(*args):
			g.stdout = g.stderr = io.StringIO()
			try:
				ret = dispatch(list(args))
			finally:
				log.append(g.stderr.getvalue())
				opt.__dict__.clear()
				opt.__dict__.update(saved[0])
				g.prog_name,g.stdout,g.stderr = saved[1:]
			vmsg('  {}: exit {}'.format(' '.join(args[:1]) or '(none)',ret))
			return ret

		tdir = os.path.join(ut.tmpdir(),'cli')
		shutil.rmtree(tdir,ignore_errors=True)
		os.makedirs(tdir)
		cfg_fn = os.path.join(tdir,'run.cfg')
		with open(cfg_fn,'w') as f:
			f.write(run_cfg)

		msg_r('Testing launcher exit statuses...')
		vmsg('')
		assert run() == 1
		assert 'Subcommands:' in log[-1]
		assert run('-h') == 0
		assert run('frobnicate') == 1
		assert "'frobnicate': unknown subcommand" in log[-1]
		assert run('gen-tasks') == 1
		assert '--out: option is required' in log[-1]
		assert run('gen-tasks','--bogus') == 1
		assert run('gen-tasks','-S','lunar','-o',os.path.join(tdir,'x.tasks')) == 1
		assert not os.path.exists(os.path.join(tdir,'x.tasks'))
		assert run('train','-c',os.path.join(tdir,'nonexistent.cfg'),'-T',cfg_fn,'-o',os.path.join(tdir,'x.ckpt')) == 1
		msg('OK')

		def pipeline(d):
			os.makedirs(d)
			j = lambda fn: os.path.join(d,fn)
			steps = (
				('gen-tasks','-c',cfg_fn,'-o',j('train.tasks')),
				('gen-tasks','-c',cfg_fn,'-s','1','-o',j('test.tasks')),
				('train','-c',cfg_fn,'-T',j('train.tasks'),'-o',j('model.ckpt'),'-H',j('history.csv')),
				('predict','-c',cfg_fn,'-C',j('model.ckpt'),'-T',j('test.tasks'),'-i','1','-o',j('pred.csv')),
				('place','-c',cfg_fn,'-C',j('model.ckpt'),'-T',j('test.tasks'),'-a','ep','-o',j('ep.placement')),
				('place','-c',cfg_fn,'-T',j('test.tasks'),'-a','random','-s','5','-o',j('random.placement')),
				('evaluate','-c',cfg_fn,'-C',j('model.ckpt'),'-T',j('test.tasks'),'-o',j('metrics.csv')),
				('evaluate','-c',cfg_fn,'-C',j('model.ckpt'),'-T',j('test.tasks'),
					'-P',j('ep.placement')+','+j('random.placement'),'-o',j('files.csv')),
				('plot','-m',j('metrics.csv'),'-o',j('plot.svg')),
			)
			for args in steps:
				ret = run(*args)
				assert ret == 0, '{}: exit status {}\n{}'.format(' '.join(args),ret,log[-1])

		msg_r('Testing end-to-end pipeline determinism...')
		vmsg('')
		pipeline(os.path.join(tdir,'a'))
		pipeline(os.path.join(tdir,'b'))
		for fn in ('train.tasks','test.tasks','model.ckpt','pred.csv','ep.placement',
				'random.placement','metrics.csv','files.csv','plot.svg'):
			a,b = [open(os.path.join(tdir,r,fn),'rb').read() for r in ('a','b')]
			assert a == b, fn
		ha,hb = [[l.rsplit(',',1)[0] for l in open(os.path.join(tdir,r,'history.csv')).read().splitlines()] for r in ('a','b')]
		assert ha == hb and len(ha) == 4
		for fn in ('train.tasks','model.ckpt','pred.csv','ep.placement','metrics.csv'):
			assert os.path.exists(os.path.join(tdir,'a',fn+'.cfg')), fn
		assert not os.path.exists(os.path.join(tdir,'a','plot.svg.cfg'))
		assert 'epochs = 2' in open(os.path.join(tdir,'a','model.ckpt.cfg')).read().splitlines()
		assert open(os.path.join(tdir,'a','pred.csv')).readline().strip() == 'index,x,mean,var_total,var_epistemic,var_aleatoric'
		assert len(open(os.path.join(tdir,'a','pred.csv')).read().splitlines()) == 13
		msg('OK')

		msg_r('Testing overlays and uncertainty plots...')
		vmsg('')
		a = lambda fn: os.path.join(tdir,'a',fn)
		k = lambda fn: os.path.join(tdir,'k1',fn)
		os.makedirs(os.path.join(tdir,'k1'))
		assert run('train','-c',cfg_fn,'-T',a('train.tasks'),'-K','1','-o',k('model.ckpt')) == 0
		assert run('place','-c',cfg_fn,'-C',k('model.ckpt'),'-T',a('test.tasks'),'-a','ep','-o',k('ep.placement')) == 0
		assert 'K=1 model has no epistemic variance' in log[-1]
		assert run('place','-c',cfg_fn,'-C',a('model.ckpt'),'-T',a('test.tasks'),'-a','ep','-o',k('x.placement')) == 0
		assert 'no epistemic variance' not in log[-1]
		assert run('evaluate','-c',cfg_fn,'-C',k('model.ckpt'),'-T',a('test.tasks'),'-o',k('metrics.csv')) == 0
		assert open(k('metrics.csv')).read().splitlines()[1].startswith('prior,1,0,,')
		assert run('plot','-m',a('metrics.csv')+','+k('metrics.csv'),'-o',k('overlay.svg')) == 0
		svg = open(k('overlay.svg')).read()
		assert 'id="nll-ep_K=1"' in svg and 'id="nll-ep_K=2"' in svg
		assert run('plot','-m',a('metrics.csv')+','+a('metrics.csv'),'-o',k('dup.svg')) == 2
		assert 'duplicate metrics row' in log[-1]
		assert not os.path.exists(k('dup.svg'))
		assert run('predict','-c',cfg_fn,'-C',a('model.ckpt'),'-T',a('test.tasks'),'-i','1','-n','-o',k('prior.csv')) == 0
		assert open(k('prior.csv')).read() != open(a('pred.csv')).read()
		assert run('plot','-u',k('prior.csv')+','+a('pred.csv'),'-o',k('unc.svg')) == 0
		svg = open(k('unc.svg')).read()
		for gid in ('aleatoric-0','epistemic-0','mean-0','aleatoric-1','epistemic-1','mean-1'):
			assert 'id="{}"'.format(gid) in svg, gid
		assert 'prior.csv' in svg
		for args in (('-o',k('x.svg')),('-m',a('metrics.csv'),'-u',a('pred.csv'),'-o',k('x.svg'))):
			assert run('plot',*args) == 1
			assert 'exactly one of --metrics and --predictions' in log[-1]
		assert not os.path.exists(k('x.svg'))
		msg('OK')

		msg_r('Testing runtime error statuses...')
		vmsg('')
		bad_pl = os.path.join(tdir,'bad.placement')
		write_placement(PlacementResult('random',[40],[(0.,)],seed=0,n_candidates=41),bad_pl)
		assert run('evaluate','-c',cfg_fn,'-C',a('model.ckpt'),'-T',a('test.tasks'),'-P',bad_pl,'-o',os.path.join(tdir,'bad.csv')) == 2
		assert 'candidate index 40 out of range' in log[-1]
		assert not os.path.exists(os.path.join(tdir,'bad.csv'))
		with open(a('model.ckpt'),'rb') as f:
			data = f.read()
		with open(os.path.join(tdir,'short.ckpt'),'wb') as f:
			f.write(data[:-1])
		assert run('predict','-C',os.path.join(tdir,'short.ckpt'),'-T',a('test.tasks'),'-o',os.path.join(tdir,'x.csv')) == 2
		assert 'truncated' in log[-1]
		assert run('predict','-C',a('model.ckpt'),'-T',a('test.tasks'),'-i','99','-o',os.path.join(tdir,'x.csv')) in (1,2)
		msg('OK')

		msg_r('Testing selftest subcommand...')
		vmsg('')
		assert run('selftest') == 0
		assert 'checks passed' in log[-1]
		assert run('selftest','--break','decomposition') == 2
		assert 'invariant violated' in log[-1]
		assert run('selftest','--break','nothing') == 1
		msg('OK')

		return True
