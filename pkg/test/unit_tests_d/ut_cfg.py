#!/usr/bin/env python3
"""
test/unit_tests_d/ut_cfg: run configuration unit test for the EpiPlace suite
"""

import os
from epiplace.common import *
from epiplace.cfg import RunConfig
from epiplace.model import ModelConfig

def write(fn,text):
	with open(fn,'w') as f:
		f.write(text)
	return fn

class unit_test(object):

	def run_test(self,name,ut):

		tdir = ut.tmpdir()

		msg_r('Testing defaults...')
		c = RunConfig()
		assert c.epochs == 500 and c.lr == 1e-3 and c.acquisition == 'ep'
		assert c.position_map is False and c.refresh_predictions is False and c.resample_context is True
		assert c.src['epochs'] == 'default'
		assert c.int_list('random_seeds') == [0,1,2]
		assert c.str_list('eval_modes') == ['var','ep','random']
		assert c.validate()
		assert RunConfig(os.path.join('data_files','epiplace.cfg')).format() == c.format()
		msg('OK')

		fn = write(os.path.join(tdir,'ut.cfg'),
			'# test configuration\n'
			'\n'
			'epochs = 40   # fewer\n'
			'lr=0.01\n'
			'refresh_predictions = yes\n'
			'scenario = multifn\n'
			'tasks = data/train.tasks\n'
			'ckpt = /abs/model.ckpt\n' )

		msg_r('Testing precedence...')
		c = RunConfig(fn)
		assert c.epochs == 40 and c.src['epochs'] == fn
		assert c.lr == 0.01 and type(c.lr) == float
		assert c.refresh_predictions is True
		assert c.patience == 25 and c.src['patience'] == 'default'
		c.update({ 'epochs':'7', 'patience':3 })
		assert c.epochs == 7 and c.src['epochs'] == 'command line'
		assert c.patience == 3
		assert c.lr == 0.01
		msg('OK')

		msg_r('Testing path resolution...')
		assert c.tasks == os.path.join(tdir,'data','train.tasks')
		assert c.ckpt == '/abs/model.ckpt'
		assert c.val_tasks == ''
		msg('OK')

		msg_r('Testing derived configs...')
		mc = c.model_config()
		assert mc == ModelConfig(d=1,components=2,depth=6,width=32,kernel_size=5,head_width=32,head_depth=2)
		assert c.model_config('field2d').d == 2
		tc = c.train_config()
		assert (tc.epochs,tc.lr,tc.patience,tc.seed,tc.resample_context) == (7,0.01,3,0,True)
		msg('OK')

		msg_r('Testing resolved configuration echo...')
		text = c.format()
		lines = text.splitlines()
		assert lines == sorted(lines)
		assert 'epochs = 7' in lines and 'lr = 0.01' in lines
		assert 'refresh_predictions = true' in lines and 'position_map = false' in lines
		echo = os.path.join(tdir,'ut.out')
		c.write_echo(echo)
		assert open(echo+'.cfg').read() == text
		c2 = RunConfig(echo+'.cfg')
		assert c2.format() == text
		msg('OK')

		def cfg_with(**kwargs):
			def f():
				c = RunConfig()
				c.update(kwargs)
				return c.validate()
			return f

		unknown = write(os.path.join(tdir,'ut.unknown.cfg'),'epochs = 3\n\nbogus_key = 1\n')
		garbled = write(os.path.join(tdir,'ut.garbled.cfg'),'epochs = 3\nthis is not a setting\n')
		badtype = write(os.path.join(tdir,'ut.badtype.cfg'),'epochs = many\n')

		msg_r('Testing error handling...')
		vmsg('')
		bad_data = (
			('unknown key', 'UnknownCfgKey',     r"'bogus_key'.*line 3",                   lambda: RunConfig(unknown)),
			('parse',       'CfgFileParseError', 'line 2',                                 lambda: RunConfig(garbled)),
			('type',        'UserOptError',      r"'many': invalid value for 'epochs'",    lambda: RunConfig(badtype)),
			('missing',     'FileNotFound',      'not found',                              lambda: RunConfig(os.path.join(tdir,'nonexistent.cfg'))),
			('flag key',    'UnknownCfgKey',     'unknown configuration key',              lambda: RunConfig().set('nope',1,'test')),
			('scenario',    'UserOptError',      r"scenario = 'foo'.*valid choices",       cfg_with(scenario='foo')),
			('epochs',      'UserOptError',      'must be >= 1',                           cfg_with(epochs=0)),
			('nc order',    'UserOptError',      'greater than nc_max',                    cfg_with(nc_min=4,nc_max=2)),
			('kernel',      'UserOptError',      'must be odd',                            cfg_with(kernel_size=4)),
			('lr',          'UserOptError',      r'lr = 0\.0.*must be > 0',                cfg_with(lr=0)),
			('beta',        'UserOptError',      r'must be in \[0,1\)',                    cfg_with(beta2=1)),
			('seeds',       'UserOptError',      'non-negative integers',                  cfg_with(random_seeds='0,x')),
			('modes',       'UserOptError',      'eval_modes',                             cfg_with(eval_modes='var,best')),
			('source',      'UserOptError',      r'\[source: command line\]',              cfg_with(width=0)),
		)
		ut.process_bad_data(bad_data)
		msg('OK')

		return True
