#!/usr/bin/env python3
"""
test/unit_tests_d/ut_checkpoint: checkpoint file unit test for the EpiPlace suite
"""

import os,struct
import numpy as np
from epiplace.common import *
from epiplace.checkpoint import *
from epiplace.model import ModelConfig,ModelParams,make_grid,predict
from epiplace.train import TrainConfig,TrainHistory

class unit_test(object):

	def run_test(self,name,ut):

		tdir = ut.tmpdir()
		fn = os.path.join(tdir,'ut.ckpt')

		mc = ModelConfig(components=3,depth=2,width=4,kernel_size=3,head_width=5,head_depth=1)
		params = ModelParams.init(mc,make_grid('multifn',16),9)
		params.y_mean,params.y_std = 0.125,1.75
		hist = TrainHistory([1.5,1.25,1.3],[1.6,1.2,1.4],[0.5,1.,1.5])
		tc = TrainConfig(epochs=3,lr=0.005,patience=4,seed=11)

		msg_r('Testing checkpoint round trip...')
		save_checkpoint(params,hist,tc,fn)
		p2,h2,tc2 = load_checkpoint(fn)
		assert p2 == params and h2 == hist and tc2 == tc
		assert list(p2.tensors) == list(params.tensors)
		assert p2.config == mc and p2.grid == params.grid
		assert (p2.y_mean,p2.y_std) == (0.125,1.75)
		for k in ('encoder.log_lengthscale','decoder.log_lengthscale'):
			assert p2[k].shape == () and p2[k].item() == params[k].item()
		mc2 = ModelConfig(d=2,components=2,depth=2,width=3,kernel_size=3,head_width=3,head_depth=1,position_map=True)
		p2d = ModelParams.init(mc2,make_grid('field2d',8),4)
		save_checkpoint(p2d,TrainHistory(),TrainConfig(),fn)
		assert load_checkpoint(fn,expect={'d':2})[0] == p2d
		save_checkpoint(params,hist,tc,fn)
		tx = np.linspace(-2,2,9)
		assert predict(p2,[],tx) == predict(params,[],tx)
		msg('OK')

		msg_r('Testing byte determinism...')
		data = checkpoint_bytes(params,hist,tc)
		assert data == checkpoint_bytes(params.copy(),hist,tc)
		assert data == open(fn,'rb').read()
		assert data[:4] == b'EPCK' and struct.unpack('<I',data[4:8])[0] == 1
		hdr = make_header(params,hist,tc)
		assert hdr.splitlines() == sorted(hdr.splitlines())
		assert 'model.components=3' in hdr.splitlines()
		assert 'history.best_epoch=1' in hdr.splitlines()
		msg('OK')

		msg_r('Testing config expectations...')
		assert parse_checkpoint(data,expect={'components':3,'d':1})[0] == params
		msg('OK')

		flipped = bytearray(data)
		flipped[-chksum_len-3] ^= 0x01
		badver = data[:4] + struct.pack('<I',2) + data[8:]
		trailing = data + b'\x00'

		msg_r('Testing error handling...')
		vmsg('')
		bad_data = (
			('magic',     'CheckpointFormatError',  'bad magic',            lambda: parse_checkpoint(b'XXXX' + data[4:])),
			('version',   'CheckpointVersionError', r'version 2 \(supported: 1\)',lambda: parse_checkpoint(badver)),
			('truncated', 'CheckpointTruncated',    'truncated',            lambda: parse_checkpoint(data[:-1])),
			('cut short', 'CheckpointTruncated',    'truncated',            lambda: parse_checkpoint(data[:len(data)//3])),
			('bit flip',  'CheckpointChecksumError','checksum mismatch',    lambda: parse_checkpoint(bytes(flipped))),
			('trailing',  'CheckpointFormatError',  'trailing bytes',       lambda: parse_checkpoint(trailing)),
			('mismatch',  'CheckpointConfigMismatch','checkpoint has components=3, run expects components=1',
				lambda: parse_checkpoint(data,expect={'components':1})),
			('missing',   'FileNotFound',           'not found',            lambda: load_checkpoint(os.path.join(tdir,'nonexistent.ckpt'))),
		)
		ut.process_bad_data(bad_data)
		msg('OK')

		return True
