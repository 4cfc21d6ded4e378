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
checkpoint.py:  Versioned binary checkpoints of model parameters, config and history
"""

import struct
from hashlib import sha256
import numpy as np

from epiplace.globalvars import g
from epiplace.exception import *
from epiplace.util import *
from epiplace.tensor import Tensor
from epiplace.model import ModelConfig,ModelParams,GridSpec
from epiplace.train import TrainConfig,TrainHistory

# File layout (little-endian):
#   magic 'EPCK' | u32 version | u32 header length | header (sorted key=value lines, UTF-8)
#   | u32 array count | arrays: u32 name length, name, u32 rank, u32 dims…, raw f8 data
#   | 8-byte checksum: leading bytes of sha256 over everything before it

chksum_len = 8

def _fmt_val(v):
	if type(v) == bool:
		return ('false','true')[v]
	if type(v) == float:
		return fmt_float(v)
	if type(v) in (tuple,list):
		return ','.join(_fmt_val(e) for e in v)
	return str(v)

def make_header(params,history,config):
	d = {}
	for k,v in params.config.items():
		d['model.'+k] = v
	d['grid.lower'] = params.grid.lower
	d['grid.upper'] = params.grid.upper
	d['grid.nodes'] = params.grid.nodes
	d['norm.y_mean'] = params.y_mean
	d['norm.y_std'] = params.y_std
	for k,v in config.items():
		d['train.'+k] = v
	d['history.epochs'] = len(history)
	d['history.best_epoch'] = history.best_epoch if len(history) else -1
	return ''.join('{}={}\n'.format(k,_fmt_val(d[k])) for k in sorted(d))

def _pack_array(name,a):
	nb = name.encode()
	a = np.asarray(a,dtype='<f8')
	return (
		struct.pack('<I',len(nb)) + nb
		+ struct.pack('<I',a.ndim)
		+ struct.pack('<{}I'.format(a.ndim),*a.shape)
		+ a.tobytes(order='C') )

def checkpoint_bytes(params,history,config):
	hdr = make_header(params,history,config).encode()
	arrays = [(k,t.data) for k,t in params.named_tensors()] + [
		('history.train_nll',np.array(history.train_nll)),
		('history.val_nll',np.array(history.val_nll)) ]
	body = (
		g.ckpt_magic
		+ struct.pack('<I',g.ckpt_version)
		+ struct.pack('<I',len(hdr)) + hdr
		+ struct.pack('<I',len(arrays))
		+ b''.join(_pack_array(k,a) for k,a in arrays) )
	return body + sha256(body).digest()[:chksum_len]

def save_checkpoint(params,history,config,path):
	write_data_to_file(path,checkpoint_bytes(params,history,config),'checkpoint',binary=True)

class _Reader(object):

	def __init__(self,data,fn):
		self.data,self.fn,self.pos = data,fn,0

	def take(self,n):
		if self.pos + n > len(self.data):
			raise CheckpointTruncated('{}: checkpoint truncated at byte {} (needed {} more)'.format(
				self.fn,len(self.data),self.pos+n-len(self.data)))
		ret = self.data[self.pos:self.pos+n]
		self.pos += n
		return ret

	def u32(self):
		return struct.unpack('<I',self.take(4))[0]

def _parse_header(text,fn):
	d = {}
	for line in text.splitlines():
		k,sep,v = line.partition('=')
		if not sep:
			raise CheckpointFormatError('{}: malformed header line {!r}'.format(fn,line))
		d[k] = v
	return d

def _conv(d,key,typ,fn):
	try:
		v = d[key]
		if typ == bool:
			return { 'true':True, 'false':False }[v]
		if typ in ('floats','ints'):
			return tuple((int if typ == 'ints' else float)(e) for e in v.split(','))
		return typ(v)
	except (KeyError,ValueError):
		raise CheckpointFormatError('{}: header key {!r} missing or malformed'.format(fn,key))

def parse_checkpoint(data,fn='checkpoint',expect=None):
	"""
	Check, in order: magic, version, structure, checksum, then 'expect' (a
	dict of model config keys the caller requires)
	"""
	if data[:len(g.ckpt_magic)] != g.ckpt_magic:
		raise CheckpointFormatError('{}: not an EpiPlace checkpoint (bad magic bytes)'.format(fn))
	r = _Reader(data,fn)
	r.take(len(g.ckpt_magic))
	ver = r.u32()
	if ver != g.ckpt_version:
		raise CheckpointVersionError('{}: unsupported checkpoint version {} (supported: {})'.format(fn,ver,g.ckpt_version))

	try:
		hdr = r.take(r.u32()).decode()
	except UnicodeDecodeError:
		raise CheckpointFormatError('{}: header is not valid UTF-8'.format(fn))
	arrays = []
	for i in range(r.u32()):
		name = r.take(r.u32()).decode(errors='replace')
		rank = r.u32()
		dims = struct.unpack('<{}I'.format(rank),r.take(4*rank))
		n = int(np.prod(dims)) if rank else 1
		arrays.append((name,np.frombuffer(r.take(8*n),dtype='<f8').astype(np.float64).reshape(dims)))

	rest = len(data) - r.pos
	if rest < chksum_len:
		raise CheckpointTruncated('{}: checkpoint truncated ({} of {} checksum bytes present)'.format(fn,rest,chksum_len))
	if rest > chksum_len:
		raise CheckpointFormatError('{}: {} unexpected trailing bytes'.format(fn,rest-chksum_len))
	if sha256(data[:r.pos]).digest()[:chksum_len] != data[r.pos:]:
		raise CheckpointChecksumError('{}: checksum mismatch (file corrupted)'.format(fn))

	h = _parse_header(hdr,fn)
	mc = ModelConfig(**{ k:_conv(h,'model.'+k,type(v),fn) for k,v in ModelConfig().items() })
	grid = GridSpec(_conv(h,'grid.lower','floats',fn),_conv(h,'grid.upper','floats',fn),_conv(h,'grid.nodes','ints',fn))
	tc = TrainConfig(**{ k:_conv(h,'train.'+k,type(v),fn) for k,v in TrainConfig().items() })

	if expect:
		for k,v in expect.items():
			if getattr(mc,k) != v:
				raise CheckpointConfigMismatch('{}: checkpoint has {}={!r}, run expects {}={!r}'.format(fn,k,getattr(mc,k),k,v))

	ad = dict(arrays)
	want = ModelParams.shapes(mc,grid)
	tensors = []
	for k,shape in want:
		if k not in ad:
			raise CheckpointFormatError('{}: parameter array {!r} missing'.format(fn,k))
		if ad[k].shape != tuple(shape):
			raise CheckpointFormatError('{}: parameter array {!r} has shape {} (expected {})'.format(fn,k,ad[k].shape,tuple(shape)))
		tensors.append((k,Tensor(ad[k],requires_grad=True)))

	params = ModelParams(mc,grid,tensors,_conv(h,'norm.y_mean',float,fn),_conv(h,'norm.y_std',float,fn))
	hist = TrainHistory(
		[float(v) for v in ad.get('history.train_nll',())],
		[float(v) for v in ad.get('history.val_nll',())] )
	return params,hist,tc

def load_checkpoint(path,expect=None):
	return parse_checkpoint(get_data_from_file(path,'checkpoint',binary=True),path,expect)
