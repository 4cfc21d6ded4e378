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
common.py: Shared routines for the EpiPlace test suites
"""

import os,re,time,importlib
from include.tests_header import repo_root
from epiplace.common import *

class TestHelpers(object):

	@classmethod
	def process_bad_data(cls,data):
		"""
		'data' is a sequence of (desc, exception class name, regex, callable);
		each callable must raise that exception with a message matching regex
		"""
		desc_w = max(len(e[0]) for e in data)
		exc_w = max(len(e[1]) for e in data)
		for (desc,exc_chk,emsg_chk,func) in data:
			vmsg_r('  bad {:{w}}'.format(desc+':',w=desc_w+1))
			try:
				func()
			except Exception as e:
				exc = type(e).__name__
				emsg = e.args[0] if e.args else ''
				vmsg(' {:{w}} [{}]'.format(exc,emsg,w=exc_w))
				assert exc == exc_chk, '{!r}: {!r} raised, expected {!r}'.format(desc,exc,exc_chk)
				assert re.search(emsg_chk,emsg), '{!r}: message {!r} does not match {!r}'.format(desc,emsg,emsg_chk)
			else:
				rdie(3,"\n'bad {}' raised no exception (expected {!r})".format(desc,exc_chk))

	@staticmethod
	def tmpdir():
		"scratch directory under the repository's test tree"
		d = os.path.join(repo_root,'test','tmp')
		os.makedirs(d,exist_ok=True)
		return d

class TestSuite(object):
	"""
	Runs the modules '<prefix>_<name>.py' in test/<subdir>, each defining a
	class 'cls_name' whose run_test(name,helpers) returns True on success
	"""

	def __init__(self,desc,subdir,prefix,cls_name,helpers):
		self.desc = desc
		self.subdir = subdir
		self.prefix = prefix + '_'
		self.cls_name = cls_name
		self.helpers = helpers
		self.all_tests = sorted(fn[len(self.prefix):-3] for fn in os.listdir(os.path.join(repo_root,'test',subdir))
			if fn.startswith(self.prefix) and fn.endswith('.py'))

	def select(self,cmd_args,exclude):
		for test in list(cmd_args) + exclude:
			if test not in self.all_tests:
				die(1,"'{}': test not recognized".format(test))
		return [t for t in (cmd_args or self.all_tests) if t not in exclude]

	def run(self,cmd_args):
		if opt.list:
			Die(0,' '.join(self.all_tests))
		tests = self.select(cmd_args,opt.exclude.split(',') if opt.exclude else [])
		start = time.time()
		try:
			for test in tests:
				mod = importlib.import_module('test.{}.{}{}'.format(self.subdir,self.prefix,test))
				gmsg('Running {} {}'.format(self.desc,test))
				t0 = time.time()
				if not getattr(mod,self.cls_name)().run_test(test,self.helpers):
					rdie(1,'{} {!r} failed'.format(capfirst(self.desc),test))
				vmsg('{} {} finished in {:.1f}s'.format(capfirst(self.desc),test,time.time()-t0))
				del mod
		except KeyboardInterrupt:
			die(1,green('\nExiting at user request'))
		t = int(time.time() - start)
		gmsg('{} of {} {}{} finished OK, elapsed time: {:02}:{:02}'.format(
			len(tests),len(self.all_tests),self.desc,suf(self.all_tests),t//60,t%60))
