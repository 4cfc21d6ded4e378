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

import sys,os

sys_ver = sys.version_info[:2]
req_ver = (3,7)
ver2f = lambda t: float('{}.{:03}'.format(*t))

if ver2f(sys_ver) < ver2f(req_ver):
	m = '{}.{}: wrong Python version.  EpiPlace requires Python {}.{} or greater\n'
	sys.stderr.write(m.format(*sys_ver,*req_ver))
	sys.exit(1)

from setuptools import setup
from setuptools.command.install import install

class my_install(install):
	def run(self):
		os.chmod(os.path.join('data_files','epiplace.cfg'),0o644)
		install.run(self)

from epiplace.globalvars import g
setup(
		name         = 'epiplace',
		description  = 'Sensor placement by expected epistemic-uncertainty reduction',
		version      = g.version,
		author       = g.author,
		author_email = g.email,
		url          = g.proj_url,
		license      = 'GNU GPL v3',
		platforms    = 'Linux, MS Windows, macOS',
		keywords     = g.keywords,
		cmdclass     = { 'install': my_install },
		python_requires  = '>=3.7',
		install_requires = ['numpy>=1.20','matplotlib>=3.3'],
		extras_require   = { 'color': ['colorama'] },
		data_files = [('share/epiplace', [
				'data_files/epiplace.cfg',  # source files must have 0644 mode
				]),],
		py_modules = [
			'epiplace.__init__',
			'epiplace.cfg',
			'epiplace.checkpoint',
			'epiplace.color',
			'epiplace.common',
			'epiplace.evaluate',
			'epiplace.exception',
			'epiplace.globalvars',
			'epiplace.model',
			'epiplace.opts',
			'epiplace.placement',
			'epiplace.selftest',
			'epiplace.svgplot',
			'epiplace.tasks',
			'epiplace.tensor',
			'epiplace.train',
			'epiplace.uncertainty',
			'epiplace.util',

			'epiplace.main',
			'epiplace.main_evaluate',
			'epiplace.main_gen_tasks',
			'epiplace.main_place',
			'epiplace.main_plot',
			'epiplace.main_predict',
			'epiplace.main_selftest',
			'epiplace.main_train',

			'epiplace.share.__init__',
			'epiplace.share.Opts',
		],
		scripts = [
			'cmds/epiplace',
		]
	)
