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
globalvars.py:  Constants and process-wide settings for the EpiPlace suite
"""

import sys,os

# Global vars are set to dfl values in class g.
# They're overridden in this order:
#   1 - environmental vars
#   2 - command line
# Run parameters (model, training, placement) live in cfg.RunConfig, not here.

class g(object):

	def die(ev=0,s=''):
		if s: sys.stderr.write(s+'\n')
		sys.exit(ev)

	# Constants:

	version      = '0.1.0'
	release_date = 'October 2026'

	proj_name = 'EpiPlace'
	proj_url  = 'https://github.com/epiplace/epiplace'
	prog_name = os.path.basename(sys.argv[0])
	author    = 'The EpiPlace Project'
	email     = '<epiplace@example.org>'
	Cdates    = '2026'
	keywords  = 'sensor placement, neural process, ConvCNP, mixture density network, epistemic uncertainty, aleatoric uncertainty, acquisition function, greedy, autodiff'

	stdout = sys.stdout
	stderr = sys.stderr

	# numerical floors
	var_floor        = 1e-6   # component variance floor applied by the mixture head
	setconv_eps      = 1e-8   # density normalizer in SetConv encode/decode
	log_weight_floor = 1e-12  # mixture weights are floored here before taking logs
	grid_pad         = 0.1    # fraction of domain width added on each side of the grid

	# file formats
	tasks_magic         = 'EPIPLACE-TASKS'
	tasks_versions      = ('1',)
	ckpt_magic          = b'EPCK'
	ckpt_version        = 1
	placement_magic     = 'EPIPLACE-PLACEMENT'
	placement_version   = '1'
	metrics_fields      = ('mode','model_k','n_sensors','seed','rmse','mean_nll')
	history_fields      = ('epoch','train_nll','val_nll','wall_time')
	float_fmt           = '{:.17g}'

	subcommands = ('gen-tasks','train','predict','place','evaluate','plot','selftest')
	scenarios   = ('noisy','multifn','field2d')
	acquisition_modes = ('var','ep','random')

	# Variables - these might be altered at runtime:

	debug                = False
	debug_opts           = False
	quiet                = False
	traceback            = False
	test_suite           = False

	for k in ('linux','win','msys','darwin'):
		if sys.platform[:len(k)] == k:
			platform = { 'linux':'linux', 'win':'win', 'msys':'win', 'darwin':'linux' }[k]
			break
	else:
		die(1,"'{}': platform not supported by {}\n".format(sys.platform,proj_name))

	color = sys.stderr.isatty()

	# opts initialized to None by opts.init() if not set by user
	required_opts = ('quiet','verbose','config','threads','version')

	# Supported environmental vars
	# The corresponding vars (lowercase, minus 'epiplace_') must be initialized in g
	# 'DISABLE_' env vars disable the corresponding var in g
	env_opts = (
		'EPIPLACE_DEBUG',
		'EPIPLACE_DEBUG_OPTS',
		'EPIPLACE_QUIET',
		'EPIPLACE_TRACEBACK',
		'EPIPLACE_TEST_SUITE',
		'EPIPLACE_DISABLE_COLOR',
	)
	# option values that must name an existing, readable file
	infile_opts = ('config','tasks','val_tasks','ckpt','metrics')
