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
epiplace selftest: Run the embedded property suite
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Check the variance decomposition, gradients and greedy placement',
		'usage':'[opts]',
		'options': """
-h, --help            Print this help message
-b, --break=        f Inject fault 'f' ({fn}) to check that it is detected
""",
	},
	'code': {
		'options': lambda s: s.format(fn=fmt_list(fault_names,fmt='no_quotes')),
	}
}

from epiplace.selftest import run_selftest,fault_names

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()

run_selftest(getattr(opt,'break'))
