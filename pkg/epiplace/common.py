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
common.py:  Common imports for all EpiPlace scripts
"""

import sys,os
from epiplace.exception import *
from epiplace.globalvars import *
import epiplace.opts as opts
from epiplace.opts import opt
from epiplace.util import *

def help_notes(k):
	return {
		'config': """
Run parameters are resolved in this order: built-in defaults, then the file
given with --config (flat 'key = value' lines, '#' comments), then command-line
flags.  Relative paths in the config file are taken relative to the file's own
directory.  The fully resolved configuration is echoed to '<out>.cfg' next to
every output file.
""",
		'threads': """
With --threads 1 (the default) every output is bit-deterministic.  Larger
values fan out read-only prediction over worker threads; results are stored by
index, so they do not depend on scheduling.
""",
	}[k]
