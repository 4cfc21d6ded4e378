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
epiplace plot: Render metrics or prediction files as an SVG figure
"""

from epiplace.common import *

opts_data = {
	'text': {
		'desc': 'Plot error against the number of sensors, or predictive uncertainty curves',
		'usage':'[opts] (--metrics <files> | --predictions <files>) --out <file>',
		'options': """
-h, --help            Print this help message
-m, --metrics=      f Comma-separated list of metrics files written by 'evaluate'
-u, --predictions=  f Comma-separated list of 1D prediction files written by
                      'predict'
-o, --out=          f Write the SVG figure to file 'f'
""",
	'notes': """
With --metrics: RMSE and mean NLL panels, one curve per acquisition mode;
random placement is plotted seed-averaged and the prior (empty-context) row is
not plotted.  Rows of several files are merged, so runs with different
numbers of mixture components K can be overlaid; curves are then labelled
with their K.

With --predictions: one panel per file, showing the predictive mean with
±2σ bands from the aleatoric and the epistemic variance.  Plotting the
output of 'predict --no-context' next to that of 'predict' shows the effect
of conditioning.
"""
	}
}

cmd_args = opts.init(opts_data)

if cmd_args:
	opts.usage()
if not opt.out:
	raise UserOptError('--out: option is required')
if bool(opt.metrics) == bool(opt.predictions):
	raise UserOptError('exactly one of --metrics and --predictions is required')

from epiplace.evaluate import *

if opt.metrics:
	emit_plot(MetricsTable.merge(read_metrics(fn) for fn in opt.metrics.split(',')),opt.out)
else:
	emit_uncertainty_plot([(os.path.basename(fn),read_predictions(fn)) for fn in opt.predictions.split(',')],opt.out)
