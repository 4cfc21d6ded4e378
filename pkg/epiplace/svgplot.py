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
svgplot.py:  Byte-deterministic SVG figures: error versus number of sensors, uncertainty curves
"""

import io
import numpy as np

mode_colors = {
	'var':    'tab:blue',
	'ep':     'tab:red',
	'random': 'tab:gray',
}
extra_colors = ('tab:green','tab:purple','tab:brown','tab:pink','tab:olive','tab:cyan')
band_colors = {
	'aleatoric': 'tab:blue',
	'epistemic': 'tab:red',
}

# fixed ids and no timestamps: identical tables give identical files
svg_rc = {
	'svg.hashsalt':  'epiplace',
	'svg.fonttype':  'none',
	'path.simplify': False,
}

def _color(label,n):
	return mode_colors.get(label.split()[0],extra_colors[n % len(extra_colors)])

# one line style per model K when several tables are overlaid
def _linestyle(label):
	ks = label.split(' K=')
	return ('-','--',':','-.')[(int(ks[1])-1) % 4] if len(ks) == 2 else '-'

def render_metrics(table):
	"two side-by-side panels (RMSE, mean NLL), one line per acquisition mode"
	import matplotlib
	from matplotlib.figure import Figure
	from matplotlib.ticker import MaxNLocator

	curves = table.curves()
	with matplotlib.rc_context(svg_rc):
		fig = Figure(figsize=(10,4))
		axes = fig.subplots(1,2)
		for ax,(tag,col,title,ylabel) in zip(axes,(
				('rmse',1,'Test RMSE','RMSE'),
				('nll', 2,'Test NLL', 'Mean NLL per target') )):
			for n,(label,pts) in enumerate(curves.items()):
				ax.plot([p[0] for p in pts],[p[col] for p in pts],
					marker='o',linewidth=2,linestyle=_linestyle(label),color=_color(label,n),label=label,
					gid='{}-{}'.format(tag,label.replace(' ','_')))
			ax.set_xlabel('Number of sensors')
			ax.set_ylabel(ylabel)
			ax.set_title(title)
			ax.xaxis.set_major_locator(MaxNLocator(integer=True))
			ax.grid(alpha=0.3)
		axes[1].legend(loc='upper right')
		return _svg(fig)

def render_uncertainty(panels):
	"""
	one panel per (title, PredictionTable) pair: the predictive mean with
	±2σ bands from the aleatoric and the epistemic variance, over sorted x
	"""
	import matplotlib
	from matplotlib.figure import Figure

	with matplotlib.rc_context(svg_rc):
		fig = Figure(figsize=(5*len(panels),4))
		axes = fig.subplots(1,len(panels),squeeze=False)[0]
		for n,(ax,(title,pt)) in enumerate(zip(axes,panels)):
			o = np.argsort(pt.x[:,0],kind='stable')
			x,mean = pt.x[o,0],pt.mean[o]
			for tag,var in (('aleatoric',pt.var_aleatoric),('epistemic',pt.var_epistemic)):
				band = 2*np.sqrt(var[o])
				ax.fill_between(x,mean-band,mean+band,color=band_colors[tag],alpha=0.3,linewidth=0,
					label='±2σ {}'.format(tag),gid='{}-{}'.format(tag,n))
			ax.plot(x,mean,color='black',linewidth=1.5,label='mean',gid='mean-{}'.format(n))
			ax.set_xlabel('x')
			ax.set_ylabel('y')
			ax.set_title(title)
			ax.grid(alpha=0.3)
		axes[-1].legend(loc='upper right')
		return _svg(fig)

def _svg(fig):
	fig.tight_layout()
	out = io.StringIO()
	fig.savefig(out,format='svg',metadata={'Date':None,'Creator':None})
	return out.getvalue()
