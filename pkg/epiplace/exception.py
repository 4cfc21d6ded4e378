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
epiplace.exception: Exception classes for the EpiPlace suite
"""

# 1: no hl, message only (usage errors, exit status 1)
class UserOptError(Exception):             mmcode = 1
class CfgFileParseError(Exception):        mmcode = 1
class UnknownCfgKey(Exception):            mmcode = 1
class FileNotFound(Exception):             mmcode = 1

# 2: yellow hl, message only
class TaskFileVersionError(Exception):     mmcode = 2
class TaskFileParseError(Exception):       mmcode = 2
class TaskFileTruncated(Exception):        mmcode = 2
class CheckpointFormatError(Exception):    mmcode = 2
class CheckpointVersionError(Exception):   mmcode = 2
class CheckpointTruncated(Exception):      mmcode = 2
class CheckpointChecksumError(Exception):  mmcode = 2
class CheckpointConfigMismatch(Exception): mmcode = 2
class PlacementFileError(Exception):       mmcode = 2
class CandidateIndexError(Exception):      mmcode = 2
class MetricsFileError(Exception):         mmcode = 2
class PredictionsFileError(Exception):     mmcode = 2
class InformationCheckError(Exception):    mmcode = 2
class FileWriteError(Exception):           mmcode = 2

# 3: yellow hl, 'EpiPlace Error' + exception + message
class TensorShapeError(Exception):         mmcode = 3
class TensorValueError(Exception):         mmcode = 3
class KernelSizeError(Exception):          mmcode = 3
class ModelConfigError(Exception):         mmcode = 3
class GridRangeError(Exception):           mmcode = 3
class TaskRangeError(Exception):           mmcode = 3
class TrainConfigError(Exception):         mmcode = 3
class NonFiniteLoss(Exception):            mmcode = 3
class NonFinitePrediction(Exception):      mmcode = 3
class PlacementRangeError(Exception):      mmcode = 3
class MetricsLengthError(Exception):       mmcode = 3
class EmptyTableError(Exception):          mmcode = 3

# 4: red hl, 'EpiPlace Fatal Error' + exception + message
class SelftestFailure(Exception):          mmcode = 4
