# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Constants.

Internal module. May change without further warning.
"""

# Tokenizer shape: L levels, V codes per level
DEFAULT_LEVELS = 4
DEFAULT_CODEBOOK_SIZE = 256

# Residual K-means
DEFAULT_KMEANS_ITERS = 20

# First of the three experiment seeds (42, 123, 2026)
DEFAULT_SEED = 42

# PPMI / SVD collaborative embedding
DEFAULT_WINDOW = 3
DEFAULT_HOLDOUT = 2
DEFAULT_CF_DIM = 256
SVD_OVERSAMPLES = 8
SVD_POWER_ITERS = 4
# Dense SVD once the sample count reaches this share of the smaller dimension
SVD_DENSE_RATIO = 0.8

# Text / collaborative fusion
DEFAULT_ALPHA = 0.5

# Dataset preprocessing
DEFAULT_K_CORE = 5

# Evaluation
DEFAULT_BEAM_WIDTH = 20
DEFAULT_KS = (5, 10)
# Probability to plant the target SID at rank 1, 2, ... (synthetic beams)
DEFAULT_HIT_PROFILE = (0.05, 0.03, 0.02, 0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01)

# Reassignment methods
METHOD_ZCR = 'zcr'
METHOD_GREEDY = 'greedy'
METHODS = (METHOD_ZCR, METHOD_GREEDY)

# File format magic values
SID_INDEX_HEADER = '#sid'
MODEL_MAGIC = b'SFQM1'
EMBEDDING_MAGIC = b'SFEMB1'

# Decimal places of percentages and means in reports
REPORT_PLACES = 2
# Rounding mode of report values (see ``utils.round_half_up``)
REPORT_ROUNDING = 'half-up'
