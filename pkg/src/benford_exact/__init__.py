"""Continuous distributions on (0, inf) whose significands are exactly Benford."""

__version__ = "0.1.0"

from .core import (BaseSpec, DigitTable, SigDecomp, benford_cdf, benford_prob, benford_table,
                   decompose, digit_law_from_dist, empirical_digit_table, frac_log,
                   fraction_cdf_from_dist, leading_digit)
from .distributions import (DistParams, PiecewiseSpec, SampleBatch, cdf_y, is_admissible,
                            largest_admissible_base, max_base, partial_moment, pdf_x, pdf_y,
                            piecewise_digit_cdf, piecewise_pdf, piecewise_sample, quantile_y,
                            sample_y, sf_y)
from .errors import DomainError, EvaluationError, IntegrationError, MomentRangeError
from .gof import GofReport, chi_square_gof, ks_uniform
from .quadrature import (TrapzConfig, TrapzResult, adaptive_integrate, trapz_offset_sum,
                         trapz_pdf_sum, trapz_pdf_sweep)
from .specfun import EvalResult, sinc, sinc2, sine_integral, trigamma
