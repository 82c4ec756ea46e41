"""Maximal operators, maximal commutators and their verification harness on
uniformly sampled functions of one variable."""

from .corpus import CorpusSpec, gen, load_manifest, random_pairs, save_manifest
from .grid import (GridMismatchError, Grid1D, SampledFn, Window, all_windows, load, prefix_sums, sample,
                   save, window_average)
from .maximal import (commutator_maximal, hl_maximal, iterated_maximal, maximal_commutator, negative_part,
                      orlicz_maximal, positive_part, power_maximal, power_sharp_maximal, sharp_maximal)
from .norms import (EXPL, LLOGL, BisectionCapWarning, OrliczFunction, RearrangementProfile, bmo_seminorm,
                    distribution_measure, exp_average, luxemburg_average, rearrangement,
                    weak_lorentz_quasinorm, zygmund_quasinorm)
from .verify import InequalityReport, VerifyConfig, run_suite

__version__ = "0.1.0"
