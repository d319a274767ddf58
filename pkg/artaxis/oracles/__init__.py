from .inequalities import check_power_sum_inequality, check_young_splitting, check_lower_order_absorption, \
    young_absorption_constant, power_sum_sweep, young_splitting_sweep
from .regularity import RegularityEstimate, estimate_c_rho, uniform_sample_sides
from .mms import MMS_CASES, MmsReport, mms_convergence
from .trajectory import TrajectorySample, TrajectoryRecorder, EstimateCheck, record_trajectory, \
    check_w_regularity_estimate, check_v_regularity_estimate, check_lp_growth_inequality, check_trajectory_estimates
