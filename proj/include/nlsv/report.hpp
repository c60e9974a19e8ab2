#pragma once

#include <ostream>
#include <vector>

#include "nlsv/config.hpp"
#include "nlsv/experiments.hpp"
#include "nlsv/scattering.hpp"

namespace nlsv {

/// n log-spaced points on [a, b], endpoints included.
std::vector<double> log_space(double a, double b, std::size_t n);

struct SpectralReport {
    PotentialSpec potential;
    Grid grid{-1.0, 1.0, 16};
    AdmissibilityReport admissibility;
    std::vector<double> bound_state_residuals;
    std::vector<ScatteringCoefficients> table;
    double max_unitarity_defect = 0.0;
    double max_consistency_defect = 0.0;
    /// sup over the table of |R| lambda and |T - 1| lambda (measured, no bound asserted)
    double sup_r_lambda = 0.0;
    double sup_t_minus_one_lambda = 0.0;
};

SpectralReport spectral_report(const PotentialSpec& V, const std::vector<double>& lambdas);

Json to_json(const AdmissibilityReport& r);
Json to_json(const SpectralReport& r);
Json to_json(const PhaseTimes& p);
/// Run summary without the time series.
Json to_json(const TransmissionRun& r);
/// {per_v_error, slope, bound_slope, pass, ...}
Json to_json(const ScalingResult& r);

/// lambda,re_T,im_T,re_R,im_R,unitarity_defect
void write_spectral_csv(std::ostream& os, const std::vector<ScatteringCoefficients>& table);
/// t,err_l2,mass,energy,a_abs,edge_mass
void write_series_csv(std::ostream& os, const ObserverSeries& s);
/// log_v,log_err
void write_loglog_csv(std::ostream& os, const ScalingResult& r);

}  // namespace nlsv
