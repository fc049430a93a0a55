#pragma once

#include <array>
#include <span>
#include <vector>

#include "blockbal/grid.hpp"

namespace blockbal {

/// Coefficient groups of the five per-part workload functions. Units are
/// milliseconds per unit feature; intercepts may be negative.
struct EstimatorCoefficients {
   std::array<double, 3> lbm{};    // a1*C + a2*F + a3
   std::array<double, 3> bh{};     // a1*C + a2*B + a3
   std::array<double, 5> coup1{};  // a1*C + a2*F + a3*P_L + a4*P_S + a5
   std::array<double, 5> coup2{};  // a1*C + a2*F + a3*P_L + a4*P_S + a5
   std::array<double, 5> rb{};     // S*(a1*(P_L+P_S)^2 + a2*P_L + a3*P_S + a4*K + a5)

   /// Reference profile calibrated on a settling benchmark (Haswell-class
   /// CPU). Hardware specific; refit for other machines.
   static EstimatorCoefficients builtin_profile();

   bool finite() const;
};

/// One calibration observation: block quantities plus measured part times
/// in milliseconds. The total is always recomputed from the parts.
struct TimingSample {
   BlockQuantities quantities;
   double m_lbm = 0.0;
   double m_bh = 0.0;
   double m_coup1 = 0.0;
   double m_coup2 = 0.0;
   double m_rb = 0.0;

   double total() const { return m_lbm + m_bh + m_coup1 + m_coup2 + m_rb; }
};

// Feature rows, shared by prediction and fitting.
std::array<double, 3> lbm_features(const BlockQuantities& q);
std::array<double, 3> bh_features(const BlockQuantities& q);
std::array<double, 5> coup_features(const BlockQuantities& q);
std::array<double, 5> rb_features(const BlockQuantities& q);

double wl_lbm(const BlockQuantities& q, const EstimatorCoefficients& c);
double wl_bh(const BlockQuantities& q, const EstimatorCoefficients& c);
double wl_coup1(const BlockQuantities& q, const EstimatorCoefficients& c);
double wl_coup2(const BlockQuantities& q, const EstimatorCoefficients& c);
double wl_rb(const BlockQuantities& q, const EstimatorCoefficients& c);
double wl_total(const BlockQuantities& q, const EstimatorCoefficients& c);

/// Five independent ordinary least-squares fits, one per part. Columns are
/// scaled internally for conditioning; rank-deficient designs yield the
/// minimal-norm solution in the scaled feature space.
EstimatorCoefficients fit_coefficients(std::span<const TimingSample> samples);

/// Relative prediction errors E_X = (WL_X - m_X) / m_tot, normalized by the
/// total measured runtime for every part.
struct RelativeErrors {
   std::vector<double> lbm, bh, coup1, coup2, rb, total;
};

RelativeErrors relative_errors(std::span<const TimingSample> samples,
                               const EstimatorCoefficients& c);

struct SummaryStats {
   double median = 0.0;
   double mad = 0.0;  // median absolute deviation
};

SummaryStats summary_stats(std::span<const double> values);

}  // namespace blockbal
