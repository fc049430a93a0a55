#include "blockbal/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockbal {

EstimatorCoefficients EstimatorCoefficients::builtin_profile() {
   EstimatorCoefficients c;
   c.lbm = {9.99e-06, 1.57e-04, -8.23e-02};
   c.bh = {6.65e-06, 7.06e-04, -1.09e-01};
   c.coup1 = {3.08e-06, 2.42e-07, 1.41e-02, 2.78e-02, -1.40e-01};
   c.coup2 = {5.99e-06, 3.90e-06, -8.80e-03, 2.51e-02, -1.30e-01};
   c.rb = {1.16e-06, 9.62e-04, 2.75e-04, 1.48e-03, 1.88e-02};
   return c;
}

bool EstimatorCoefficients::finite() const {
   auto ok = [](const auto& arr) {
      return std::all_of(arr.begin(), arr.end(), [](double v) { return std::isfinite(v); });
   };
   return ok(lbm) && ok(bh) && ok(coup1) && ok(coup2) && ok(rb);
}

std::array<double, 3> lbm_features(const BlockQuantities& q) {
   return {static_cast<double>(q.cells), static_cast<double>(q.fluid_cells), 1.0};
}

std::array<double, 3> bh_features(const BlockQuantities& q) {
   return {static_cast<double>(q.cells), static_cast<double>(q.near_boundary_cells), 1.0};
}

std::array<double, 5> coup_features(const BlockQuantities& q) {
   return {static_cast<double>(q.cells), static_cast<double>(q.fluid_cells),
           static_cast<double>(q.local_particles), static_cast<double>(q.shadow_particles), 1.0};
}

std::array<double, 5> rb_features(const BlockQuantities& q) {
   const double s = static_cast<double>(q.sub_cycles);
   const double p = static_cast<double>(q.local_particles + q.shadow_particles);
   return {s * p * p, s * static_cast<double>(q.local_particles),
           s * static_cast<double>(q.shadow_particles), s * static_cast<double>(q.contacts), s};
}

namespace {

template <std::size_t N>
double dot(const std::array<double, N>& f, const std::array<double, N>& c) {
   double acc = 0.0;
   for (std::size_t i = 0; i < N; ++i)
      acc += f[i] * c[i];
   return acc;
}

}  // namespace

double wl_lbm(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return dot(lbm_features(q), c.lbm);
}

double wl_bh(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return dot(bh_features(q), c.bh);
}

double wl_coup1(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return dot(coup_features(q), c.coup1);
}

double wl_coup2(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return dot(coup_features(q), c.coup2);
}

double wl_rb(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return dot(rb_features(q), c.rb);
}

double wl_total(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return wl_lbm(q, c) + wl_bh(q, c) + wl_coup1(q, c) + wl_coup2(q, c) + wl_rb(q, c);
}

namespace {

// Column-scaled minimal-norm least squares. Scaling keeps the raw count
// features (~1e5) and the intercept column on comparable footing.
template <std::size_t K, typename FeatureFn, typename TargetFn>
std::array<double, K> solve_part(std::span<const TimingSample> samples, FeatureFn features,
                                 TargetFn target, const char* part_name) {
   const auto n = static_cast<Eigen::Index>(samples.size());
   if (n < static_cast<Eigen::Index>(K))
      throw std::invalid_argument(std::string("too few samples to fit part '") + part_name +
                                  "': need " + std::to_string(K) + ", got " + std::to_string(n));

   Eigen::MatrixXd design(n, static_cast<Eigen::Index>(K));
   Eigen::VectorXd rhs(n);
   for (Eigen::Index r = 0; r < n; ++r) {
      const auto f = features(samples[static_cast<std::size_t>(r)].quantities);
      for (std::size_t c = 0; c < K; ++c)
         design(r, static_cast<Eigen::Index>(c)) = f[c];
      const double m = target(samples[static_cast<std::size_t>(r)]);
      if (!std::isfinite(m))
         throw std::invalid_argument(std::string("non-finite timing value in part '") + part_name +
                                     "'");
      rhs(r) = m;
   }

   Eigen::VectorXd scale(static_cast<Eigen::Index>(K));
   for (std::size_t c = 0; c < K; ++c) {
      const double norm = design.col(static_cast<Eigen::Index>(c)).norm();
      scale(static_cast<Eigen::Index>(c)) = norm > 0.0 ? norm : 1.0;
      design.col(static_cast<Eigen::Index>(c)) /= scale(static_cast<Eigen::Index>(c));
   }

   Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
   svd.setThreshold(1e-10);
   const Eigen::VectorXd solution = svd.solve(rhs);

   std::array<double, K> out{};
   for (std::size_t c = 0; c < K; ++c)
      out[c] = solution(static_cast<Eigen::Index>(c)) / scale(static_cast<Eigen::Index>(c));
   return out;
}

}  // namespace

EstimatorCoefficients fit_coefficients(std::span<const TimingSample> samples) {
   EstimatorCoefficients c;
   c.lbm = solve_part<3>(samples, lbm_features, [](const TimingSample& s) { return s.m_lbm; }, "lbm");
   c.bh = solve_part<3>(samples, bh_features, [](const TimingSample& s) { return s.m_bh; }, "bh");
   c.coup1 = solve_part<5>(samples, coup_features,
                           [](const TimingSample& s) { return s.m_coup1; }, "coup1");
   c.coup2 = solve_part<5>(samples, coup_features,
                           [](const TimingSample& s) { return s.m_coup2; }, "coup2");
   c.rb = solve_part<5>(samples, rb_features, [](const TimingSample& s) { return s.m_rb; }, "rb");
   return c;
}

RelativeErrors relative_errors(std::span<const TimingSample> samples,
                               const EstimatorCoefficients& c) {
   RelativeErrors e;
   const auto n = samples.size();
   for (auto* v : {&e.lbm, &e.bh, &e.coup1, &e.coup2, &e.rb, &e.total})
      v->reserve(n);
   for (const TimingSample& s : samples) {
      const double m_tot = s.total();
      if (!(m_tot > 0.0))
         throw std::invalid_argument("relative errors require a positive total runtime per sample");
      e.lbm.push_back((wl_lbm(s.quantities, c) - s.m_lbm) / m_tot);
      e.bh.push_back((wl_bh(s.quantities, c) - s.m_bh) / m_tot);
      e.coup1.push_back((wl_coup1(s.quantities, c) - s.m_coup1) / m_tot);
      e.coup2.push_back((wl_coup2(s.quantities, c) - s.m_coup2) / m_tot);
      e.rb.push_back((wl_rb(s.quantities, c) - s.m_rb) / m_tot);
      e.total.push_back((wl_total(s.quantities, c) - m_tot) / m_tot);
   }
   return e;
}

SummaryStats summary_stats(std::span<const double> values) {
   if (values.empty())
      throw std::invalid_argument("summary statistics of an empty list");
   auto median_of = [](std::vector<double>& v) {
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
   };
   std::vector<double> work(values.begin(), values.end());
   SummaryStats stats;
   stats.median = median_of(work);
   for (double& v : work)
      v = std::abs(v - stats.median);
   stats.mad = median_of(work);
   return stats;
}

}  // namespace blockbal
