#include <doctest.h>

#include <cmath>

#include "blockbal/estimator.hpp"
#include "blockbal/scenario.hpp"
#include "test_support.hpp"

using namespace blockbal;

namespace {

BlockQuantities quantities(std::int64_t c, std::int64_t f, std::int64_t b, std::int64_t pl,
                           std::int64_t ps, std::int64_t k, std::int64_t s) {
   BlockQuantities q;
   q.cells = c;
   q.fluid_cells = f;
   q.near_boundary_cells = b;
   q.local_particles = pl;
   q.shadow_particles = ps;
   q.contacts = k;
   q.sub_cycles = s;
   return q;
}

// Independent evaluation: spell out every term instead of reusing the
// feature helpers.
double oracle_lbm(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return c.lbm[0] * double(q.cells) + c.lbm[1] * double(q.fluid_cells) + c.lbm[2];
}
double oracle_bh(const BlockQuantities& q, const EstimatorCoefficients& c) {
   return c.bh[0] * double(q.cells) + c.bh[1] * double(q.near_boundary_cells) + c.bh[2];
}
double oracle_coup(const BlockQuantities& q, const std::array<double, 5>& a) {
   return a[0] * double(q.cells) + a[1] * double(q.fluid_cells) + a[2] * double(q.local_particles) +
          a[3] * double(q.shadow_particles) + a[4];
}
double oracle_rb(const BlockQuantities& q, const EstimatorCoefficients& c) {
   const double p = double(q.local_particles + q.shadow_particles);
   return double(q.sub_cycles) * (c.rb[0] * p * p + c.rb[1] * double(q.local_particles) +
                                  c.rb[2] * double(q.shadow_particles) +
                                  c.rb[3] * double(q.contacts) + c.rb[4]);
}

}  // namespace

TEST_CASE("part predictions match hand evaluation") {
   const auto c = EstimatorCoefficients::builtin_profile();

   const auto full = quantities(32768, 32768, 0, 0, 0, 0, 10);
   CHECK(wl_lbm(full, c) == doctest::Approx(5.38962832).epsilon(1e-12));
   CHECK(std::abs(wl_lbm(full, c) - 5.390) < 0.001);
   CHECK(wl_lbm(full, c) == doctest::Approx(oracle_lbm(full, c)));

   const auto empty = quantities(32768, 0, 0, 0, 0, 0, 10);
   CHECK(wl_lbm(empty, c) == doctest::Approx(0.24505232).epsilon(1e-12));

   CHECK(wl_bh(quantities(32768, 0, 0, 0, 0, 0, 10), c) == doctest::Approx(0.1089072).epsilon(1e-12));
   CHECK(wl_bh(quantities(32768, 0, 1000, 0, 0, 0, 10), c) ==
         doctest::Approx(0.8149072).epsilon(1e-12));

   const auto coupled = quantities(32768, 30000, 0, 5, 2, 0, 10);
   CHECK(wl_coup1(coupled, c) == doctest::Approx(oracle_coup(coupled, c.coup1)).epsilon(1e-12));
   CHECK(wl_coup1(coupled, c) == doctest::Approx(0.09428544).epsilon(1e-12));
   CHECK(wl_coup2(coupled, c) == doctest::Approx(oracle_coup(coupled, c.coup2)).epsilon(1e-12));
   CHECK(wl_coup2(coupled, c) == doctest::Approx(0.18948032).epsilon(1e-12));

   CHECK(wl_rb(quantities(0, 0, 0, 0, 0, 0, 10), c) == doctest::Approx(0.188).epsilon(1e-9));
   const auto contacts = quantities(0, 0, 0, 4, 2, 3, 10);
   CHECK(wl_rb(contacts, c) == doctest::Approx(oracle_rb(contacts, c)).epsilon(1e-12));
   CHECK(wl_rb(contacts, c) == doctest::Approx(0.2767976).epsilon(1e-12));
   CHECK(wl_rb(quantities(32768, 32768, 0, 9, 9, 9, 0), c) == 0.0);
}

TEST_CASE("zero coefficients predict zero") {
   const EstimatorCoefficients zero{};
   const auto q = quantities(32768, 20000, 500, 7, 3, 11, 10);
   CHECK(wl_lbm(q, zero) == 0.0);
   CHECK(wl_bh(q, zero) == 0.0);
   CHECK(wl_coup1(q, zero) == 0.0);
   CHECK(wl_coup2(q, zero) == 0.0);
   CHECK(wl_rb(q, zero) == 0.0);
   CHECK(wl_total(q, zero) == 0.0);
}

TEST_CASE("total workload decomposes into the five parts") {
   const auto c = EstimatorCoefficients::builtin_profile();
   const auto empty = quantities(32768, 0, 0, 0, 0, 0, 10);
   // 0.24505232 + 0.1089072 - 0.03907456 + 0.06628032 + 0.188
   CHECK(wl_total(empty, c) == doctest::Approx(0.56916528).epsilon(1e-12));

   testutil::Rng rng(7);
   for (int trial = 0; trial < 200; ++trial) {
      const auto q = quantities(rng.uniform_int(0, 262144), rng.uniform_int(0, 262144),
                                rng.uniform_int(0, 5000), rng.uniform_int(0, 50),
                                rng.uniform_int(0, 50), rng.uniform_int(0, 100),
                                rng.uniform_int(1, 20));
      const double parts = wl_lbm(q, c) + wl_bh(q, c) + wl_coup1(q, c) + wl_coup2(q, c) + wl_rb(q, c);
      CHECK(wl_total(q, c) == parts);  // identical floating point path
   }
}

TEST_CASE("workload functions are linear in the coefficients") {
   testutil::Rng rng(21);
   for (int trial = 0; trial < 100; ++trial) {
      EstimatorCoefficients c1, c2, sum;
      auto fill = [&](auto& a, auto& b, auto& s) {
         for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng.uniform(-1.0, 1.0);
            b[i] = rng.uniform(-1.0, 1.0);
            s[i] = a[i] + b[i];
         }
      };
      fill(c1.lbm, c2.lbm, sum.lbm);
      fill(c1.bh, c2.bh, sum.bh);
      fill(c1.coup1, c2.coup1, sum.coup1);
      fill(c1.coup2, c2.coup2, sum.coup2);
      fill(c1.rb, c2.rb, sum.rb);
      const auto q = quantities(rng.uniform_int(0, 1000), rng.uniform_int(0, 1000),
                                rng.uniform_int(0, 100), rng.uniform_int(0, 20),
                                rng.uniform_int(0, 20), rng.uniform_int(0, 40),
                                rng.uniform_int(1, 10));
      CHECK(wl_lbm(q, sum) == doctest::Approx(wl_lbm(q, c1) + wl_lbm(q, c2)).epsilon(1e-9));
      CHECK(wl_bh(q, sum) == doctest::Approx(wl_bh(q, c1) + wl_bh(q, c2)).epsilon(1e-9));
      CHECK(wl_coup1(q, sum) == doctest::Approx(wl_coup1(q, c1) + wl_coup1(q, c2)).epsilon(1e-9));
      CHECK(wl_coup2(q, sum) == doctest::Approx(wl_coup2(q, c1) + wl_coup2(q, c2)).epsilon(1e-9));
      CHECK(wl_rb(q, sum) == doctest::Approx(wl_rb(q, c1) + wl_rb(q, c2)).epsilon(1e-9));
   }
}

namespace {

// Quantities with enough spread (and two cell sizes) that every design is
// full rank and, under the reference profile, every part time is positive.
std::vector<BlockQuantities> spread_quantities(testutil::Rng& rng, int count) {
   std::vector<BlockQuantities> qs;
   qs.reserve(static_cast<std::size_t>(count));
   for (int i = 0; i < count; ++i) {
      const std::int64_t cells = (i % 2 == 0) ? 110592 : 262144;  // 48^3, 64^3
      const std::int64_t fluid = rng.uniform_int(cells / 2, cells);
      qs.push_back(quantities(cells, fluid, rng.uniform_int(0, 6000), rng.uniform_int(0, 40),
                              rng.uniform_int(0, 15), rng.uniform_int(0, 120),
                              10));
   }
   return qs;
}

}  // namespace

TEST_CASE("noiseless synthesize-then-fit recovers the reference profile") {
   testutil::Rng rng(3);
   const auto qs = spread_quantities(rng, 400);
   const auto truth = EstimatorCoefficients::builtin_profile();
   const auto samples = synthesize_timings(qs, truth, 0.0, 99);
   for (const TimingSample& s : samples)  // clamp must not fire in this setup
      CHECK(s.m_lbm * s.m_bh * s.m_coup1 * s.m_coup2 * s.m_rb > 0.0);

   const auto fitted = fit_coefficients(samples);
   auto compare = [](const auto& got, const auto& want) {
      for (std::size_t i = 0; i < got.size(); ++i)
         CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
   };
   compare(fitted.lbm, truth.lbm);
   compare(fitted.bh, truth.bh);
   compare(fitted.coup1, truth.coup1);
   compare(fitted.coup2, truth.coup2);
   compare(fitted.rb, truth.rb);

   const auto errors = relative_errors(samples, fitted);
   for (double e : errors.total)
      CHECK(std::abs(e) < 1e-6);
}

TEST_CASE("fit round trip on random positive coefficients") {
   testutil::Rng rng(11);
   for (int trial = 0; trial < 10; ++trial) {
      EstimatorCoefficients truth;
      auto fill = [&](auto& arr) {
         for (auto& v : arr)
            v = rng.uniform(1e-6, 1e-3);
      };
      fill(truth.lbm);
      fill(truth.bh);
      fill(truth.coup1);
      fill(truth.coup2);
      fill(truth.rb);
      const auto qs = spread_quantities(rng, 200);
      const auto samples = synthesize_timings(qs, truth, 0.0, 5 + trial);
      const auto fitted = fit_coefficients(samples);
      auto compare = [](const auto& got, const auto& want) {
         for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
      };
      compare(fitted.lbm, truth.lbm);
      compare(fitted.bh, truth.bh);
      compare(fitted.coup1, truth.coup1);
      compare(fitted.coup2, truth.coup2);
      compare(fitted.rb, truth.rb);
   }
}

TEST_CASE("fit is a least-squares optimum under coefficient perturbation") {
   testutil::Rng rng(13);
   const auto qs = spread_quantities(rng, 300);
   const auto truth = EstimatorCoefficients::builtin_profile();
   const auto samples = synthesize_timings(qs, truth, 0.05, 42);
   const auto fitted = fit_coefficients(samples);

   auto ssr = [&](const EstimatorCoefficients& c) {
      double acc = 0.0;
      for (const TimingSample& s : samples) {
         acc += std::pow(wl_lbm(s.quantities, c) - s.m_lbm, 2);
         acc += std::pow(wl_bh(s.quantities, c) - s.m_bh, 2);
         acc += std::pow(wl_coup1(s.quantities, c) - s.m_coup1, 2);
         acc += std::pow(wl_coup2(s.quantities, c) - s.m_coup2, 2);
         acc += std::pow(wl_rb(s.quantities, c) - s.m_rb, 2);
      }
      return acc;
   };

   const double base = ssr(fitted);
   auto perturb_all = [&](auto member) {
      for (int sign : {-1, 1}) {
         EstimatorCoefficients p = fitted;
         auto& arr = p.*member;
         for (std::size_t i = 0; i < arr.size(); ++i) {
            EstimatorCoefficients one = fitted;
            (one.*member)[i] += sign * 1e-3;
            CHECK(ssr(one) >= base - 1e-9 * std::max(1.0, base));
         }
         (void)arr;
      }
   };
   perturb_all(&EstimatorCoefficients::lbm);
   perturb_all(&EstimatorCoefficients::bh);
   perturb_all(&EstimatorCoefficients::coup1);
   perturb_all(&EstimatorCoefficients::coup2);
   perturb_all(&EstimatorCoefficients::rb);
}

TEST_CASE("all-zero timings fit to all-zero coefficients") {
   testutil::Rng rng(17);
   const auto qs = spread_quantities(rng, 50);
   std::vector<TimingSample> samples;
   for (const auto& q : qs) {
      TimingSample s;
      s.quantities = q;
      samples.push_back(s);
   }
   const auto fitted = fit_coefficients(samples);
   auto all_zero = [](const auto& arr) {
      for (double v : arr)
         CHECK(std::abs(v) < 1e-12);
   };
   all_zero(fitted.lbm);
   all_zero(fitted.bh);
   all_zero(fitted.coup1);
   all_zero(fitted.coup2);
   all_zero(fitted.rb);
}

TEST_CASE("rank-deficient design still predicts the training set") {
   // Constant cell count makes the C column collinear with the intercept.
   testutil::Rng rng(19);
   std::vector<BlockQuantities> qs;
   for (int i = 0; i < 60; ++i)
      qs.push_back(quantities(32768, rng.uniform_int(0, 32768), rng.uniform_int(0, 3000),
                              rng.uniform_int(0, 30), rng.uniform_int(0, 10),
                              rng.uniform_int(0, 60), 10));
   EstimatorCoefficients truth;
   truth.lbm = {1e-5, 2e-4, 0.5};
   truth.bh = {1e-5, 1e-4, 0.25};
   truth.coup1 = {1e-5, 1e-6, 1e-2, 2e-2, 0.125};
   truth.coup2 = {1e-5, 1e-6, 1e-2, 2e-2, 0.125};
   truth.rb = {1e-6, 1e-4, 1e-4, 1e-3, 1e-2};
   const auto samples = synthesize_timings(qs, truth, 0.0, 23);
   const auto fitted = fit_coefficients(samples);
   for (const TimingSample& s : samples) {
      CHECK(wl_lbm(s.quantities, fitted) == doctest::Approx(s.m_lbm).epsilon(1e-9));
      CHECK(wl_bh(s.quantities, fitted) == doctest::Approx(s.m_bh).epsilon(1e-9));
      CHECK(wl_coup1(s.quantities, fitted) == doctest::Approx(s.m_coup1).epsilon(1e-9));
      CHECK(wl_coup2(s.quantities, fitted) == doctest::Approx(s.m_coup2).epsilon(1e-9));
      CHECK(wl_rb(s.quantities, fitted) == doctest::Approx(s.m_rb).epsilon(1e-9));
   }
}

TEST_CASE("fit input validation") {
   std::vector<TimingSample> few(4);
   for (auto& s : few)
      s.quantities = quantities(100, 50, 5, 1, 1, 1, 10);
   CHECK_THROWS_WITH_AS(fit_coefficients(few), doctest::Contains("coup1"), std::invalid_argument);

   std::vector<TimingSample> two(2);
   CHECK_THROWS_WITH_AS(fit_coefficients(two), doctest::Contains("lbm"), std::invalid_argument);

   std::vector<TimingSample> bad(6);
   for (auto& s : bad)
      s.quantities = quantities(100, 50, 5, 1, 1, 1, 10);
   bad[3].m_bh = std::nan("");
   CHECK_THROWS_AS(fit_coefficients(bad), std::invalid_argument);
}

TEST_CASE("relative errors definition") {
   // Zero quantities make every prediction equal its intercept; intercepts
   // are arranged so WL_X = m_X + 0.1 * m_tot.
   BlockQuantities q = quantities(0, 0, 0, 0, 0, 0, 1);
   TimingSample s;
   s.quantities = q;
   s.m_lbm = s.m_bh = s.m_coup1 = s.m_coup2 = s.m_rb = 1.0;  // m_tot = 5
   EstimatorCoefficients c{};
   c.lbm[2] = c.bh[2] = c.coup1[4] = c.coup2[4] = c.rb[4] = 1.5;
   const std::vector<TimingSample> samples{s};
   const auto errors = relative_errors(samples, c);
   CHECK(errors.lbm[0] == doctest::Approx(0.1));
   CHECK(errors.bh[0] == doctest::Approx(0.1));
   CHECK(errors.coup1[0] == doctest::Approx(0.1));
   CHECK(errors.coup2[0] == doctest::Approx(0.1));
   CHECK(errors.rb[0] == doctest::Approx(0.1));
   CHECK(errors.total[0] == doctest::Approx(0.5));

   // Perfect prediction
   EstimatorCoefficients exact{};
   exact.lbm[2] = exact.bh[2] = exact.coup1[4] = exact.coup2[4] = exact.rb[4] = 1.0;
   const auto zero_errors = relative_errors(samples, exact);
   CHECK(zero_errors.lbm[0] == doctest::Approx(0.0));
   CHECK(zero_errors.total[0] == doctest::Approx(0.0));

   TimingSample degenerate;
   degenerate.quantities = q;
   CHECK_THROWS_AS(relative_errors(std::vector<TimingSample>{degenerate}, c),
                   std::invalid_argument);
}

TEST_CASE("summary statistics") {
   CHECK(summary_stats(std::vector<double>{1, 2, 3}).median == doctest::Approx(2));
   CHECK(summary_stats(std::vector<double>{1, 2, 3}).mad == doctest::Approx(1));
   CHECK(summary_stats(std::vector<double>{5}).median == doctest::Approx(5));
   CHECK(summary_stats(std::vector<double>{5}).mad == doctest::Approx(0));
   CHECK(summary_stats(std::vector<double>{1, 1, 1, 9}).median == doctest::Approx(1));
   CHECK(summary_stats(std::vector<double>{1, 1, 1, 9}).mad == doctest::Approx(0));
   CHECK(summary_stats(std::vector<double>{1, 2, 3, 4}).median == doctest::Approx(2.5));
   CHECK(summary_stats(std::vector<double>{1, 2, 3, 4}).mad == doctest::Approx(1.0));
   CHECK_THROWS_AS(summary_stats(std::vector<double>{}), std::invalid_argument);
}
