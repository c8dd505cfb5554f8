#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynaedit/error.hpp"
#include "dynaedit/flowmodel/mixture.hpp"
#include "dynaedit/flowmodel/sampler.hpp"
#include "dynaedit/flowmodel/time_grid.hpp"
#include "dynaedit/flowmodel/velocity_field.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

using namespace dynaedit;

namespace {

GaussianComponent comp(double w, LatentField mean, double var) {
  std::vector<double> v(mean.size(), var);
  return {w, std::move(mean), std::move(v)};
}

ConditionedMixture standard_normal(std::size_t frames, std::size_t dim, const std::string& id = "prior") {
  return ConditionedMixture(id, {comp(1.0, LatentField(frames, dim), 1.0)});
}

// 1-D, two components: E[X0 | X_t = x] by trapezoidal quadrature over x0.
double quadrature_posterior(double w1, double m1, double v1, double w2, double m2, double v2, double x,
                            double t) {
  auto normal = [](double z, double m, double v) {
    return std::exp(-0.5 * (z - m) * (z - m) / v) / std::sqrt(2.0 * std::numbers::pi * v);
  };
  const double lo = std::min(m1, m2) - 12.0, hi = std::max(m1, m2) + 12.0;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x0 = lo + h * i;
    const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
    const double p = (w1 * normal(x0, m1, v1) + w2 * normal(x0, m2, v2)) * normal(x, (1.0 - t) * x0, t * t);
    num += wt * x0 * p;
    den += wt * p;
  }
  return num / den;
}

}  // namespace

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(ConditionedMixture("m", {}), Error);
  CHECK_THROWS_AS(ConditionedMixture("m", {comp(0.5, LatentField(1, 1), 1.0)}), Error);
  CHECK_THROWS_AS(ConditionedMixture("m", {comp(1.0, LatentField(1, 1), 1e-9)}), Error);
  CHECK_THROWS_AS(ConditionedMixture("m", {comp(0.5, LatentField(1, 1), 1.0), comp(0.5, LatentField(1, 2), 1.0)}),
                  Error);
  CHECK_NOTHROW(ConditionedMixture("m", {comp(0.5, LatentField(1, 1), 1.0), comp(0.5, LatentField(1, 1), 1.0)}));
}

TEST_CASE("first-frame conditioning at the mode of a single component") {
  const LatentField mean(2, 2, {0.3, -0.2, 1.0, 2.0});
  const ConditionedMixture mix("m", {comp(1.0, mean, 0.5)});
  const LatentField f(1, 2, {0.3, -0.2});
  const ConditionedMixture c = condition_on_first_frame(mix, f);
  REQUIRE(c.components().size() == 1);
  const auto& k = c.components().front();
  CHECK(k.weight == 1.0);
  CHECK(k.mean == mean);
  CHECK(k.var[0] == kMinVariance);
  CHECK(k.var[1] == kMinVariance);
  CHECK(k.var[2] == 0.5);
  CHECK(k.var[3] == 0.5);
}

TEST_CASE("first-frame conditioning reweights by the frame-0 density ratio") {
  const ConditionedMixture mix("m", {comp(0.5, LatentField(2, 1, {-1.0, 5.0}), 1.0),
                                     comp(0.5, LatentField(2, 1, {1.0, -5.0}), 1.0)});
  const ConditionedMixture c = condition_on_first_frame(mix, LatentField(1, 1, {1.0}));
  // N(1; -1, 1) / N(1; 1, 1) = exp(-2)
  const double expect_plus = 1.0 / (1.0 + std::exp(-2.0));
  CHECK(c.components()[1].weight == doctest::Approx(expect_plus).epsilon(1e-14));
  CHECK(c.components()[0].weight == doctest::Approx(1.0 - expect_plus).epsilon(1e-13));
  CHECK(c.components()[1].mean.at(0, 0) == 1.0);
  CHECK(c.components()[1].mean.at(1, 0) == -5.0);

  const ConditionedMixture sym = condition_on_first_frame(mix, LatentField(1, 1, {0.0}));
  CHECK(sym.components()[0].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sym.components()[1].weight == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("first-frame conditioning far from every component is degenerate") {
  const ConditionedMixture mix("m", {comp(1.0, LatentField(2, 1), 1.0)});
  try {
    (void)condition_on_first_frame(mix, LatentField(1, 1, {1e160}));
    FAIL("expected degenerate_condition");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::degenerate_condition);
  }
  CHECK_THROWS_AS(condition_on_first_frame(mix, LatentField(1, 2)), Error);
}

TEST_CASE("posterior mean of a standard normal") {
  // (1 - t) / ((1 - t)^2 + t^2) * x at t = 0.5, x = 2 is 0.5 / 0.5 * 2 = 2.
  const ConditionedMixture mix = standard_normal(1, 1);
  const LatentField m = posterior_x0_mean(mix, LatentField(1, 1, {2.0}), 0.5);
  CHECK(m[0] == doctest::Approx(2.0).epsilon(1e-15));
  const LatentField m3 = posterior_x0_mean(mix, LatentField(1, 1, {2.0}), 0.25);
  CHECK(m3[0] == doctest::Approx(0.75 / 0.625 * 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(posterior_x0_mean(mix, LatentField(1, 1), 0.0), Error);
  CHECK_THROWS_AS(posterior_x0_mean(mix, LatentField(1, 1), 1.5), Error);
}

TEST_CASE("posterior mean at pure noise is the prior mean") {
  const ConditionedMixture mix("m", {comp(0.25, LatentField(1, 2, {3.0, 1.0}), 0.2),
                                     comp(0.75, LatentField(1, 2, {-1.0, 2.0}), 0.7)});
  const LatentField m = posterior_x0_mean(mix, LatentField(1, 2, {0.4, -7.0}), 1.0);
  CHECK(m[0] == doctest::Approx(0.25 * 3.0 + 0.75 * -1.0).epsilon(1e-14));
  CHECK(m[1] == doctest::Approx(0.25 * 1.0 + 0.75 * 2.0).epsilon(1e-14));
}

TEST_CASE("posterior mean matches quadrature in 1-D") {
  const double w1 = 0.3, m1 = -1.5, v1 = 0.2, w2 = 0.7, m2 = 2.0, v2 = 0.6;
  const ConditionedMixture mix("m", {comp(w1, LatentField(1, 1, {m1}), v1), comp(w2, LatentField(1, 1, {m2}), v2)});
  for (double t : {0.05, 0.3, 0.5, 0.8, 0.97}) {
    for (double x : {-2.0, -0.3, 0.0, 0.9, 2.5}) {
      const double oracle = quadrature_posterior(w1, m1, v1, w2, m2, v2, x, t);
      const double got = posterior_x0_mean(mix, LatentField(1, 1, {x}), t)[0];
      CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("interpolant log density integrates to one") {
  const ConditionedMixture mix("m", {comp(0.4, LatentField(1, 1, {-1.0}), 0.3), comp(0.6, LatentField(1, 1, {2.0}), 0.1)});
  const double t = 0.35;
  double total = 0.0;
  const double h = 1e-3;
  for (double x = -15.0; x <= 15.0; x += h) total += std::exp(interpolant_log_density(mix, LatentField(1, 1, {x}), t)) * h;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single Gaussian velocity has the affine closed form") {
  const LatentField mu(1, 3, {0.5, -1.0, 2.0});
  const ConditionedMixture mix("m", {comp(1.0, mu, 1.0)});
  for (double t : {0.1, 0.5, 0.9}) {
    const LatentField x(1, 3, {0.2, 0.7, -0.4});
    const LatentField v = mixture_velocity(mix, x, t);
    const double s2 = (1 - t) * (1 - t) + t * t;
    for (std::size_t k = 0; k < 3; ++k) {
      const double post = mu[k] + (1 - t) / s2 * (x[k] - (1 - t) * mu[k]);
      CHECK(v[k] == doctest::Approx((x[k] - post) / t).epsilon(1e-13));
    }
  }
}

TEST_CASE("data equal to the prior gives the scaled-identity velocity") {
  const ConditionedMixture mix = standard_normal(2, 2);
  const LatentField x(2, 2, {1.0, -2.0, 0.5, 3.0});
  for (double t : {0.2, 0.5, 0.7}) {
    const LatentField v = mixture_velocity(mix, x, t);
    const double c = (2 * t - 1) / ((1 - t) * (1 - t) + t * t);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(v[i] == doctest::Approx(c * x[i]).epsilon(1e-13));
  }
}

TEST_CASE("velocity equals (x - posterior mean) / t") {
  const ConditionedMixture mix("m", {comp(0.5, LatentField(1, 2, {1.0, 1.0}), 0.1), comp(0.5, LatentField(1, 2, {-1.0, 0.0}), 0.3)});
  RngStream s{11, 0, 0};
  for (int i = 0; i < 50; ++i) {
    const LatentField x = gaussian(s, 1, 2);
    const double t = 0.02 + 0.96 * next_uniform(s);
    const LatentField v = mixture_velocity(mix, x, t);
    const LatentField p = posterior_x0_mean(mix, x, t);
    for (std::size_t k = 0; k < 2; ++k) REQUIRE(std::abs(v[k] - (x[k] - p[k]) / t) < 1e-12);
  }
}

TEST_CASE("classifier-free guidance identities") {
  MixtureRegistry reg;
  reg.add(ConditionedMixture("a", {comp(1.0, LatentField(1, 2, {1.0, 0.0}), 0.2)}));
  reg.add(ConditionedMixture("b", {comp(1.0, LatentField(1, 2, {-1.0, 2.0}), 0.4)}), 3.0);
  const Condition a{"a", std::nullopt};
  const LatentField x(1, 2, {0.3, 0.1});
  const double t = 0.6;
  const LatentField plain = mixture_velocity(reg.get("a"), x, t);
  const LatentField uncond = mixture_velocity(reg.unconditional(), x, t);
  CHECK(bitwise_equal(reg.field(a, 1.0)(x, t), plain));
  const LatentField g0 = reg.field(a, 0.0)(x, t);
  for (std::size_t k = 0; k < 2; ++k) CHECK(g0[k] == doctest::Approx(uncond[k]).epsilon(1e-14));
  const LatentField g2 = reg.field(a, 2.0)(x, t);
  const LatentField g1 = reg.field(a, 1.0)(x, t);
  for (std::size_t k = 0; k < 2; ++k) CHECK((g2[k] - g1[k]) == doctest::Approx(g1[k] - g0[k]).epsilon(1e-12));
  // Prior weights 1 : 3 of the two labels.
  const ConditionedMixture unc = reg.unconditional();
  const auto& comps = unc.components();
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].weight == doctest::Approx(0.25));
  VelocityQuery q{x, t, a, 1.0};
  CHECK(bitwise_equal(velocity(q, reg), plain));
  q.condition.prompt = "missing";
  try {
    (void)velocity(q, reg);
    FAIL("expected unknown_condition");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::unknown_condition);
  }
}

TEST_CASE("time grid") {
  const auto g = make_time_grid(4);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == 0.5);
  const auto s = make_time_grid(10, 3.0);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  CHECK(shift_time(0.5, 3.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(make_time_grid(0), Error);
}

TEST_CASE("sampling a single Gaussian reproduces its moments") {
  const ConditionedMixture mix("m", {comp(1.0, LatentField(1, 2, {1.0, -2.0}), 0.25)});
  RngStream s{21, 0, 0};
  const int n = 2000;
  double m[2] = {0, 0}, q[2] = {0, 0};
  for (int i = 0; i < n; ++i) {
    const LatentField z = sample(mix, 200, s);
    for (int k = 0; k < 2; ++k) {
      m[k] += z[k];
      q[k] += z[k] * z[k];
    }
  }
  const double mu[2] = {1.0, -2.0};
  for (int k = 0; k < 2; ++k) {
    m[k] /= n;
    const double var = q[k] / n - m[k] * m[k];
    CHECK(std::abs(m[k] - mu[k]) < 3.0 * std::sqrt(0.25 / n));
    CHECK(std::abs(var / 0.25 - 1.0) < 0.1);
  }
}

TEST_CASE("first-frame conditioned samples reproduce the pinned frame") {
  const ConditionedMixture mix("m", {comp(0.5, LatentField(2, 1, {0.0, 1.0}), 0.5), comp(0.5, LatentField(2, 1, {1.0, -1.0}), 0.5)});
  const ConditionedMixture c = condition_on_first_frame(mix, LatentField(1, 1, {0.4}));
  // The pinned coordinate moves on a straight line, which Euler follows
  // exactly; what remains is the t_min share of the starting noise.
  double err_coarse = 0.0, err_fine = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream a{seed, 0, 0};
    RngStream b{seed, 0, 0};
    err_coarse += std::abs(sample(c, 20, a)[0] - 0.4);
    err_fine += std::abs(sample(c, 200, b)[0] - 0.4);
  }
  CHECK(err_coarse / 50 < 2.0 * kTMin);
  CHECK(err_fine / 50 < 2.0 * kTMin);
}

TEST_CASE("exact draws follow the mixture weights") {
  const ConditionedMixture mix("m", {comp(0.2, LatentField(1, 1, {-5.0}), 0.1), comp(0.8, LatentField(1, 1, {5.0}), 0.1)});
  RngStream s{4, 4, 0};
  int low = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) low += draw(mix, s)[0] < 0.0;
  CHECK(std::abs(low - 0.2 * n) < 3.0 * std::sqrt(n * 0.2 * 0.8));
}

TEST_CASE("zero field") {
  const LatentField x(2, 2, {1, 2, 3, 4});
  CHECK(VelocityField::zero()(x, 0.3) == LatentField(2, 2));
}
