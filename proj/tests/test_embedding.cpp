#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "rotrate/embedding.hpp"
#include "rotrate/errors.hpp"

using namespace rotrate;

namespace {

EmbeddingConfig circle_config(std::size_t k, bool check = true) {
  EmbeddingConfig c;
  c.K = k;
  c.check_embedding_dimension = check;
  return c;
}

double flower_separation(std::size_t k, std::size_t n) {
  const auto phi = fixture::golden_angles(flower_curve(), fixture::kFlowerP, n);
  const auto cloud = build_delay_cloud(phi, circle_config(k, false));
  const auto hats = oracle::curve_lift(flower_curve(), fixture::kFlowerP, fixture::kGolden,
                                       cloud.size());
  return estimate_separation(cloud, fixture::lift_from_hats(cloud.deltas, hats));
}

}  // namespace

TEST(DelayCloud, SmallExample) {
  const std::vector<double> obs{0.1, 0.2, 0.3, 0.4};
  const auto cloud = build_delay_cloud(obs, circle_config(2, false));
  ASSERT_EQ(cloud.size(), 3u);
  EXPECT_EQ(cloud.width(), 2u);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_EQ(cloud.vector(n)[0], obs[n]);
    EXPECT_EQ(cloud.vector(n)[1], obs[n + 1]);
    EXPECT_NEAR(cloud.deltas[n], 0.1, 1e-15);
  }
}

TEST(DelayCloud, VectorsCopyObservationsExactly) {
  const auto phi = fixture::golden_angles(fish_curve(), fixture::kFishP, 500);
  const auto cloud = build_delay_cloud(phi, circle_config(7));
  ASSERT_EQ(cloud.size(), 500u - 7u + 1u);
  for (std::size_t n = 0; n < cloud.size(); ++n) {
    for (std::size_t j = 0; j < 7; ++j) ASSERT_EQ(cloud.vector(n)[j], phi[n + j]);
    ASSERT_EQ(cloud.deltas[n], mod1(phi[n + 1] - phi[n]));
  }
}

TEST(DelayCloud, PlanarLayout) {
  const auto pts = fixture::golden_points(flower_curve(), 50);
  std::vector<double> ang(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ang[i] = angle_from_reference(pts[i], fixture::kFlowerP);
  EmbeddingConfig c;
  c.K = 5;
  c.component_metric = ComponentMetric::euclidean;
  c.d_assumed = 2;
  const auto cloud = build_delay_cloud(pts, ang, c);
  EXPECT_EQ(cloud.D, 2u);
  EXPECT_EQ(cloud.width(), 10u);
  EXPECT_EQ(cloud.vector(3)[4], pts[5].x);
  EXPECT_EQ(cloud.vector(3)[5], pts[5].y);
  EXPECT_EQ(cloud.deltas[3], mod1(ang[4] - ang[3]));
}

TEST(DelayCloud, PureRotationDeltasConstant) {
  std::vector<double> phi(5000);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = oracle::orbit_frac(fixture::kGolden, static_cast<long long>(i), 0.123);
  }
  const auto cloud = build_delay_cloud(phi, circle_config(7));
  for (const double d : cloud.deltas) ASSERT_NEAR(d, fixture::kGolden, 1e-14);
}

TEST(DelayCloud, Errors) {
  const std::vector<double> obs{0.1, 0.2, 0.3};
  EXPECT_THROW(build_delay_cloud(obs, circle_config(3)), UsageError);
  // K*D = 2 < 2d + 1 = 3
  EXPECT_THROW(build_delay_cloud(std::vector<double>(10, 0.1), circle_config(2)),
               ConfigurationError);
  EmbeddingConfig c = circle_config(2);
  c.d_assumed = 2;
  c.component_metric = ComponentMetric::euclidean;
  const std::vector<PlanarPoint> pts(10, PlanarPoint{0, 1});
  const std::vector<double> ang(10, 0.25);
  // K*D = 4 < 5
  EXPECT_THROW(build_delay_cloud(pts, ang, c), ConfigurationError);
  EXPECT_THROW(build_delay_cloud(std::vector<double>{0.1, 1.2, 0.3, 0.4}, circle_config(1, false)),
               std::exception);
}

TEST(EmbeddedDistance, Examples) {
  const std::vector<double> u{0.3, 0.6};
  EXPECT_EQ(embedded_distance(u, u, ComponentMetric::circle), 0.0);
  EXPECT_NEAR(embedded_distance(std::vector<double>{0.95, 0.95}, std::vector<double>{0.05, 0.05},
                                ComponentMetric::circle),
              0.1414213562373095, 1e-14);
  EXPECT_DOUBLE_EQ(embedded_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4},
                                     ComponentMetric::euclidean),
                   5.0);
  EXPECT_THROW(embedded_distance(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2},
                                 ComponentMetric::circle),
               UsageError);
}

TEST(EmbeddedDistance, MetricOnRandomTriples) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto metric : {ComponentMetric::circle, ComponentMetric::euclidean}) {
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> a(6), b(6), c(6);
      for (int j = 0; j < 6; ++j) {
        a[j] = u(rng);
        b[j] = u(rng);
        c[j] = u(rng);
      }
      const double ab = embedded_distance(a, b, metric);
      ASSERT_EQ(ab, embedded_distance(b, a, metric));
      ASSERT_LE(embedded_distance(a, c, metric),
                ab + embedded_distance(b, c, metric) + 1e-12);
    }
  }
}

TEST(EmbeddedDistance, GrowsWithK) {
  const auto phi = fixture::golden_angles(flower_curve(), fixture::kFlowerP, 400);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> pick(0, 300);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t a = pick(rng), b = pick(rng);
    double prev = 0.0;
    for (std::size_t k = 1; k <= 9; ++k) {
      const auto cloud = build_delay_cloud(phi, circle_config(k, false));
      const double d = embedded_distance(cloud.vector(a), cloud.vector(b), ComponentMetric::circle);
      ASSERT_GE(d, prev);
      prev = d;
    }
  }
}

TEST(Separation, PureRotationIsOne) {
  std::vector<double> phi(2000);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = oracle::orbit_frac(fixture::kGolden, static_cast<long long>(i));
  }
  const auto cloud = build_delay_cloud(phi, circle_config(7));
  const std::vector<double> hats(cloud.deltas);
  EXPECT_NEAR(estimate_separation(cloud, fixture::lift_from_hats(cloud.deltas, hats)), 1.0, 1e-12);
}

TEST(Separation, FishRegressionAndSubsampling) {
  const auto phi = fixture::golden_angles(fish_curve(), fixture::kFishP, 10000);
  const auto cloud = build_delay_cloud(phi, circle_config(7));
  const auto hats = oracle::curve_lift(fish_curve(), fixture::kFishP, fixture::kGolden, cloud.size());
  const auto lift = fixture::lift_from_hats(cloud.deltas, hats);
  const double full = estimate_separation(cloud, lift);
  EXPECT_GT(full, 0.0);
  EXPECT_NEAR(full, 0.5386, 2e-3);
  const double sub = estimate_separation(cloud, lift, 1000);
  EXPECT_GE(sub, full);
  EXPECT_LT(sub - full, 1e-2);
}

TEST(Separation, FlowerGrowsWithK) {
  const double k1 = flower_separation(1, 10000);
  double prev = k1;
  std::vector<double> seen{k1};
  for (const std::size_t k : {3u, 5u, 7u, 9u}) {
    const double s = flower_separation(k, 10000);
    seen.push_back(s);
    EXPECT_GE(s, prev) << "K=" << k;
    prev = s;
  }
  // One delay coordinate leaves the lifted copies nearly touching.
  EXPECT_LT(k1, 0.02);
  EXPECT_GT(seen.back(), 5 * k1);
}

TEST(Separation, RequiresCompleteLift) {
  const auto phi = fixture::golden_angles(fish_curve(), fixture::kFishP, 100);
  const auto cloud = build_delay_cloud(phi, circle_config(7));
  LiftedSeries partial(cloud.deltas);
  partial.offsets[0] = 0;
  EXPECT_THROW(estimate_separation(cloud, partial), UsageError);
}
