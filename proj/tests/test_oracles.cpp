// Copyright 2026 The ALEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "alem/oracles.hpp"

namespace orc = alem::oracle;
using alem::Rng;

namespace {

const orc::OracleKind kKinds[] = {orc::OracleKind::SpectrumMix, orc::OracleKind::PowerCurve};

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

std::vector<double> random_input(std::size_t d, Rng& rng) {
  std::vector<double> x(d);
  for (double& v : x) v = rng.uniform();
  return x;
}

}  // namespace

TEST(Oracle, Dimensions) {
  EXPECT_EQ(orc::Oracle({orc::OracleKind::SpectrumMix}).input_dim(), 10u);
  EXPECT_EQ(orc::Oracle({orc::OracleKind::PowerCurve}).input_dim(), 5u);
  EXPECT_EQ(orc::Oracle({orc::OracleKind::PowerCurve}).output_dim(), 128u);
}

TEST(Oracle, Deterministic) {
  Rng rng(1);
  for (auto k : kKinds) {
    const orc::Oracle a({k}), b({k});
    const auto x = random_input(a.input_dim(), rng);
    EXPECT_EQ(a.query(x), a.query(x));
    EXPECT_EQ(a.query(x), b.query(x));
  }
}

TEST(Oracle, CoefficientSeedChangesOutputs) {
  const std::vector<double> x(5, 0.3);
  EXPECT_NE(orc::Oracle({orc::OracleKind::PowerCurve, 128, 0}).query(x),
            orc::Oracle({orc::OracleKind::PowerCurve, 128, 1}).query(x));
}

// Values re-derived from the dumped coefficients by oracle_closed_form.py.
TEST(Oracle, MidpointGoldenValues) {
  const std::vector<std::pair<int, double>> spectrum = {
      {0, 0.15020127757674148}, {17, 0.38133788571767302}, {42, 0.12939409164167867},
      {64, 0.68876501233383347}, {101, 0.66504610008959353}, {127, 0.055383193752457843}};
  const std::vector<std::pair<int, double>> power = {
      {0, 1.1475978920310905}, {17, 0.44251840645835244}, {42, 0.31578768750910352},
      {64, 0.20603395867242602}, {101, 0.1736821660668241}, {127, 0.10746893561905027}};
  const auto ys = orc::Oracle({orc::OracleKind::SpectrumMix}).query(std::vector<double>(10, 0.5));
  const auto yp = orc::Oracle({orc::OracleKind::PowerCurve}).query(std::vector<double>(5, 0.5));
  for (auto [j, v] : spectrum) EXPECT_NEAR(ys[j], v, 1e-12) << j;
  for (auto [j, v] : power) EXPECT_NEAR(yp[j], v, 1e-12) << j;
}

TEST(Oracle, OutputsWithinBound) {
  Rng rng(2);
  for (auto k : kKinds) {
    const orc::Oracle o({k});
    for (int t = 0; t < 2000; ++t) {
      for (double v : o.query(random_input(o.input_dim(), rng))) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, o.output_bound());
      }
    }
  }
}

TEST(Oracle, BoundHoldsAtCorners) {
  for (auto k : kKinds) {
    const orc::Oracle o({k});
    const std::size_t d = o.input_dim();
    for (std::uint64_t mask = 0; mask < (1u << d); ++mask) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = (mask >> i) & 1 ? 1.0 : 0.0;
      for (double v : o.query(x)) ASSERT_LE(v, o.output_bound());
    }
  }
}

TEST(Oracle, ParameterMapsStayInRange) {
  Rng rng(3);
  for (auto k : kKinds) {
    const orc::Oracle o({k});
    for (const auto& m : o.parameter_maps()) {
      double s = 0.0;
      for (double w : m.weights) {
        EXPECT_GE(w, 0.0);
        s += w;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
      for (int t = 0; t < 100; ++t) {
        const double v = m(random_input(o.input_dim(), rng));
        EXPECT_GE(v, m.lo);
        EXPECT_LE(v, m.hi);
      }
    }
  }
}

TEST(Oracle, SmallPerturbationWithinLipschitzConstant) {
  Rng rng(4);
  for (auto k : kKinds) {
    const orc::Oracle o({k});
    const double K = o.lipschitz_bound();
    for (int t = 0; t < 200; ++t) {
      auto x = random_input(o.input_dim(), rng);
      auto xt = x;
      const std::size_t c = rng.below(x.size());
      xt[c] = x[c] < 0.5 ? x[c] + 1e-6 : x[c] - 1e-6;
      ASSERT_LE(l1(o.query(x), o.query(xt)), K * 1e-6 * (1 + 1e-9));
    }
  }
}

TEST(Oracle, FiniteDifferenceLipschitzOverRandomPairs) {
  Rng rng(5);
  for (auto k : kKinds) {
    const orc::Oracle o({k});
    const double K = o.lipschitz_bound();
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const auto x = random_input(o.input_dim(), rng);
      auto xt = x;
      // Mix of near and far pairs.
      const double scale = t % 2 ? 1e-3 : 1.0;
      for (double& v : xt) v = std::clamp(v + scale * rng.uniform(-1, 1), 0.0, 1.0);
      const double dx = l1(x, xt);
      if (dx == 0.0) continue;
      worst = std::max(worst, l1(o.query(x), o.query(xt)) / dx);
    }
    EXPECT_LE(worst, K) << orc::kind_name(k);
    EXPECT_GT(worst, 0.0);
  }
}

TEST(Oracle, DomainErrors) {
  const orc::Oracle o({orc::OracleKind::PowerCurve});
  EXPECT_THROW(o.query(std::vector<double>{0.5, 0.5, 0.5, 0.5}), orc::DomainError);
  EXPECT_THROW(o.query(std::vector<double>{0.5, 0.5, 1.5, 0.5, 0.5}), orc::DomainError);
  EXPECT_THROW(o.query(std::vector<double>{0.5, -0.1, 0.5, 0.5, 0.5}), orc::DomainError);
  EXPECT_THROW(o.query(std::vector<double>{0.5, std::nan(""), 0.5, 0.5, 0.5}), orc::DomainError);
  EXPECT_NO_THROW(o.query(std::vector<double>{0.0, 1.0, 0.0, 1.0, 0.0}));
}

TEST(Oracle, NoiseIsDeterministicAndOptional) {
  const std::vector<double> x(5, 0.4);
  const orc::Oracle clean({orc::OracleKind::PowerCurve}), noisy({orc::OracleKind::PowerCurve, 128, 0, 0.01});
  EXPECT_EQ(noisy.query(x), noisy.query(x));
  EXPECT_NE(noisy.query(x), clean.query(x));
  EXPECT_LT(l1(noisy.query(x), clean.query(x)) / 128.0, 0.05);
}

TEST(Oracle, ParseKind) {
  EXPECT_EQ(orc::parse_kind("spectrum-mix"), orc::OracleKind::SpectrumMix);
  EXPECT_EQ(orc::parse_kind("PowerCurve"), orc::OracleKind::PowerCurve);
  EXPECT_THROW(orc::parse_kind("halo"), std::invalid_argument);
}

TEST(Oracle, CoefficientDumpMentionsEveryMap) {
  const orc::Oracle o({orc::OracleKind::SpectrumMix});
  const auto dump = o.dump_coefficients();
  for (const auto& m : o.parameter_maps()) EXPECT_NE(dump.find("[" + m.name + "]"), std::string::npos);
}

TEST(SamplePool, Basics) {
  EXPECT_THROW(orc::sample_pool(5, 0, 1), std::invalid_argument);
  EXPECT_EQ(orc::sample_pool(5, 100, 7), orc::sample_pool(5, 100, 7));
  EXPECT_NE(orc::sample_pool(5, 100, 7), orc::sample_pool(5, 100, 8));
}

TEST(SamplePool, HaloScaleUniform) {
  const auto pool = orc::sample_pool(orc::Oracle({orc::OracleKind::PowerCurve}), 50000, 0);
  EXPECT_EQ(pool.rows, 50000u);
  EXPECT_EQ(pool.cols, 5u);
  double s = 0.0;
  for (double v : pool.data) {
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    s += v;
  }
  // Mean of 250000 uniforms: sd 0.00058.
  EXPECT_NEAR(s / static_cast<double>(pool.data.size()), 0.5, 0.002);
}
