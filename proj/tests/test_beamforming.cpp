#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "wyner/beamforming.hpp"
#include "wyner/channel.hpp"
#include "wyner/errors.hpp"

using namespace wyner;
using testing_helpers::random_cvec;
using testing_helpers::to_cvec;
using testing_helpers::to_vec;

namespace {

void expect_same_line(const CVec& a, const CVec& b, double tol) {
  EXPECT_NEAR(oracle::phase_free_overlap(to_vec(a), to_vec(b)), 1.0, tol);
}

double gain(const CVec& h, const Beamformer& f) { return std::norm(bilinear(h, f.vector())); }

}  // namespace

TEST(Beamformer, UnitNormAndPhase) {
  oracle::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Beamformer f(random_cvec(rng, 3));
    EXPECT_NEAR(f.vector().norm(), 1.0, 1e-12);
    EXPECT_GT(f.vector()[0].real(), 0.0);
    EXPECT_EQ(f.vector()[0].imag(), 0.0);
  }
}

TEST(Ebf, Examples) {
  const auto f = ebf(CVec{{1, 0}, {0, 0}});
  EXPECT_EQ(f.vector()[0], cplx(1, 0));
  EXPECT_EQ(f.vector()[1], cplx(0, 0));
  const CVec h{{0, 0}, {0, 2}};
  EXPECT_NEAR(std::abs(bilinear(h, ebf(h).vector())), 2.0, 1e-15);
  EXPECT_THROW(ebf(CVec(2)), DegenerateChannel);
}

TEST(Ebf, BeatsRandomDirections) {
  oracle::Rng rng(2);
  const CVec h = random_cvec(rng, 4);
  const double best = gain(h, ebf(h));
  for (int i = 0; i < 10000; ++i) EXPECT_LE(gain(h, Beamformer(to_cvec(rng.unit(4)))), best * (1 + 1e-12));
}

TEST(Zf, Examples) {
  const auto f = zf(CVec{{1, 0}, {0, 0}}, CVec{{0, 0}, {1, 0}});
  EXPECT_NEAR(std::abs(f.vector()[0] - cplx(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.vector()[1]), 0.0, 1e-15);
  EXPECT_THROW(zf(CVec{{1, 0}, {0, 1}}, CVec{{0, 2}, {-2, 0}}), RankDeficient);
}

TEST(Zf, NullsInterferenceAndMatchesProjection) {
  oracle::Rng rng(3);
  for (std::size_t nt : {2u, 4u}) {
    for (int i = 0; i < 500; ++i) {
      const CVec h = random_cvec(rng, nt);
      const CVec g = random_cvec(rng, nt);
      const auto f = zf(h, g);
      EXPECT_LT(std::abs(bilinear(g, f.vector())), 1e-10);
      EXPECT_GT(std::abs(bilinear(h, f.vector())), 0.0);
      const auto proj = to_cvec(oracle::project_off(to_vec(h.conj()), to_vec(g)));
      expect_same_line(f.vector(), proj, 1e-10);
    }
  }
}

TEST(Gebf, ZeroInterferenceIsEbf) {
  oracle::Rng rng(4);
  const CVec h = random_cvec(rng, 4);
  const CVec g = random_cvec(rng, 4);
  const auto a = gebf(h, g, 0.0).vector();
  const auto b = ebf(h).vector();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-14);
}

TEST(Gebf, LargeInterferenceApproachesZf) {
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const CVec h = random_cvec(rng, 2);
    const CVec g = random_cvec(rng, 2);
    const auto f = gebf(h, g, 1e9);
    EXPECT_LE(std::abs(bilinear(g, f.vector())), 1e-4);
    expect_same_line(f.vector(), zf(h, g).vector(), 1e-6);
  }
}

TEST(Gebf, MaximizesSlnrOverEbfAndZf) {
  oracle::Rng rng(6);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t nt = i % 2 ? 2 : 4;
    const CVec h = random_cvec(rng, nt);
    const CVec g = random_cvec(rng, nt);
    const double rho = 10.0;
    const double q = slnr(h, g, rho, gebf(h, g, rho));
    EXPECT_GE(q * (1 + 1e-12), slnr(h, g, rho, ebf(h)));
    EXPECT_GE(q * (1 + 1e-12), slnr(h, g, rho, zf(h, g)));
  }
}

TEST(Sinr, ZeroAlphaWithEbf) {
  const Topology t(TopologyKind::Circular, 3);
  const auto ch = generate(t, 2, 8);
  const auto params = uniform_params(3, 7.0, 0.0, 0);
  const auto r = sinr(ch, plan_full_csi(Strategy::Ebf, ch, params, t), params, t);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.sinr[k], 7.0 * ch.h[k].squared_norm(), 1e-12);
}

TEST(Sinr, OrthogonalInterferenceVanishes) {
  const Topology t(TopologyKind::Circular, 2);
  ChannelSet ch;
  ch.h = {CVec{{1, 0}, {0, 0}}, CVec{{0, 0}, {1, 0}}};
  // g[0] reaches user 0 from base 1, whose beam is (0, 1): orthogonal.
  ch.g = {CVec{{1, 0}, {0, 0}}, CVec{{0, 0}, {1, 0}}};
  const std::vector<Beamformer> beams{Beamformer(CVec{{1, 0}, {0, 0}}), Beamformer(CVec{{0, 0}, {1, 0}})};
  const auto params = uniform_params(2, 10.0, 1.0, 0);
  const auto r = sinr(ch, beams, params, t);
  EXPECT_DOUBLE_EQ(r.sinr[0], 10.0);
}

TEST(Sinr, MatchesScalarExpansion) {
  oracle::Rng rng(9);
  const Topology t(TopologyKind::Circular, 2);
  ChannelSet ch;
  ch.h = {random_cvec(rng, 2), random_cvec(rng, 2)};
  ch.g = {random_cvec(rng, 2), random_cvec(rng, 2)};
  const std::vector<CellParams> params{{5.0, 0.3, 0}, {20.0, 0.9, 0}};
  const auto beams = plan_full_csi(Strategy::Gebf, ch, params, t);
  const auto r = sinr(ch, beams, params, t);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& h = ch.h[k];
    const auto& g = *ch.g[k];
    const auto& f = beams[k].vector();
    const auto& fi = beams[1 - k].vector();
    const double sig = std::norm(h[0] * f[0] + h[1] * f[1]);
    const double leak = std::norm(g[0] * fi[0] + g[1] * fi[1]);
    const double expect = sig / (params[k].alpha * leak + 1.0 / params[k].rho_d);
    EXPECT_NEAR(r.sinr[k], expect, 1e-12 * expect);
    EXPECT_NEAR(r.rate_exact[k], std::log2(1 + expect), 1e-12);
    EXPECT_LE(r.rate_highsinr[k], r.rate_exact[k]);
  }
  EXPECT_NEAR(r.sum_exact, r.rate_exact[0] + r.rate_exact[1], 1e-15);
}

TEST(Sinr, ShapeErrors) {
  const Topology t(TopologyKind::Circular, 2);
  const auto ch = generate(t, 2, 1);
  const auto params = uniform_params(2, 10, 1, 0);
  const std::vector<Beamformer> one{ebf(ch.h[0])};
  EXPECT_THROW(sinr(ch, one, params, t), ShapeError);
}

TEST(PlanFullCsi, CircularTwoCellsUsesCrossedIndices) {
  const Topology t(TopologyKind::Circular, 2);
  const auto ch = generate(t, 2, 10);
  const std::vector<CellParams> params{{10, 0.5, 0}, {10, 1.0, 0}};
  const auto beams = plan_full_csi(Strategy::Gebf, ch, params, t);
  // base 0 leaks into user 1 through g[1]; base 1 leaks into user 0 through g[0]
  const auto b0 = gebf(ch.h[0], *ch.g[1], params[1].rho_i());
  const auto b1 = gebf(ch.h[1], *ch.g[0], params[0].rho_i());
  EXPECT_EQ(beams[0].vector(), b0.vector());
  EXPECT_EQ(beams[1].vector(), b1.vector());
}

TEST(PlanFullCsi, EbfIgnoresInterferingChannels) {
  const Topology t(TopologyKind::Circular, 3);
  auto ch = generate(t, 2, 10);
  const auto params = uniform_params(3, 10, 1, 0);
  const auto a = plan_full_csi(Strategy::Ebf, ch, params, t);
  for (auto& g : ch.g) g = CVec{{3, 1}, {-1, 2}};
  const auto b = plan_full_csi(Strategy::Ebf, ch, params, t);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a[k].vector(), b[k].vector());
}

TEST(PlanFullCsi, FiniteArrayFirstBaseUsesEbf) {
  const Topology t(TopologyKind::FiniteArray, 3);
  const auto ch = generate(t, 2, 12);
  const auto params = uniform_params(3, 10, 1, 0);
  for (auto s : {Strategy::Gebf, Strategy::Zf}) {
    const auto beams = plan_full_csi(s, ch, params, t);
    EXPECT_EQ(beams[0].vector(), ebf(ch.h[0]).vector());
  }
  const auto r = sinr(ch, plan_full_csi(Strategy::Gebf, ch, params, t), params, t);
  // last user has no interferer
  const auto beams = plan_full_csi(Strategy::Gebf, ch, params, t);
  EXPECT_NEAR(r.sinr[2], 10.0 * std::norm(bilinear(ch.h[2], beams[2].vector())), 1e-12);
}

TEST(FullCsiStatistics, ZfIndependentOfAlphaAndGebfDominates) {
  const Topology t(TopologyKind::Circular, 2);
  const int trials = 10000;
  std::vector<double> zf_lo, zf_hi, gebf_v, ebf_v, zf_v;
  for (int s = 0; s < trials; ++s) {
    const auto ch = generate(t, 2, 1000 + s);
    const auto lo = uniform_params(2, 10.0, 0.001, 0);
    const auto hi = uniform_params(2, 10.0, 1.0, 0);
    zf_lo.push_back(sinr(ch, plan_full_csi(Strategy::Zf, ch, lo, t), lo, t).sum_exact);
    zf_hi.push_back(sinr(ch, plan_full_csi(Strategy::Zf, ch, hi, t), hi, t).sum_exact);
    gebf_v.push_back(sinr(ch, plan_full_csi(Strategy::Gebf, ch, hi, t), hi, t).sum_exact);
    ebf_v.push_back(sinr(ch, plan_full_csi(Strategy::Ebf, ch, hi, t), hi, t).sum_exact);
    zf_v.push_back(zf_hi.back());
  }
  const auto a = oracle::mean_se(zf_lo), b = oracle::mean_se(zf_hi);
  EXPECT_LT(std::abs(a.mean - b.mean), 1.96 * std::hypot(a.se, b.se));
  const auto g = oracle::mean_se(gebf_v), e = oracle::mean_se(ebf_v), z = oracle::mean_se(zf_v);
  EXPECT_GE(g.mean, e.mean);
  EXPECT_GE(g.mean, z.mean);
}

TEST(FullCsiStatistics, HighSinrGapShrinks) {
  const Topology t(TopologyKind::Circular, 4);
  double prev = 1e9;
  for (double db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    const auto p = uniform_params(4, db_to_linear(db), 0.1, 0);
    double ex = 0, hs = 0;
    for (int s = 0; s < 10000; ++s) {
      const auto ch = generate(t, 4, 5000 + s);
      const auto r = sinr(ch, plan_full_csi(Strategy::Gebf, ch, p, t), p, t);
      ex += r.sum_exact;
      hs += r.sum_highsinr;
    }
    const double gap = std::abs(ex - hs) / ex;
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}
