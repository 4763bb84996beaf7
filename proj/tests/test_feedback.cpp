#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "wyner/beamforming.hpp"
#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/feedback.hpp"
#include "wyner/numerics.hpp"

using namespace wyner;
using testing_helpers::random_cvec;
using testing_helpers::to_vec;

namespace {

double cos2(const CVec& a, const CVec& b) { return std::norm(dot(a, b)) / (a.squared_norm() * b.squared_norm()); }

}  // namespace

TEST(Codebook, SizesAndNorms) {
  const auto cb0 = draw_codebook(0, 3, 1);
  EXPECT_EQ(cb0.size(), 1u);
  const auto cb = draw_codebook(6, 4, 2);
  EXPECT_EQ(cb.size(), 64u);
  for (std::size_t i = 0; i < cb.size(); ++i) EXPECT_NEAR(cb[i].norm(), 1.0, 1e-12);
  EXPECT_THROW(draw_codebook(21, 2, 0), BudgetTooLarge);
  EXPECT_THROW(draw_codebook(-1, 2, 0), DomainError);
}

TEST(Codebook, DeterministicAndSeedSensitive) {
  const auto a = draw_codebook(3, 2, 10), b = draw_codebook(3, 2, 10), c = draw_codebook(3, 2, 11);
  bool differ = false;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(a[i], b[i]);
    differ |= !(a[i] == c[i]);
  }
  EXPECT_TRUE(differ);
}

TEST(Codebook, IsotropicEntryPower) {
  double acc = 0;
  std::size_t n = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto cb = draw_codebook(4, 4, s);
    for (std::size_t i = 0; i < cb.size(); ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        acc += std::norm(cb[i][j]);
        ++n;
      }
  }
  EXPECT_NEAR(acc / n, 0.25, 0.0025);
}

TEST(Codebook, SmallerBudgetIsPrefix) {
  const auto big = draw_codebook(8, 3, 99);
  for (int b = 0; b < 8; ++b) {
    const auto small = draw_codebook(b, 3, 99);
    for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], big[i]);
  }
}

TEST(Quantize, FindsExactCodeword) {
  const auto cb = draw_codebook(5, 2, 4);
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const CVec d = cb[i] * std::polar(1.0, 0.7);
    const auto q = quantize(d, cb);
    EXPECT_EQ(q.index, i);
    EXPECT_NEAR(cos2(d, q.vector), 1.0, 1e-12);
  }
}

TEST(Quantize, SingleCodewordAndTies) {
  oracle::Rng rng(3);
  const auto cb = draw_codebook(0, 2, 4);
  EXPECT_EQ(quantize(random_cvec(rng, 2).normalized(), cb).index, 0u);
  std::vector<cplx> dup{{1, 0}, {0, 0}, {1, 0}, {0, 0}};
  const Codebook twin(1, 2, dup);
  EXPECT_EQ(quantize(CVec{{0.6, 0}, {0.8, 0}}, twin).index, 0u);
  EXPECT_THROW(quantize(CVec{{2, 0}, {0, 0}}, cb), DomainError);
}

TEST(Quantize, PrefixesMatchDirectSearch) {
  oracle::Rng rng(8);
  const auto big = draw_codebook(10, 2, 17);
  for (int rep = 0; rep < 50; ++rep) {
    const CVec d = random_cvec(rng, 2).normalized();
    const auto best = quantize_prefixes(d, big);
    for (int b = 0; b <= 10; ++b) EXPECT_EQ(best[b], quantize(d, draw_codebook(b, 2, 17)).index);
  }
}

TEST(Quantize, MeanCos2MatchesClosedForm) {
  oracle::Rng rng(21);
  std::vector<double> c;
  const int bits = 4;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    const CVec d = random_cvec(rng, 2).normalized();
    c.push_back(cos2(d, quantize(d, draw_codebook(bits, 2, s)).vector));
  }
  const auto m = oracle::mean_se(c);
  EXPECT_NEAR(m.mean, 1.0 - 16.0 / 272.0, 3 * m.se);
  for (double x : c) EXPECT_LE(x, 1.0 + 1e-12);
}

TEST(Quantize, MeanLog2Cos2MatchesExpectation) {
  oracle::Rng rng(31);
  for (int nt : {2, 3, 4}) {
    for (int bits : {0, 3, 6}) {
      std::vector<double> v;
      for (std::uint64_t s = 0; s < 100000; ++s) {
        const CVec d = random_cvec(rng, nt).normalized();
        v.push_back(std::log2(cos2(d, quantize(d, draw_codebook(bits, nt, s * 7 + bits)).vector)));
      }
      const auto m = oracle::mean_se(v);
      EXPECT_NEAR(m.mean, expected_log2_cos2(bits, nt), 3 * m.se) << nt << " " << bits;
    }
  }
}

TEST(UserFeedback, ZeroInterferingBitsGivesSingleRandomCodeword) {
  oracle::Rng rng(2);
  const CVec h = random_cvec(rng, 2), g = random_cvec(rng, 2);
  const CellParams p{10, 1, 6};
  const FeedbackSeeds seeds{5, 6};
  const auto csi = user_feedback(h, g, {6, 0}, p, seeds);
  ASSERT_TRUE(csi.interfering.has_value());
  EXPECT_EQ(csi.interfering->index, 0u);
  EXPECT_EQ(csi.interfering->direction, draw_codebook(0, 2, 6)[0]);
  EXPECT_NEAR(csi.interfering->gain, g.norm(), 1e-15);
  EXPECT_NEAR(csi.desired.gain, h.norm(), 1e-15);
  EXPECT_THROW(user_feedback(h, g, {3, 2}, p, seeds), DomainError);
  const auto again = user_feedback(h, g, {6, 0}, p, seeds);
  EXPECT_EQ(again.desired.index, csi.desired.index);
}

TEST(UserFeedback, HighResolutionIsAccurate) {
  oracle::Rng rng(12);
  const CellParams p{10, 1, 20};
  int good = 0;
  const int reps = 300;
  for (int i = 0; i < reps; ++i) {
    const CVec h = random_cvec(rng, 2), g = random_cvec(rng, 2);
    const auto csi = user_feedback(h, g, {10, 10}, p, feedback_seeds(i, 0));
    if (cos2(h, csi.desired.direction) > 0.99 && cos2(g, csi.interfering->direction) > 0.99) ++good;
  }
  EXPECT_GT(good, 0.99 * reps);
}

TEST(UserFeedbackDraw, MatchesFreshQuantization) {
  oracle::Rng rng(13);
  const CVec h = random_cvec(rng, 3), g = random_cvec(rng, 3);
  const auto seeds = feedback_seeds(77, 1);
  const UserFeedbackDraw draw(h, g, 8, 8, seeds);
  for (int bd = 0; bd <= 8; ++bd) {
    const CellParams p{10, 1, 8};
    const BitSplit s{bd, 8 - bd};
    const auto a = draw.csi(s, p);
    const auto b = user_feedback(h, g, s, p, seeds);
    EXPECT_EQ(a.desired.index, b.desired.index);
    EXPECT_EQ(a.desired.direction, b.desired.direction);
    EXPECT_EQ(a.interfering->index, b.interfering->index);
  }
}

TEST(Exchange, CircularAndFinite) {
  const Topology circ(TopologyKind::Circular, 2);
  const auto ch = generate(circ, 2, 4);
  std::vector<QuantizedCsi> fb;
  const std::vector<CellParams> params{{10, 0.2, 6}, {20, 0.5, 6}};
  for (std::size_t k = 0; k < 2; ++k) fb.push_back(user_feedback(ch.h[k], ch.g[k], {3, 3}, params[k], feedback_seeds(1, k)));
  const auto views = wyner::exchange(fb, circ);
  // base 0 leaks into user 1: its view holds user 1's interfering record
  EXPECT_EQ(views[0].caused_interference->index, fb[1].interfering->index);
  EXPECT_DOUBLE_EQ(views[0].caused_interference->gain, fb[1].interfering->gain);
  EXPECT_DOUBLE_EQ(views[0].rho_i_prev, 10.0);
  EXPECT_DOUBLE_EQ(views[1].rho_i_prev, 2.0);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(views[k].own_desired.direction, fb[k].desired.direction);
  // round trip
  EXPECT_EQ(views[1].caused_interference->direction, fb[0].interfering->direction);

  const Topology fin(TopologyKind::FiniteArray, 3);
  const auto ch3 = generate(fin, 2, 4);
  std::vector<QuantizedCsi> fb3;
  for (std::size_t k = 0; k < 3; ++k) {
    const BitSplit s = ch3.g[k] ? BitSplit{3, 3} : BitSplit{6, 0};
    fb3.push_back(user_feedback(ch3.h[k], ch3.g[k], s, {10, 1, 6}, feedback_seeds(1, k)));
  }
  const auto v3 = wyner::exchange(fb3, fin);
  EXPECT_FALSE(v3[0].caused_interference.has_value());
  EXPECT_TRUE(v3[1].caused_interference.has_value());
  EXPECT_THROW(wyner::exchange(std::vector<QuantizedCsi>(fb3.begin(), fb3.begin() + 2), fin), ShapeError);
}

TEST(GebfLimited, PerfectQuantizationReducesToFullCsi) {
  oracle::Rng rng(14);
  const CVec h = random_cvec(rng, 4), g = random_cvec(rng, 4);
  const BaseStationView view{{h.normalized(), h.norm(), 0}, ChannelRecord{g.normalized(), g.norm(), 0}, 7.0};
  const auto a = gebf_limited(view).vector();
  const auto b = gebf(h, g, 7.0).vector();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-10);
  const BaseStationView lone{{h.normalized(), h.norm(), 0}, std::nullopt, 0.0};
  EXPECT_EQ(gebf_limited(lone).vector(), ebf(h).vector());
}

namespace {

struct LfStats {
  std::vector<double> sum_rate, loss;
};

LfStats limited_feedback_run(BitSplit split, double alpha, int trials) {
  const Topology t(TopologyKind::Circular, 2);
  const auto params = uniform_params(2, 10.0, alpha, split.total());
  LfStats out;
  for (int s = 0; s < trials; ++s) {
    const auto ch = generate(t, 2, 40000 + s);
    std::vector<QuantizedCsi> fb;
    for (std::size_t k = 0; k < 2; ++k) fb.push_back(user_feedback(ch.h[k], ch.g[k], split, params[k], feedback_seeds(s, k)));
    const auto lf = sinr(ch, plan_limited(Strategy::Gebf, wyner::exchange(fb, t)), params, t);
    const auto full = sinr(ch, plan_full_csi(Strategy::Gebf, ch, params, t), params, t);
    out.sum_rate.push_back(lf.sum_exact);
    out.loss.push_back(full.sum_exact - lf.sum_exact);
  }
  return out;
}

}  // namespace

TEST(LimitedFeedback, DesiredHeavySplitWinsAtWeakInterference) {
  const auto a = oracle::mean_se(limited_feedback_run({12, 3}, 0.001, 10000).sum_rate);
  const auto b = oracle::mean_se(limited_feedback_run({3, 12}, 0.001, 10000).sum_rate);
  EXPECT_GT(a.mean, b.mean);
}

TEST(LimitedFeedback, NeverBeatsFullCsiOnAverage) {
  for (BitSplit s : {BitSplit{2, 2}, BitSplit{8, 8}, BitSplit{3, 13}}) {
    const auto m = oracle::mean_se(limited_feedback_run(s, 1.0, 10000).loss);
    EXPECT_GE(m.mean, -3 * m.se);
  }
}
