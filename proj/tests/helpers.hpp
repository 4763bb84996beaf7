#pragma once

#include <cstddef>

#include "oracles.hpp"
#include "wyner/linalg.hpp"

namespace testing_helpers {

inline oracle::Vec to_vec(const wyner::CVec& v) { return oracle::Vec(v.begin(), v.end()); }

inline wyner::CVec to_cvec(const oracle::Vec& v) {
  wyner::CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

inline wyner::CVec random_cvec(oracle::Rng& rng, std::size_t n) { return to_cvec(rng.cn_vec(n)); }

}  // namespace testing_helpers
