#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "dtm/series.hpp"

#ifndef DTM_CORPUS_DIR
#define DTM_CORPUS_DIR "corpus"
#endif

namespace testing {

inline std::filesystem::path corpus(const char* file) {
  return std::filesystem::path(DTM_CORPUS_DIR) / file;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240607);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::vector<double> random_coeffs(std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(lo, hi);
  return v;
}

inline dtm::Series random_series(double t0, int order, double lo = -1.0, double hi = 1.0) {
  return dtm::Series(t0, random_coeffs(static_cast<std::size_t>(order) + 1, lo, hi));
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, rel_err(a[i], b[i]));
  }
  return worst;
}

inline std::vector<double> coeffs(const dtm::Series& s) {
  return {s.coeffs().begin(), s.coeffs().end()};
}

}  // namespace testing
