// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/rng.hpp"

#include <cmath>
#include <sstream>

#include "relarec/error.hpp"

namespace relarec {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below: n must be positive");
  if ((n & (n - 1)) == 0) return engine_() & (n - 1);  // power of two
  // Smallest power-of-two mask covering n, then reject out-of-range draws.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t x;
  do {
    x = engine_() & mask;
  } while (x >= n);
  return x;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
}

std::string Rng::save_state() const {
  std::ostringstream os;
  os << engine_;
  os << " " << (have_spare_ ? 1 : 0);
  if (have_spare_) os << " " << spare_;
  return os.str();
}

void Rng::load_state(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  int spare_flag = 0;
  is >> spare_flag;
  have_spare_ = spare_flag != 0;
  if (have_spare_) is >> spare_;
  if (is.fail()) throw IoError("Rng::load_state: malformed state string");
}

}  // namespace relarec
