// Copyright 2026 The Approachlab Authors.
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

#ifndef APPROACHLAB_VEC_H_
#define APPROACHLAB_VEC_H_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace approachlab {

using Vec = std::vector<double>;

inline double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm2Sq(const Vec& a) { return Dot(a, a); }
inline double Norm2(const Vec& a) { return std::sqrt(Norm2Sq(a)); }

inline double NormInf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double Dist2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Vec Sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec Add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec Scale(const Vec& a, double c) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

// out += c * a
inline void Axpy(double c, const Vec& a, Vec* out) {
  for (std::size_t i = 0; i < a.size(); ++i) (*out)[i] += c * a[i];
}

inline Vec PositivePart(const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
  return out;
}

inline bool AllFinite(const Vec& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline void CheckFinite(const Vec& a, const std::string& what) {
  if (!AllFinite(a)) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

inline void CheckDim(const Vec& a, std::size_t dim, const std::string& what) {
  if (a.size() != dim) {
    throw std::invalid_argument(what + ": dimension mismatch, got " +
                                std::to_string(a.size()) + ", expected " +
                                std::to_string(dim));
  }
}

}  // namespace approachlab

#endif  // APPROACHLAB_VEC_H_
