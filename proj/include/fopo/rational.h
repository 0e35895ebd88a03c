// Copyright 2026 The Foresight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FOPO_RATIONAL_H_
#define FOPO_RATIONAL_H_

#include <cstdint>
#include <string>

namespace fopo {

// Exact rational number on int64 numerator/denominator, always stored in
// lowest terms with a positive denominator. Inference over candidate sets
// must be exact — posterior rank comparisons decide discrete choices, and a
// floating-point tie can flip them. Magnitudes stay tiny here (counts <= 12,
// <= 8 summands), so int64 with __int128 intermediates is ample; overflow
// aborts rather than wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t num, int64_t den);
  static Rational FromInt(int64_t v) { return Rational(v, 1); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  // Multiplicative inverse; numerator must be nonzero.
  Rational Inverse() const;

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  double ToDouble() const;
  std::string ToString() const;  // "num/den", or "num" when den == 1.

 private:
  int64_t num_;
  int64_t den_;
};

}  // namespace fopo

#endif  // FOPO_RATIONAL_H_
