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

#include "fopo/rational.h"

#include <numeric>

#include "fopo/check.h"

namespace fopo {

namespace {

using Int128 = __int128;

int64_t CheckedNarrow(Int128 v) {
  FOPO_CHECK(v <= INT64_MAX && v >= INT64_MIN);
  return static_cast<int64_t>(v);
}

Rational MakeReduced(Int128 num, Int128 den) {
  FOPO_CHECK(den != 0);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  // gcd on the magnitudes; std::gcd wants same-type unsigned-friendly inputs.
  Int128 a = num < 0 ? -num : num;
  Int128 b = den;
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;  // num == 0.
  return Rational(CheckedNarrow(num / a), CheckedNarrow(den / a));
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  FOPO_CHECK_NE(den, 0);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::operator+(const Rational& o) const {
  return MakeReduced(Int128(num_) * o.den_ + Int128(o.num_) * den_,
                     Int128(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return MakeReduced(Int128(num_) * o.den_ - Int128(o.num_) * den_,
                     Int128(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return MakeReduced(Int128(num_) * o.num_, Int128(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  FOPO_CHECK_NE(o.num_, 0);
  return MakeReduced(Int128(num_) * o.den_, Int128(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return Int128(num_) * o.den_ < Int128(o.num_) * den_;
}

Rational Rational::Inverse() const {
  FOPO_CHECK_NE(num_, 0);
  return Rational(den_, num_);
}

double Rational::ToDouble() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace fopo
