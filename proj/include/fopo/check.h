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

#ifndef FOPO_CHECK_H_
#define FOPO_CHECK_H_

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

// Contract-violation macros. A failed check prints the condition and location
// to stderr and aborts; these guard preconditions that indicate programmer
// error, not recoverable user input.

namespace fopo {

[[noreturn]] inline void FatalError(const std::string& message) {
  std::cerr << "Fatal error: " << message << std::endl;
  std::abort();
}

namespace internal {

template <typename A, typename B>
[[noreturn]] void CheckOpFail(const char* file, int line, const char* op,
                              const char* a_expr, const A& a,
                              const char* b_expr, const B& b) {
  std::ostringstream oss;
  oss << file << ":" << line << " CHECK failed: " << a_expr << " " << op << " "
      << b_expr << " (" << a << " vs " << b << ")";
  FatalError(oss.str());
}

}  // namespace internal
}  // namespace fopo

#define FOPO_CHECK(condition)                                             \
  do {                                                                    \
    if (!(condition)) {                                                   \
      std::ostringstream oss_;                                            \
      oss_ << __FILE__ << ":" << __LINE__ << " CHECK failed: " #condition; \
      ::fopo::FatalError(oss_.str());                                     \
    }                                                                     \
  } while (false)

#define FOPO_CHECK_OP_(op, a, b)                                              \
  do {                                                                        \
    auto&& a_ = (a);                                                          \
    auto&& b_ = (b);                                                          \
    if (!(a_ op b_)) {                                                        \
      ::fopo::internal::CheckOpFail(__FILE__, __LINE__, #op, #a, a_, #b, b_); \
    }                                                                         \
  } while (false)

#define FOPO_CHECK_EQ(a, b) FOPO_CHECK_OP_(==, a, b)
#define FOPO_CHECK_NE(a, b) FOPO_CHECK_OP_(!=, a, b)
#define FOPO_CHECK_LT(a, b) FOPO_CHECK_OP_(<, a, b)
#define FOPO_CHECK_LE(a, b) FOPO_CHECK_OP_(<=, a, b)
#define FOPO_CHECK_GT(a, b) FOPO_CHECK_OP_(>, a, b)
#define FOPO_CHECK_GE(a, b) FOPO_CHECK_OP_(>=, a, b)

#define FOPO_CHECK_FINITE(x)                    \
  do {                                          \
    double v_ = static_cast<double>(x);         \
    if (!std::isfinite(v_)) {                   \
      std::ostringstream oss_;                  \
      oss_ << __FILE__ << ":" << __LINE__       \
           << " CHECK failed: " #x " is finite" \
           << " (value " << v_ << ")";          \
      ::fopo::FatalError(oss_.str());           \
    }                                           \
  } while (false)

#endif  // FOPO_CHECK_H_
