/* Copyright 2026 The Statecut Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef STATECUT_TYPES_HPP_
#define STATECUT_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>

namespace statecut {

/// Identity of one heap object. Unique among live objects and never reused
/// within a session.
struct ObjectId {
  std::uint64_t value = 0;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
  friend std::ostream& operator<<(std::ostream& os, ObjectId id) {
    return os << '#' << id.value;
  }
};

/// Cell-completion ordinal. Strictly increasing within one session.
struct Timestamp {
  std::uint64_t value = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
  friend std::ostream& operator<<(std::ostream& os, Timestamp t) {
    return os << 't' << t.value;
  }
};

/// A time cost in seconds that may be infinite.
///
/// Infinity is a flag rather than a large float so that infeasibility is
/// detected exactly: anything added to an infinite cost stays infinite and
/// scaling never turns it finite (0 * inf is inf here).
class Cost {
 public:
  constexpr Cost() = default;
  constexpr explicit Cost(double seconds) : seconds_(seconds) {}

  static constexpr Cost Infinite() {
    Cost c;
    c.infinite_ = true;
    return c;
  }
  static constexpr Cost Zero() { return Cost(0.0); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Seconds, or +inf when infinite.
  constexpr double seconds() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : seconds_;
  }

  constexpr Cost& operator+=(Cost other) {
    if (infinite_ || other.infinite_) {
      infinite_ = true;
      seconds_ = 0.0;
    } else {
      seconds_ += other.seconds_;
    }
    return *this;
  }
  friend constexpr Cost operator+(Cost a, Cost b) { return a += b; }
  friend constexpr Cost operator*(double k, Cost c) {
    return c.infinite_ ? c : Cost(k * c.seconds_);
  }

  friend constexpr bool operator==(Cost a, Cost b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.seconds_ == b.seconds_);
  }
  friend constexpr bool operator<(Cost a, Cost b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.seconds_ < b.seconds_;
  }
  friend constexpr bool operator>(Cost a, Cost b) { return b < a; }
  friend constexpr bool operator<=(Cost a, Cost b) { return !(b < a); }
  friend constexpr bool operator>=(Cost a, Cost b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, Cost c) {
    if (c.infinite_) return os << "inf";
    return os << c.seconds_ << 's';
  }

 private:
  double seconds_ = 0.0;
  bool infinite_ = false;
};

/// True when both are infinite, or both finite and within `tol` seconds.
inline bool ApproxEqual(Cost a, Cost b, double tol) {
  if (a.is_infinite() || b.is_infinite()) {
    return a.is_infinite() && b.is_infinite();
  }
  double d = a.seconds() - b.seconds();
  return d <= tol && -d <= tol;
}

}  // namespace statecut

template <>
struct std::hash<statecut::ObjectId> {
  std::size_t operator()(statecut::ObjectId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

#endif  // STATECUT_TYPES_HPP_
