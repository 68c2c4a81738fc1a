// Copyright 2026 The steermpc Authors
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

#ifndef STEER_TYPES_H_
#define STEER_TYPES_H_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace steer {

// upper bound on any planner action dimension (flat mode samples 25 controls)
inline constexpr int kMaxActionDim = 32;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

// heap-free dynamic vector used for sampled actions
using ActionVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxActionDim, 1>;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// non-finite or out-of-domain input
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// action dimension does not match the layout
class LayoutError : public Error {
 public:
  using Error::Error;
};

// malformed plan, empty population, mismatched shapes
class StructuralError : public Error {
 public:
  using Error::Error;
};

// a cost term referenced a site the frame does not carry
class SiteResolutionError : public Error {
 public:
  explicit SiteResolutionError(const std::string& site,
                               const std::string& reason = "unresolved site")
      : Error(reason + " '" + site + "'"), site_(site) {}
  const std::string& site() const { return site_; }

 private:
  std::string site_;
};

// every rollout in a population failed
class RolloutError : public Error {
 public:
  using Error::Error;
};

// bad config file or unknown identifier
class ConfigError : public Error {
 public:
  using Error::Error;
};

template <typename Derived>
bool AllFinite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace steer

#endif  // STEER_TYPES_H_
