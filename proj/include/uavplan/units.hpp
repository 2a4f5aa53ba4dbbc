// Copyright 2026 The uavplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVPLAN_UNITS_HPP_
#define UAVPLAN_UNITS_HPP_

#include <cmath>

namespace uavplan {

// Decibel helpers. All are total on finite input.

template <typename Scalar>
Scalar db_to_linear(Scalar db) {
  using std::pow;
  return pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar>
Scalar linear_to_db(Scalar ratio) {
  using std::log10;
  return Scalar(10) * log10(ratio);
}

template <typename Scalar>
Scalar dbm_to_watts(Scalar dbm) {
  return db_to_linear(dbm - Scalar(30));
}

template <typename Scalar>
Scalar watts_to_dbm(Scalar watts) {
  return linear_to_db(watts) + Scalar(30);
}

}  // namespace uavplan

#endif  // UAVPLAN_UNITS_HPP_
