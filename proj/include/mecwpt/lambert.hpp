// Copyright 2026 The mecwpt Authors
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

#pragma once

namespace mecwpt {

struct LambertResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |w e^w - x|
};

// Principal branch W0 via Halley iteration. Accepts x >= -1/e - 1e-15
// (values within that slack are clamped to the branch point); anything
// smaller throws DomainError.
LambertResult lambert_w0(double x);

}  // namespace mecwpt
