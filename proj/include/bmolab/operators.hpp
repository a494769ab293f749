// Copyright 2026 The bmolab Authors
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

#include "bmolab/process.hpp"

namespace bmolab {

// (Tf)_n = Σ_{k=0}^n v_k d_k f.
Martingale transform(const Martingale& f, const PredictableSequence& v);

// The ℓ²-valued transform with v_k = e_k: a scalar martingale becomes an
// (N+1)-dimensional one whose k-th coordinate carries d_k f, so
// ||(Uf)_n|| = S_n(f).
Martingale l2_lift(const Martingale& f);

// S_n(f) = (Σ_{k<=n} |d_k f|²)^{1/2}.
AdaptedProcess square_function(const Martingale& f);

struct MaximalFunction {
  RandomVariable final;    // Mg = max_n |g_n|
  AdaptedProcess running;  // M_n g = max_{k<=n} |g_k|
};

MaximalFunction maximal(const AdaptedProcess& g);

}  // namespace bmolab
