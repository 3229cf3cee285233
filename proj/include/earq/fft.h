// Copyright 2026 The Earq Authors. All Rights Reserved.
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

#ifndef EARQ_FFT_H_
#define EARQ_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace earq {

using Complex = std::complex<double>;

// Forward real FFT, n/2 + 1 bins, unnormalized.
std::vector<Complex> RealFft(std::span<const double> x);

// Inverse of RealFft for a real signal of length n, normalized by 1/n.
std::vector<double> InverseRealFft(std::span<const Complex> spectrum,
                                   size_t n);

// Analytic signal x + j*H{x}, computed over the full signal by zeroing the
// negative-frequency half of its spectrum.
std::vector<Complex> AnalyticSignal(std::span<const double> x);

}  // namespace earq

#endif  // EARQ_FFT_H_
