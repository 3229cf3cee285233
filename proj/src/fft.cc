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

#include "earq/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace earq {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& PlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

struct Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan != nullptr) {
      std::lock_guard<std::mutex> lock(PlannerMutex());
      fftw_destroy_plan(plan);
    }
  }
};

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(size_t n)
      : data(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<size_t>(n, 1)))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

}  // namespace

std::vector<Complex> RealFft(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) return {};
  const size_t bins = n / 2 + 1;
  FftwBuffer<double> in(n);
  FftwBuffer<fftw_complex> out(bins);
  Plan p;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    p.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data, out.data,
                                  FFTW_ESTIMATE);
  }
  std::copy(x.begin(), x.end(), in.data);
  fftw_execute(p.plan);
  std::vector<Complex> result(bins);
  for (size_t k = 0; k < bins; ++k) {
    result[k] = Complex(out.data[k][0], out.data[k][1]);
  }
  return result;
}

std::vector<double> InverseRealFft(std::span<const Complex> spectrum,
                                   size_t n) {
  if (n == 0) return {};
  const size_t bins = n / 2 + 1;
  FftwBuffer<fftw_complex> in(bins);
  FftwBuffer<double> out(n);
  Plan p;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    p.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.data, out.data,
                                  FFTW_ESTIMATE);
  }
  for (size_t k = 0; k < bins; ++k) {
    const Complex v = k < spectrum.size() ? spectrum[k] : Complex();
    in.data[k][0] = v.real();
    in.data[k][1] = v.imag();
  }
  fftw_execute(p.plan);
  std::vector<double> result(out.data, out.data + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : result) v *= scale;
  return result;
}

std::vector<Complex> AnalyticSignal(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) return {};
  const std::vector<Complex> half = RealFft(x);
  FftwBuffer<fftw_complex> buf(n);
  Plan p;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    p.plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data,
                              FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::memset(buf.data, 0, sizeof(fftw_complex) * n);
  // DC and (for even n) Nyquist keep unit weight, positive bins double.
  for (size_t k = 0; k < half.size(); ++k) {
    double w = 2.0;
    if (k == 0 || (n % 2 == 0 && k == n / 2)) w = 1.0;
    buf.data[k][0] = w * half[k].real();
    buf.data[k][1] = w * half[k].imag();
  }
  fftw_execute(p.plan);
  std::vector<Complex> result(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    result[i] = Complex(buf.data[i][0] * scale, buf.data[i][1] * scale);
  }
  return result;
}

}  // namespace earq
