// Copyright 2026 The Seplab Authors
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

#include "seplab/scene/convolve.h"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "seplab/common/error.h"

namespace seplab {

namespace {

// FFTW plan creation is not thread safe.
std::mutex fftw_mutex;

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct FftBuffers {
  size_t n = 0;
  double* a = nullptr;
  double* b = nullptr;
  fftw_complex* fa = nullptr;
  fftw_complex* fb = nullptr;
  fftw_plan fwd_a{}, fwd_b{}, inv{};

  explicit FftBuffers(size_t size) : n(size) {
    a = fftw_alloc_real(n);
    b = fftw_alloc_real(n);
    fa = fftw_alloc_complex(n / 2 + 1);
    fb = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(n), a, fa, FFTW_ESTIMATE);
    fwd_b = fftw_plan_dft_r2c_1d(static_cast<int>(n), b, fb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, a, FFTW_ESTIMATE);
  }

  ~FftBuffers() {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd_a);
    fftw_destroy_plan(fwd_b);
    fftw_destroy_plan(inv);
    fftw_free(a);
    fftw_free(b);
    fftw_free(fa);
    fftw_free(fb);
  }
};

}  // namespace

std::vector<double> FftConvolve(const std::vector<double>& a,
                                const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw InvalidInput("convolve: empty input signal");
  const size_t out_len = a.size() + b.size() - 1;
  const size_t n = NextPow2(out_len);
  FftBuffers buf(n);
  std::memset(buf.a, 0, n * sizeof(double));
  std::memset(buf.b, 0, n * sizeof(double));
  std::memcpy(buf.a, a.data(), a.size() * sizeof(double));
  std::memcpy(buf.b, b.data(), b.size() * sizeof(double));
  fftw_execute(buf.fwd_a);
  fftw_execute(buf.fwd_b);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n / 2 + 1; ++i) {
    double re = buf.fa[i][0] * buf.fb[i][0] - buf.fa[i][1] * buf.fb[i][1];
    double im = buf.fa[i][0] * buf.fb[i][1] + buf.fa[i][1] * buf.fb[i][0];
    buf.fa[i][0] = re * scale;
    buf.fa[i][1] = im * scale;
  }
  fftw_execute(buf.inv);
  return std::vector<double>(buf.a, buf.a + out_len);
}

double NormalizedXcorrPeak(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw InvalidInput("xcorr: empty input signal");
  double ea = 0.0, eb = 0.0;
  for (double v : a) ea += v * v;
  for (double v : b) eb += v * v;
  if (ea <= 0.0 || eb <= 0.0) throw InvalidInput("xcorr: zero-energy signal");
  std::vector<double> b_rev(b.rbegin(), b.rend());
  std::vector<double> xc = FftConvolve(a, b_rev);
  double peak = 0.0;
  for (double v : xc) peak = std::max(peak, std::abs(v));
  return peak / std::sqrt(ea * eb);
}

}  // namespace seplab
