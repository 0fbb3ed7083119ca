// Copyright 2026 The onebit-ada Authors
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

#include "onebit/signal.hpp"

#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "onebit/errors.hpp"

namespace onebit {

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw SizingError("FFT length must be a power of two, got " + std::to_string(n));
  }
  const int bits = std::countr_zero(n);
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(phase), std::sin(phase)};
  }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }
void FftPlan::inverse(std::span<Complex> data) const { transform(data, true); }

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_) {
    throw DimensionError("FFT plan of length " + std::to_string(n_) + " applied to " +
                         std::to_string(data.size()) + " samples");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * step];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

const FftPlan& fft_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
  }
  return *it->second;
}

namespace {

CVec unitary_transform(const CVec& x, bool inverse) {
  const auto n = static_cast<std::size_t>(x.size());
  const FftPlan& plan = fft_plan(n);
  CVec out = x;
  std::span<Complex> view(out.data(), n);
  if (inverse) {
    plan.inverse(view);
  } else {
    plan.forward(view);
  }
  out *= 1.0 / std::sqrt(static_cast<double>(n));
  return out;
}

}  // namespace

CVec fft_normalized(const CVec& x) { return unitary_transform(x, false); }
CVec ifft_normalized(const CVec& x) { return unitary_transform(x, true); }

CVec one_bit_quantize(const CVec& z) {
  CVec q(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    q[i] = Complex(sign_of(z[i].real()), sign_of(z[i].imag()));
  }
  return q;
}

CVec circulant_apply(const CVec& first_column, const CVec& x) {
  if (first_column.size() != x.size()) {
    throw DimensionError("circulant_apply: first column has length " +
                         std::to_string(first_column.size()) + " but x has length " +
                         std::to_string(x.size()));
  }
  const auto n = static_cast<std::size_t>(x.size());
  const FftPlan& plan = fft_plan(n);
  CVec c = first_column;
  CVec v = x;
  plan.forward({c.data(), n});
  plan.forward({v.data(), n});
  v.array() *= c.array();
  plan.inverse({v.data(), n});
  v *= 1.0 / static_cast<double>(n);
  return v;
}

RVec real_stack_vector(const CVec& z) {
  const Eigen::Index n = z.size();
  RVec out(2 * n);
  out.head(n) = z.real();
  out.tail(n) = z.imag();
  return out;
}

CVec real_unstack_vector(const RVec& v) {
  if (v.size() % 2 != 0) {
    throw DimensionError("real_unstack_vector: odd length " + std::to_string(v.size()));
  }
  const Eigen::Index n = v.size() / 2;
  CVec out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

RMat real_stack_matrix(const CMat& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  RMat out(2 * m, 2 * n);
  out.topLeftCorner(m, n) = a.real();
  out.topRightCorner(m, n) = -a.imag();
  out.bottomLeftCorner(m, n) = a.imag();
  out.bottomRightCorner(m, n) = a.real();
  return out;
}

SignVector sign_vector(const RVec& v) {
  SignVector s(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) s[static_cast<std::size_t>(i)] = sign_of(v[i]);
  return s;
}

}  // namespace onebit
