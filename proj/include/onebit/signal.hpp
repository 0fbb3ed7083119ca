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

#pragma once

// Complex-signal primitives shared by the link model and the receivers.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace onebit {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

/// Entries are restricted to +1 / -1.
using Sign = std::int8_t;
using SignVector = std::vector<Sign>;

/// sign(a) with the convention sign(+0) = sign(-0) = +1.
inline Sign sign_of(double a) noexcept { return a >= 0.0 ? Sign{1} : Sign{-1}; }

bool is_power_of_two(std::size_t n) noexcept;

/// Iterative radix-2 FFT plan. Twiddles are computed once per length.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized transforms in place: forward uses exp(-j2πkn/N).
  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  void transform(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddles_;  // exp(-j2πk/N), k < N/2
};

/// Returns a shared plan for length n (thread-safe, cached per thread).
const FftPlan& fft_plan(std::size_t n);

/// Unitary DFT F·x (1/√N scaling). Throws SizingError unless the length is a power of two.
CVec fft_normalized(const CVec& x);

/// Unitary inverse DFT Fᴴ·x.
CVec ifft_normalized(const CVec& x);

/// Element-wise Q(z) = sign(Re z) + j·sign(Im z).
CVec one_bit_quantize(const CVec& z);

/// C·x where C is the circulant matrix with the given first column, via FFT.
CVec circulant_apply(const CVec& first_column, const CVec& x);

/// [Re z; Im z].
RVec real_stack_vector(const CVec& z);

/// Inverse of real_stack_vector. Throws DimensionError on odd length.
CVec real_unstack_vector(const RVec& v);

/// [Re A, -Im A; Im A, Re A].
RMat real_stack_matrix(const CMat& a);

/// sign(v) element-wise with sign(0) = +1.
SignVector sign_vector(const RVec& v);

}  // namespace onebit
