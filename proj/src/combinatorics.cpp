#include "ellhyp/combinatorics.hpp"

#include <numeric>

#include "ellhyp/errors.hpp"

namespace ellhyp {

MultiIndex::MultiIndex(std::vector<int> parts) : parts_(std::move(parts)) {
  weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

bool MultiIndex::componentwise_le(const MultiIndex& other) const {
  if (other.size() != size()) {
    throw LengthMismatch("componentwise_le: multi-index sizes differ");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (parts_[i] > other.parts_[i]) return false;
  }
  return true;
}

void MultiIndex::set(std::size_t i, int value) {
  weight_ += value - parts_[i];
  parts_[i] = value;
}

// ---------------------------------------------------------------------------

Compositions::Compositions(int m, int total) : m_(m), total_(total) {
  if (m < 1) throw LengthMismatch("compositions: m must be at least 1");
}

Compositions::iterator Compositions::begin() {
  if (total_ < 0) return iterator{};
  std::vector<int> parts(static_cast<std::size_t>(m_), 0);
  parts[0] = total_;
  current_ = MultiIndex(std::move(parts));
  started_ = true;
  return iterator{this};
}

bool Compositions::advance() {
  // Rightmost nonzero entry among the first m-1 moves one unit right and
  // collects everything after it.
  const int last = m_ - 1;
  int i = last - 1;
  while (i >= 0 && current_[static_cast<std::size_t>(i)] == 0) --i;
  if (i < 0) return false;
  const auto iu = static_cast<std::size_t>(i);
  int tail = 0;
  for (int j = i + 1; j <= last; ++j) {
    tail += current_[static_cast<std::size_t>(j)];
    current_.set(static_cast<std::size_t>(j), 0);
  }
  current_.set(iu, current_[iu] - 1);
  current_.set(iu + 1, tail + 1);
  return true;
}

// ---------------------------------------------------------------------------

BoxIndices::BoxIndices(MultiIndex bound) : bound_(std::move(bound)) {}

BoxIndices::iterator BoxIndices::begin() {
  current_ = MultiIndex(std::vector<int>(bound_.size(), 0));
  return iterator{this};
}

bool BoxIndices::advance() {
  for (std::size_t k = bound_.size(); k-- > 0;) {
    if (current_[k] < bound_[k]) {
      current_.set(k, current_[k] + 1);
      return true;
    }
    current_.set(k, 0);
  }
  return false;
}

// ---------------------------------------------------------------------------

Subsets::Subsets(int universe, int d) : universe_(universe), d_(d) {}

Subsets::iterator Subsets::begin() {
  if (d_ < 0 || d_ > universe_) return iterator{};
  current_.resize(static_cast<std::size_t>(d_));
  std::iota(current_.begin(), current_.end(), 0);
  return iterator{this};
}

bool Subsets::advance() {
  int i = d_ - 1;
  while (i >= 0 &&
         current_[static_cast<std::size_t>(i)] == universe_ - d_ + i) {
    --i;
  }
  if (i < 0) return false;
  ++current_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < d_; ++j) {
    current_[static_cast<std::size_t>(j)] =
        current_[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

// ---------------------------------------------------------------------------

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ScaledComplex delta_product(const KernelSpec& spec, std::span<const cplx> x) {
  ScaledComplex acc = ScaledComplex::one();
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      acc *= bracket(spec, x[i] - x[j]);
    }
  }
  return acc;
}

IndexFunctionals index_functionals(const MultiIndex& alpha,
                                   std::span<const cplx> x) {
  if (alpha.size() != x.size()) {
    throw LengthMismatch("index_functionals: |alpha| != |x|");
  }
  IndexFunctionals r{{0.0, 0.0}, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.dot += static_cast<double>(alpha[i]) * x[i];
    r.binom2 += binomial(alpha[i], 2);
  }
  return r;
}

}  // namespace ellhyp
