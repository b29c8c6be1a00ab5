#pragma once

#include <cstddef>
#include <iterator>
#include <span>
#include <vector>

#include "ellhyp/kernel.hpp"
#include "ellhyp/scaled_complex.hpp"

namespace ellhyp {

/// Ordered tuple of naturals (mu_1, ..., mu_m).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> parts);

  std::size_t size() const noexcept { return parts_.size(); }
  int operator[](std::size_t i) const { return parts_[i]; }
  /// |mu| = sum of parts.
  int weight() const noexcept { return weight_; }
  std::span<const int> parts() const noexcept { return parts_; }

  /// Componentwise mu <= other; sizes must agree.
  bool componentwise_le(const MultiIndex& other) const;

  void set(std::size_t i, int value);

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.parts_ == b.parts_;
  }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

// Lazy generators. Each is an input range yielding `const MultiIndex&` (or
// `const std::vector<int>&` for subsets) and is single-pass; copies restart.

/// All mu in N^m with |mu| = N, in descending lexicographic order.
class Compositions {
 public:
  Compositions(int m, int total);

  class iterator {
   public:
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(Compositions* owner) : owner_(owner) {}
    const MultiIndex& operator*() const { return owner_->current_; }
    const MultiIndex* operator->() const { return &owner_->current_; }
    iterator& operator++() {
      if (!owner_->advance()) owner_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.owner_ == nullptr;
    }

   private:
    Compositions* owner_ = nullptr;
  };

  iterator begin();
  std::default_sentinel_t end() const { return {}; }

 private:
  bool advance();

  int m_;
  int total_;
  MultiIndex current_;
  bool started_ = false;
};

/// All mu with 0 <= mu_i <= bound_i (odometer order, last index fastest).
class BoxIndices {
 public:
  explicit BoxIndices(MultiIndex bound);

  class iterator {
   public:
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(BoxIndices* owner) : owner_(owner) {}
    const MultiIndex& operator*() const { return owner_->current_; }
    const MultiIndex* operator->() const { return &owner_->current_; }
    iterator& operator++() {
      if (!owner_->advance()) owner_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.owner_ == nullptr;
    }

   private:
    BoxIndices* owner_ = nullptr;
  };

  iterator begin();
  std::default_sentinel_t end() const { return {}; }

 private:
  bool advance();

  MultiIndex bound_;
  MultiIndex current_;
};

/// All d-subsets of {0, ..., M-1} (zero-based), lexicographic.
class Subsets {
 public:
  Subsets(int universe, int d);

  class iterator {
   public:
    using value_type = std::vector<int>;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(Subsets* owner) : owner_(owner) {}
    const std::vector<int>& operator*() const { return owner_->current_; }
    iterator& operator++() {
      if (!owner_->advance()) owner_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.owner_ == nullptr;
    }

   private:
    Subsets* owner_ = nullptr;
  };

  iterator begin();
  std::default_sentinel_t end() const { return {}; }

 private:
  bool advance();

  int universe_;
  int d_;
  std::vector<int> current_;
};

/// Binomial coefficient as a 64-bit integer (exact for the sizes used here).
long long binomial(int n, int k);

/// Delta(x) = prod_{i<j} [x_i - x_j]; empty and singleton give 1.
ScaledComplex delta_product(const KernelSpec& spec, std::span<const cplx> x);

struct IndexFunctionals {
  cplx dot;          // alpha x = sum alpha_i x_i
  long long binom2;  // sum C(alpha_i, 2)
};

/// Throws LengthMismatch when alpha and x differ in length.
IndexFunctionals index_functionals(const MultiIndex& alpha,
                                   std::span<const cplx> x);

}  // namespace ellhyp
