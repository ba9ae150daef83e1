#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

namespace anisotetra {

template <std::size_t N>
struct MultiIndex {
  std::array<int, N> a{};

  constexpr int order() const { return std::accumulate(a.begin(), a.end(), 0); }

  /// Product of component factorials; exact for order() <= 20.
  constexpr std::uint64_t factorial() const {
    std::uint64_t f = 1;
    for (int ai : a)
      for (int i = 2; i <= ai; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  }

  /// Componentwise <=.
  constexpr bool le(const MultiIndex& o) const {
    for (std::size_t i = 0; i < N; ++i)
      if (a[i] > o.a[i]) return false;
    return true;
  }

  constexpr int nonzero_count() const {
    int n = 0;
    for (int ai : a) n += ai != 0;
    return n;
  }

  constexpr int& operator[](std::size_t i) { return a[i]; }
  constexpr int operator[](std::size_t i) const { return a[i]; }

  friend constexpr MultiIndex operator+(MultiIndex x, const MultiIndex& y) {
    for (std::size_t i = 0; i < N; ++i) x.a[i] += y.a[i];
    return x;
  }
  friend constexpr MultiIndex operator-(MultiIndex x, const MultiIndex& y) {
    for (std::size_t i = 0; i < N; ++i) x.a[i] -= y.a[i];
    return x;
  }
  friend constexpr auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

using MultiIndex3 = MultiIndex<3>;
using MultiIndex4 = MultiIndex<4>;

constexpr std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

constexpr std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// dim P_k in three variables, C(k+3, 3).
constexpr std::size_t dim_p(int k) {
  return k < 0 ? 0 : static_cast<std::size_t>(binomial(k + 3, 3));
}

/// All gamma in N_0^3 with |gamma| == order, lexicographically descending in
/// the first component (x^n, x^{n-1} y, ...).
std::vector<MultiIndex3> indices_of_order(int order);

/// All gamma with |gamma| <= degree, graded by order; position matches
/// monomial_index().
std::vector<MultiIndex3> indices_up_to(int degree);

/// Position of gamma inside indices_up_to(d) for any d >= |gamma|.
std::size_t monomial_index(const MultiIndex3& gamma);

/// Multinomial coefficient |gamma|! / gamma!.
double multinomial(const MultiIndex3& gamma);

}  // namespace anisotetra
