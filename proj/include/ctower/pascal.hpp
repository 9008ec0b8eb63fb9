#pragma once

#include <vector>

#include <gmpxx.h>

#include "ctower/coefficient.hpp"
#include "ctower/lazy.hpp"

namespace ctower {

using BinomialRow = std::vector<mpz_class>;

// Infinite Pascal triangle. binoms row n holds C(n,0..n). bint is the
// triangle with its first row dropped and the last entry of every remaining
// row removed, i.e. row n of bint is C(n+1, 0..n); tower division walks it.
struct PascalTriangle {
  Stream<BinomialRow> binoms;
  Stream<BinomialRow> bint;
};

// One process-wide triangle; rows are generated on demand and shared.
const PascalTriangle& pascal();

// The same rows with entries converted into the coefficient type, cached per
// type so tower products do not re-convert big integers.
template <Ring C>
const Stream<std::vector<C>>& binomial_rows() {
  static const Stream<std::vector<C>> rows = map_stream(
      [](const BinomialRow& row) {
        std::vector<C> out;
        out.reserve(row.size());
        for (const auto& b : row) out.push_back(Coef<C>::from_big(b));
        return out;
      },
      pascal().binoms);
  return rows;
}

template <Ring C>
const Stream<std::vector<C>>& trimmed_binomial_rows() {
  static const Stream<std::vector<C>> rows = map_stream(
      [](const BinomialRow& row) {
        std::vector<C> out;
        out.reserve(row.size());
        for (const auto& b : row) out.push_back(Coef<C>::from_big(b));
        return out;
      },
      pascal().bint);
  return rows;
}

}  // namespace ctower
