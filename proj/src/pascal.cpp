#include "ctower/pascal.hpp"

namespace ctower {

namespace {

// zipWith (+) (0:b) (b++[0])
BinomialRow next_row(const BinomialRow& b) {
  BinomialRow out(b.size() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    mpz_class left = i == 0 ? mpz_class(0) : b[i - 1];
    mpz_class right = i < b.size() ? b[i] : mpz_class(0);
    out[i] = left + right;
  }
  return out;
}

PascalTriangle build() {
  Stream<BinomialRow> binoms = fix<BinomialRow>([](const Stream<BinomialRow>& self) {
    return cons_value<BinomialRow>(BinomialRow{1}, [self] { return map_stream(next_row, self); });
  });
  Stream<BinomialRow> bint = defer<BinomialRow>([binoms] {
    return map_stream(
        [](const BinomialRow& row) { return BinomialRow(row.begin(), row.end() - 1); },
        binoms.tail());
  });
  return PascalTriangle{binoms, bint};
}

}  // namespace

const PascalTriangle& pascal() {
  static const PascalTriangle triangle = build();
  return triangle;
}

}  // namespace ctower
