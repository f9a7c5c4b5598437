#include "folcc/linalg.hpp"

#include <omp.h>

namespace folcc::linalg {
namespace {

bool find_pivot(IntMatrix& m, std::size_t r, std::size_t c) {
  for (std::size_t p = r; p < m.rows(); ++p) {
    if (m(p, c) != 0) {
      m.swap_rows(p, r);
      return true;
    }
  }
  return false;
}

// One Bareiss step on row i: entries become 2×2 minors divided by the previous pivot.
void eliminate_row(IntMatrix& m, std::size_t r, std::size_t c, std::size_t i, const mpz_class& prev, mpz_class& tmp) {
  const mpz_class& pivot = m(r, c);
  const mpz_class factor = m(i, c);
  for (std::size_t j = c + 1; j < m.cols(); ++j) {
    tmp = pivot * m(i, j);
    tmp -= factor * m(r, j);
    mpz_divexact(m(i, j).get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
  }
  m(i, c) = 0;
}

}  // namespace

std::size_t rank(IntMatrix m) {
  std::size_t r = 0;
  mpz_class prev(1);
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    if (!find_pivot(m, r, c)) continue;
    const long first = static_cast<long>(r) + 1;
    const long last = static_cast<long>(m.rows());
#pragma omp parallel
    {
      mpz_class tmp;
#pragma omp for schedule(static)
      for (long i = first; i < last; ++i) eliminate_row(m, r, c, static_cast<std::size_t>(i), prev, tmp);
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

namespace reference {
std::size_t rank(IntMatrix m) {
  std::size_t r = 0;
  mpz_class prev(1);
  mpz_class tmp;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    if (!find_pivot(m, r, c)) continue;
    for (std::size_t i = r + 1; i < m.rows(); ++i) eliminate_row(m, r, c, i, prev, tmp);
    prev = m(r, c);
    ++r;
  }
  return r;
}
}  // namespace reference

std::size_t rank(const RatMatrix& m) {
  IntMatrix z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l(1);
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational scaled = m(i, j) * l;
      z(i, j) = scaled.get_num();
    }
  }
  return rank(std::move(z));
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matrix shape mismatch");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& input) {
  RatMatrix m = input;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -m(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace folcc::linalg
