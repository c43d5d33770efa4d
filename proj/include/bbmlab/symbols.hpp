#pragma once

// Trilinear Fourier symbols and the frequency sets they are summed over.
//
// Each term of the Sobolev-norm derivative is a trilinear form
//   F(u) = i * sum_{n1+n2+n3=0} w(n1, n2, n3) c(n1) c(n2) c(n3)
// with a real, odd weight w = coefficient * w_i. With v = P_N u:
//   F1 = (1/2pi) int (|D|^s v)^2 v_x                        1 * w1,  w1 = |n1|^s |n2|^s n3
//   F2 = -(1/pi) int (|D|^s v) [|D|^s, v] v_x               -2 * w2,  w2 = |n1|^s n2 (|n2+n3|^s - |n2|^s)
//   F3 = (1/2pi) int (|D|^s v) (d_x |D|^s / (1+|D|)) (v^2)  1 * w3,  w3 = |n1|^s m |m|^s / (1+|m|), m = n2+n3

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "bbmlab/error.hpp"

namespace bbm {

enum class SymbolTerm { F1, F2, F3, Total, Unit };

inline std::string to_string(SymbolTerm t) {
  switch (t) {
    case SymbolTerm::F1: return "F1";
    case SymbolTerm::F2: return "F2";
    case SymbolTerm::F3: return "F3";
    case SymbolTerm::Total: return "TOTAL";
    case SymbolTerm::Unit: return "UNIT";
  }
  return "?";
}

inline SymbolTerm parse_term(const std::string& s) {
  if (s == "1" || s == "F1" || s == "f1") return SymbolTerm::F1;
  if (s == "2" || s == "F2" || s == "f2") return SymbolTerm::F2;
  if (s == "3" || s == "F3" || s == "f3") return SymbolTerm::F3;
  if (s == "total" || s == "TOTAL") return SymbolTerm::Total;
  if (s == "unit" || s == "UNIT") return SymbolTerm::Unit;
  throw Error(Errc::ConfigInvalid, "unknown term '" + s + "' (expected 1, 2, 3 or total)");
}

/// Real weight on zero-sum triples. `coeff` holds the signed prefactors of the
/// three terms; TOTAL is coeff[0] w1 + coeff[1] w2 + coeff[2] w3.
struct TrilinearSymbol {
  SymbolTerm term = SymbolTerm::Total;
  double s = 1.0;
  std::array<double, 3> coeff{1.0, -2.0, 1.0};

  static TrilinearSymbol make(SymbolTerm t, double s) { return TrilinearSymbol{t, s, {1.0, -2.0, 1.0}}; }

  std::string label() const { return to_string(term); }

  double weight(int n1, int n2, int n3) const {
    auto p = [&](int n) { return std::pow(static_cast<double>(std::abs(n)), s); };
    auto w1 = [&] { return p(n1) * p(n2) * n3; };
    auto w2 = [&] { return p(n1) * n2 * (p(n2 + n3) - p(n2)); };
    auto w3 = [&] {
      const int m = n2 + n3;
      return p(n1) * m * p(m) / (1.0 + std::abs(m));
    };
    switch (term) {
      case SymbolTerm::F1: return coeff[0] * w1();
      case SymbolTerm::F2: return coeff[1] * w2();
      case SymbolTerm::F3: return coeff[2] * w3();
      case SymbolTerm::Total: return coeff[0] * w1() + coeff[1] * w2() + coeff[2] * w3();
      case SymbolTerm::Unit: return 1.0;
    }
    return 0.0;
  }
};

/// Symbol weights with |n|^s tabulated for |n| <= 2 max_abs.
class SymbolEvaluator {
 public:
  SymbolEvaluator(const TrilinearSymbol& sym, int max_abs) : sym_(sym), pw_(static_cast<std::size_t>(2 * max_abs + 1)) {
    for (std::size_t k = 0; k < pw_.size(); ++k) pw_[k] = std::pow(static_cast<double>(k), sym.s);
  }

  const TrilinearSymbol& symbol() const { return sym_; }

  double operator()(int n1, int n2, int n3) const {
    const int m = n2 + n3;
    const double a1 = p(n1);
    switch (sym_.term) {
      case SymbolTerm::F1: return sym_.coeff[0] * a1 * p(n2) * n3;
      case SymbolTerm::F2: return sym_.coeff[1] * a1 * n2 * (p(m) - p(n2));
      case SymbolTerm::F3: return sym_.coeff[2] * a1 * m * p(m) / (1.0 + std::abs(m));
      case SymbolTerm::Total:
        return sym_.coeff[0] * a1 * p(n2) * n3 + sym_.coeff[1] * a1 * n2 * (p(m) - p(n2)) +
               sym_.coeff[2] * a1 * m * p(m) / (1.0 + std::abs(m));
      case SymbolTerm::Unit: return 1.0;
    }
    return 0.0;
  }

 private:
  double p(int n) const { return pw_[static_cast<std::size_t>(std::abs(n))]; }

  TrilinearSymbol sym_;
  std::vector<double> pw_;
};

/// Calls f(n1, n2, n3) for every triple of A_{N,M}: n_j != 0, n1+n2+n3 = 0,
/// M < max|n_j| <= N. Order: n1 ascending, then n2 ascending.
template <class F>
void for_each_triple(int N, int M, F&& f) {
  require(N >= 0 && M >= 0, Errc::InvalidArgument, "frequency bounds must be nonnegative");
  for (int n1 = -N; n1 <= N; ++n1) {
    if (n1 == 0) continue;
    const int lo = std::max(-N, -N - n1);
    const int hi = std::min(N, N - n1);
    for (int n2 = lo; n2 <= hi; ++n2) {
      const int n3 = -n1 - n2;
      if (n2 == 0 || n3 == 0) continue;
      const int top = std::max({std::abs(n1), std::abs(n2), std::abs(n3)});
      if (top <= M) continue;
      f(n1, n2, n3);
    }
  }
}

struct Triple {
  int n1, n2, n3;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::vector<Triple> enumerate_A(int N, int M) {
  std::vector<Triple> out;
  for_each_triple(N, M, [&](int a, int b, int c) { out.push_back({a, b, c}); });
  return out;
}

}  // namespace bbm
