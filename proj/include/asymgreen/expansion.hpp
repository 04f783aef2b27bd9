#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymgreen/diff_poly.hpp"
#include "asymgreen/potential.hpp"
#include "asymgreen/quadrature.hpp"
#include "asymgreen/validity.hpp"

namespace asymgreen {

using cplx = std::complex<double>;

// A monomial needs two singular factors at a jump, or a delta derivative
// whose cofactor is itself discontinuous there.
class DistributionProductError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested order lies beyond the validity cap and force was not given.
class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Polynomial in the jets, flattened for repeated numeric evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const DiffPoly& p);

  int max_order() const { return max_order_; }
  double operator()(std::span<const double> jets) const;
  template <class T>
  T evaluate(std::span<const T> jets, const T& zero) const {
    T total = zero;
    for (const auto& t : terms_) {
      T term = zero + t.coeff;
      for (const auto& [order, power] : t.factors)
        for (int p = 0; p < power; ++p) term = term * jets[static_cast<std::size_t>(order)];
      total = total + term;
    }
    return total;
  }

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> factors;  // (order, power)
  };
  std::vector<Term> terms_;
  int max_order_ = -1;
};

// c * delta^(order)(z - point)
struct DistTerm {
  double point;
  int order;
  double coeff;
};

struct DistValue {
  std::function<double(double)> smooth;
  std::vector<DistTerm> singular;  // reduced: constant coefficients only
};

struct ExpansionOptions {
  std::optional<Basis> basis;      // default: the potential's native basis
  bool apply_corrections = true;   // add (-1)^M C^2/2 at order 2M+2
  bool force = false;              // allow orders beyond the validity cap
  QuadratureOptions quad{};
  double diag_threshold_rel = 1e-6;  // short time: diagonal formula below this |x-y|/max(1,|x|)
  double near_diag = 0.5;            // short time: Taylor-in-(x-y) route below this |x-y|
};

// Basis actually used for the potential and options.
Basis resolve_basis(const PotentialSpec& spec, const ExpansionOptions& opt);

// s_n at a non-jump point.
double eval_s(int n, double z, const PotentialSpec& spec, const ExpansionOptions& opt = {});
// s_n on (lo, hi) as smooth part plus delta terms at the jumps strictly inside.
DistValue s_distribution(int n, const PotentialSpec& spec, double lo, double hi,
                         const ExpansionOptions& opt = {});

// Uncorrected a_n(x, y); any x != y off the jumps (odd n antisymmetric).
double coeff_a(int n, double x, double y, const PotentialSpec& spec, const ExpansionOptions& opt = {});

struct ExpansionSeries {
  double x = 0, y = 0;
  int order = 0;
  Basis basis = Basis::F;
  std::vector<double> a;  // a[0] unused, a[1..order] uncorrected
  std::vector<Correction> corrections;  // those applied (order <= order)
  ValidityReport validity;
  bool forced = false;
  double delta_V = 0;
  bool has_delta_V = false;

  // a_n with the applied corrections
  double coefficient(int n) const;
  // largest order allowed in the regime, counting the corrected slot
  OrderCap cap(Regime r) const;
};

ExpansionSeries make_expansion(const PotentialSpec& spec, double x, double y, int order,
                               const ExpansionOptions& opt = {});

// Real axis for Im k = 0, otherwise the sector.
Regime default_regime(cplx k);

struct LogGResult {
  cplx log_G;                 // partial sum of the 1/k expansion
  std::vector<cplx> terms;    // terms[0] = ik(x-y), terms[n] = a_n/(2ik)^n
  cplx log_GS;                // log G - log(2ik), G = 2ik G_S
  std::optional<cplx> log_GF;  // i pi - dV/2 + log G_S at i omega = k^2
  Regime regime = Regime::Sector;
  bool beyond_cap = false;
};

LogGResult logG_series(const ExpansionSeries& s, cplx k, std::optional<Regime> regime = {});
LogGResult logG_series(double x, double y, cplx k, int order, const PotentialSpec& spec,
                       const ExpansionOptions& opt = {}, std::optional<Regime> regime = {});

// b_n from the (corrected) a_n
std::vector<double> b_coefficients(const ExpansionSeries& s);
cplx G_series(const ExpansionSeries& s, cplx k, std::optional<Regime> regime = {});
cplx G_series(double x, double y, cplx k, int order, const PotentialSpec& spec,
              const ExpansionOptions& opt = {}, std::optional<Regime> regime = {});

enum class DiagonalPolicy { Direct, TaylorX, Diagonal };
const char* diagonal_policy_name(DiagonalPolicy p);

struct ShortTimeSeries {
  double x = 0, y = 0;
  int order = 0;
  std::vector<double> g;  // g[0] = 1
  double delta_V = 0;     // V(x) - V(y)
  double X2 = 0;          // (x - y)^2
  DiagonalPolicy policy = DiagonalPolicy::Direct;

  // 1 + g_1 t + ... + g_N t^N
  double bracket(double t) const;
  double value(double t) const;
};

ShortTimeSeries make_shorttime(const PotentialSpec& spec, double x, double y, int order,
                               const ExpansionOptions& opt = {});
double shorttime_GF(double x, double y, double t, int order, const PotentialSpec& spec,
                    const ExpansionOptions& opt = {});

}  // namespace asymgreen
