#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asymgreen/expansion.hpp"
#include "asymgreen/oracle.hpp"

namespace asymgreen {

// k = |k| e^{i theta} (Sector), |k| (Real), or sqrt(|k|^2 - b^2) + i b (ImLine)
struct Ray {
  enum class Kind { Real, Sector, ImLine };
  Kind kind = Kind::Real;
  double param = 0;

  // "real", "sector:<theta>", "imline:<b>"
  static Ray parse(std::string_view text);
  std::string to_string() const;
  Regime regime() const;
  cplx at(double modulus) const;
};

// n moduli evenly spaced on [lo, hi]
std::vector<double> linear_moduli(double lo, double hi, int n);

enum class Reference { Auto, Oracle, Exact };
const char* reference_name(Reference r);
Reference parse_reference(std::string_view text);

struct RemainderOptions {
  ExpansionOptions expansion = defaults();
  OracleConfig oracle = oracle_defaults();
  // Auto: the closed form when it is elementary, the Riccati oracle otherwise
  Reference reference = Reference::Auto;
  std::string example;  // builtin name for the closed form, if any
  int threads = 0;

  static ExpansionOptions defaults() {
    ExpansionOptions o;
    o.apply_corrections = false;
    o.force = true;
    return o;
  }
  static OracleConfig oracle_defaults() {
    OracleConfig c;
    c.ode_tol = 1e-14;
    return c;
  }
};

struct RemainderSample {
  cplx k;
  cplx delta;           // log G - partial sum, principal branch
  double abs_kN_delta = 0;
  bool ok = false;
  std::string error;
  Reference used = Reference::Oracle;
};

enum class Trend { Vanishing, FiniteLimit, Divergent, Undetermined };
const char* trend_name(Trend t);

struct RemainderReport {
  int N = 0;
  double x = 0, y = 0;
  Ray ray;
  std::vector<RemainderSample> samples;
  Trend trend = Trend::Undetermined;
  double slope = 0;  // log-log slope of the envelope of |k^N Delta_N|
  double limit = 0;  // mean of the last three good samples
  bool beyond_cap = false;
  std::vector<Correction> corrections;
};

// Trend of |k^N Delta_N| from the block-maximum envelope over the upper half
// of the |k| range: slope < -0.5 vanishing, > 0.5 divergent.
Trend classify_trend(const std::vector<double>& moduli, const std::vector<double>& values, double* slope = nullptr);

RemainderSample remainder_sample(const ExpansionSeries& s, const PotentialSpec& spec, cplx k, Regime regime,
                                 const RemainderOptions& opt);

// OpenMP over the samples; results in sample order.
RemainderReport remainder_report(const PotentialSpec& spec, double x, double y, int N, const Ray& ray,
                                 const std::vector<double>& moduli, const RemainderOptions& opt = {});
// Same on one thread, without OpenMP.
RemainderReport remainder_report_serial(const PotentialSpec& spec, double x, double y, int N, const Ray& ray,
                                        const std::vector<double>& moduli, const RemainderOptions& opt = {});

// k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta with %.17g; failed samples keep
// the k columns and leave the others as nan
std::string remainder_csv(const RemainderReport& r);

}  // namespace asymgreen
