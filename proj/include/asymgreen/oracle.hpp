#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymgreen/potential.hpp"

namespace asymgreen {

using cplx = std::complex<double>;

// Non-convergence, step-size underflow or a branch singularity.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RiccatiForm {
  Auto,         // S form when f is available, Schrodinger form otherwise; Linear on failure
  S,            // S_r, S_l Riccati in f
  Schrodinger,  // log-derivative Riccati in V_S
  Linear,       // rescaled first-order system for psi (f when available, else V_S)
};

const char* form_name(RiccatiForm f);

struct OracleConfig {
  double ode_tol = 1e-10;  // local error tolerance (absolute and relative)
  double tol = 1e-9;       // convergence in the truncation length
  double L0 = 20;
  double L_max = 320;
  int adiabatic_iterations = 4;
  double tail_cap = 1e3;  // start point moved inward where |f| (or |V_S|) exceeds this
  long max_steps = 5'000'000;
  RiccatiForm form = RiccatiForm::Auto;
  bool mirror = false;  // compute on the reflected potential z -> -z
};

struct ScatteringTriple {
  cplx tau = 1, R_r = 0, R_l = 0;
  double x1 = 0, x2 = 0;
};

// tau, R_r, R_l of the interval (x1, x2), integrating their ODEs in the right end x2.
ScatteringTriple finite_scattering(double x1, double x2, cplx k, const PotentialSpec& spec,
                                   const OracleConfig& cfg = {});

struct SemiInfiniteS {
  cplx S_r = 0, S_l = 0;
  double L = 0;
  bool converged = false;
  bool capped_minus = false, capped_plus = false;
};

SemiInfiniteS semi_infinite_S(double x, cplx k, const PotentialSpec& spec, const OracleConfig& cfg = {});

struct GreenEval {
  // S form: values at x and at y; Schrodinger form leaves them unset
  std::optional<cplx> S_r, S_l, S, S_r_y, S_l_y, S_y;
  cplx G = 0, logG = 0;
  double L = 0;
  bool converged = false;
  RiccatiForm form = RiccatiForm::S;
};

// log G(x, y; k) for x > y from the semi-infinite Riccati sweeps.
GreenEval oracle_logG(double x, double y, cplx k, const PotentialSpec& spec, const OracleConfig& cfg = {});

}  // namespace asymgreen
