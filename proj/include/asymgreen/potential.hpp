#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asymgreen/diff_poly.hpp"
#include "asymgreen/expr.hpp"

namespace asymgreen {

// One piece on the half-open interval [lo, hi).
struct Piece {
  double lo;
  double hi;
  Expr expr;
};

class Piecewise {
 public:
  Piecewise() = default;
  explicit Piecewise(Expr single);
  // pieces must be contiguous, ordered and cover the real line
  explicit Piecewise(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::vector<double> breakpoints() const;
  bool is_breakpoint(double z) const;
  // index of the piece holding z; at a breakpoint side < 0 selects the piece
  // ending there, side >= 0 the piece starting there
  std::size_t locate(double z, int side = 0) const;

  double operator()(double z, int side = 0) const;
  Taylor<double> jet(double z, int order, int side = 0) const;
  std::vector<double> derivatives(double z, int order, int side = 0) const;

  template <class Fn>
  Piecewise transform(Fn&& fn) const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) out.push_back({p.lo, p.hi, fn(p.expr)});
    return Piecewise(std::move(out));
  }

  std::string to_string() const;

 private:
  std::vector<Piece> pieces_;
};

// Accepts a plain expression or piecewise((z<a, e1), (z>=a, e2), ...) with
// first-match semantics.
Piecewise parse_piecewise(std::string_view text);

enum class PotentialMode { FGiven, VGiven, VSGiven };
enum class TailKind { DecaysToZero, FiniteLimit, DivergesSubexponential, DivergesOther };

const char* mode_name(PotentialMode m);
const char* tail_name(TailKind t);

struct TailInfo {
  TailKind kind = TailKind::DecaysToZero;
  double limit = std::numeric_limits<double>::quiet_NaN();
  std::string how;  // "symbolic", "sampled" or "declared"
  bool finite() const { return kind == TailKind::DecaysToZero || kind == TailKind::FiniteLimit; }
};

// Lowest derivative order M of f with a finite discontinuity of size
// C = f^(M)(z0+) - f^(M)(z0-).
struct JumpRecord {
  double location = 0;
  int order = 0;
  double magnitude = 0;
};

struct PotentialSpec {
  std::string name;
  PotentialMode mode = PotentialMode::FGiven;
  Piecewise given;  // f, V or V_S according to mode
  double e0 = 0;
  bool e0_exact = true;
  std::vector<JumpRecord> declared_jumps;
  bool monotone_tails = false;
  std::optional<TailInfo> declared_tail_minus, declared_tail_plus;

  // filled by derive_links / finalize_potential
  std::optional<Piecewise> f, V, vs;
  std::vector<JumpRecord> jumps;
  std::vector<double> smooth_joins;  // breakpoints with no jump up to the probe order
  TailInfo tail_minus, tail_plus;    // of f
  std::vector<std::string> notes;

  Basis basis() const { return mode == PotentialMode::VSGiven ? Basis::VS : Basis::F; }
  // f in F basis, V_S in VS basis
  const Piecewise& basis_function() const;
  std::vector<double> breakpoints() const { return given.breakpoints(); }
  bool has_V() const { return mode != PotentialMode::VSGiven; }
  // V(x) - V(y); by quadrature of -2 f in F-given mode
  double delta_V(double x, double y) const;
};

class PotentialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kJumpRelTol = 1e-9;
inline constexpr int kJumpProbeOrder = 14;

PotentialSpec derive_links(PotentialSpec spec);
// Jumps in f-order terms (a V_S jump of order m is an f jump of order m+1).
std::vector<JumpRecord> detect_jumps(const PotentialSpec& spec, int max_order = kJumpProbeOrder);
TailInfo classify_tail(const Piecewise& g, int side);
// derive_links, jump detection reconciled with declared jumps, tails
PotentialSpec finalize_potential(PotentialSpec spec);

PotentialSpec make_potential(PotentialMode mode, std::string_view text, double e0 = 0,
                             std::string name = "custom");
PotentialSpec builtin(std::string_view name);
std::vector<std::string> builtin_names();

// key = value lines: mode, expr | pieces, E0, jumps ("loc:M:C; ..."),
// monotone_tails; '#' starts a comment
PotentialSpec parse_potential_file_text(std::string_view text, std::string name = "file");
PotentialSpec load_potential_file(const std::string& path);

}  // namespace asymgreen
