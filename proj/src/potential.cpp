#include "asymgreen/potential.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "asymgreen/quadrature.hpp"

namespace asymgreen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool same_point(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

// ---------------------------------------------------------------- Piecewise

Piecewise::Piecewise(Expr single) : pieces_{{-kInf, kInf, std::move(single)}} {}

Piecewise::Piecewise(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PotentialError("piecewise function without pieces");
  if (pieces_.front().lo != -kInf || pieces_.back().hi != kInf)
    throw PotentialError("pieces do not cover the real line");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].lo < pieces_[i].hi)) throw PotentialError("empty piece interval");
    if (i > 0 && pieces_[i].lo != pieces_[i - 1].hi) throw PotentialError("pieces are not contiguous");
  }
}

std::vector<double> Piecewise::breakpoints() const {
  std::vector<double> b;
  for (std::size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].lo);
  return b;
}

bool Piecewise::is_breakpoint(double z) const {
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].lo == z) return true;
  return false;
}

std::size_t Piecewise::locate(double z, int side) const {
  std::size_t i = 0;
  while (i + 1 < pieces_.size() && z >= pieces_[i].hi) ++i;
  if (side < 0 && i > 0 && z == pieces_[i].lo) --i;
  return i;
}

double Piecewise::operator()(double z, int side) const { return evaluate(pieces_[locate(z, side)].expr, z); }

Taylor<double> Piecewise::jet(double z, int order, int side) const {
  return asymgreen::jet(pieces_[locate(z, side)].expr, z, order);
}

std::vector<double> Piecewise::derivatives(double z, int order, int side) const {
  return jet(z, order, side).derivatives();
}

std::string Piecewise::to_string() const {
  if (pieces_.size() == 1) return print(pieces_.front().expr);
  std::string out = "piecewise(";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i > 0) out += ", ";
    const bool last = i + 1 == pieces_.size();
    out += "(z" + std::string(last ? ">=" : "<") + format_number(last ? pieces_[i].lo : pieces_[i].hi) +
           ", " + print(pieces_[i].expr) + ")";
  }
  return out + ")";
}

Piecewise parse_piecewise(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  constexpr std::string_view kw = "piecewise";
  std::size_t j = i + kw.size();
  while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
  if (text.substr(i, kw.size()) != kw || j >= text.size() || text[j] != '(')
    return Piecewise(parse_expr(text));

  // split the argument list into top-level "(cond, expr)" groups
  struct Clause {
    bool less;  // z < a, otherwise z >= a
    double bound;
    Expr expr;
  };
  std::vector<Clause> clauses;
  std::size_t pos = j + 1;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  while (true) {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unterminated piecewise", pos);
    if (text[pos] != '(') throw ParseError("expected '(' opening a piecewise clause", pos);
    const std::size_t open = pos;
    int depth = 0;
    std::size_t comma = std::string_view::npos, close = std::string_view::npos;
    for (std::size_t k = open; k < text.size(); ++k) {
      if (text[k] == '(') ++depth;
      if (text[k] == ')' && --depth == 0) {
        close = k;
        break;
      }
      if (text[k] == ',' && depth == 1 && comma == std::string_view::npos) comma = k;
    }
    if (close == std::string_view::npos) throw ParseError("unbalanced parentheses in piecewise", open);
    if (comma == std::string_view::npos) throw ParseError("piecewise clause needs (condition, expression)", open);
    const std::string_view cond = text.substr(open + 1, comma - open - 1);
    std::size_t c = 0;
    while (c < cond.size() && std::isspace(static_cast<unsigned char>(cond[c]))) ++c;
    if (c >= cond.size() || cond[c] != 'z') throw ParseError("condition must start with z", open + 1 + c);
    ++c;
    while (c < cond.size() && std::isspace(static_cast<unsigned char>(cond[c]))) ++c;
    bool less;
    if (cond.substr(c, 2) == ">=") {
      less = false;
      c += 2;
    } else if (cond.substr(c, 1) == "<" && cond.substr(c, 2) != "<=") {
      less = true;
      c += 1;
    } else {
      throw ParseError("condition must be z < a or z >= a", open + 1 + c);
    }
    Expr bound_expr;
    try {
      bound_expr = parse_expr(cond.substr(c));
    } catch (const ParseError& e) {
      throw ParseError("bad condition bound", open + 1 + c + e.position);
    }
    if (depends_on_z(bound_expr)) throw ParseError("condition bound must be constant", open + 1 + c);
    Expr body;
    try {
      body = parse_expr(text.substr(comma + 1, close - comma - 1));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()).substr(0, std::string(e.what()).find(" at position")),
                       comma + 1 + e.position);
    }
    clauses.push_back({less, evaluate(bound_expr, 0), body});
    pos = close + 1;
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
      break;
    }
    throw ParseError("expected ',' or ')' in piecewise", pos);
  }
  skip_ws();
  if (pos != text.size()) throw ParseError("trailing input after piecewise", pos);

  // first-match: clause i owns {cond_i} minus the earlier conditions
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < clauses.size(); ++k) {
    double lo = -kInf, hi = kInf;
    auto restrict_to = [&](bool less, double b) {
      if (less)
        hi = std::min(hi, b);
      else
        lo = std::max(lo, b);
    };
    restrict_to(clauses[k].less, clauses[k].bound);
    for (std::size_t m = 0; m < k; ++m) restrict_to(!clauses[m].less, clauses[m].bound);
    if (lo < hi) pieces.push_back({lo, hi, clauses[k].expr});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  return Piecewise(std::move(pieces));
}

// ------------------------------------------------------------ PotentialSpec

const char* mode_name(PotentialMode m) {
  switch (m) {
    case PotentialMode::FGiven: return "f";
    case PotentialMode::VGiven: return "V";
    case PotentialMode::VSGiven: return "VS";
  }
  return "?";
}

const char* tail_name(TailKind t) {
  switch (t) {
    case TailKind::DecaysToZero: return "decays-to-zero";
    case TailKind::FiniteLimit: return "finite-limit";
    case TailKind::DivergesSubexponential: return "diverges-subexponential";
    case TailKind::DivergesOther: return "diverges-other";
  }
  return "?";
}

const Piecewise& PotentialSpec::basis_function() const {
  const auto& p = basis() == Basis::F ? f : vs;
  if (!p) throw PotentialError("potential links not derived");
  return *p;
}

double PotentialSpec::delta_V(double x, double y) const {
  if (mode == PotentialMode::VGiven) return given(x) - given(y);
  if (mode == PotentialMode::FGiven) {
    const Piecewise& fp = *f;
    QuadratureOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-13;
    return -2 * integrate([&](double z) { return fp(z); }, y, x, fp.breakpoints(), opt).value;
  }
  throw PotentialError("V is not available for a V_S-given potential");
}

PotentialSpec derive_links(PotentialSpec spec) {
  auto vs_of = [](const Piecewise& f) {
    return f.transform([](const Expr& e) { return simplified_add(ex::pow(e, 2), differentiate(e)); });
  };
  switch (spec.mode) {
    case PotentialMode::VGiven:
      for (double b : spec.given.breakpoints())
        if (!same_point(spec.given(b, -1), spec.given(b, +1)))
          throw PotentialError("V must be continuous; jump at z = " + format_number(b));
      spec.V = spec.given;
      spec.f = spec.given.transform([](const Expr& e) { return scaled(-0.5, differentiate(e)); });
      spec.vs = vs_of(*spec.f);
      break;
    case PotentialMode::FGiven:
      spec.f = spec.given;
      spec.vs = vs_of(*spec.f);
      break;
    case PotentialMode::VSGiven:
      spec.vs = spec.given;
      break;
  }
  return spec;
}

std::vector<JumpRecord> detect_jumps(const PotentialSpec& spec, int max_order) {
  const Piecewise& g = spec.basis_function();
  const int shift = spec.basis() == Basis::VS ? 1 : 0;
  std::vector<JumpRecord> out;
  for (double b : g.breakpoints()) {
    const auto l = g.derivatives(b, max_order, -1);
    const auto r = g.derivatives(b, max_order, +1);
    for (int m = 0; m <= max_order; ++m) {
      const double a = l[static_cast<std::size_t>(m)], c = r[static_cast<std::size_t>(m)];
      if (std::abs(c - a) > kJumpRelTol * std::max({1.0, std::abs(a), std::abs(c)})) {
        out.push_back({b, m + shift, c - a});
        break;
      }
    }
  }
  return out;
}

TailInfo classify_tail(const Piecewise& g, int side) {
  const Piece& piece = side < 0 ? g.pieces().front() : g.pieces().back();
  TailInfo t;
  if (!depends_on_z(piece.expr)) {
    const double v = evaluate(piece.expr, 0);
    t.kind = v == 0 ? TailKind::DecaysToZero : TailKind::FiniteLimit;
    t.limit = v;
    t.how = "symbolic";
    return t;
  }
  t.how = "sampled";
  double base = 10;
  for (double b : g.breakpoints()) base = std::max(base, std::abs(b) + 10);
  const double s = side < 0 ? -1 : 1;
  const double g1 = evaluate(piece.expr, s * base), g2 = evaluate(piece.expr, s * 2 * base),
               g3 = evaluate(piece.expr, s * 4 * base);
  const double v1 = std::abs(g1), v2 = std::abs(g2), v3 = std::abs(g3);
  if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(g3)) {
    t.kind = TailKind::DivergesOther;
    return t;
  }
  if (std::abs(g3 - g2) <= 1e-8 * std::max(1.0, v3)) {
    t.kind = v3 <= 1e-8 ? TailKind::DecaysToZero : TailKind::FiniteLimit;
    t.limit = v3 <= 1e-8 ? 0.0 : g3;
    return t;
  }
  if (v3 < v2 && v2 < v1) {
    // Aitken extrapolation over the geometric sample points
    const double d1 = g2 - g1, d2 = g3 - g2;
    const double lim = d2 == d1 ? g3 : g3 - d2 * d2 / (d2 - d1);
    if (std::abs(lim) < 0.25 * v3) {
      t.kind = TailKind::DecaysToZero;
      t.limit = 0;
    } else {
      t.kind = TailKind::FiniteLimit;
      t.limit = lim;
    }
    return t;
  }
  if (v3 > v2 && v2 > v1) {
    const double l1 = std::log(v2 / v1), l2 = std::log(v3 / v2);
    t.kind = (l2 > 1.7 * l1 && l2 > 1) ? TailKind::DivergesOther : TailKind::DivergesSubexponential;
    return t;
  }
  t.kind = TailKind::DivergesSubexponential;
  t.how = "sampled (non-monotone, no limit detected)";
  return t;
}

PotentialSpec finalize_potential(PotentialSpec spec) {
  spec = derive_links(std::move(spec));
  const auto detected = detect_jumps(spec);
  for (const auto& d : spec.declared_jumps) {
    auto it = std::find_if(detected.begin(), detected.end(),
                           [&](const JumpRecord& r) { return same_point(r.location, d.location); });
    if (it == detected.end()) {
      bool at_break = false;
      for (double b : spec.breakpoints()) at_break = at_break || same_point(b, d.location);
      if (!at_break)
        throw PotentialError("declared jump at z = " + format_number(d.location) +
                             " is not at a piece boundary");
      spec.notes.push_back("warning: declared jump at z = " + format_number(d.location) +
                           " not detected (smooth join); detection wins");
      continue;
    }
    if (d.order > it->order)
      throw PotentialError("inconsistent jump at z = " + format_number(d.location) + ": declared order " +
                           std::to_string(d.order) + " but derivative order " + std::to_string(it->order) +
                           " already jumps");
    if (d.order < it->order ||
        std::abs(d.magnitude - it->magnitude) > kJumpRelTol * std::max(1.0, std::abs(it->magnitude)))
      spec.notes.push_back("warning: declared jump at z = " + format_number(d.location) + " (M=" +
                           std::to_string(d.order) + ", C=" + format_number(d.magnitude) +
                           ") differs from detected (M=" + std::to_string(it->order) +
                           ", C=" + format_number(it->magnitude) + "); detection wins");
  }
  spec.jumps = detected;
  spec.smooth_joins.clear();
  for (double b : spec.breakpoints()) {
    const bool jump = std::any_of(detected.begin(), detected.end(),
                                  [&](const JumpRecord& r) { return r.location == b; });
    if (!jump) {
      spec.smooth_joins.push_back(b);
      spec.notes.push_back("breakpoint z = " + format_number(b) + " is smooth up to derivative order " +
                           std::to_string(kJumpProbeOrder + (spec.basis() == Basis::VS ? 1 : 0)));
    }
  }

  auto tail_of = [&](int side) {
    if (spec.basis() == Basis::F) return classify_tail(*spec.f, side);
    // f ~ sqrt(V_S - E0) asymptotically: same growth class, finite iff V_S finite
    TailInfo t = classify_tail(*spec.vs, side);
    if (t.finite()) {
      t.kind = TailKind::FiniteLimit;
      t.limit = std::numeric_limits<double>::quiet_NaN();
    }
    t.how += " (from V_S)";
    return t;
  };
  spec.tail_minus = spec.declared_tail_minus ? *spec.declared_tail_minus : tail_of(-1);
  spec.tail_plus = spec.declared_tail_plus ? *spec.declared_tail_plus : tail_of(+1);
  if (!spec.monotone_tails)
    spec.notes.push_back("tail monotonicity of f and its derivatives not asserted (monotone_tails unset)");
  if (spec.mode == PotentialMode::VSGiven && !spec.e0_exact)
    spec.notes.push_back("E0 = " + format_number(spec.e0) + " is a user-supplied approximation");
  return spec;
}

PotentialSpec make_potential(PotentialMode mode, std::string_view text, double e0, std::string name) {
  PotentialSpec spec;
  spec.name = std::move(name);
  spec.mode = mode;
  spec.given = parse_piecewise(text);
  spec.e0 = e0;
  return finalize_potential(std::move(spec));
}

// ----------------------------------------------------------------- builtins

namespace {

TailInfo declared(TailKind k, double limit = std::numeric_limits<double>::quiet_NaN()) {
  return TailInfo{k, limit, "declared"};
}

}  // namespace

std::vector<std::string> builtin_names() { return {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8"}; }

PotentialSpec builtin(std::string_view name) {
  PotentialSpec s;
  s.name = std::string(name);
  s.mode = PotentialMode::VGiven;
  s.monotone_tails = true;
  using TK = TailKind;
  if (name == "ex1") {
    s.given = parse_piecewise("2*z");
    s.declared_tail_minus = declared(TK::FiniteLimit, -1);
    s.declared_tail_plus = declared(TK::FiniteLimit, -1);
  } else if (name == "ex2") {
    s.given = parse_piecewise("z^2");
    s.declared_tail_minus = declared(TK::DivergesSubexponential);
    s.declared_tail_plus = declared(TK::DivergesSubexponential);
  } else if (name == "ex3") {
    s.given = parse_piecewise("exp(z)");
    s.declared_tail_minus = declared(TK::DecaysToZero, 0);
    s.declared_tail_plus = declared(TK::DivergesOther);
  } else if (name == "ex4") {
    s.given = parse_piecewise("2*log(cosh(z))");
    s.declared_tail_minus = declared(TK::FiniteLimit, 1);
    s.declared_tail_plus = declared(TK::FiniteLimit, -1);
  } else if (name == "ex5") {
    s.given = parse_piecewise("piecewise((z<0, -2*z), (z>=0, 2*z))");
    s.declared_jumps = {{0, 0, -2}};
    s.declared_tail_minus = declared(TK::FiniteLimit, 1);
    s.declared_tail_plus = declared(TK::FiniteLimit, -1);
  } else if (name == "ex6") {
    s.given = parse_piecewise("piecewise((z<0, exp(z)), (z>=0, 1 + z))");
    s.declared_jumps = {{0, 1, 0.5}};
    s.declared_tail_minus = declared(TK::DecaysToZero, 0);
    s.declared_tail_plus = declared(TK::FiniteLimit, -0.5);
  } else if (name == "ex7") {
    s.given = parse_piecewise("piecewise((z<0, 1 - sqrt(1 - z)), (z>=0, sqrt(1 + z) - 1))");
    s.declared_jumps = {{0, 1, 0.25}};
    s.declared_tail_minus = declared(TK::DecaysToZero, 0);
    s.declared_tail_plus = declared(TK::DecaysToZero, 0);
  } else if (name == "ex8") {
    s.mode = PotentialMode::VSGiven;
    s.given = parse_piecewise("piecewise((z<0, -z), (z>=0, z))");
    s.e0 = 1.018792971647471;  // first zero of Ai'(-E0)
    s.e0_exact = false;
    s.declared_jumps = {{0, 2, 2}};
    s.declared_tail_minus = declared(TK::DivergesSubexponential);
    s.declared_tail_plus = declared(TK::DivergesSubexponential);
  } else {
    throw PotentialError("unknown builtin '" + std::string(name) + "'");
  }
  return finalize_potential(std::move(s));
}

// -------------------------------------------------------------- file format

PotentialSpec parse_potential_file_text(std::string_view text, std::string name) {
  PotentialSpec s;
  s.name = std::move(name);
  std::string mode = "f", body;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PotentialError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "mode") {
      mode = value;
    } else if (key == "expr" || key == "pieces") {
      body = value;
    } else if (key == "E0") {
      s.e0 = std::stod(value);
    } else if (key == "name") {
      s.name = value;
    } else if (key == "monotone_tails") {
      s.monotone_tails = value == "true" || value == "1" || value == "yes";
    } else if (key == "jumps") {
      std::istringstream js(value);
      std::string item;
      while (std::getline(js, item, ';')) {
        if (trim(item).empty()) continue;
        JumpRecord r;
        char c1 = 0, c2 = 0;
        std::istringstream is(trim(item));
        if (!(is >> r.location >> c1 >> r.order >> c2 >> r.magnitude) || c1 != ':' || c2 != ':')
          throw PotentialError("line " + std::to_string(lineno) + ": jump must be loc:M:C");
        s.declared_jumps.push_back(r);
      }
    } else {
      throw PotentialError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (body.empty()) throw PotentialError("potential file has no expr/pieces entry");
  if (mode == "f" || mode == "F" || mode == "F_GIVEN")
    s.mode = PotentialMode::FGiven;
  else if (mode == "V" || mode == "V_GIVEN")
    s.mode = PotentialMode::VGiven;
  else if (mode == "VS" || mode == "vs" || mode == "VS_GIVEN")
    s.mode = PotentialMode::VSGiven;
  else
    throw PotentialError("unknown mode '" + mode + "'");
  s.given = parse_piecewise(body);
  return finalize_potential(std::move(s));
}

PotentialSpec load_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PotentialError("cannot open potential file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_potential_file_text(ss.str(), path);
}

}  // namespace asymgreen
