#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymgreen/taylor.hpp"

namespace asymgreen {

enum class Fn { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Tanh, Sech };
enum class NodeKind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call };

const char* fn_name(Fn fn);

struct ExprNode;
// Immutable expression in the single variable z; subtrees may be shared.
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double value = 0;  // Const
  int power = 0;     // Pow
  Fn fn = Fn::Exp;   // Call
  Expr lhs, rhs;     // operands (unary nodes use lhs)
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Plain constructors: build exactly the requested node.
namespace ex {
Expr constant(double v);
Expr var();
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr pow(Expr a, int n);
Expr call(Fn fn, Expr a);
}  // namespace ex

bool structurally_equal(const Expr& a, const Expr& b);
bool depends_on_z(const Expr& e);

// Unary minus applied directly to a numeric literal (not followed by ^)
// becomes a negative constant; print() relies on that convention.
Expr parse_expr(std::string_view text);
std::string print(const Expr& e);
std::string format_number(double v);

double evaluate(const Expr& e, double z);
// Taylor coefficients of e about z up to the given order
Taylor<double> jet(const Expr& e, double z, int order);
// e, e', ..., e^(order) at z
std::vector<double> derivatives(const Expr& e, double z, int order);

// Simplifying combinators (fold constants, drop zeros and unit factors).
Expr simplified_add(const Expr& a, const Expr& b);
Expr simplified_mul(const Expr& a, const Expr& b);
Expr scaled(double c, const Expr& e);

inline constexpr int kDefaultMaxDerivative = 14;
Expr differentiate(const Expr& e, int n = 1, int max_order = kDefaultMaxDerivative);

}  // namespace asymgreen
