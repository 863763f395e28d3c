#pragma once

// Arithmetic expression language for coefficient profiles phi(t) and pulse
// shapes gamma(tau).  Grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? power
//   power  := atom ('^' factor)?          (right-associative)
//   atom   := NUMBER | 't' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC   := sin | cos | tan | exp | log | sqrt | abs
//
// Specs are immutable after construction and safe to evaluate concurrently.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace helmfocus {

struct ParseError : std::runtime_error {
  std::size_t offset;  // byte offset into the source text
  ParseError(const std::string& message, std::size_t off)
      : std::runtime_error(message + " at offset " + std::to_string(off)), offset(off) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExprOp : std::uint8_t {
  number, var_t, const_pi, negate, add, sub, mul, div, pow,
  fn_sin, fn_cos, fn_tan, fn_exp, fn_log, fn_sqrt, fn_abs,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  Expr(ExprOp op, double value, ExprPtr lhs, ExprPtr rhs)
      : op_(op), value_(value), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

  ExprOp op() const { return op_; }
  double value() const { return value_; }
  const ExprPtr& lhs() const { return lhs_; }
  const ExprPtr& rhs() const { return rhs_; }

  // Evaluate at t.  Domain violations (log of non-positive, sqrt of negative,
  // division by zero, non-finite intermediates) throw EvalError, never return
  // NaN or infinity.
  double eval(double t) const;

  // Canonical fully-parenthesized form; parsing it back yields a structurally
  // identical tree.
  std::string str() const;

  bool same_structure(const Expr& other) const;

 private:
  ExprOp op_;
  double value_ = 0.0;
  ExprPtr lhs_, rhs_;
};

// Parses the full source text; trailing garbage is a syntax error.
ExprPtr parse_expression(std::string_view src);

// Flat postfix compilation of an Expr for fast repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& root);
  double eval(double t) const;

 private:
  struct Step {
    ExprOp op;
    double value;
  };
  std::vector<Step> steps_;
  mutable std::vector<double> stack_;  // scratch; sized once at compile
};

struct NonnegReport {
  bool pass = false;
  bool identically_zero = false;
  double min_value = 0.0;
  double max_value = 0.0;
  double min_at = 0.0;
  double max_at = 0.0;
  std::optional<double> first_negative_at;
  std::string message;
};

inline constexpr int kDefaultValidationSamples = 10001;

// A coefficient function phi(t) on an interval [a, b].
class PotentialSpec {
 public:
  // Parses src and samples the interval for finiteness.  Throws ParseError on
  // malformed input, std::invalid_argument when a >= b, EvalError when the
  // expression is not finite somewhere on [a, b].
  PotentialSpec(std::string source, double a, double b);

  double eval(double t) const { return compiled_.eval(t); }
  double operator()(double t) const { return compiled_.eval(t); }

  double lower() const { return a_; }
  double upper() const { return b_; }
  double length() const { return b_ - a_; }
  const std::string& source() const { return source_; }
  const ExprPtr& ast() const { return ast_; }

  // Dense-sampling check of the standing assumption phi >= 0, phi not
  // identically zero.  PASS iff min >= -tolerance and max > tolerance.
  NonnegReport validate_nonneg(int samples = kDefaultValidationSamples,
                               double tolerance = 1e-12) const;

  // Throws ValidationError with the report message when validation fails.
  void require_nonneg(int samples = kDefaultValidationSamples) const;

 private:
  std::string source_;
  ExprPtr ast_;
  CompiledExpr compiled_;
  double a_, b_;
};

inline PotentialSpec parse_potential(std::string source, double a, double b) {
  return PotentialSpec(std::move(source), a, b);
}

}  // namespace helmfocus
