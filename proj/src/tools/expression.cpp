// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace uat::tools {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  double parse() {
    const double value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  double expr() {
    double value = term();
    while (true) {
      if (accept('+')) value = checked(value + term());
      else if (accept('-')) value = checked(value - term());
      else return value;
    }
  }

  double term() {
    double value = unary();
    while (true) {
      if (accept('*')) {
        value = checked(value * unary());
      } else if (accept('/')) {
        const double divisor = unary();
        if (divisor == 0.0) throw EvalError(EvalErrc::DivisionByZero, "division by zero");
        value = checked(value / divisor);
      } else {
        return value;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    return power();
  }

  double power() {
    const double base = primary();
    if (accept('^')) return checked(std::pow(base, unary()));
    return base;
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double value = expr();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    return number();
  }

  double number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    const std::string_view literal = text_.substr(start, pos_ - start);
    if (literal.empty() || literal == ".") {
      if (pos_ >= text_.size()) fail("unexpected end of expression");
      fail("expected a number at position " + std::to_string(start));
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
    if (ec == std::errc::result_out_of_range) throw EvalError(EvalErrc::Overflow, "literal out of range");
    if (ec != std::errc() || end != literal.data() + literal.size()) fail("malformed number");
    return value;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static double checked(double value) {
    if (!std::isfinite(value)) throw EvalError(EvalErrc::Overflow, "result is not finite");
    return value;
  }

  [[noreturn]] static void fail(const std::string& what) { throw EvalError(EvalErrc::Syntax, what); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

double eval_expr(std::string_view expression) {
  if (expression.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw EvalError(EvalErrc::Syntax, "empty expression");
  return Parser(expression).parse();
}

}  // namespace uat::tools
