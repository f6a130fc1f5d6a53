// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uat::tools {

enum class EvalErrc { Syntax, DivisionByZero, Overflow };

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  EvalErrc code() const noexcept { return code_; }

 private:
  EvalErrc code_;
};

/// Evaluates an arithmetic expression over decimal literals with
/// + - * / ^, unary minus and parentheses. ^ binds tighter than unary
/// minus and is right-associative (-2^2 = -4, 2^3^2 = 512).
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | '(' expr ')'
double eval_expr(std::string_view expression);

}  // namespace uat::tools
