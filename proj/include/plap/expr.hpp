#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

/// Compiles a scalar expression in the variable `s` into a callable.
/// Supported: + - * / ^, parentheses, floor(x), abs(x), exp(x), log(x),
/// sqrt(x), min(a,b), max(a,b), step(x) = [x >= 0], and ind(x,a,b) = the
/// indicator of the open interval (a,b) evaluated at x.
class Expr {
 public:
  using Fn = std::function<double(double)>;

  static Fn compile(const std::string& src) {
    Expr p(src);
    Fn f = p.parse_sum();
    p.skip_ws();
    if (p.pos_ != p.src_.size())
      throw std::invalid_argument("expression: trailing input at '" +
                                  p.src_.substr(p.pos_) + "'");
    return f;
  }

 private:
  explicit Expr(std::string src) : src_(std::move(src)) {}

  std::string src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Fn parse_sum() {
    Fn lhs = parse_product();
    for (;;) {
      if (eat('+')) {
        Fn rhs = parse_product();
        lhs = [lhs, rhs](double s) { return lhs(s) + rhs(s); };
      } else if (peek() == '-' && eat('-')) {
        Fn rhs = parse_product();
        lhs = [lhs, rhs](double s) { return lhs(s) - rhs(s); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_product() {
    Fn lhs = parse_power();
    for (;;) {
      if (eat('*')) {
        Fn rhs = parse_power();
        lhs = [lhs, rhs](double s) { return lhs(s) * rhs(s); };
      } else if (eat('/')) {
        Fn rhs = parse_power();
        lhs = [lhs, rhs](double s) { return lhs(s) / rhs(s); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_power() {
    Fn base = parse_unary();
    if (eat('^')) {
      Fn expo = parse_power();  // right associative
      return [base, expo](double s) { return std::pow(base(s), expo(s)); };
    }
    return base;
  }

  Fn parse_unary() {
    if (eat('-')) {
      Fn v = parse_unary();
      return [v](double s) { return -v(s); };
    }
    return parse_primary();
  }

  Fn parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw std::invalid_argument("expression: unexpected end");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(src_.substr(pos_), &used);
      pos_ += used;
      return [v](double) { return v; };
    }
    if (c == '(') {
      ++pos_;
      Fn v = parse_sum();
      if (!eat(')')) throw std::invalid_argument("expression: expected ')'");
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        name += src_[pos_++];
      if (name == "s" || name == "pi") {
        if (name == "pi") return [](double) { return M_PI; };
        return [](double s) { return s; };
      }
      if (!eat('(')) throw std::invalid_argument("expression: expected '(' after " + name);
      std::vector<Fn> args;
      if (peek() != ')') {
        args.push_back(parse_sum());
        while (eat(',')) args.push_back(parse_sum());
      }
      if (!eat(')')) throw std::invalid_argument("expression: expected ')' after args");
      return make_call(name, std::move(args));
    }
    throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
  }

  static Fn make_call(const std::string& name, std::vector<Fn> a) {
    auto need = [&](std::size_t n) {
      if (a.size() != n)
        throw std::invalid_argument("expression: " + name + " expects " +
                                    std::to_string(n) + " argument(s)");
    };
    if (name == "floor") { need(1); return [f = a[0]](double s) { return std::floor(f(s)); }; }
    if (name == "abs")   { need(1); return [f = a[0]](double s) { return std::abs(f(s)); }; }
    if (name == "exp")   { need(1); return [f = a[0]](double s) { return std::exp(f(s)); }; }
    if (name == "log")   { need(1); return [f = a[0]](double s) { return std::log(f(s)); }; }
    if (name == "sqrt")  { need(1); return [f = a[0]](double s) { return std::sqrt(f(s)); }; }
    if (name == "step")  { need(1); return [f = a[0]](double s) { return f(s) >= 0.0 ? 1.0 : 0.0; }; }
    if (name == "min") {
      need(2);
      return [f = a[0], g = a[1]](double s) { return std::min(f(s), g(s)); };
    }
    if (name == "max") {
      need(2);
      return [f = a[0], g = a[1]](double s) { return std::max(f(s), g(s)); };
    }
    if (name == "ind") {
      need(3);
      return [x = a[0], lo = a[1], hi = a[2]](double s) {
        const double v = x(s);
        return (v > lo(s) && v < hi(s)) ? 1.0 : 0.0;
      };
    }
    throw std::invalid_argument("expression: unknown function " + name);
  }
};

}  // namespace plap
