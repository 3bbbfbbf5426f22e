#include <charconv>
#include <cctype>
#include <cmath>
#include <string>

#include "lavanet/errors.hpp"
#include "lavanet/plasticity.hpp"

namespace lavanet {

namespace {

bool isHardwareOnly(std::string_view name) {
  if (name == "x2" || name == "y3" || name == "d" || name == "t" || name == "r0" || name == "r1") {
    return true;
  }
  // u0..u9: epoch-counter variables
  return name.size() == 2 && name[0] == 'u' && std::isdigit(static_cast<unsigned char>(name[1]));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  RuleAst parse() {
    RuleAst ast;
    skipSpace();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    ast.terms.push_back(term(sign));
    while (true) {
      skipSpace();
      if (atEnd()) break;
      const char op = peek();
      if (op != '+' && op != '-') throw ParseError(pos_, "'+', '-', '*' or end of input");
      ++pos_;
      ast.terms.push_back(term(op == '-' ? -1 : 1));
    }
    return ast;
  }

 private:
  Term term(int sign) {
    Term t;
    t.sign = sign;
    factor(t);
    while (true) {
      skipSpace();
      if (peek() != '*') break;
      ++pos_;
      factor(t);
    }
    return t;
  }

  void factor(Term& t) {
    skipSpace();
    if (atEnd()) throw ParseError(pos_, "number or variable");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.coefficient *= number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.factors.push_back(variable());
    } else {
      throw ParseError(pos_, "number or variable");
    }
  }

  double number() {
    const std::size_t start = pos_;
    while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    bool integral = true;
    if (peek() == '.') {
      integral = false;
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError(pos_, "digit");
      while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    const std::string_view literal = text_.substr(start, pos_ - start);
    double value = 0.0;
    std::from_chars(literal.data(), literal.data() + literal.size(), value);

    const std::size_t beforeSpace = pos_;
    skipSpace();
    if (peek() != '^') {
      pos_ = beforeSpace;
      return value;
    }
    if (!integral) throw ParseError(pos_, "integer base before '^'");
    ++pos_;
    skipSpace();
    const std::size_t expStart = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError(pos_, "signed integer exponent after '^'");
    }
    while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::string_view expText = text_.substr(expStart, pos_ - expStart);
    if (!expText.empty() && expText.front() == '+') expText.remove_prefix(1);
    int exponent = 0;
    auto [ptr, ec] = std::from_chars(expText.data(), expText.data() + expText.size(), exponent);
    if (ec != std::errc{}) throw ParseError(expStart, "exponent in range");
    if (value == 2.0) return std::ldexp(1.0, exponent);
    return std::pow(value, exponent);
  }

  Variable variable() {
    const std::size_t start = pos_;
    while (!atEnd() &&
           (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x0") return Variable::kX0;
    if (name == "x1") return Variable::kX1;
    if (name == "y0") return Variable::kY0;
    if (name == "y1") return Variable::kY1;
    if (name == "y2") return Variable::kY2;
    if (name == "w") return Variable::kW;
    if (isHardwareOnly(name)) {
      throw UnknownVariable("learning-rule variable '" + std::string(name) +
                            "' is not supported (supported: x0, x1, y0, y1, y2, w)");
    }
    throw ParseError(start, "variable x0, x1, y0, y1, y2 or w");
  }

  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return atEnd() ? '\0' : text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string formatCoefficient(double c) {
  int exponent = 0;
  const double mantissa = std::frexp(c, &exponent);
  if (c > 0.0 && mantissa == 0.5) return "2^" + std::to_string(exponent - 1);
  char buffer[512];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, c, std::chars_format::fixed);
  return std::string(buffer, end);
}

}  // namespace

std::string_view variableName(Variable v) {
  switch (v) {
    case Variable::kX0: return "x0";
    case Variable::kX1: return "x1";
    case Variable::kY0: return "y0";
    case Variable::kY1: return "y1";
    case Variable::kY2: return "y2";
    case Variable::kW: return "w";
  }
  return "?";
}

RuleAst parseRule(std::string_view text) { return Parser(text).parse(); }

std::string formatRule(const RuleAst& ast) {
  std::string out;
  for (std::size_t k = 0; k < ast.terms.size(); ++k) {
    const Term& t = ast.terms[k];
    if (k == 0) {
      if (t.sign < 0) out += "-";
    } else {
      out += t.sign < 0 ? " - " : " + ";
    }
    bool first = true;
    if (t.coefficient != 1.0 || t.factors.empty()) {
      out += formatCoefficient(t.coefficient);
      first = false;
    }
    for (Variable v : t.factors) {
      if (!first) out += "*";
      out += variableName(v);
      first = false;
    }
  }
  return out;
}

}  // namespace lavanet
