#include "pi_forge/exact.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "pi_forge/detail/indexing.hpp"
#include "pi_forge/error.hpp"

namespace pi_forge {

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) --exponent;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    const std::string rest(text.substr(pos + 1));
    char* end = nullptr;
    const long e = std::strtol(rest.c_str(), &end, 10);
    if (rest.empty() || end != rest.c_str() + rest.size()) {
      throw Error(ErrorCode::InvalidInput, "malformed decimal '" + std::string(text) + "'");
    }
    exponent += e;
    pos = text.size();
  }
  if (!any_digit || pos != text.size()) {
    throw Error(ErrorCode::InvalidInput, "malformed decimal '" + std::string(text) + "'");
  }
  Rational value(digits);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent < 0) {
    value /= Rational(scale);
  } else {
    value *= Rational(scale);
  }
  return negative ? Rational(-value) : value;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt factorial(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

Rational ExactTable::total() const {
  Rational sum = 0;
  for (const auto& p : probs) sum += p;
  return sum;
}

ExactTable ExactTable::marginalize(const VarSet& keep) const {
  std::vector<std::size_t> cards;
  for (const auto& v : vars) cards.push_back(v.cardinality);
  ExactTable out;
  for (auto k : keep) {
    if (k >= vars.size()) throw Error(ErrorCode::InvalidQuery, "variable index out of range");
    out.vars.push_back(vars[k]);
  }
  out.probs = detail::project<Rational>(cards, probs, keep);
  return out;
}

JointTable ExactTable::to_table() const {
  std::vector<double> values;
  values.reserve(probs.size());
  for (const auto& p : probs) values.push_back(to_double(p));
  return JointTable(vars, std::move(values));
}

}  // namespace pi_forge
