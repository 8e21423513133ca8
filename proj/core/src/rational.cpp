#include "momentkit/rational.hpp"

#include <cctype>

#include "momentkit/error.hpp"

namespace momentkit {

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty rational literal");
  std::size_t slash = text.find('/');
  auto valid_int = [](std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw InvalidArgument("malformed rational literal '" + std::string(text) + "'");
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  Rational q;
  q.get_num() = mpz_class(n, 10);
  q.get_den() = mpz_class(std::string(den), 10);
  if (q.get_den() == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(10); }

std::vector<double> RationalPoint::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(c.get_d());
  return out;
}

nlohmann::json rational_json(const Rational& q) { return rational_to_string(q); }

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  throw InvalidArgument("rational must be a \"p/q\" string or an integer");
}

void to_json(nlohmann::json& j, const RationalPoint& p) {
  j = nlohmann::json::array();
  for (const auto& c : p.coords) j.push_back(rational_json(c));
}

void from_json(const nlohmann::json& j, RationalPoint& p) {
  if (!j.is_array()) throw InvalidArgument("point JSON must be an array");
  p.coords.clear();
  for (const auto& e : j) p.coords.push_back(rational_from_json(e));
}

}  // namespace momentkit
