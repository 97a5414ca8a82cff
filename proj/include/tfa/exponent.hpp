#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"

namespace tfa {

// A Lebesgue exponent in (0, inf]. Infinity is stored exactly as +inf; the
// textual form is kept so that rationals like "1/3" survive a JSON round trip.
class Exponent {
 public:
  Exponent() = default;
  Exponent(double value) : value_(value) {  // NOLINT(implicit)
    if (!(value > 0.0))
      throw InvalidArgument("exponent must lie in (0, inf], got " +
                            std::to_string(value));
  }

  static Exponent infinity() {
    return Exponent(std::numeric_limits<double>::infinity());
  }

  static Exponent parse(const std::string& text) {
    std::string s;
    for (char c : text)
      if (c != ' ') s.push_back(c);
    if (s == "inf" || s == "Inf" || s == "infinity" || s == "\xE2\x88\x9E") {
      Exponent e = infinity();
      e.text_ = "inf";
      return e;
    }
    auto number = [&](std::string_view part) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || ptr != part.data() + part.size())
        throw InvalidArgument("cannot parse exponent '" + text + "'");
      return v;
    };
    double v = 0.0;
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const double den = number(std::string_view(s).substr(slash + 1));
      if (den == 0.0) throw InvalidArgument("zero denominator in exponent '" + text + "'");
      v = number(std::string_view(s).substr(0, slash)) / den;
    } else {
      v = number(s);
    }
    Exponent e(v);
    e.text_ = s;
    return e;
  }

  double value() const noexcept { return value_; }
  bool is_infinite() const noexcept { return std::isinf(value_); }

  std::string to_string() const {
    if (!text_.empty()) return text_;
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
    return a.value_ == b.value_;
  }
  friend auto operator<=>(const Exponent& a, const Exponent& b) noexcept {
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 1.0;
  std::string text_;
};

// Per-axis exponents. The quasi-norm order min(1, entries) governs the
// r-power triangle inequality.
class ExponentVector {
 public:
  ExponentVector() = default;
  ExponentVector(std::vector<Exponent> entries) : entries_(std::move(entries)) {}  // NOLINT
  ExponentVector(std::initializer_list<double> values) {
    for (double v : values) entries_.emplace_back(v);
  }

  // Scalar identification: q -> (q, ..., q).
  static ExponentVector uniform(Exponent q, std::size_t dim) {
    return ExponentVector(std::vector<Exponent>(dim, q));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Exponent& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<Exponent>& entries() const noexcept { return entries_; }

  double min() const {
    double m = std::numeric_limits<double>::infinity();
    for (auto& e : entries_) m = std::min(m, e.value());
    return m;
  }
  double max() const {
    double m = 0.0;
    for (auto& e : entries_) m = std::max(m, e.value());
    return m;
  }
  double order() const { return std::min(1.0, min()); }

  ExponentVector concat(const ExponentVector& other) const {
    auto e = entries_;
    e.insert(e.end(), other.entries_.begin(), other.entries_.end());
    return ExponentVector(std::move(e));
  }

  // Componentwise a <= b.
  friend bool componentwise_le(const ExponentVector& a, const ExponentVector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].value() > b[k].value()) return false;
    return true;
  }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (!(a[k] == b[k])) return false;
    return true;
  }

 private:
  std::vector<Exponent> entries_;
};

inline void to_json(nlohmann::json& j, const Exponent& e) { j = e.to_string(); }
inline void from_json(const nlohmann::json& j, Exponent& e) {
  if (j.is_string())
    e = Exponent::parse(j.get<std::string>());
  else if (j.is_number())
    e = Exponent(j.get<double>());
  else
    throw InvalidArgument("exponent must be a string or number");
}
inline void to_json(nlohmann::json& j, const ExponentVector& v) {
  j = nlohmann::json::array();
  for (auto& e : v.entries()) j.push_back(e.to_string());
}
inline void from_json(const nlohmann::json& j, ExponentVector& v) {
  if (!j.is_array()) throw InvalidArgument("exponent vector must be an array");
  std::vector<Exponent> e;
  for (auto& x : j) e.push_back(x.get<Exponent>());
  v = ExponentVector(std::move(e));
}

}  // namespace tfa
