#include "volcone/rational.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "volcone/error.hpp"

namespace volcone {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool negative = false;
  std::string_view body = strip_sign(text, negative);
  Rational result;

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!is_digits(num)) throw ParseError("bad rational numerator '" + std::string(text) + "'", 0);
    if (!is_digits(den)) throw ParseError("bad rational denominator '" + std::string(text) + "'", slash + 1);
    mpz_class p(std::string(num), 10);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 1);
    result = Rational(p, q);
    result.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ParseError("bad decimal '" + std::string(text) + "'", 0);
    }
    mpz_class p(whole.empty() ? std::string("0") : std::string(whole), 10);
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class f = frac.empty() ? mpz_class(0) : mpz_class(std::string(frac), 10);
    result = Rational(p * scale + f, scale);
    result.canonicalize();
  } else {
    if (!is_digits(body)) throw ParseError("bad rational '" + std::string(text) + "'", 0);
    result = Rational(mpz_class(std::string(body), 10));
  }
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::string to_decimal(const Rational& value, int significant) {
  // get_d truncates; go through mpf for a correctly rounded 12-digit form.
  mpf_class f(value, 256);
  char* raw = nullptr;
  gmp_asprintf(&raw, "%.*Fg", significant, f.get_mpf_t());
  std::string out(raw);
  void (*free_fn)(void*, std::size_t);
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(raw, out.size() + 1);
  if (out == "-0") out = "0";
  return out;
}

Rational ratio(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational dyadic_floor(double value, int bits) {
  if (!std::isfinite(value)) throw DomainError("non-finite value cannot be made exact");
  double scaled = std::floor(std::ldexp(value, bits));
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), scaled);
  mpz_class den = 1;
  den <<= bits;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

bool exact_sqrt(const Rational& value, Rational& root) {
  if (value < 0) return false;
  const mpz_class& p = value.get_num();
  const mpz_class& q = value.get_den();
  if (mpz_perfect_square_p(p.get_mpz_t()) == 0 || mpz_perfect_square_p(q.get_mpz_t()) == 0) {
    return false;
  }
  mpz_class rp, rq;
  mpz_sqrt(rp.get_mpz_t(), p.get_mpz_t());
  mpz_sqrt(rq.get_mpz_t(), q.get_mpz_t());
  root = Rational(rp, rq);
  root.canonicalize();
  return true;
}

std::string to_string(const RationalVector& values) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << to_string(values[i]);
  }
  out << ')';
  return out.str();
}

}  // namespace volcone
