#include "greenline/valued_field.hpp"

#include <limits>
#include <sstream>

namespace greenline {

Absolute Absolute::real(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("archimedean absolute value must be >= 0");
  Absolute a;
  a.kind_ = Kind::archimedean;
  a.zero_ = value == 0.0;
  a.real_ = value;
  return a;
}

Absolute Absolute::power(unsigned long prime, Rational exponent) {
  Absolute a;
  a.kind_ = Kind::non_archimedean;
  a.prime_ = prime;
  a.zero_ = false;
  exponent.canonicalize();
  a.exponent_ = std::move(exponent);
  return a;
}

Absolute Absolute::zero(unsigned long prime) {
  Absolute a;
  a.kind_ = Kind::non_archimedean;
  a.prime_ = prime;
  a.zero_ = true;
  return a;
}

const Rational& Absolute::exponent() const {
  if (archimedean() || zero_) throw std::logic_error("exponent of zero or archimedean absolute value");
  return exponent_;
}

Rational Absolute::log_p() const { return -exponent(); }

double Absolute::value() const {
  if (archimedean()) return real_;
  if (zero_) return 0.0;
  return std::pow(static_cast<double>(prime_), -exponent_.get_d());
}

double Absolute::log() const {
  if (zero_) return -std::numeric_limits<double>::infinity();
  if (archimedean()) return std::log(real_);
  return -exponent_.get_d() * std::log(static_cast<double>(prime_));
}

std::string Absolute::to_string() const {
  std::ostringstream os;
  if (archimedean()) {
    os.precision(17);
    os << real_;
  } else if (zero_) {
    os << "0";
  } else {
    os << prime_ << "^(" << Rational(-exponent_).get_str() << ")";
  }
  return os.str();
}

namespace {
void check_compatible(const Absolute& a, const Absolute& b) {
  if (a.kind() != b.kind() || a.prime() != b.prime())
    throw std::invalid_argument("mixing absolute values of different fields");
}
}  // namespace

Absolute operator*(const Absolute& a, const Absolute& b) {
  check_compatible(a, b);
  if (a.archimedean()) return Absolute::real(a.real_ * b.real_);
  if (a.zero_ || b.zero_) return Absolute::zero(a.prime_);
  return Absolute::power(a.prime_, a.exponent_ + b.exponent_);
}

Absolute operator/(const Absolute& a, const Absolute& b) {
  check_compatible(a, b);
  if (b.zero_) throw std::domain_error("division by a zero absolute value");
  if (a.archimedean()) return Absolute::real(a.real_ / b.real_);
  if (a.zero_) return a;
  return Absolute::power(a.prime_, a.exponent_ - b.exponent_);
}

bool operator==(const Absolute& a, const Absolute& b) {
  check_compatible(a, b);
  if (a.archimedean()) return a.real_ == b.real_;
  if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
  return a.exponent_ == b.exponent_;
}

bool operator<(const Absolute& a, const Absolute& b) {
  check_compatible(a, b);
  if (a.archimedean()) return a.real_ < b.real_;
  if (b.zero_) return false;
  if (a.zero_) return true;
  return a.exponent_ > b.exponent_;
}

Absolute max(const Absolute& a, const Absolute& b) { return a < b ? b : a; }
Absolute min(const Absolute& a, const Absolute& b) { return a < b ? a : b; }

long valuation(const Integer& n, unsigned long prime) {
  if (sgn(n) == 0) throw std::domain_error("valuation of zero");
  Integer rest;
  Integer p(prime);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, unsigned long prime) {
  return valuation(Integer(x.get_num()), prime) - valuation(Integer(x.get_den()), prime);
}

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

PadicField::PadicField(unsigned long prime) : p(prime) {
  if (!is_prime(prime)) throw std::invalid_argument("p-adic field needs a prime, got " + std::to_string(prime));
}

Absolute PadicField::abs(const Rational& x) const {
  if (sgn(x) == 0) return Absolute::zero(p);
  return Absolute::power(p, valuation(x, p));
}

Rational PadicField::power(long k) const {
  Integer base(p);
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? Rational(Integer(1), r) : Rational(r);
}

}  // namespace greenline
