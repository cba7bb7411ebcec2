#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "graphonlab/rational.hpp"

namespace graphonlab {

// Coefficient that is an exact rational whenever the algebra permits and a
// plain double otherwise. Exactness is sticky-downward: any operation
// involving an inexact operand (or an exact one that overflows) yields an
// inexact result. The double slot always mirrors the value.
class Scalar {
  public:
    Scalar() : rat_(0), val_(0.0), exact_(true) {}
    Scalar(const Rational& r) : rat_(r), val_(r.to_double()), exact_(true) {}
    Scalar(long long n) : Scalar(Rational(n)) {}
    Scalar(int n) : Scalar(Rational(n)) {}

    static Scalar approx(double v) {
        Scalar s;
        s.rat_ = Rational(0);
        s.val_ = v;
        s.exact_ = false;
        return s;
    }

    bool exact() const { return exact_; }
    const Rational& rat() const { return rat_; }
    double value() const { return val_; }

    bool is_zero() const { return exact_ ? rat_.is_zero() : val_ == 0.0; }

    Scalar operator-() const {
        if (exact_) return Scalar(-rat_);
        return approx(-val_);
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) {
            try {
                return Scalar(a.rat_ + b.rat_);
            } catch (const rational_overflow&) {}
        }
        return approx(a.val_ + b.val_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) {
            try {
                return Scalar(a.rat_ * b.rat_);
            } catch (const rational_overflow&) {}
        }
        return approx(a.val_ * b.val_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_ && !b.rat_.is_zero()) {
            try {
                return Scalar(a.rat_ / b.rat_);
            } catch (const rational_overflow&) {}
        }
        return approx(a.val_ / b.val_);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar pow(int e) const {
        if (exact_) {
            try {
                return Scalar(rat_.pow(e));
            } catch (const rational_overflow&) {}
        }
        return approx(std::pow(val_, e));
    }

    // Value comparisons; exact pairs compare exactly.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.rat_ == b.rat_;
        return a.val_ == b.val_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.rat_ < b.rat_;
        return a.val_ < b.val_;
    }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

    std::string str() const {
        if (exact_) return rat_.str();
        return std::to_string(val_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

  private:
    Rational rat_;
    double val_ = 0.0;
    bool exact_ = true;
};

}  // namespace graphonlab
