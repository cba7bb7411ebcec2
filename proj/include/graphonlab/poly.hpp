#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab {

// Symmetric bivariate polynomial sum c_{ij} x^i y^j.
class Poly2 {
  public:
    Poly2() = default;

    void add_term(int i, int j, double c) {
        if (i < 0 || j < 0) throw std::invalid_argument("negative exponent");
        coeffs_[{i, j}] += c;
    }

    double eval(double x, double y) const {
        double s = 0;
        for (const auto& [ij, c] : coeffs_) s += c * std::pow(x, ij.first) * std::pow(y, ij.second);
        return s;
    }

    double dx(double x, double y) const {
        double s = 0;
        for (const auto& [ij, c] : coeffs_)
            if (ij.first > 0) s += c * ij.first * std::pow(x, ij.first - 1) * std::pow(y, ij.second);
        return s;
    }
    double dy(double x, double y) const {
        double s = 0;
        for (const auto& [ij, c] : coeffs_)
            if (ij.second > 0) s += c * ij.second * std::pow(x, ij.first) * std::pow(y, ij.second - 1);
        return s;
    }

    int degree() const {
        int d = 0;
        for (const auto& [ij, c] : coeffs_)
            if (c != 0.0) d = std::max(d, std::max(ij.first, ij.second));
        return d;
    }

    bool symmetric(double tol = 1e-12) const {
        for (const auto& [ij, c] : coeffs_) {
            auto it = coeffs_.find({ij.second, ij.first});
            double mirror = it == coeffs_.end() ? 0.0 : it->second;
            if (std::abs(c - mirror) > tol) return false;
        }
        return true;
    }

    const std::map<std::pair<int, int>, double>& coeffs() const { return coeffs_; }

  private:
    std::map<std::pair<int, int>, double> coeffs_;
};

inline Poly2 poly_half() {  // 1 - x - y, whose closed level set is the half-graphon
    Poly2 p;
    p.add_term(0, 0, 1.0);
    p.add_term(1, 0, -1.0);
    p.add_term(0, 1, -1.0);
    return p;
}

// Univariate polynomial with zero constant term: p(z) = sum a_i z^i, i>=1.
class Poly1 {
  public:
    Poly1() = default;
    explicit Poly1(std::vector<double> a) : a_(std::move(a)) {}

    double eval(double z) const {
        double s = 0;
        for (std::size_t i = a_.size(); i-- > 0;) s = s * z + a_[i];
        return s * z;
    }
    double deriv(double z) const {
        double s = 0;
        for (std::size_t i = a_.size(); i-- > 0;) s = s * z + a_[i] * static_cast<double>(i + 1);
        return s;
    }
    int degree() const {
        for (std::size_t i = a_.size(); i-- > 0;)
            if (a_[i] != 0.0) return static_cast<int>(i) + 1;
        return 0;
    }
    const std::vector<double>& coeffs() const { return a_; }

    // Strict monotonicity on R, checked by derivative sign on a grid; a
    // bijective increasing polynomial needs odd degree and positive lead.
    bool strictly_increasing(double radius = 8.0, int grid = 4096) const {
        int d = degree();
        if (d == 0 || d % 2 == 0) return false;
        if (a_[d - 1] <= 0) return false;
        for (int i = 0; i <= grid; ++i) {
            double z = -radius + 2 * radius * i / grid;
            if (deriv(z) <= 0) return false;
        }
        return true;
    }

    // Safeguarded Newton/bisection inverse: solves p(z) = w to tolerance tol.
    double inverse(double w, double tol = 1e-12) const {
        double lo = -1.0, hi = 1.0;
        while (eval(lo) > w) lo *= 2;
        while (eval(hi) < w) hi *= 2;
        double z = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            double f = eval(z) - w;
            if (f > 0)
                hi = z;
            else
                lo = z;
            double d = deriv(z);
            double step = d != 0.0 ? f / d : 0.0;
            double zn = z - step;
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) <= tol && std::abs(f) <= tol) return zn;
            z = zn;
        }
        return z;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (a_[i] == 0.0) continue;
            if (!s.empty()) s += " + ";
            s += std::to_string(a_[i]) + "*z^" + std::to_string(i + 1);
        }
        return s.empty() ? "0" : s;
    }

  private:
    std::vector<double> a_;  // a_[i] multiplies z^{i+1}
};

}  // namespace graphonlab
