#include "qd/poly.hpp"

#include <algorithm>
#include <cmath>

namespace qd {

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(cplx(0.0));
    trim();
}

void Poly::trim() {
    while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
}

bool Poly::is_zero() const { return c_.size() == 1 && c_[0] == cplx(0.0); }

Poly Poly::from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{cplx(1.0)};
    for (cplx r : roots) {
        c.push_back(cplx(0.0));
        for (int k = static_cast<int>(c.size()) - 1; k > 0; --k)
            c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return Poly(std::move(c));
}

cplx Poly::operator()(cplx z) const {
    cplx acc = c_.back();
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) acc = acc * z + c_[k];
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() == 1) return Poly();
    std::vector<cplx> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
    return Poly(std::move(d));
}

Poly Poly::deflate(cplx root) const {
    if (c_.size() == 1) return Poly();
    std::vector<cplx> q(c_.size() - 1);
    cplx carry = c_.back();
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) {
        q[k] = carry;
        carry = c_[k] + root * carry;
    }
    return Poly(std::move(q));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<cplx> r(c_.size() + o.c_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(cplx s) const {
    std::vector<cplx> r = c_;
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx(0.0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx(-1.0); }

bool Poly::real_coeffs(double tol) const {
    double scale = max_coeff_abs();
    for (const auto& x : c_)
        if (std::abs(x.imag()) > tol * std::max(1.0, scale)) return false;
    return true;
}

double Poly::max_coeff_abs() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, std::abs(x));
    return m;
}

bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

void sort_lex(std::vector<cplx>& v) { std::sort(v.begin(), v.end(), lex_less); }

} // namespace qd
