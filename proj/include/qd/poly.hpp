#pragma once
#include <vector>

#include "qd/common.hpp"

namespace qd {

// Dense polynomial, coefficients ascending in degree. The zero polynomial is {0}.
class Poly {
  public:
    Poly() : c_{cplx(0.0)} {}
    explicit Poly(std::vector<cplx> coeffs);

    static Poly from_roots(const std::vector<cplx>& roots);  // monic product of (z - r)

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const;
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : cplx(0.0); }
    cplx leading() const { return c_.back(); }

    cplx operator()(cplx z) const;  // Horner
    Poly derivative() const;
    Poly deflate(cplx root) const;  // synthetic division by (z - root), remainder dropped

    Poly operator*(const Poly& o) const;
    Poly operator*(cplx s) const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;

    bool real_coeffs(double tol = 0.0) const;
    double max_coeff_abs() const;

  private:
    std::vector<cplx> c_;
    void trim();
};

// Stable (real, imag) lexicographic order used for all root/eigenvalue reporting.
bool lex_less(const cplx& a, const cplx& b);
void sort_lex(std::vector<cplx>& v);

} // namespace qd
