#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace qd {

using cplx = std::complex<double>;

constexpr double PI = 3.14159265358979323846;

// Error taxonomy. The CLI maps these onto exit codes; library users catch them.
struct DegreeError : std::runtime_error {
    explicit DegreeError(const std::string& m) : std::runtime_error(m) {}
};
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};
struct BranchJump : std::runtime_error {
    explicit BranchJump(const std::string& m) : std::runtime_error(m) {}
};
struct PathTooClose : std::runtime_error {
    explicit PathTooClose(const std::string& m) : std::runtime_error(m) {}
};
struct NotApplicable : std::runtime_error {
    explicit NotApplicable(const std::string& m) : std::runtime_error(m) {}
};

inline double wrap_2pi(double a) {
    a = std::fmod(a, 2 * PI);
    if (a < 0) a += 2 * PI;
    // collapse values that rounded up to 2π
    if (a >= 2 * PI - 1e-15) a = 0.0;
    return a;
}

} // namespace qd
