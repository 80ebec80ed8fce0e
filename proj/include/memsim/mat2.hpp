#pragma once

#include <complex>
#include <stdexcept>

namespace memsim {

using cplx = std::complex<double>;

// 2x2 complex matrix with row/column order (field E, spin S).
// Entry names follow the Green-function labels: ee = row E / col E, etc.
struct Mat2 {
    cplx ee{}, es{}, se{}, ss{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx det() const { return ee * ss - es * se; }

    Mat2 inverse() const {
        const cplx d = det();
        if (std::abs(d) < 1e-300)
            throw std::runtime_error("Mat2::inverse: singular matrix");
        return {ss / d, -es / d, -se / d, ee / d};
    }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.ee * b.ee + a.es * b.se, a.ee * b.es + a.es * b.ss,
                a.se * b.ee + a.ss * b.se, a.se * b.es + a.ss * b.ss};
    }

    friend Mat2 operator*(cplx s, const Mat2& a) {
        return {s * a.ee, s * a.es, s * a.se, s * a.ss};
    }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.ee + b.ee, a.es + b.es, a.se + b.se, a.ss + b.ss};
    }

    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.ee - b.ee, a.es - b.es, a.se - b.se, a.ss - b.ss};
    }

    // max of entrywise absolute values
    double max_abs() const {
        double m = std::abs(ee);
        m = std::max(m, std::abs(es));
        m = std::max(m, std::abs(se));
        m = std::max(m, std::abs(ss));
        return m;
    }
};

}  // namespace memsim
