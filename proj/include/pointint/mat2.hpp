#pragma once

#include <algorithm>
#include <complex>

namespace pointint {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
    Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

    static constexpr Mat2 identity() { return {}; }

    [[nodiscard]] Complex det() const { return m00 * m11 - m01 * m10; }

    [[nodiscard]] Mat2 inverse() const {
        const Complex inv_det = 1.0 / det();
        return {m11 * inv_det, -m01 * inv_det, -m10 * inv_det, m00 * inv_det};
    }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.m00 * r.m00 + l.m01 * r.m10, l.m00 * r.m01 + l.m01 * r.m11,
                l.m10 * r.m00 + l.m11 * r.m10, l.m10 * r.m01 + l.m11 * r.m11};
    }

    friend Mat2 operator*(Complex s, const Mat2& m) {
        return {s * m.m00, s * m.m01, s * m.m10, s * m.m11};
    }

    [[nodiscard]] double max_abs_diff(const Mat2& o) const {
        double d = std::abs(m00 - o.m00);
        d = std::max(d, std::abs(m01 - o.m01));
        d = std::max(d, std::abs(m10 - o.m10));
        return std::max(d, std::abs(m11 - o.m11));
    }
};

}  // namespace pointint
