#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace sedop::poly {

// Dense monomial coefficients, ascending: c[k] is the coefficient of x^k.
using Coeffs = std::vector<long double>;

inline int degree(const Coeffs& c) {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (c[static_cast<size_t>(k)] != 0.0L) return k;
    return 0;
}

inline Coeffs trimmed(Coeffs c) {
    c.resize(static_cast<size_t>(degree(c)) + 1);
    return c;
}

template <typename T>
inline T eval(const Coeffs& c, T x) {
    T r = 0;
    for (size_t k = c.size(); k-- > 0;) r = r * x + static_cast<T>(c[k]);
    return r;
}

inline Coeffs derivative(const Coeffs& c) {
    if (c.size() <= 1) return {0.0L};
    Coeffs d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<long double>(k) * c[k];
    return d;
}

inline Coeffs scaled(Coeffs c, long double s) {
    for (auto& v : c) v *= s;
    return c;
}

inline Coeffs sum(const Coeffs& a, const Coeffs& b) {
    Coeffs r(std::max(a.size(), b.size()), 0.0L);
    for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
    for (size_t k = 0; k < b.size(); ++k) r[k] += b[k];
    return r;
}

inline Coeffs product(const Coeffs& a, const Coeffs& b) {
    Coeffs r(a.size() + b.size() - 1, 0.0L);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

} // namespace sedop::poly
