#include "fcrystal/oracles.hpp"

#include <functional>

namespace fcrystal::oracles {

namespace {

using Poly = std::vector<mpz_class>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

void poly_add_scaled(Poly& acc, const Poly& x, int sign) {
    if (acc.size() < x.size()) acc.resize(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += sign * x[i];
}

Poly poly_det(const std::vector<std::vector<Poly>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Poly total{0};
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        poly_add_scaled(total, poly_mul(m[0][j], poly_det(minor)), j % 2 == 0 ? 1 : -1);
    }
    return total;
}

int valuation(mpz_class n, long p) {
    int v = 0;
    const mpz_class pp = p;
    while (n != 0 && n % pp == 0) {
        n /= pp;
        ++v;
    }
    return v;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            fn(idx);
            return;
        }
        for (std::size_t i = start; i + (k - pos) <= n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

mpz_class determinant(IntMatrix a) {
    const std::size_t n = a.size();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<int> determinantal_divisor_valuations(const IntMatrix& a, long p) {
    const std::size_t n = a.size();
    std::vector<int> out;
    int previous = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        mpz_class g = 0;
        for_each_subset(n, k, [&](const std::vector<std::size_t>& rows) {
            for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
                IntMatrix minor(k, std::vector<mpz_class>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[rows[i]][cols[j]];
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), determinant(std::move(minor)).get_mpz_t());
            });
        });
        if (g == 0) return {};
        const int v = valuation(g, p);
        out.push_back(v - previous);
        previous = v;
    }
    return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.size(), std::vector<mpz_class>(b.front().size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

std::vector<mpz_class> characteristic_polynomial(const IntMatrix& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = Poly{-a[i][j]};
            if (i == j) m[i][j].push_back(1);
        }
    Poly det = poly_det(m);
    det.resize(n + 1, 0);
    return det;
}

}  // namespace fcrystal::oracles
