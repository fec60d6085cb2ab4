#pragma once
// Hand-rolled generators for property tests. Seeds are fixed so failures
// reproduce.

#include "dirac/symalg.hpp"

#include <random>
#include <vector>

namespace gen {

using dirac::Expr;
using dirac::PatchPtr;
using dirac::Rational;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

    Rational rational(int bound = 5) {
        int num = range(-bound, bound);
        int den = range(1, 3);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }

    Rational nonzero_rational(int bound = 5) {
        for (;;) {
            Rational q = rational(bound);
            if (q != 0)
                return q;
        }
    }

    // Random polynomial of total degree <= max_deg with up to max_terms terms.
    Expr poly(const PatchPtr& p, int max_deg, int max_terms = 4) {
        Expr e(p, 0);
        int terms = range(0, max_terms);
        for (int t = 0; t < terms; ++t) {
            Expr m(p, nonzero_rational());
            int deg = range(0, max_deg);
            for (int k = 0; k < deg && p->dim() > 0; ++k)
                m *= Expr::var(p, static_cast<std::size_t>(range(0, static_cast<int>(p->dim()) - 1)));
            e += m;
        }
        return e;
    }

    std::vector<Rational> point(std::size_t n, int bound = 7) {
        std::vector<Rational> v;
        for (std::size_t i = 0; i < n; ++i)
            v.push_back(rational(bound));
        return v;
    }

private:
    std::mt19937_64 eng_;
};

// Rank of a rational matrix by plain Gaussian elimination.
inline std::size_t numeric_rank(std::vector<std::vector<Rational>> a) {
    std::size_t r = 0;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0)
                continue;
            Rational f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

} // namespace gen
