#include "icoh/linalg.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>

using namespace icoh;

namespace {

GaussScalar random_scalar(std::mt19937_64& rng, bool sparse = false) {
    std::uniform_int_distribution<int> small(-3, 3), den(1, 4), coin(0, 3);
    if (sparse && coin(rng) != 0) return GaussScalar(0);
    Rational re(small(rng), den(rng)), im(small(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    return GaussScalar(re, im);
}

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, bool sparse) {
    ExactMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar(rng, sparse);
    return m;
}

// Leibniz expansion; independent of any elimination.
GaussScalar det_leibniz(const ExactMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const std::size_t k = rows.size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    GaussScalar total;
    do {
        int inv = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) inv += perm[a] > perm[b];
        GaussScalar t(1);
        for (std::size_t a = 0; a < k; ++a) t *= m(rows[a], cols[perm[a]]);
        total += (inv % 2) ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) s.push_back(j);
        out.push_back(s);
    }
    return out;
}

// Rank = largest order of a nonvanishing minor.
std::size_t rank_by_minors(const ExactMatrix& m) {
    for (std::size_t k = std::min(m.rows(), m.cols()); k > 0; --k)
        for (const auto& rs : subsets(m.rows(), k))
            for (const auto& cs : subsets(m.cols(), k))
                if (!det_leibniz(m, rs, cs).is_zero()) return k;
    return 0;
}

}  // namespace

TEST_CASE("Gaussian rationals agree with complex arithmetic on small integers") {
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -2; c <= 2; ++c)
                for (int d = -2; d <= 2; ++d) {
                    GaussScalar x{Rational(a), Rational(b)}, y{Rational(c), Rational(d)};
                    std::complex<double> X(a, b), Y(c, d);
                    auto same = [](const GaussScalar& z, std::complex<double> w) {
                        return z.re().get_d() == w.real() && z.im().get_d() == w.imag();
                    };
                    CHECK(same(x + y, X + Y));
                    CHECK(same(x - y, X - Y));
                    CHECK(same(x * y, X * Y));
                    CHECK(same(x.conj(), std::conj(X)));
                }
}

TEST_CASE("field axioms on random Gaussian rationals") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 500; ++t) {
        GaussScalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a * a.conj()).im() == 0);
        CHECK((a * a.conj()).re() == a.norm_sq());
        if (!a.is_zero()) CHECK(a * a.inverse() == GaussScalar(1));
    }
    CHECK_THROWS_AS(GaussScalar(0).inverse(), std::domain_error);
}

TEST_CASE("scalar serialization round-trips") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        GaussScalar a = random_scalar(rng);
        CHECK(parse_gauss(to_string(a)) == a);
        CHECK(parse_gauss(to_display(a)) == a);
    }
    CHECK(to_string(GaussScalar(Rational(1, 2), Rational(-2, 3))) == "1/2-2/3*i");
    CHECK(parse_gauss("i") == GaussScalar::i());
    CHECK(parse_gauss("-i") == -GaussScalar::i());
    CHECK(parse_gauss("3+i") == GaussScalar(Rational(3), Rational(1)));
    CHECK(parse_gauss("-1/2") == GaussScalar(Rational(-1, 2)));
    CHECK_THROWS(parse_gauss(""));
    CHECK_THROWS(parse_gauss("x"));
}

TEST_CASE("rank matches the largest nonvanishing minor") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 150; ++t) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        ExactMatrix m = random_matrix(rng, r, c, t % 2 == 0);
        CHECK(rank(m) == rank_by_minors(m));
    }
}

TEST_CASE("rank-nullity and kernel vectors") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        ExactMatrix m = random_matrix(rng, r, c, true);
        Subspace k = kernel_basis(m);
        CHECK(k.dim() + rank(m) == c);
        for (const auto& v : k.basis()) CHECK(is_zero(m.apply(v)));
        CHECK(column_space(m).dim() == rank(m));
        CHECK(rank(m.transpose()) == rank(m));
    }
}

TEST_CASE("RREF is canonical for the row space") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 60; ++t) {
        std::size_t r = 2 + rng() % 4, c = 2 + rng() % 5;
        ExactMatrix m = random_matrix(rng, r, c, true);
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < r; ++i) rows.push_back(m.row(i));
        Subspace a = Subspace::span(c, rows);
        std::reverse(rows.begin(), rows.end());
        // mix: add a multiple of the first row to every other row
        for (std::size_t i = 1; i < rows.size(); ++i)
            for (std::size_t j = 0; j < c; ++j) rows[i][j] += GaussScalar(2) * rows[0][j];
        Subspace b = Subspace::span(c, rows);
        CHECK(a == b);
        CHECK(a.basis() == b.basis());
    }
}

TEST_CASE("sum and intersection satisfy the dimension formula") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 80; ++t) {
        std::size_t n = 2 + rng() % 5;
        auto rand_space = [&] {
            std::vector<Vec> vs;
            for (std::size_t k = 0, m = rng() % (n + 1); k < m; ++k) {
                Vec v(n);
                for (auto& x : v) x = random_scalar(rng, true);
                vs.push_back(v);
            }
            return Subspace::span(n, vs);
        };
        Subspace u = rand_space(), w = rand_space();
        Subspace s = sum(u, w), i = intersection(u, w);
        CHECK(s.dim() + i.dim() == u.dim() + w.dim());
        CHECK(u.contains(i));
        CHECK(w.contains(i));
        CHECK(s.contains(u));
        CHECK(s.contains(w));
        CHECK(quotient_dim(s, u) == s.dim() - u.dim());
        auto comp = complement_basis(s, u);
        CHECK(comp.size() == s.dim() - u.dim());
        CHECK(sum(u, Subspace::span(n, comp)).dim() == s.dim());
    }
}

TEST_CASE("solve returns the full affine solution set") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 80; ++t) {
        std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        ExactMatrix m = random_matrix(rng, r, c, true);
        Vec x(c);
        for (auto& v : x) v = random_scalar(rng);
        Vec b = m.apply(x);
        AffineSet s = solve(m, b);
        REQUIRE_FALSE(s.empty());
        CHECK(m.apply(*s.particular) == b);
        CHECK(s.contains(x));
        CHECK(s.direction.dim() == c - rank(m));
    }
    ExactMatrix z(2, 1);
    z(0, 0) = GaussScalar(1);
    z(1, 0) = GaussScalar(1);
    CHECK(solve(z, Vec{GaussScalar(1), GaussScalar(2)}).empty());
}
