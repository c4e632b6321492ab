#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gkq/eisenstein.hpp"
#include "gkq/modcurve.hpp"

using namespace gkq;

namespace {

const ModularDb& db() {
    static ModularDb d(ModularDb::resolve_path());
    return d;
}

BigInt value(const IntersectionNumber& v) {
    REQUIRE(std::holds_alternative<BigInt>(v));
    return std::get<BigInt>(v);
}

std::vector<std::string> bundled_lines() {
    std::ifstream in(ModularDb::resolve_path());
    std::vector<std::string> out;
    for (std::string s; std::getline(in, s);) out.push_back(s);
    return out;
}

std::string write_temp(const std::vector<std::string>& lines, const std::string& name) {
    auto path = std::filesystem::temp_directory_path() / ("gkq_test_" + name + ".txt");
    std::ofstream out(path);
    for (const auto& s : lines) out << s << '\n';
    return path.string();
}

// 1-based line number of the first record "m i j ..." in the bundled file
int find_record(const std::vector<std::string>& lines, const std::string& prefix) {
    for (size_t i = 0; i < lines.size(); ++i)
        if (lines[i].rfind(prefix, 0) == 0) return static_cast<int>(i) + 1;
    FAIL("record not found: " << prefix);
    return 0;
}

int load_error_line(const std::string& path) {
    try {
        ModularDb bad(path);
    } catch (const ModpolyError& e) {
        return e.line;
    }
    return -1;
}

BivarPolyFp fp(long p, std::initializer_list<std::pair<Monomial, long>> terms) {
    BivarPolyZ z;
    for (const auto& [m, c] : terms) z.add(m, c);
    return BivarPolyFp::reduce(z, static_cast<std::uint64_t>(p));
}

}  // namespace

TEST_SUITE("modcurve") {

TEST_CASE("bundled modular polynomials") {
    BivarPolyZ phi1 = load_modpoly(ModularDb::resolve_path(), 1);
    CHECK(phi1.c.size() == 2);
    CHECK(phi1.c.at({1, 0}) == 1);
    CHECK(phi1.c.at({0, 1}) == -1);
    const BivarPolyZ& phi2 = db().phi(2);
    CHECK(phi2.deg_x() == 3);
    CHECK(phi2.c.at({0, 0}) == BigInt("-157464000000000"));
    CHECK(phi2.symmetric);
    CHECK(phi2.swapped() == phi2);
    for (int m = 1; m <= ModularDb::kMaxLevel; ++m) CHECK(db().phi(m).deg_x() == expected_phi_degree(m));
    CHECK(expected_phi_degree(4) == 7);
    CHECK(expected_phi_degree(9) == 13);
    CHECK_THROWS_AS(db().phi(11), std::out_of_range);
}

TEST_CASE("psi factors") {
    CHECK(psi_factor(db(), 2) == db().phi(2));
    CHECK(db().psi(4).deg_x() == 6);
    CHECK(db().psi(8).deg_x() == 12);
    CHECK(db().psi(9).deg_x() == 12);
    // phi_4 = psi_4 psi_1, antisymmetric
    CHECK(db().psi(4) * db().psi(1) == db().phi(4));
    BivarPolyZ neg;
    for (const auto& [m, c] : db().phi(4).c) neg.add(m, -c);
    CHECK(db().phi(4).swapped() == neg);
    CHECK(db().phi(8) == db().psi(8) * db().psi(2));
}

TEST_CASE("loader rejects malformed files with a line number") {
    auto lines = bundled_lines();
    int at = find_record(lines, "2 2 2 ");
    auto bad = lines;
    bad[at - 1] = "2 2 2 x17";
    CHECK(load_error_line(write_temp(bad, "badcoef")) == at);
    bad = lines;
    bad[at - 1] = "2 2 2";
    CHECK(load_error_line(write_temp(bad, "short")) == at);
    bad = lines;
    bad.push_back("11 0 0 1");
    CHECK(load_error_line(write_temp(bad, "level")) == static_cast<int>(bad.size()));
    bad = lines;
    bad.push_back("4 1 1 5");
    CHECK(load_error_line(write_temp(bad, "diag")) == static_cast<int>(bad.size()));
}

TEST_CASE("loader rejects a missing level") {
    auto lines = bundled_lines();
    std::vector<std::string> kept;
    for (const auto& s : lines)
        if (s.rfind("7 ", 0) != 0) kept.push_back(s);
    CHECK_THROWS_AS(ModularDb(write_temp(kept, "missing")), ModpolyError);
    CHECK_THROWS_AS(ModularDb("/nonexistent/modpoly.txt"), ModpolyError);
}

TEST_CASE("loader rejects a polynomial failing the Kronecker congruence") {
    auto lines = bundled_lines();
    int at = find_record(lines, "2 0 0 ");
    auto bad = lines;
    bad[at - 1] = "2 0 0 -157464000000001";
    CHECK_THROWS_AS(ModularDb(write_temp(bad, "kronecker")), ModpolyError);
}

TEST_CASE("Groebner bases") {
    long p = 7;
    auto r = groebner({fp(p, {{{2, 0}, 1}}), fp(p, {{{0, 2}, 1}})});
    CHECK(r.zero_dimensional);
    CHECK(*r.quotient_dim == 4);
    // (x - y, x^2 - 1): two points
    r = groebner({fp(p, {{{1, 0}, 1}, {{0, 1}, -1}}), fp(p, {{{2, 0}, 1}, {{0, 0}, -1}})});
    CHECK(r.zero_dimensional);
    CHECK(*r.quotient_dim == 2);
    CHECK(r.basis.size() == 2);
    // common factor x - y
    r = groebner({fp(p, {{{1, 0}, 1}, {{0, 1}, -1}}), fp(p, {{{2, 0}, 1}, {{1, 1}, -1}})});
    CHECK_FALSE(r.zero_dimensional);
    CHECK_FALSE(r.quotient_dim.has_value());
    CHECK(grevlex_greater({2, 0}, {1, 1}));
    CHECK(grevlex_greater({0, 3}, {2, 0}));
    CHECK_THROWS_AS(groebner({}), std::invalid_argument);
}

TEST_CASE("intersection numbers") {
    CHECK(value(intersection_number(db(), 2, 3, 5, Level::Psi)) == 18);
    CHECK(value(intersection_number(db(), 2, 3, 5, Level::Phi)) == 18);
    CHECK(value(intersection_number(db(), 3, 5, 7, Level::Psi)) == 40);
    CHECK(std::holds_alternative<NotZeroDimensional>(intersection_number(db(), 4, 9, 5, Level::Phi)));
    CHECK(to_string(intersection_number(db(), 4, 9, 5, Level::Phi)) == "NOT_ZERO_DIMENSIONAL");
    CHECK(to_string(intersection_number(db(), 2, 3, 5, Level::Psi)) == "18");
    CHECK_THROWS_AS(intersection_number(db(), 2, 3, 4, Level::Psi), std::invalid_argument);
    CHECK_THROWS_AS(intersection_number(db(), 2, 11, 5, Level::Psi), std::invalid_argument);
}

TEST_CASE("intersection numbers are symmetric and independent of p") {
    for (int m1 = 2; m1 <= 6; ++m1)
        for (int m2 = m1 + 1; m2 <= 6; ++m2) {
            if (is_square(BigInt(m1 * m2))) continue;
            BigInt ref = value(intersection_number(db(), m1, m2, 5, Level::Psi));
            CHECK(value(intersection_number(db(), m2, m1, 5, Level::Psi)) == ref);
            for (long p : {7L, 11L}) CHECK(value(intersection_number(db(), m1, m2, p, Level::Psi)) == ref);
        }
}

TEST_CASE("primitive d(1, m) matches Groebner") {
    for (int m = 2; m <= ModularDb::kMaxLevel; ++m) {
        if (is_square(BigInt(m))) continue;
        CHECK(value(intersection_number(db(), 1, m, 7, Level::Psi)) == d_one_m_primitive(m));
    }
}

TEST_CASE("phi level equals the direct computation and the Eisenstein sum") {
    for (auto [m1, m2] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {4, 8}, {3, 8}, {2, 9}}) {
        BigInt phi = value(intersection_number(db(), m1, m2, 5, Level::Phi));
        CHECK(phi == value(intersection_number_direct(db(), m1, m2, 5)));
        CHECK(Rat(phi) == eisenstein_sum(m1, m2, 5, ChiFilter::All));
    }
}

TEST_CASE("phi correspondences meet properly exactly when m1 m2 is not a square") {
    CHECK(properness_scan(db(), 6, {5, 7}).empty());
    auto psi = groebner({BivarPolyFp::reduce(db().psi(2), 5), BivarPolyFp::reduce(db().psi(8), 5)});
    CHECK(psi.zero_dimensional);
}

}
