#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmdeg/linarith.hpp"

namespace cmdeg {

enum class SurfaceKind { P2, Hirzebruch };

struct BaseSurface {
    SurfaceKind kind = SurfaceKind::P2;
    int k = 0;
    bool operator==(const BaseSurface& o) const {
        return kind == o.kind && (kind == SurfaceKind::P2 || k == o.k);
    }
    static BaseSurface p2() { return {SurfaceKind::P2, 0}; }
    static BaseSurface hirzebruch(int k) { return {SurfaceKind::Hirzebruch, k}; }
    std::string str() const;
};

struct PointNode {
    std::string id;
    std::optional<std::string> parent;       // infinitely near to
    std::optional<std::string> directed_to;  // lies on the strict transform of
    std::string tag = "general";             // general | on_curve:<name> | special:<text>
};

struct Configuration {
    BaseSurface base;
    std::vector<PointNode> points;
    std::map<std::string, std::string> incident_curves;  // name -> class text

    size_t size() const { return points.size(); }
    int index_of(const std::string& id) const;  // -1 when absent
    bool has_children(const std::string& id) const;
    // groups of display positions: a root followed by its chain of descendants
    std::vector<std::vector<size_t>> groups() const;
    void validate() const;
};

// points p1..pn; each group is a root followed by a chain of infinitely near points
Configuration configuration_from_groups(const BaseSurface& b, const std::vector<size_t>& group_sizes);

// value of a pairing: degree <= 2 polynomial in d, m, a
struct Quadratic {
    Rational q[4][4];  // q[i][j], i <= j, x0 = 1

    Quadratic();
    static Quadratic product(const LinearForm& x, const LinearForm& y);
    Quadratic operator+(const Quadratic& o) const;
    Quadratic operator-(const Quadratic& o) const;
    bool operator==(const Quadratic& o) const;
    bool is_linear() const;
    LinearForm linear() const;  // throws unless is_linear()
    bool is_constant(const Rational& v) const;
};

struct DivisorClass {
    BaseSurface base;
    LinearForm d0;  // d on P2, coefficient of E on F_k
    LinearForm d1;  // coefficient of F on F_k, unused on P2
    std::vector<LinearForm> mults;

    static DivisorClass p2(LinearForm d, std::vector<LinearForm> m);
    static DivisorClass fk(int k, LinearForm e, LinearForm f, std::vector<LinearForm> m);
    static DivisorClass zero(const BaseSurface& b, size_t n);
    // class of the exceptional curve over point i
    static DivisorClass exceptional(const BaseSurface& b, size_t n, size_t i);

    bool is_zero() const;
    bool is_constant() const;
    DivisorClass operator+(const DivisorClass& o) const;
    DivisorClass operator-(const DivisorClass& o) const;
    DivisorClass operator-() const;
    DivisorClass operator*(const Rational& s) const;
    DivisorClass scaled(const LinearForm& coeff) const;  // coeff * this, this constant
    bool operator==(const DivisorClass& o) const;
    bool operator!=(const DivisorClass& o) const { return !(*this == o); }
    void check_compatible(const DivisorClass& o) const;
    mpz_class denominator_lcm() const;
};

Quadratic intersect_q(const DivisorClass& A, const DivisorClass& B);
// narrowing accessor: errors unless the product is linear
LinearForm intersect(const DivisorClass& A, const DivisorClass& B);

DivisorClass canonical(const Configuration& c);
DivisorClass canonical(const BaseSurface& b, size_t n);

enum class Tri { Yes, No, Undecidable };
Tri is_minus_one_curve(const DivisorClass& C, const ConstraintSet& cs = {});

long expected_h0(const DivisorClass& L);
DivisorClass substitute(const DivisorClass& L, const Rational& d, const Rational& m, const Rational& a);

// text notation
std::string print_class(const DivisorClass& L, const Configuration* config = nullptr);
std::string print_class(const DivisorClass& L, const std::vector<size_t>& group_sizes);

struct ParsedClass {
    DivisorClass cls;
    std::vector<size_t> group_sizes;  // bracket structure as written
};
ParsedClass parse_class(const std::string& text);

}  // namespace cmdeg
