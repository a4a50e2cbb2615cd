#pragma once

#include <map>
#include <string>
#include <vector>

#include "qinv/matrix.hpp"

namespace qinv {

/* Finitely supported graded vector space with named generators. */
class GradedSpace {
  public:
    GradedSpace() = default;
    explicit GradedSpace(std::map<int, std::vector<std::string>> basis);

    int dim(int degree) const;
    std::size_t total_dim() const;
    const std::vector<std::string>& generators(int degree) const;
    std::vector<int> support() const;

    /* (degree, index) of a generator; throws if unknown. */
    std::pair<int, int> locate(const std::string& name) const;
    bool has_generator(const std::string& name) const;

    bool operator==(const GradedSpace& o) const { return basis_ == o.basis_; }
    bool operator!=(const GradedSpace& o) const { return !(*this == o); }

    const std::map<int, std::vector<std::string>>& basis() const { return basis_; }

  private:
    std::map<int, std::vector<std::string>> basis_;  // degrees with empty lists absent
};

/* Homogeneous element of a graded space: degree plus coefficients over that
   degree's ordered basis. */
struct Element {
    int degree = 0;
    std::vector<Scalar> coeffs;

    bool is_zero() const;
    bool operator==(const Element& o) const { return degree == o.degree && coeffs == o.coeffs; }
    bool operator!=(const Element& o) const { return !(*this == o); }

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element scaled(const Scalar& c) const;
    void add_scaled(const Element& o, const Scalar& c);  // *this += c * o
};

Element zero_element(const GradedSpace& space, int degree, Field f);
Element basis_element(const GradedSpace& space, int degree, int index, Field f);

/* Graded linear map with a degree shift; blocks indexed by source degree,
   missing blocks are zero. */
class GradedMap {
  public:
    GradedMap() = default;
    GradedMap(int shift, GradedSpace source, GradedSpace target, Field f);

    int shift() const { return shift_; }
    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    const Field& field() const { return field_; }

    Matrix block(int source_degree) const;  // zero-filled if absent
    void set_block(int source_degree, Matrix m);
    const std::map<int, Matrix>& blocks() const { return blocks_; }

    bool is_zero() const;
    bool operator==(const GradedMap& o) const;

    Element apply(const Element& e) const;

    GradedMap operator+(const GradedMap& o) const;
    GradedMap operator-(const GradedMap& o) const;
    GradedMap scaled(const Scalar& c) const;

  private:
    int shift_ = 0;
    GradedSpace source_, target_;
    Field field_;
    std::map<int, Matrix> blocks_;
};

GradedMap identity_map(const GradedSpace& space, Field f);

/* Blockwise matrix product g . f; no sign is introduced here. */
GradedMap compose(const GradedMap& g, const GradedMap& f);

/* A graded space together with a square-zero degree +1 differential. */
struct HomComplex {
    GradedSpace space;
    GradedMap differential;  // shift +1, space -> space

    Field field() const { return differential.field(); }
    Element d(const Element& e) const { return differential.apply(e); }
};

HomComplex zero_complex(Field f);

/* d_target . f - (-1)^{shift(f)} f . d_source */
GradedMap map_differential(const GradedMap& f, const HomComplex& src, const HomComplex& tgt);

struct ComplexReport {
    std::vector<int> bad_degrees;  // degrees where d.d != 0
    bool valid() const { return bad_degrees.empty(); }
};

ComplexReport validate_complex(const HomComplex& c);

/* dim ker(d_n) - dim im(d_{n-1}) per degree; requires a valid complex. */
std::map<int, long> cohomology_dims(const HomComplex& c);

}  // namespace qinv
