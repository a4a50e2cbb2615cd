#pragma once

#include "qinv/io.hpp"

namespace qinv {

/* Stable 64-bit PRNG (SplitMix64); seeds reproduce across platforms. */
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4B9B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

  private:
    std::uint64_t s_;
};

/* Finite cochain complex with named cells; the model behind generated
   categories: objects are complexes, homs are full hom-complexes, so all
   dg-category axioms hold by construction. */
struct Complex {
    std::map<int, std::vector<std::string>> cells;
    std::map<int, Matrix> d;  // d[k]: cells[k] -> cells[k+1]

    int dim(int k) const {
        auto it = cells.find(k);
        return it == cells.end() ? 0 : static_cast<int>(it->second.size());
    }
    Matrix dmat(int k, Field f) const {
        auto it = d.find(k);
        if (it != d.end())
            return it->second;
        return Matrix(dim(k + 1), dim(k), f);
    }
};

Complex point_complex(int degree, const std::string& cell);
Complex bar_complex(int degree, const std::string& lower, const std::string& upper, Field f);
Complex direct_sum(const std::vector<Complex>& parts, Field f);
Complex tensor_product(const Complex& v, const Complex& u, Field f);

/* Position of the cell pair (src degree d, src j, tgt i) in the hom basis of
   degree s (ordered by source degree, then source index, then target index). */
int hom_gen_position(const Complex& a, const Complex& b, int s, int d, int j, int i);

DgCategory category_of_complexes(Field f,
                                 const std::vector<std::pair<ObjId, Complex>>& objects);

/* f -> f (x) id_u as a shift-0 graded map between the full hom-complexes. */
GradedMap tensor_hom_map(const Complex& vx, const Complex& vy, const Complex& u,
                         const GradedSpace& src_space, const GradedSpace& tgt_space, Field f);

struct InstanceSpec {
    std::uint64_t seed = 0;
    int object_count = 2;           // <= 4
    int max_gens_per_degree = 3;    // per hom per degree, <= 3
    int degree_min = -2;
    int degree_max = 2;
    Field field = Field::rationals();
    int arity = 4;
};

/* Random valid dg-category; deterministic in the seed, all axioms hold by
   construction (category-of-complexes model). */
DgCategory generate_category(const InstanceSpec& spec);

/* Random instance (C, D, F, G, phi) with phi a dg-natural objectwise homotopy
   equivalence by construction: G is F tensored with a contractible-augmented
   complex U and phi_E = id (+) (closed map into the contractible summand). */
Instance generate_equivalence(const InstanceSpec& spec);

/* Same construction with the contractible summand's differential zeroed in
   the G-objects: still a valid category, but phi is no longer an objectwise
   homotopy equivalence. */
Instance generate_corrupted_equivalence(const InstanceSpec& spec);

Element random_element(SplitMix64& rng, const GradedSpace& space, int degree, Field f);

Transformation random_transformation(SplitMix64& rng, const DgFunctor& F, const DgFunctor& G,
                                     int degree, int arity_bound, int entries_per_arity);

}  // namespace qinv
