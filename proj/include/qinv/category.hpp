#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qinv/graded.hpp"

namespace qinv {

using ObjId = std::string;

/* A generator of a hom-complex, identified by degree and index within that
   degree's ordered basis. */
struct GenRef {
    int degree = 0;
    int index = 0;
    bool operator==(const GenRef& o) const { return degree == o.degree && index == o.index; }
    bool operator<(const GenRef& o) const {
        return degree != o.degree ? degree < o.degree : index < o.index;
    }
};

/* Finite dg-category: objects, hom-complexes, explicit bilinear composition
   tables on basis pairs, identity elements. */
class DgCategory {
  public:
    explicit DgCategory(Field f) : field_(f) {}

    const Field& field() const { return field_; }
    const std::vector<ObjId>& objects() const { return objects_; }
    bool has_object(const ObjId& x) const;

    void add_object(const ObjId& x);
    void set_hom(const ObjId& x, const ObjId& y, HomComplex hc);
    const HomComplex& hom(const ObjId& x, const ObjId& y) const;

    /* Composition table entry: g in Hom(y,z), f in Hom(x,y) basis generators. */
    void set_composition(const ObjId& x, const ObjId& y, const ObjId& z,
                         GenRef g, GenRef f, Element result);
    void set_identity(const ObjId& x, Element id);
    Element identity(const ObjId& x) const;

    /* Bilinear extension of the composition table; g in Hom(y,z), f in Hom(x,y). */
    Element compose_elements(const ObjId& x, const ObjId& y, const ObjId& z,
                             const Element& g, const Element& f) const;

    /* All generators of Hom(x,y): degree ascending, index ascending. */
    std::vector<GenRef> flat_basis(const ObjId& x, const ObjId& y) const;

    Element basis_elem(const ObjId& x, const ObjId& y, GenRef r) const;
    Element zero_elem(const ObjId& x, const ObjId& y, int degree) const;
    const std::string& gen_name(const ObjId& x, const ObjId& y, GenRef r) const;

    /* Differential of an element of Hom(x,y). */
    Element d(const ObjId& x, const ObjId& y, const Element& e) const;

    const std::map<std::pair<GenRef, GenRef>, Element>*
    composition_table(const ObjId& x, const ObjId& y, const ObjId& z) const;

  private:
    Field field_;
    std::vector<ObjId> objects_;
    std::map<std::pair<ObjId, ObjId>, HomComplex> homs_;
    std::map<std::tuple<ObjId, ObjId, ObjId>,
             std::map<std::pair<GenRef, GenRef>, Element>> comp_;
    std::map<ObjId, Element> identities_;
};

struct Violation {
    std::string kind;   // "d_squared" | "leibniz" | "associativity" | "unit" | ...
    std::string where;  // human-readable location
};

struct ValidationReport {
    std::vector<Violation> items;
    bool valid() const { return items.empty(); }
};

ValidationReport validate_category(const DgCategory& c);

/* Strict dg-functor. Hom maps are shift-0 graded maps, checked at construction. */
class DgFunctor {
  public:
    DgFunctor(const DgCategory* src, const DgCategory* tgt) : src_(src), tgt_(tgt) {}

    const DgCategory& source() const { return *src_; }
    const DgCategory& target() const { return *tgt_; }

    void map_object(const ObjId& x, const ObjId& fx);
    void set_hom_map(const ObjId& x, const ObjId& y, GradedMap m);  // throws on nonzero shift

    const ObjId& obj(const ObjId& x) const;
    const GradedMap& hom_map(const ObjId& x, const ObjId& y) const;
    Element apply(const ObjId& x, const ObjId& y, const Element& e) const;

    void rebind(const DgCategory* src, const DgCategory* tgt) { src_ = src; tgt_ = tgt; }

  private:
    const DgCategory* src_;
    const DgCategory* tgt_;
    std::map<ObjId, ObjId> object_map_;
    std::map<std::pair<ObjId, ObjId>, GradedMap> hom_maps_;
};

ValidationReport validate_functor(const DgFunctor& f);

DgFunctor identity_functor(const DgCategory& c);

/* Constant functor at an object: every hom maps onto the identity component. */
DgFunctor constant_functor(const DgCategory& src, const DgCategory& tgt, const ObjId& at);

}  // namespace qinv
