#pragma once

#include <functional>
#include <optional>

#include "qinv/category.hpp"

namespace qinv {

using ObjTuple = std::vector<ObjId>;
using GenTuple = std::vector<GenRef>;  // [u_l, ..., u_1] top-down

/* Arity-truncated prenatural transformation F => G of a fixed degree.
   comp0 per object; for 1 <= l <= arity_bound, sparse tables over
   (object tuple, basis tuple); absent entries are zero.  Every stored
   output element has degree  n - l + sum |u_i|. */
class Transformation {
  public:
    Transformation(const DgFunctor* F, const DgFunctor* G, int degree, int arity_bound);

    const DgFunctor& F() const { return *F_; }
    const DgFunctor& G() const { return *G_; }
    const DgCategory& src() const { return F_->source(); }
    const DgCategory& tgt() const { return F_->target(); }
    int degree() const { return degree_; }
    int arity_bound() const { return arity_; }

    Element comp0(const ObjId& x) const;
    void set_comp0(const ObjId& x, Element e);

    Element component(int l, const ObjTuple& objs, const GenTuple& gens) const;
    /* nullptr when the entry is absent (= zero); avoids building zero elements */
    const Element* find_component(int l, const ObjTuple& objs, const GenTuple& gens) const;
    void set_component(int l, const ObjTuple& objs, const GenTuple& gens, Element e);

    bool has_rows(int l, const ObjTuple& objs) const;
    const std::map<ObjTuple, std::map<GenTuple, Element>>& arity(int l) const;

    bool is_zero() const;
    bool operator==(const Transformation& o) const;

    /* Multilinear evaluation with one non-basis slot (top-down position pos). */
    Element eval_one_slot(int l, const ObjTuple& objs, const GenTuple& gens,
                          std::size_t pos, const Element& slot) const;

    void rebind(const DgFunctor* F, const DgFunctor* G) { F_ = F; G_ = G; }

  private:
    const DgFunctor* F_;
    const DgFunctor* G_;
    int degree_;
    int arity_;
    std::map<ObjId, Element> comp0_;
    std::map<int, std::map<ObjTuple, std::map<GenTuple, Element>>> comps_;
};

/* Object tuples (X_0,...,X_l) with every consecutive hom nonzero. */
std::vector<ObjTuple> object_tuples(const DgCategory& c, int l);

/* Enumerates basis tuples [u_l,...,u_1] for a fixed object tuple. */
class GenTupleRange {
  public:
    GenTupleRange(const DgCategory& c, const ObjTuple& objs);
    bool next(GenTuple& out);  // false when exhausted
    std::size_t count() const;

  private:
    std::vector<std::vector<GenRef>> bases_;  // bases_[k] for slot u_{l-k}
    std::vector<std::size_t> idx_;
    bool done_ = false;
    bool first_ = true;
};

Scalar sign_scalar(long exponent, Field f);

enum class TransformationKind { Dg, AinfPrenatural, AinfNatural };

/* The differential on prenatural transformations.

   Component 0 is the objectwise differential.  Component l is the five-term
   sum: the printed exponents hold verbatim in even degree n; in odd degree
   the B/C/D/E terms carry the extra Koszul factors required by d o d = 0
   (shipped exponents:  B: (n+1)(|u_l|-1),  C: (n+1)+sum(|u_i|-1),
   D_i and E_i: (n+1)+sum_{j>i}(|u_j|-1)). */
Transformation d_infty(const Transformation& t);

struct NaturalityReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/* Degree 0, higher components zero, comp0 closed, signed naturality square. */
NaturalityReport is_dg_natural(const Transformation& t);

struct ClosednessFailure {
    int arity;
    ObjTuple objs;
    GenTuple gens;
};

std::optional<ClosednessFailure> is_closed_up_to(const Transformation& t);

TransformationKind classify(const Transformation& t);

struct NotDgNatural : std::runtime_error {
    explicit NotDgNatural(const std::string& w) : std::runtime_error(w) {}
};

/* (Psi o Phi)^l = Psi^l(...) Phi_{X_0}; Phi must be dg. */
Transformation compose_dg_right(const Transformation& psi, const Transformation& phi);

/* (Psi o Phi)^l = Psi_{X_l} Phi^l(...); Psi must be dg. */
Transformation compose_dg_left(const Transformation& psi, const Transformation& phi);

/* General composition with eps(k) = (-1)^{|xi| sum_{i=k+1}^{l}(|u_i|-1)};
   reduces to the two dg special cases. */
Transformation compose_general(const Transformation& theta, const Transformation& xi);

/* Exponent variant used by the sign audit: eps(k) = (-1)^{|xi| sum (|u_i|-c1) + c2|theta| + c3}. */
Transformation compose_general_variant(const Transformation& theta, const Transformation& xi,
                                       int c1, int c2, int c3);

Transformation linear_combine(const Scalar& a, const Transformation& s,
                              const Scalar& b, const Transformation& t);

Transformation identity_transformation(const DgFunctor& F, int arity_bound);

/* Copy with a new arity bound; components above it are dropped. */
Transformation truncated(const Transformation& t, int arity_bound);

}  // namespace qinv
