#pragma once

#include "qinv/generator.hpp"

namespace qinv {

/* The fixture corpus shipped with the repo. */

/* One object "star" with End(star) = k.id. */
DgCategory fix_pt(Field f);

/* Objects a, b; one closed degree-0 arrow u: a -> b. */
DgCategory fix_arrow(Field f);

/* Object A with End(A) spanned by h_A (deg -1), id_A, e (deg 0), s (deg +1),
   d(h_A) = -id_A, d(e) = s; plus a zero object O with all homs zero. */
DgCategory fix_contract(Field f);

/* Target of the iso fixture: A0 = k in degree 0 and the two-term complex B
   (B^0 = k^2, B^1 = k, d(x,y) = x), with full hom-complexes. */
DgCategory fix_iso_target(Field f);

/* pt => contract, F = const A, G = const O, phi = 0. */
Instance fix_contract_instance(Field f, int arity);

/* pt => contract, F = G = const A, phi = id_A. */
Instance identity_phi_instance(Field f, int arity);

/* pt => iso target, F = const A0, G = const B, phi: 1 |-> y. */
Instance fix_iso_instance(Field f, int arity);

}  // namespace qinv
