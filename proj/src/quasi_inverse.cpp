#include "qinv/quasi_inverse.hpp"

#include <sstream>

namespace qinv {

std::string to_string(StepVariant v) {
    switch (v) {
        case StepVariant::Verbatim: return "verbatim";
        case StepVariant::Corrected: return "corrected";
        case StepVariant::Oracle: return "oracle";
    }
    return "?";
}

namespace {

std::string tuple_str(const DgCategory& C, const ObjTuple& objs, const GenTuple& gens) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < objs.size(); ++i)
        os << (i ? "," : "") << objs[i];
    os << " | ";
    const int l = static_cast<int>(gens.size());
    for (int k = 0; k < l; ++k)
        os << (k ? "," : "") << C.gen_name(objs[l - k - 1], objs[l - k], gens[k]);
    os << ")";
    return os.str();
}

Transformation truncate(const Transformation& t, int N) {
    return truncated(t, N);
}

Transformation arity_slice(const Transformation& t, int m) {
    Transformation out(&t.F(), &t.G(), t.degree(), m);
    for (const auto& [objs, rows] : t.arity(m))
        for (const auto& [gens, e] : rows)
            out.set_component(m, objs, gens, e);
    return out;
}

/* Single-arity tables have empty lower components, so the arity-m part of
   d_infty is exactly the table differential used by the step assertions. */
Transformation d_table(const Transformation& single_arity, int m) {
    return arity_slice(d_infty(single_arity), m);
}

bool arity_equal(const Transformation& a, const Transformation& b, int m) {
    std::map<ObjTuple, std::map<GenTuple, char>> keys;
    for (const auto& [objs, rows] : a.arity(m))
        for (const auto& [gens, e] : rows)
            keys[objs][gens] = 1;
    for (const auto& [objs, rows] : b.arity(m))
        for (const auto& [gens, e] : rows)
            keys[objs][gens] = 1;
    for (const auto& [objs, rows] : keys)
        for (const auto& [gens, dummy] : rows)
            if (a.component(m, objs, gens) != b.component(m, objs, gens))
                return false;
    return true;
}

bool arity_zero(const Transformation& a, int m) {
    for (const auto& [objs, rows] : a.arity(m))
        for (const auto& [gens, e] : rows)
            if (!e.is_zero())
                return false;
    return true;
}

struct StepContext {
    const DgCategory* D;
    const DgFunctor* F;
    const DgFunctor* G;
    const Transformation* phi;
    const HomotopySystem* sys;
};

/* Right-composition of every entry with a fixed element at the source object:
   entry in Hom(B(objs.front()), T(objs.back())),  c(X) in Hom(A(X), B(X)). */
Transformation compose_entries_src(const Transformation& tab, int m,
                                   const std::map<ObjId, Element>& c,
                                   const std::map<ObjId, ObjId>& a_of,
                                   const std::map<ObjId, ObjId>& b_of,
                                   const DgFunctor* newF) {
    const DgCategory& D = tab.tgt();
    int cdeg = 0;
    for (const auto& [x, e] : c) cdeg = e.degree;
    Transformation out(newF, &tab.G(), tab.degree() + cdeg, m);
    for (const auto& [objs, rows] : tab.arity(m))
        for (const auto& [gens, e] : rows) {
            const ObjId& x0 = objs.front();
            Element prod = D.compose_elements(a_of.at(x0), b_of.at(x0),
                                              tab.G().obj(objs.back()), e, c.at(x0));
            out.set_component(m, objs, gens, prod);
        }
    return out;
}

/* Left-composition with a fixed element at the target object. */
Transformation compose_entries_tgt(const Transformation& tab, int m,
                                   const std::map<ObjId, Element>& c,
                                   const std::map<ObjId, ObjId>& b_of,
                                   const std::map<ObjId, ObjId>& t_of,
                                   const DgFunctor* newG) {
    const DgCategory& D = tab.tgt();
    Transformation out(&tab.F(), newG, tab.degree() + c.begin()->second.degree, m);
    for (const auto& [objs, rows] : tab.arity(m))
        for (const auto& [gens, e] : rows) {
            const ObjId& xm = objs.back();
            Element prod = D.compose_elements(tab.F().obj(objs.front()), b_of.at(xm),
                                              t_of.at(xm), c.at(xm), e);
            out.set_component(m, objs, gens, prod);
        }
    return out;
}

int tuple_deg_sum(const GenTuple& gens) {
    int s = 0;
    for (const GenRef& g : gens) s += g.degree;
    return s;
}

/* Sum of tables with per-tuple sign coefficients. */
Transformation combine_tables(const DgFunctor* F, const DgFunctor* G, int degree, int m,
                              const std::vector<std::pair<
                                  std::function<Scalar(const ObjTuple&, const GenTuple&)>,
                                  const Transformation*>>& terms) {
    Transformation out(F, G, degree, m);
    std::map<ObjTuple, std::map<GenTuple, char>> keys;
    for (const auto& [cf, t] : terms)
        for (const auto& [objs, rows] : t->arity(m))
            for (const auto& [gens, e] : rows)
                keys[objs][gens] = 1;
    for (const auto& [objs, rows] : keys)
        for (const auto& [gens, dummy] : rows) {
            Element acc = out.tgt().zero_elem(F->obj(objs.front()), G->obj(objs.back()),
                                              degree - m + tuple_deg_sum(gens));
            for (const auto& [cf, t] : terms) {
                Element e = t->component(m, objs, gens);
                if (e.is_zero())
                    continue;
                acc = acc + e.scaled(cf(objs, gens));
            }
            out.set_component(m, objs, gens, acc);
        }
    return out;
}

std::function<Scalar(const ObjTuple&, const GenTuple&)> const_sign(Field f, int s) {
    Scalar c = s >= 0 ? Scalar::one(f) : -Scalar::one(f);
    return [c](const ObjTuple&, const GenTuple&) { return c; };
}

}  // namespace

HomotopySystem solve_homotopy_system(const DgFunctor& F, const DgFunctor& G,
                                     const Transformation& phi) {
    NaturalityReport nat = is_dg_natural(phi);
    if (!nat.ok)
        throw NotDgNatural("solve_homotopy_system: phi is not dg-natural: " +
                           (nat.failures.empty() ? std::string("?") : nat.failures.front()));
    const DgCategory& C = F.source();
    const DgCategory& D = F.target();
    const Field fl = D.field();
    HomotopySystem sys;
    for (const ObjId& E : C.objects()) {
        const ObjId FE = F.obj(E), GE = G.obj(E);
        const HomComplex& HGF = D.hom(GE, FE);
        const HomComplex& HFF = D.hom(FE, FE);
        const HomComplex& HGG = D.hom(GE, GE);
        const Element phiE = phi.comp0(E);
        const int npsi = HGF.space.dim(0);
        const int nh = HFF.space.dim(-1);
        const int np = HGG.space.dim(-1);
        const int r1 = HGF.space.dim(1);
        const int r2 = HFF.space.dim(0);
        const int r3 = HGG.space.dim(0);
        Matrix A(r1 + r2 + r3, npsi + nh + np, fl);
        std::vector<Scalar> b(r1 + r2 + r3, Scalar::zero(fl));
        for (int k = 0; k < npsi; ++k) {
            Element psik = basis_element(HGF.space, 0, k, fl);
            Element dpsi = HGF.d(psik);
            for (int i = 0; i < r1; ++i)
                A.at(i, k) = dpsi.coeffs[i];
            Element pf = D.compose_elements(FE, GE, FE, psik, phiE);
            for (int i = 0; i < r2; ++i)
                A.at(r1 + i, k) = pf.coeffs[i];
            Element fp = D.compose_elements(GE, FE, GE, phiE, psik);
            for (int i = 0; i < r3; ++i)
                A.at(r1 + r2 + i, k) = fp.coeffs[i];
        }
        for (int k = 0; k < nh; ++k) {
            Element dh = HFF.d(basis_element(HFF.space, -1, k, fl));
            for (int i = 0; i < r2; ++i)
                A.at(r1 + i, npsi + k) = -dh.coeffs[i];
        }
        for (int k = 0; k < np; ++k) {
            Element dp = HGG.d(basis_element(HGG.space, -1, k, fl));
            for (int i = 0; i < r3; ++i)
                A.at(r1 + r2 + i, npsi + nh + k) = -dp.coeffs[i];
        }
        Element idF = D.identity(FE);
        Element idG = D.identity(GE);
        for (int i = 0; i < r2; ++i)
            b[r1 + i] = idF.coeffs[i];
        for (int i = 0; i < r3; ++i)
            b[r1 + r2 + i] = idG.coeffs[i];
        auto x = solve(A, b);
        if (!x) {
            std::ostringstream diag;
            auto dump = [&](const char* nm, const HomComplex& hc) {
                diag << nm << " H*: {";
                bool first = true;
                for (const auto& [d, v] : cohomology_dims(hc)) {
                    diag << (first ? "" : ", ") << d << ":" << v;
                    first = false;
                }
                diag << "} ";
            };
            dump("Hom(GE,FE)", HGF);
            dump("Hom(FE,GE)", D.hom(FE, GE));
            dump("Hom(FE,FE)", HFF);
            dump("Hom(GE,GE)", HGG);
            throw NotObjectwiseHomotopyEquivalence(E, diag.str());
        }
        Element psi = zero_element(HGF.space, 0, fl);
        for (int k = 0; k < npsi; ++k) psi.coeffs[k] = (*x)[k];
        Element h = zero_element(HFF.space, -1, fl);
        for (int k = 0; k < nh; ++k) h.coeffs[k] = (*x)[npsi + k];
        Element p = zero_element(HGG.space, -1, fl);
        for (int k = 0; k < np; ++k) p.coeffs[k] = (*x)[npsi + nh + k];
        sys.psi[E] = psi;
        sys.h[E] = h;
        sys.p[E] = p;
    }
    return sys;
}

ObstructionPair obstructions(const Transformation& partial_psi,
                             const Transformation& partial_eta,
                             const Transformation& phi, const HomotopySystem& sys,
                             int m, bool mirror) {
    if (m < 1)
        throw std::invalid_argument("obstruction arity must be >= 1");
    const DgCategory& C = partial_psi.src();
    Transformation psi_t = truncate(partial_psi, m);
    Transformation eta_t = truncate(partial_eta, m);
    Transformation phi_t = truncate(phi, m);
    Transformation dpsi = d_infty(psi_t);
    Transformation comp = mirror ? compose_general(phi_t, psi_t) : compose_general(psi_t, phi_t);
    Transformation idt = identity_transformation(mirror ? phi.G() : phi.F(), m);
    Transformation resid = linear_combine(Scalar::one(C.field()),
                                          linear_combine(Scalar::one(C.field()), comp,
                                                         -Scalar::one(C.field()), idt),
                                          -Scalar::one(C.field()), d_infty(eta_t));
    // lower identities must hold strictly below m (arity 0 included)
    for (const ObjId& x : C.objects()) {
        if (!dpsi.comp0(x).is_zero())
            throw PreconditionViolated("d(psi^0) != 0 at " + x);
        if (!resid.comp0(x).is_zero())
            throw PreconditionViolated("arity-0 homotopy identity fails at " + x);
    }
    for (int l = 1; l < m; ++l) {
        if (!arity_zero(dpsi, l))
            throw PreconditionViolated("(d psi)^" + std::to_string(l) + " != 0");
        if (!arity_zero(resid, l))
            throw PreconditionViolated("homotopy identity fails at arity " + std::to_string(l));
    }
    ObstructionPair obs{m, mirror, arity_slice(dpsi, m), arity_slice(resid, m)};

    // table assertions:  d(lambda) = 0  and  d(mu) = lambda . phi
    if (!arity_zero(d_table(obs.lambda, m), m))
        throw LemmaAssertionFailed("d(lambda^" + std::to_string(m) + ") != 0");
    std::map<ObjId, ObjId> Fob, Gob;
    for (const ObjId& x : C.objects()) {
        Fob[x] = phi.F().obj(x);
        Gob[x] = phi.G().obj(x);
    }
    std::map<ObjId, Element> phim;
    for (const ObjId& x : C.objects())
        phim[x] = phi.comp0(x);
    Transformation lam_phi = mirror
        ? compose_entries_tgt(obs.lambda, m, phim, Fob, Gob, &phi.G())
        : compose_entries_src(obs.lambda, m, phim, Fob, Gob, &phi.F());
    if (!arity_equal(d_table(obs.mu, m), lam_phi, m))
        throw LemmaAssertionFailed("d(mu^" + std::to_string(m) + ") != lambda.phi");
    return obs;
}

namespace {

struct Candidate {
    Transformation table;
    StepVariant variant;
    std::string detail;
};

}  // namespace

std::pair<Transformation, Transformation> brute_force_extend(const ObstructionPair& obs,
                                                             const Transformation& phi) {
    const DgCategory& C = phi.src();
    const DgCategory& D = phi.tgt();
    const Field fl = D.field();
    const int m = obs.m;
    const DgFunctor& F = phi.F();
    const DgFunctor& G = phi.G();
    // psi_m: G => F degree 0; eta_m: F=>F (left) or omega'_m: G=>G (mirror), degree -1
    Transformation psi_m(&obs.lambda.F(), &obs.lambda.G(), 0, m);
    Transformation eta_m(obs.mirror ? &G : &F, obs.mirror ? &G : &F, -1, m);

    for (const ObjTuple& objs : object_tuples(C, m)) {
        const ObjId E0 = objs.front(), Em = objs.back();
        const ObjId FE0 = F.obj(E0), GE0 = G.obj(E0), FEm = F.obj(Em), GEm = G.obj(Em);
        // unknown layout per basis tuple: psi coords then eta coords
        GenTupleRange range(C, objs);
        GenTuple gens;
        std::vector<GenTuple> bts;
        while (range.next(gens))
            bts.push_back(gens);
        std::vector<int> psi_dim(bts.size()), eta_dim(bts.size());
        std::vector<int> r1_dim(bts.size()), r2_dim(bts.size());
        bool rhs_nonzero = false;
        for (std::size_t i = 0; i < bts.size(); ++i) {
            const int s = tuple_deg_sum(bts[i]);
            psi_dim[i] = D.hom(GE0, FEm).space.dim(-m + s);
            r1_dim[i] = D.hom(GE0, FEm).space.dim(1 - m + s);
            if (!obs.mirror) {
                eta_dim[i] = D.hom(FE0, FEm).space.dim(-1 - m + s);
                r2_dim[i] = D.hom(FE0, FEm).space.dim(-m + s);
            } else {
                eta_dim[i] = D.hom(GE0, GEm).space.dim(-1 - m + s);
                r2_dim[i] = D.hom(GE0, GEm).space.dim(-m + s);
            }
            if (!obs.lambda.component(m, objs, bts[i]).is_zero() ||
                !obs.mu.component(m, objs, bts[i]).is_zero())
                rhs_nonzero = true;
        }
        if (!rhs_nonzero)
            continue;  // canonical solution is zero on this object tuple
        int nu = 0, nr = 0;
        std::vector<int> psi_off(bts.size()), eta_off(bts.size());
        for (std::size_t i = 0; i < bts.size(); ++i) { psi_off[i] = nu; nu += psi_dim[i]; }
        for (std::size_t i = 0; i < bts.size(); ++i) { eta_off[i] = nu; nu += eta_dim[i]; }
        std::vector<int> r1_off(bts.size()), r2_off(bts.size());
        for (std::size_t i = 0; i < bts.size(); ++i) { r1_off[i] = nr; nr += r1_dim[i]; }
        for (std::size_t i = 0; i < bts.size(); ++i) { r2_off[i] = nr; nr += r2_dim[i]; }

        Matrix A(nr, nu, fl);
        std::vector<Scalar> b(nr, Scalar::zero(fl));
        // columns: d_table of a single-entry table + the phi coupling
        auto fill_dtab = [&](const Transformation& shape, int col0, int dim, std::size_t bt_i,
                             const std::vector<int>& row_off, const std::vector<int>& row_dim,
                             int deg) {
            for (int k = 0; k < dim; ++k) {
                Transformation unit(&shape.F(), &shape.G(), deg, m);
                const GradedSpace& sp =
                    D.hom(shape.F().obj(E0), shape.G().obj(Em)).space;
                Element e = basis_element(sp, deg - m + tuple_deg_sum(bts[bt_i]), k, fl);
                unit.set_component(m, objs, bts[bt_i], e);
                Transformation du = d_table(unit, m);
                for (std::size_t j = 0; j < bts.size(); ++j) {
                    Element v = du.component(m, objs, bts[j]);
                    if (v.is_zero())
                        continue;
                    for (std::size_t r = 0; r < v.coeffs.size(); ++r)
                        A.at(row_off[j] + r, col0 + k) += v.coeffs[r];
                }
            }
        };
        // eq1: d(psi_m) = -lambda
        for (std::size_t i = 0; i < bts.size(); ++i)
            fill_dtab(psi_m, psi_off[i], psi_dim[i], i, r1_off, r1_dim, 0);
        // eq2: d(eta_m) -+ coupling = mu
        for (std::size_t i = 0; i < bts.size(); ++i)
            fill_dtab(eta_m, eta_off[i], eta_dim[i], i, r2_off, r2_dim, -1);
        // coupling: -(psi_m . phi) (left) or -(phi . psi_m) (mirror) into eq2 rows
        for (std::size_t i = 0; i < bts.size(); ++i) {
            const int s = tuple_deg_sum(bts[i]);
            for (int k = 0; k < psi_dim[i]; ++k) {
                Element pk = basis_element(D.hom(GE0, FEm).space, -m + s, k, fl);
                Element coup = obs.mirror
                    ? D.compose_elements(GE0, FEm, GEm, phi.comp0(Em), pk)
                    : D.compose_elements(FE0, GE0, FEm, pk, phi.comp0(E0));
                for (std::size_t r = 0; r < coup.coeffs.size(); ++r)
                    A.at(r2_off[i] + r, psi_off[i] + k) -= coup.coeffs[r];
            }
        }
        for (std::size_t i = 0; i < bts.size(); ++i) {
            Element lam = obs.lambda.component(m, objs, bts[i]);
            for (std::size_t r = 0; r < lam.coeffs.size(); ++r)
                b[r1_off[i] + r] = -lam.coeffs[r];
            Element mu = obs.mu.component(m, objs, bts[i]);
            for (std::size_t r = 0; r < mu.coeffs.size(); ++r)
                b[r2_off[i] + r] = mu.coeffs[r];
        }
        auto x = solve(A, b);
        if (!x)
            throw ExtensionUnsolvable("step system inconsistent at arity " + std::to_string(m) +
                                      " on object tuple starting at " + E0);
        for (std::size_t i = 0; i < bts.size(); ++i) {
            const int s = tuple_deg_sum(bts[i]);
            if (psi_dim[i] > 0) {
                Element e = zero_element(D.hom(GE0, FEm).space, -m + s, fl);
                for (int k = 0; k < psi_dim[i]; ++k)
                    e.coeffs[k] = (*x)[psi_off[i] + k];
                psi_m.set_component(m, objs, bts[i], e);
            }
            if (eta_dim[i] > 0) {
                const GradedSpace& sp = obs.mirror ? D.hom(GE0, GEm).space : D.hom(FE0, FEm).space;
                Element e = zero_element(sp, -1 - m + s, fl);
                for (int k = 0; k < eta_dim[i]; ++k)
                    e.coeffs[k] = (*x)[eta_off[i] + k];
                eta_m.set_component(m, objs, bts[i], e);
            }
        }
    }
    return {psi_m, eta_m};
}

Transformation table_differential(const Transformation& single_arity_table, int m) {
    return d_table(single_arity_table, m);
}

bool step_contract_holds(const ObstructionPair& obs, const Transformation& psi_m,
                         const Transformation& eta_m, const Transformation& phi) {
    const DgCategory& C = phi.src();
    const Field fl = phi.tgt().field();
    const int m = obs.m;
    Transformation neg_lambda =
        combine_tables(&obs.lambda.F(), &obs.lambda.G(), obs.lambda.degree(), m,
                       {{const_sign(fl, -1), &obs.lambda}});
    if (!arity_equal(d_table(psi_m, m), neg_lambda, m))
        return false;
    std::map<ObjId, ObjId> Fob, Gob;
    std::map<ObjId, Element> PhiE;
    for (const ObjId& x : C.objects()) {
        Fob[x] = phi.F().obj(x);
        Gob[x] = phi.G().obj(x);
        PhiE[x] = phi.comp0(x);
    }
    Transformation coupled = obs.mirror
        ? compose_entries_tgt(psi_m, m, PhiE, Fob, Gob, &phi.G())
        : compose_entries_src(psi_m, m, PhiE, Fob, Gob, &phi.F());
    Transformation target = combine_tables(&eta_m.F(), &eta_m.G(), 0, m,
                                           {{const_sign(fl, +1), &coupled},
                                            {const_sign(fl, +1), &obs.mu}});
    return arity_equal(d_table(eta_m, m), target, m);
}

ExtensionResult extend_step(const ObstructionPair& obs, const HomotopySystem& sys,
                            const Transformation& phi) {
    const DgCategory& C = phi.src();
    const DgCategory& D = phi.tgt();
    const Field fl = D.field();
    const int m = obs.m;
    const DgFunctor& F = phi.F();
    const DgFunctor& G = phi.G();
    std::map<ObjId, ObjId> Fob, Gob;
    for (const ObjId& x : C.objects()) {
        Fob[x] = F.obj(x);
        Gob[x] = G.obj(x);
    }

    StepProvenance prov;
    prov.m = m;

    auto neg_lambda = combine_tables(&obs.lambda.F(), &obs.lambda.G(), obs.lambda.degree(), m,
                                     {{const_sign(fl, -1), &obs.lambda}});

    Transformation psi_m(&obs.lambda.F(), &obs.lambda.G(), 0, m);
    Transformation eta_m(obs.mirror ? &G : &F, obs.mirror ? &G : &F, -1, m);

    if (!obs.mirror) {
        std::map<ObjId, Element> P = sys.p, Psi = sys.psi, H = sys.h;
        std::map<ObjId, Element> PhiE;
        for (const ObjId& x : C.objects())
            PhiE[x] = phi.comp0(x);
        // building blocks at the source object E0
        auto rc = [&](const Transformation& tab, const std::map<ObjId, Element>& c,
                      const std::map<ObjId, ObjId>& a_of, const std::map<ObjId, ObjId>& b_of,
                      const DgFunctor* nf) {
            return compose_entries_src(tab, m, c, a_of, b_of, nf);
        };
        // lambda entries: Hom(GE0, FEm); mu entries: Hom(FE0, FEm)
        Transformation lam_p = rc(obs.lambda, P, Gob, Gob, &G);
        Transformation mu_psi = rc(obs.mu, Psi, Gob, Fob, &G);
        // psi candidates
        Transformation psi_verbatim =
            combine_tables(&G, &F, 0, m, {{const_sign(fl, +1), &lam_p},
                                          {const_sign(fl, -1), &mu_psi}});
        auto dressed_sign = [m, fl](const ObjTuple&, const GenTuple& gens) {
            return sign_scalar(m + 1 + tuple_deg_sum(gens), fl);
        };
        Transformation psi_dressed =
            combine_tables(&G, &F, 0, m, {{dressed_sign, &lam_p},
                                          {const_sign(fl, -1), &mu_psi}});
        bool have_psi = false;
        if (arity_equal(d_table(psi_verbatim, m), neg_lambda, m)) {
            psi_m = psi_verbatim;
            prov.psi = StepVariant::Verbatim;
            prov.psi_detail = "direct";
            have_psi = true;
        } else if (arity_equal(d_table(psi_dressed, m), neg_lambda, m)) {
            psi_m = psi_dressed;
            prov.psi = StepVariant::Corrected;
            prov.psi_detail = "koszul-signed";
            have_psi = true;
        }
        // eta candidates need the accepted psi_m (fall to oracle jointly if psi failed)
        if (have_psi) {
            std::map<ObjId, Element> PhiH, PsiPhiH, pPhiH, pPhi, PsiPPhi, ppPhi, pppPhi;
            for (const ObjId& x : C.objects()) {
                const ObjId fe = Fob[x], ge = Gob[x];
                Element phx = D.compose_elements(fe, fe, ge, PhiE[x], H[x]);
                PhiH[x] = phx;
                PsiPhiH[x] = D.compose_elements(fe, ge, fe, Psi[x], phx);
                pPhiH[x] = D.compose_elements(fe, ge, ge, P[x], phx);
                Element pf = D.compose_elements(fe, ge, ge, P[x], PhiE[x]);
                pPhi[x] = pf;
                PsiPPhi[x] = D.compose_elements(fe, ge, fe, Psi[x], pf);
                ppPhi[x] = D.compose_elements(fe, ge, ge, P[x], pf);
                pppPhi[x] = D.compose_elements(fe, ge, ge, P[x], ppPhi[x]);
            }
            Transformation t_mh = rc(obs.mu, H, Fob, Fob, &F);
            Transformation t_mPFh = rc(obs.mu, PsiPhiH, Fob, Fob, &F);
            Transformation t_lpFh = rc(obs.lambda, pPhiH, Fob, Gob, &F);
            Transformation t_mPpF = rc(obs.mu, PsiPPhi, Fob, Fob, &F);
            Transformation t_lppF = rc(obs.lambda, ppPhi, Fob, Gob, &F);
            Transformation t_lpppF = rc(obs.lambda, pppPhi, Fob, Gob, &F);
            Transformation psim_phi = rc(psi_m, PhiE, Fob, Gob, &F);
            Transformation target = combine_tables(&F, &F, 0, m, {{const_sign(fl, +1), &psim_phi},
                                                                  {const_sign(fl, +1), &obs.mu}});
            std::vector<Candidate> cands;
            if (arity_zero(t_lpppF, m)) {
                // the cubic-homotopy final term vanishes, so the raw shape is degreewise legal
                cands.push_back({combine_tables(&F, &F, -1, m,
                                                {{const_sign(fl, -1), &t_mh},
                                                 {const_sign(fl, +1), &t_mPFh},
                                                 {const_sign(fl, -1), &t_lpFh},
                                                 {const_sign(fl, -1), &t_mPpF}}),
                                 StepVariant::Verbatim, "direct"});
            }
            cands.push_back({combine_tables(&F, &F, -1, m,
                                            {{const_sign(fl, -1), &t_mh},
                                             {const_sign(fl, +1), &t_mPFh},
                                             {const_sign(fl, -1), &t_lpFh},
                                             {const_sign(fl, -1), &t_mPpF},
                                             {const_sign(fl, +1), &t_lppF}}),
                             StepVariant::Corrected, "quadratic-homotopy-term"});
            auto vs = [m, fl](const ObjTuple&, const GenTuple& gens) {
                return sign_scalar(m + tuple_deg_sum(gens), fl);
            };
            auto nvs = [m, fl](const ObjTuple&, const GenTuple& gens) {
                return -sign_scalar(m + tuple_deg_sum(gens), fl);
            };
            cands.push_back({combine_tables(&F, &F, -1, m,
                                            {{nvs, &t_mh},
                                             {vs, &t_mPFh},
                                             {nvs, &t_mPpF},
                                             {const_sign(fl, +1), &t_lpFh},
                                             {const_sign(fl, -1), &t_lppF}}),
                             StepVariant::Corrected, "koszul-signed"});
            bool have_eta = false;
            for (auto& c : cands) {
                if (arity_equal(d_table(c.table, m), target, m)) {
                    eta_m = c.table;
                    prov.eta = c.variant;
                    prov.eta_detail = c.detail;
                    have_eta = true;
                    break;
                }
            }
            if (have_eta)
                return {psi_m, eta_m, prov};
        }
    } else {
        std::map<ObjId, Element> P = sys.p, Psi = sys.psi, H = sys.h;
        std::map<ObjId, Element> PhiE;
        for (const ObjId& x : C.objects())
            PhiE[x] = phi.comp0(x);
        auto lc = [&](const Transformation& tab, const std::map<ObjId, Element>& c,
                      const std::map<ObjId, ObjId>& b_of, const std::map<ObjId, ObjId>& t_of,
                      const DgFunctor* ng) {
            return compose_entries_tgt(tab, m, c, b_of, t_of, ng);
        };
        // lambda' entries: Hom(GE0, FEm); mu' entries: Hom(GE0, GEm)
        Transformation h_lam = lc(obs.lambda, H, Fob, Fob, &F);
        Transformation psi_mu = lc(obs.mu, Psi, Gob, Fob, &F);
        Transformation psi_verbatim =
            combine_tables(&G, &F, 0, m, {{const_sign(fl, +1), &h_lam},
                                          {const_sign(fl, -1), &psi_mu}});
        bool have_psi = false;
        if (arity_equal(d_table(psi_verbatim, m), neg_lambda, m)) {
            psi_m = psi_verbatim;
            prov.psi = StepVariant::Verbatim;
            prov.psi_detail = "direct";
            have_psi = true;
        }
        if (have_psi) {
            std::map<ObjId, Element> PhiH, PhiHPsi, pPhiPsi, pPhih, PhiHH, PhiHHH;
            for (const ObjId& x : C.objects()) {
                const ObjId fe = Fob[x], ge = Gob[x];
                Element hx = H[x];
                Element phih = D.compose_elements(fe, fe, ge, PhiE[x], hx);          // Phi h
                Element hpsi = D.compose_elements(ge, fe, fe, hx, Psi[x]);           // h Psi
                PhiHPsi[x] = D.compose_elements(ge, fe, ge, PhiE[x], hpsi);          // Phi h Psi
                Element phipsi = D.compose_elements(ge, fe, ge, PhiE[x], Psi[x]);    // Phi Psi
                pPhiPsi[x] = D.compose_elements(ge, ge, ge, P[x], phipsi);           // p Phi Psi
                pPhih[x] = D.compose_elements(fe, ge, ge, P[x], phih);               // p Phi h
                Element hh = D.compose_elements(fe, fe, fe, hx, hx);
                PhiHH[x] = D.compose_elements(fe, fe, ge, PhiE[x], hh);              // Phi h h
                Element hhh = D.compose_elements(fe, fe, fe, hx, hh);
                PhiHHH[x] = D.compose_elements(fe, fe, ge, PhiE[x], hhh);
            }
            Transformation t_pm = lc(obs.mu, P, Gob, Gob, &G);
            Transformation t_pFPm = lc(obs.mu, pPhiPsi, Gob, Gob, &G);
            Transformation t_pFhl = lc(obs.lambda, pPhih, Fob, Gob, &G);
            Transformation t_FhPm = lc(obs.mu, PhiHPsi, Gob, Gob, &G);
            Transformation t_Fhhl = lc(obs.lambda, PhiHH, Fob, Gob, &G);
            Transformation t_Fhhhl = lc(obs.lambda, PhiHHH, Fob, Gob, &G);
            Transformation phi_psim = lc(psi_m, PhiE, Fob, Gob, &G);
            Transformation target = combine_tables(&G, &G, 0, m, {{const_sign(fl, +1), &phi_psim},
                                                                  {const_sign(fl, +1), &obs.mu}});
            std::vector<Candidate> cands;
            if (arity_zero(t_Fhhhl, m)) {
                cands.push_back({combine_tables(&G, &G, -1, m,
                                                {{const_sign(fl, -1), &t_pm},
                                                 {const_sign(fl, +1), &t_pFPm},
                                                 {const_sign(fl, -1), &t_pFhl},
                                                 {const_sign(fl, -1), &t_FhPm}}),
                                 StepVariant::Verbatim, "direct"});
            }
            cands.push_back({combine_tables(&G, &G, -1, m,
                                            {{const_sign(fl, -1), &t_pm},
                                             {const_sign(fl, +1), &t_pFPm},
                                             {const_sign(fl, -1), &t_pFhl},
                                             {const_sign(fl, -1), &t_FhPm},
                                             {const_sign(fl, +1), &t_Fhhl}}),
                             StepVariant::Corrected, "quadratic-homotopy-term"});
            bool have_eta = false;
            for (auto& c : cands) {
                if (arity_equal(d_table(c.table, m), target, m)) {
                    eta_m = c.table;
                    prov.eta = c.variant;
                    prov.eta_detail = c.detail;
                    have_eta = true;
                    break;
                }
            }
            if (have_eta)
                return {psi_m, eta_m, prov};
        }
    }

    // oracle fallback for the whole step
    auto [psi_o, eta_o] = brute_force_extend(obs, phi);
    // post-hoc re-verification of the solver contract
    if (!arity_equal(d_table(psi_o, m), neg_lambda, m))
        throw ExtensionUnsolvable("oracle output violates d(psi_m) = -lambda");
    prov.psi = StepVariant::Oracle;
    prov.eta = StepVariant::Oracle;
    prov.psi_detail = prov.eta_detail = "canonical-solve";
    return {psi_o, eta_o, prov};
}

namespace {

void check_zero(const Transformation& z, const std::string& name, int N,
                CertificateReport& rep, bool throw_on_fail) {
    const DgCategory& C = z.src();
    for (int l = 0; l <= N; ++l) {
        IdentityResult r;
        r.name = name;
        r.arity = l;
        if (l == 0) {
            for (const ObjId& x : C.objects())
                if (!z.comp0(x).is_zero()) {
                    r.pass = false;
                    r.detail = "(" + x + ")";
                    break;
                }
        } else {
            for (const auto& [objs, rows] : z.arity(l)) {
                for (const auto& [gens, e] : rows)
                    if (!e.is_zero()) {
                        r.pass = false;
                        r.detail = tuple_str(C, objs, gens);
                        break;
                    }
                if (!r.pass)
                    break;
            }
        }
        if (!r.pass && throw_on_fail)
            throw VerificationFailed(name, l, r.detail);
        rep.identities.push_back(std::move(r));
    }
}

void run_identity_checks(const Certificate& cert, CertificateReport& rep, bool throw_on_fail) {
    const int N = cert.arity_bound;
    const Field fl = cert.phi.tgt().field();
    const Scalar one = Scalar::one(fl);
    const Transformation& phi = cert.phi;
    Transformation idF = identity_transformation(phi.F(), N);
    Transformation idG = identity_transformation(phi.G(), N);

    check_zero(d_infty(cert.psi), "d_infty_psi", N, rep, throw_on_fail);

    Transformation left = linear_combine(
        one, linear_combine(one, compose_general(cert.psi, phi), -one, idF),
        -one, d_infty(cert.eta));
    check_zero(left, "psi_phi_minus_id_minus_d_eta", N, rep, throw_on_fail);

    Transformation right = linear_combine(
        one, linear_combine(one, compose_general(phi, cert.psi), -one, idG),
        -one, d_infty(cert.omega));
    check_zero(right, "phi_psi_minus_id_minus_d_omega", N, rep, throw_on_fail);

    check_zero(d_infty(cert.psi_prime), "d_infty_psi_prime", N, rep, throw_on_fail);

    Transformation mirror = linear_combine(
        one, linear_combine(one, compose_general(phi, cert.psi_prime), -one, idG),
        -one, d_infty(cert.omega_prime));
    check_zero(mirror, "phi_psi_prime_minus_id_minus_d_omega_prime", N, rep, throw_on_fail);

    Transformation cmp = linear_combine(
        one, linear_combine(one, cert.psi_prime, -one, cert.psi), -one,
        d_infty(linear_combine(one, compose_general(cert.psi, cert.omega_prime), -one,
                               compose_general(cert.eta, cert.psi_prime))));
    check_zero(cmp, "psi_prime_comparison", N, rep, throw_on_fail);
}

}  // namespace

Certificate quasi_inverse(const DgFunctor& F, const DgFunctor& G, const Transformation& phi,
                          int arity_bound) {
    const int N = arity_bound;
    const Field fl = F.target().field();
    const Scalar one = Scalar::one(fl);
    if (&phi.F() != &F || &phi.G() != &G)
        throw std::invalid_argument("quasi_inverse: phi is not a transformation F => G");
    NaturalityReport nat = is_dg_natural(phi);
    if (!nat.ok)
        throw NotDgNatural("quasi_inverse: phi is not dg-natural");
    Transformation phi_N = truncate(phi, N);
    HomotopySystem sys = solve_homotopy_system(F, G, phi_N);

    CertificateReport rep;

    Transformation psi(&G, &F, 0, N);
    Transformation eta(&F, &F, -1, N);
    for (const ObjId& x : F.source().objects()) {
        psi.set_comp0(x, sys.psi.at(x));
        eta.set_comp0(x, sys.h.at(x));
    }
    for (int m = 1; m <= N; ++m) {
        ObstructionPair obs = obstructions(psi, eta, phi_N, sys, m, false);
        ExtensionResult ext = extend_step(obs, sys, phi_N);
        for (const auto& [objs, rows] : ext.psi_m.arity(m))
            for (const auto& [gens, e] : rows)
                psi.set_component(m, objs, gens, e);
        for (const auto& [objs, rows] : ext.eta_m.arity(m))
            for (const auto& [gens, e] : rows)
                eta.set_component(m, objs, gens, e);
        rep.left_steps.push_back(ext.provenance);
    }

    Transformation psi_prime(&G, &F, 0, N);
    Transformation omega_prime(&G, &G, -1, N);
    for (const ObjId& x : F.source().objects()) {
        psi_prime.set_comp0(x, sys.psi.at(x));
        omega_prime.set_comp0(x, sys.p.at(x));
    }
    for (int m = 1; m <= N; ++m) {
        ObstructionPair obs = obstructions(psi_prime, omega_prime, phi_N, sys, m, true);
        ExtensionResult ext = extend_step(obs, sys, phi_N);
        for (const auto& [objs, rows] : ext.psi_m.arity(m))
            for (const auto& [gens, e] : rows)
                psi_prime.set_component(m, objs, gens, e);
        for (const auto& [objs, rows] : ext.eta_m.arity(m))
            for (const auto& [gens, e] : rows)
                omega_prime.set_component(m, objs, gens, e);
        rep.right_steps.push_back(ext.provenance);
    }

    // omega := omega' + (phi o eta) o psi' - (phi o psi) o omega'
    Transformation phi_eta = compose_dg_left(phi_N, eta);
    Transformation phi_psi = compose_dg_left(phi_N, psi);
    Transformation omega = linear_combine(
        one, linear_combine(one, omega_prime, one, compose_general(phi_eta, psi_prime)),
        -one, compose_general(phi_psi, omega_prime));

    Certificate cert{N, sys, phi_N, psi, eta, omega, psi_prime, omega_prime, {}};
    run_identity_checks(cert, rep, /*throw_on_fail=*/true);
    rep.notes.push_back(
        "quasi-inverse identities are verified as components of the compositions "
        "(psi o phi) and (phi o psi) together with d_infty of the homotopies");
    rep.notes.push_back(
        "eta is seeded with the F-side homotopy h_E; p_E seeds the mirrored homotopy omega'");
    cert.report = std::move(rep);
    return cert;
}

CertificateReport verify_certificate(const Certificate& cert) {
    CertificateReport rep;
    rep.left_steps = cert.report.left_steps;
    rep.right_steps = cert.report.right_steps;
    rep.notes = cert.report.notes;
    run_identity_checks(cert, rep, /*throw_on_fail=*/false);
    return rep;
}

}  // namespace qinv
