#include "qinv/transform.hpp"

#include <sstream>

#include "qinv/parallel.hpp"

namespace qinv {

Scalar sign_scalar(long exponent, Field f) {
    return (((exponent % 2) + 2) % 2 == 0) ? Scalar::one(f) : -Scalar::one(f);
}

Transformation::Transformation(const DgFunctor* F, const DgFunctor* G, int degree, int arity_bound)
    : F_(F), G_(G), degree_(degree), arity_(arity_bound) {
    if (&F->source() != &G->source() || &F->target() != &G->target())
        throw std::invalid_argument("transformation functors must share source and target");
    if (arity_bound < 0)
        throw std::invalid_argument("arity bound must be >= 0");
}

Element Transformation::comp0(const ObjId& x) const {
    auto it = comp0_.find(x);
    if (it != comp0_.end())
        return it->second;
    return tgt().zero_elem(F_->obj(x), G_->obj(x), degree_);
}

void Transformation::set_comp0(const ObjId& x, Element e) {
    if (e.degree != degree_)
        throw std::invalid_argument("comp0 degree mismatch");
    const auto& space = tgt().hom(F_->obj(x), G_->obj(x)).space;
    if (e.coeffs.size() != static_cast<std::size_t>(space.dim(e.degree)))
        throw std::invalid_argument("comp0 dimension mismatch at " + x);
    if (e.is_zero())
        comp0_.erase(x);
    else
        comp0_[x] = std::move(e);
}

namespace {

int tuple_degree_sum(const GenTuple& gens) {
    int s = 0;
    for (const GenRef& g : gens)
        s += g.degree;
    return s;
}

}  // namespace

Element Transformation::component(int l, const ObjTuple& objs, const GenTuple& gens) const {
    if (l == 0)
        return comp0(objs.at(0));
    if (const Element* e = find_component(l, objs, gens))
        return *e;
    const int out_deg = degree_ - l + tuple_degree_sum(gens);
    return tgt().zero_elem(F_->obj(objs.front()), G_->obj(objs.back()), out_deg);
}

const Element* Transformation::find_component(int l, const ObjTuple& objs,
                                              const GenTuple& gens) const {
    auto la = comps_.find(l);
    if (la == comps_.end())
        return nullptr;
    auto ot = la->second.find(objs);
    if (ot == la->second.end())
        return nullptr;
    auto it = ot->second.find(gens);
    return it == ot->second.end() ? nullptr : &it->second;
}

void Transformation::set_component(int l, const ObjTuple& objs, const GenTuple& gens, Element e) {
    if (l < 1 || l > arity_)
        throw std::invalid_argument("component arity out of range");
    if (objs.size() != static_cast<std::size_t>(l) + 1 ||
        gens.size() != static_cast<std::size_t>(l))
        throw std::invalid_argument("component tuple lengths inconsistent");
    const int want = degree_ - l + tuple_degree_sum(gens);
    if (e.degree != want)
        throw std::invalid_argument("component degree violates n - l + sum|u_i|");
    const auto& space = tgt().hom(F_->obj(objs.front()), G_->obj(objs.back())).space;
    if (e.coeffs.size() != static_cast<std::size_t>(space.dim(e.degree)))
        throw std::invalid_argument("component dimension mismatch");
    if (e.is_zero()) {
        auto la = comps_.find(l);
        if (la != comps_.end()) {
            auto ot = la->second.find(objs);
            if (ot != la->second.end()) {
                ot->second.erase(gens);
                if (ot->second.empty())
                    la->second.erase(objs);
            }
        }
        return;
    }
    comps_[l][objs][gens] = std::move(e);
}

bool Transformation::has_rows(int l, const ObjTuple& objs) const {
    auto la = comps_.find(l);
    if (la == comps_.end())
        return false;
    auto ot = la->second.find(objs);
    return ot != la->second.end() && !ot->second.empty();
}

const std::map<ObjTuple, std::map<GenTuple, Element>>& Transformation::arity(int l) const {
    static const std::map<ObjTuple, std::map<GenTuple, Element>> empty;
    auto la = comps_.find(l);
    return la == comps_.end() ? empty : la->second;
}

bool Transformation::is_zero() const {
    for (const auto& [x, e] : comp0_)
        if (!e.is_zero())
            return false;
    for (const auto& [l, tabs] : comps_)
        for (const auto& [objs, rows] : tabs)
            for (const auto& [gens, e] : rows)
                if (!e.is_zero())
                    return false;
    return true;
}

bool Transformation::operator==(const Transformation& o) const {
    if (degree_ != o.degree_ || arity_ != o.arity_)
        return false;
    for (const ObjId& x : src().objects())
        if (comp0(x) != o.comp0(x))
            return false;
    for (int l = 1; l <= arity_; ++l) {
        auto keys = [](const Transformation& t, int l) {
            std::map<ObjTuple, std::vector<GenTuple>> out;
            for (const auto& [objs, rows] : t.arity(l))
                for (const auto& [gens, e] : rows)
                    out[objs].push_back(gens);
            return out;
        };
        for (const auto& [objs, gts] : keys(*this, l))
            for (const auto& g : gts)
                if (component(l, objs, g) != o.component(l, objs, g))
                    return false;
        for (const auto& [objs, gts] : keys(o, l))
            for (const auto& g : gts)
                if (component(l, objs, g) != o.component(l, objs, g))
                    return false;
    }
    return true;
}

Element Transformation::eval_one_slot(int l, const ObjTuple& objs, const GenTuple& gens,
                                      std::size_t pos, const Element& slot) const {
    const int out_deg = degree_ - l + tuple_degree_sum(gens) - gens[pos].degree + slot.degree;
    Element acc = tgt().zero_elem(F_->obj(objs.front()), G_->obj(objs.back()), out_deg);
    if (!has_rows(l, objs))
        return acc;
    // slot position pos holds u_{l-pos}; it lives in Hom(objs[l-pos-1], objs[l-pos])
    const std::size_t i_lo = l - pos - 1;
    const GradedSpace& space = src().hom(objs[i_lo], objs[i_lo + 1]).space;
    if (slot.coeffs.size() != static_cast<std::size_t>(space.dim(slot.degree)))
        throw std::invalid_argument("eval_one_slot: slot element dimension mismatch");
    GenTuple key = gens;
    for (int k = 0; k < static_cast<int>(slot.coeffs.size()); ++k) {
        if (slot.coeffs[k].is_zero())
            continue;
        key[pos] = GenRef{slot.degree, k};
        if (const Element* e = find_component(l, objs, key))
            acc.add_scaled(*e, slot.coeffs[k]);
    }
    return acc;
}

std::vector<ObjTuple> object_tuples(const DgCategory& c, int l) {
    std::vector<ObjTuple> out;
    ObjTuple cur(l + 1);
    std::function<void(int)> rec = [&](int k) {
        if (k == l + 1) {
            out.push_back(cur);
            return;
        }
        for (const ObjId& x : c.objects()) {
            if (k > 0 && c.hom(cur[k - 1], x).space.total_dim() == 0)
                continue;
            cur[k] = x;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

GenTupleRange::GenTupleRange(const DgCategory& c, const ObjTuple& objs) {
    const int l = static_cast<int>(objs.size()) - 1;
    for (int k = 0; k < l; ++k)  // slot k holds u_{l-k}: Hom(objs[l-k-1], objs[l-k])
        bases_.push_back(c.flat_basis(objs[l - k - 1], objs[l - k]));
    idx_.assign(bases_.size(), 0);
    for (const auto& b : bases_)
        if (b.empty())
            done_ = true;
}

std::size_t GenTupleRange::count() const {
    std::size_t n = 1;
    for (const auto& b : bases_)
        n *= b.size();
    return done_ ? 0 : n;
}

bool GenTupleRange::next(GenTuple& out) {
    if (done_)
        return false;
    if (!first_) {
        std::size_t k = bases_.size();
        while (k > 0) {
            --k;
            if (++idx_[k] < bases_[k].size())
                break;
            idx_[k] = 0;
            if (k == 0) {
                done_ = true;
                return false;
            }
        }
    }
    first_ = false;
    out.resize(bases_.size());
    for (std::size_t k = 0; k < bases_.size(); ++k)
        out[k] = bases_[k][idx_[k]];
    return true;
}

Transformation d_infty(const Transformation& t) {
    const DgCategory& C = t.src();
    const DgCategory& D = t.tgt();
    const Field f = C.field();
    const int n = t.degree();
    const int N = t.arity_bound();
    Transformation out(&t.F(), &t.G(), n + 1, N);

    for (const ObjId& x : C.objects()) {
        Element e = D.d(t.F().obj(x), t.G().obj(x), t.comp0(x));
        if (!e.is_zero())
            out.set_comp0(x, e);
    }

    // one job per (arity, object tuple); jobs write disjoint slots and are
    // merged in index order, so the OpenMP path matches the serial reference
    std::vector<std::pair<int, ObjTuple>> jobs;
    for (int l = 1; l <= N; ++l)
        for (const ObjTuple& objs : object_tuples(C, l))
            jobs.emplace_back(l, objs);
    std::vector<std::map<GenTuple, Element>> results(jobs.size());

    par::parallel_for(jobs.size(), [&](std::size_t ji) {
        const int l = jobs[ji].first;
        const ObjTuple& objs = jobs[ji].second;
        {
            // rows feeding this block
            const bool row_l = t.has_rows(l, objs);
            ObjTuple head(objs.begin(), objs.end() - 1);
            ObjTuple tail(objs.begin() + 1, objs.end());
            const bool row_b = (l == 1) ? !t.comp0(objs[0]).is_zero() : t.has_rows(l - 1, head);
            const bool row_c = (l == 1) ? !t.comp0(objs[1]).is_zero() : t.has_rows(l - 1, tail);
            bool row_e = false;
            for (int i = 1; i < l && !row_e; ++i) {
                ObjTuple mid;
                for (int k = 0; k <= l; ++k)
                    if (k != i)
                        mid.push_back(objs[k]);
                row_e = t.has_rows(l - 1, mid);
            }
            if (!row_l && !row_b && !row_c && !row_e)
                return;

            const ObjId& FX0 = t.F().obj(objs.front());
            const ObjId& GXl = t.G().obj(objs.back());
            GenTupleRange range(C, objs);
            GenTuple gens;
            while (range.next(gens)) {
                std::vector<int> degs(l);  // degs[k] = |u_{l-k}|
                for (int k = 0; k < l; ++k)
                    degs[k] = gens[k].degree;
                const int out_deg = n + 1 - l + tuple_degree_sum(gens);
                Element acc = D.zero_elem(FX0, GXl, out_deg);
                bool any = false;

                if (row_l) {
                    if (const Element* a = t.find_component(l, objs, gens)) {
                        acc = acc + D.d(FX0, GXl, *a);
                        any = true;
                    }
                    for (int i = 1; i <= l; ++i) {
                        const std::size_t pos = l - i;
                        Element u = C.basis_elem(objs[i - 1], objs[i], gens[pos]);
                        Element du = C.d(objs[i - 1], objs[i], u);
                        if (du.is_zero())
                            continue;
                        Element v = t.eval_one_slot(l, objs, gens, pos, du);
                        if (v.is_zero())
                            continue;
                        long expo = n + 1;
                        for (std::size_t k = 0; k < pos; ++k)
                            expo += degs[k] - 1;
                        acc.add_scaled(v, sign_scalar(expo, f));
                        any = true;
                    }
                }
                if (row_b) {
                    GenTuple rest(gens.begin() + 1, gens.end());
                    Element lower = (l == 1) ? t.comp0(objs[0]) : Element{};
                    const Element* lp = (l == 1) ? &lower : t.find_component(l - 1, head, rest);
                    if (lp && !lp->is_zero()) {
                        Element gul = t.G().apply(objs[l - 1], objs[l],
                                                  C.basis_elem(objs[l - 1], objs[l], gens[0]));
                        Element b = D.compose_elements(FX0, t.G().obj(objs[l - 1]), GXl, gul, *lp);
                        if (!b.is_zero()) {
                            acc.add_scaled(b, sign_scalar(
                                               static_cast<long>(n + 1) * (degs[0] - 1), f));
                            any = true;
                        }
                    }
                }
                if (row_c) {
                    GenTuple rest(gens.begin(), gens.end() - 1);
                    Element upper = (l == 1) ? t.comp0(objs[1]) : Element{};
                    const Element* up = (l == 1) ? &upper : t.find_component(l - 1, tail, rest);
                    if (up && !up->is_zero()) {
                        Element fu1 = t.F().apply(objs[0], objs[1],
                                                  C.basis_elem(objs[0], objs[1], gens[l - 1]));
                        Element cterm = D.compose_elements(FX0, t.F().obj(objs[1]), GXl, *up, fu1);
                        if (!cterm.is_zero()) {
                            long expo = n + 1;
                            for (int k = 0; k < l; ++k)
                                expo += degs[k] - 1;
                            acc.add_scaled(cterm, sign_scalar(expo, f));
                            any = true;
                        }
                    }
                }
                for (int i = 1; i < l; ++i) {
                    // join u_{i+1} u_i; u_{i+1} at pos l-i-1, u_i at pos l-i
                    ObjTuple mid;
                    for (int k = 0; k <= l; ++k)
                        if (k != i)
                            mid.push_back(objs[k]);
                    if (!t.has_rows(l - 1, mid))
                        continue;
                    Element hi = C.basis_elem(objs[i], objs[i + 1], gens[l - i - 1]);
                    Element lo = C.basis_elem(objs[i - 1], objs[i], gens[l - i]);
                    Element joined = C.compose_elements(objs[i - 1], objs[i], objs[i + 1], hi, lo);
                    if (joined.is_zero())
                        continue;
                    GenTuple sub;
                    for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(l - i); ++k)
                        sub.push_back(gens[k]);
                    sub.push_back(GenRef{joined.degree, 0});  // placeholder
                    for (std::size_t k = l - i + 1; k < gens.size(); ++k)
                        sub.push_back(gens[k]);
                    Element v = t.eval_one_slot(l - 1, mid, sub, l - i - 1, joined);
                    if (v.is_zero())
                        continue;
                    long expo = n + 1;
                    for (std::size_t k = 0; k < static_cast<std::size_t>(l - i); ++k)
                        expo += degs[k] - 1;
                    acc.add_scaled(v, sign_scalar(expo, f));
                    any = true;
                }
                if (any && !acc.is_zero())
                    results[ji][gens] = acc;
            }
        }
    });
    for (std::size_t ji = 0; ji < jobs.size(); ++ji)
        for (auto& [gens, e] : results[ji])
            out.set_component(jobs[ji].first, jobs[ji].second, gens, std::move(e));
    return out;
}

NaturalityReport is_dg_natural(const Transformation& t) {
    NaturalityReport rep;
    const DgCategory& C = t.src();
    const DgCategory& D = t.tgt();
    if (t.degree() != 0) {
        rep.ok = false;
        rep.failures.push_back("degree " + std::to_string(t.degree()) + " != 0");
        return rep;
    }
    for (int l = 1; l <= t.arity_bound(); ++l)
        for (const auto& [objs, rows] : t.arity(l))
            for (const auto& [gens, e] : rows)
                if (!e.is_zero()) {
                    rep.ok = false;
                    rep.failures.push_back("nonzero component at arity " + std::to_string(l));
                }
    for (const ObjId& x : C.objects()) {
        Element c0 = t.comp0(x);
        if (!D.d(t.F().obj(x), t.G().obj(x), c0).is_zero()) {
            rep.ok = false;
            rep.failures.push_back("comp0 at " + x + " is not closed");
        }
    }
    for (const ObjId& x : C.objects())
        for (const ObjId& y : C.objects())
            for (GenRef ur : C.flat_basis(x, y)) {
                Element u = C.basis_elem(x, y, ur);
                // Phi_Y F(u) = (-1)^{|u| n} G(u) Phi_X, n = 0 here
                Element lhs = D.compose_elements(t.F().obj(x), t.F().obj(y), t.G().obj(y),
                                                 t.comp0(y), t.F().apply(x, y, u));
                Element rhs = D.compose_elements(t.F().obj(x), t.G().obj(x), t.G().obj(y),
                                                 t.G().apply(x, y, u), t.comp0(x));
                rhs = rhs.scaled(sign_scalar(static_cast<long>(ur.degree) * t.degree(), C.field()));
                if (lhs != rhs) {
                    rep.ok = false;
                    rep.failures.push_back("naturality fails on " + C.gen_name(x, y, ur) + ": " +
                                           x + " -> " + y);
                }
            }
    return rep;
}

std::optional<ClosednessFailure> is_closed_up_to(const Transformation& t) {
    Transformation dt = d_infty(t);
    for (const ObjId& x : t.src().objects())
        if (!dt.comp0(x).is_zero())
            return ClosednessFailure{0, {x}, {}};
    for (int l = 1; l <= t.arity_bound(); ++l)
        for (const auto& [objs, rows] : dt.arity(l))
            for (const auto& [gens, e] : rows)
                if (!e.is_zero())
                    return ClosednessFailure{l, objs, gens};
    return std::nullopt;
}

TransformationKind classify(const Transformation& t) {
    if (is_dg_natural(t).ok)
        return TransformationKind::Dg;
    if (t.degree() == 0 && !is_closed_up_to(t))
        return TransformationKind::AinfNatural;
    return TransformationKind::AinfPrenatural;
}

Transformation compose_general_variant(const Transformation& theta, const Transformation& xi,
                                       int c1, int c2, int c3) {
    if (&theta.src() != &xi.src() || &theta.tgt() != &xi.tgt())
        throw std::invalid_argument("compose: categories differ");
    if (&xi.G() != &theta.F())
        throw std::invalid_argument("compose: functor chain mismatch (need xi: F=>G, theta: G=>H)");
    if (theta.arity_bound() != xi.arity_bound())
        throw std::invalid_argument("compose: arity bounds differ");
    const DgCategory& C = theta.src();
    const DgCategory& D = theta.tgt();
    const Field fl = C.field();
    const int N = theta.arity_bound();
    Transformation out(&xi.F(), &theta.G(), theta.degree() + xi.degree(), N);

    const Scalar s0 = sign_scalar(static_cast<long>(c2) * theta.degree() + c3, fl);
    for (const ObjId& x : C.objects()) {
        Element e = D.compose_elements(xi.F().obj(x), xi.G().obj(x), theta.G().obj(x),
                                       theta.comp0(x), xi.comp0(x));
        e = e.scaled(s0);
        if (!e.is_zero())
            out.set_comp0(x, e);
    }
    for (int l = 1; l <= N; ++l) {
        for (const ObjTuple& objs : object_tuples(C, l)) {
            bool feasible = false;
            for (int k = 0; k <= l && !feasible; ++k) {
                const bool th_ok = (k == l) ? !theta.comp0(objs[l]).is_zero()
                                            : theta.has_rows(l - k, ObjTuple(objs.begin() + k, objs.end()));
                const bool xi_ok = (k == 0) ? !xi.comp0(objs[0]).is_zero()
                                            : xi.has_rows(k, ObjTuple(objs.begin(), objs.begin() + k + 1));
                feasible = th_ok && xi_ok;
            }
            if (!feasible)
                continue;
            const ObjId& A = xi.F().obj(objs.front());
            const ObjId& B = theta.G().obj(objs.back());
            GenTupleRange range(C, objs);
            GenTuple gens;
            while (range.next(gens)) {
                const int out_deg = out.degree() - l + tuple_degree_sum(gens);
                Element acc = D.zero_elem(A, B, out_deg);
                bool any = false;
                for (int k = 0; k <= l; ++k) {
                    Element te0, xe0;
                    const Element* te;
                    if (k == l) {
                        te0 = theta.comp0(objs[l]);
                        te = te0.is_zero() ? nullptr : &te0;
                    } else {
                        ObjTuple top_objs(objs.begin() + k, objs.end());
                        GenTuple top(gens.begin(), gens.begin() + (l - k));
                        te = theta.find_component(l - k, top_objs, top);
                    }
                    if (!te)
                        continue;
                    const Element* xe;
                    if (k == 0) {
                        xe0 = xi.comp0(objs[0]);
                        xe = xe0.is_zero() ? nullptr : &xe0;
                    } else {
                        ObjTuple bot_objs(objs.begin(), objs.begin() + k + 1);
                        GenTuple bot(gens.begin() + (l - k), gens.end());
                        xe = xi.find_component(k, bot_objs, bot);
                    }
                    if (!xe)
                        continue;
                    Element prod = D.compose_elements(A, xi.G().obj(objs[k]), B, *te, *xe);
                    if (prod.is_zero())
                        continue;
                    long expo = static_cast<long>(c2) * theta.degree() + c3;
                    for (int kk = 0; kk < l - k; ++kk)
                        expo += static_cast<long>(xi.degree()) * (gens[kk].degree - c1);
                    acc.add_scaled(prod, sign_scalar(expo, fl));
                    any = true;
                }
                if (any && !acc.is_zero())
                    out.set_component(l, objs, gens, acc);
            }
        }
    }
    return out;
}

Transformation compose_general(const Transformation& theta, const Transformation& xi) {
    return compose_general_variant(theta, xi, 1, 0, 0);
}

Transformation compose_dg_right(const Transformation& psi, const Transformation& phi) {
    NaturalityReport r = is_dg_natural(phi);
    if (!r.ok)
        throw NotDgNatural("compose_dg_right: phi is not a dg-natural transformation");
    return compose_general(psi, phi);
}

Transformation compose_dg_left(const Transformation& psi, const Transformation& phi) {
    NaturalityReport r = is_dg_natural(psi);
    if (!r.ok)
        throw NotDgNatural("compose_dg_left: psi is not a dg-natural transformation");
    return compose_general(psi, phi);
}

Transformation linear_combine(const Scalar& a, const Transformation& s,
                              const Scalar& b, const Transformation& t) {
    if (s.degree() != t.degree())
        throw std::invalid_argument("linear_combine: degree mismatch");
    if (&s.F() != &t.F() || &s.G() != &t.G())
        throw std::invalid_argument("linear_combine: functor mismatch");
    if (s.arity_bound() != t.arity_bound())
        throw std::invalid_argument("linear_combine: arity bound mismatch");
    Transformation out(&s.F(), &s.G(), s.degree(), s.arity_bound());
    for (const ObjId& x : s.src().objects()) {
        Element e = s.comp0(x).scaled(a) + t.comp0(x).scaled(b);
        if (!e.is_zero())
            out.set_comp0(x, e);
    }
    for (int l = 1; l <= s.arity_bound(); ++l) {
        std::map<ObjTuple, std::map<GenTuple, char>> keys;
        for (const auto& [objs, rows] : s.arity(l))
            for (const auto& [gens, e] : rows)
                keys[objs][gens] = 1;
        for (const auto& [objs, rows] : t.arity(l))
            for (const auto& [gens, e] : rows)
                keys[objs][gens] = 1;
        for (const auto& [objs, rows] : keys)
            for (const auto& [gens, dummy] : rows) {
                Element e = s.component(l, objs, gens).scaled(a) +
                            t.component(l, objs, gens).scaled(b);
                out.set_component(l, objs, gens, e);
            }
    }
    return out;
}

Transformation identity_transformation(const DgFunctor& F, int arity_bound) {
    Transformation t(&F, &F, 0, arity_bound);
    for (const ObjId& x : F.source().objects())
        t.set_comp0(x, F.target().identity(F.obj(x)));
    return t;
}

Transformation truncated(const Transformation& t, int arity_bound) {
    Transformation out(&t.F(), &t.G(), t.degree(), arity_bound);
    for (const ObjId& x : t.src().objects()) {
        Element e = t.comp0(x);
        if (!e.is_zero())
            out.set_comp0(x, e);
    }
    for (int l = 1; l <= arity_bound; ++l)
        for (const auto& [objs, rows] : t.arity(l))
            for (const auto& [gens, e] : rows)
                out.set_component(l, objs, gens, e);
    return out;
}

}  // namespace qinv
