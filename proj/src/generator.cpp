#include "qinv/generator.hpp"

namespace qinv {

Complex point_complex(int degree, const std::string& cell) {
    Complex c;
    c.cells[degree] = {cell};
    return c;
}

Complex bar_complex(int degree, const std::string& lower, const std::string& upper, Field f) {
    Complex c;
    c.cells[degree] = {lower};
    c.cells[degree + 1] = {upper};
    Matrix m(1, 1, f);
    m.at(0, 0) = Scalar::one(f);
    c.d[degree] = m;
    return c;
}

Complex direct_sum(const std::vector<Complex>& parts, Field f) {
    Complex out;
    std::map<int, std::vector<int>> offsets;  // per degree, per part
    for (const Complex& p : parts)
        for (const auto& [deg, cells] : p.cells) {
            offsets[deg].push_back(static_cast<int>(out.cells[deg].size()));
            for (const auto& nm : cells)
                out.cells[deg].push_back(nm);
        }
    // offsets vector above is per (degree,part-with-cells); rebuild cleanly:
    out.cells.clear();
    std::vector<std::map<int, int>> off(parts.size());
    for (std::size_t pi = 0; pi < parts.size(); ++pi)
        for (const auto& [deg, cells] : parts[pi].cells) {
            off[pi][deg] = static_cast<int>(out.cells[deg].size());
            for (const auto& nm : cells)
                out.cells[deg].push_back(nm);
        }
    for (int deg = -64; deg <= 64; ++deg) {
        const int rows = out.dim(deg + 1), cols = out.dim(deg);
        if (!rows || !cols)
            continue;
        Matrix m(rows, cols, f);
        bool nz = false;
        for (std::size_t pi = 0; pi < parts.size(); ++pi) {
            const Complex& p = parts[pi];
            if (!p.dim(deg) || !p.dim(deg + 1))
                continue;
            Matrix pd = p.dmat(deg, f);
            for (int i = 0; i < p.dim(deg + 1); ++i)
                for (int jj = 0; jj < p.dim(deg); ++jj)
                    if (!pd.at(i, jj).is_zero()) {
                        m.at(off[pi][deg + 1] + i, off[pi][deg] + jj) = pd.at(i, jj);
                        nz = true;
                    }
        }
        if (nz)
            out.d[deg] = std::move(m);
    }
    return out;
}

namespace {

/* tensor cell enumeration: (dv asc, i asc, du asc, j asc) per total degree */
struct TensorIndex {
    std::map<int, std::vector<std::tuple<int, int, int, int>>> cells;  // deg -> (dv,i,du,j)
    std::map<std::tuple<int, int, int, int>, std::pair<int, int>> pos; // -> (deg, idx)
    TensorIndex(const Complex& v, const Complex& u) {
        for (const auto& [dv, vc] : v.cells)
            for (int i = 0; i < static_cast<int>(vc.size()); ++i)
                for (const auto& [du, uc] : u.cells)
                    for (int j = 0; j < static_cast<int>(uc.size()); ++j)
                        cells[dv + du].emplace_back(dv, i, du, j);
        for (auto& [deg, lst] : cells)
            for (int k = 0; k < static_cast<int>(lst.size()); ++k)
                pos[lst[k]] = {deg, k};
    }
};

}  // namespace

Complex tensor_product(const Complex& v, const Complex& u, Field f) {
    TensorIndex ti(v, u);
    Complex out;
    for (const auto& [deg, lst] : ti.cells)
        for (const auto& [dv, i, du, j] : lst)
            out.cells[deg].push_back(v.cells.at(dv)[i] + "*" + u.cells.at(du)[j]);
    for (const auto& [deg, lst] : ti.cells) {
        const int rows = out.dim(deg + 1), cols = out.dim(deg);
        if (!rows || !cols)
            continue;
        Matrix m(rows, cols, f);
        bool nz = false;
        for (int c = 0; c < static_cast<int>(lst.size()); ++c) {
            const auto [dv, i, du, j] = lst[c];
            if (v.dim(dv + 1)) {
                Matrix dV = v.dmat(dv, f);
                for (int i2 = 0; i2 < v.dim(dv + 1); ++i2)
                    if (!dV.at(i2, i).is_zero()) {
                        auto [dg2, p2] = ti.pos.at({dv + 1, i2, du, j});
                        m.at(p2, c) += dV.at(i2, i);
                        nz = true;
                    }
            }
            if (u.dim(du + 1)) {
                Matrix dU = u.dmat(du, f);
                const Scalar sgn = (((dv % 2) + 2) % 2) ? -Scalar::one(f) : Scalar::one(f);
                for (int j2 = 0; j2 < u.dim(du + 1); ++j2)
                    if (!dU.at(j2, j).is_zero()) {
                        auto [dg2, p2] = ti.pos.at({dv, i, du + 1, j2});
                        m.at(p2, c) += sgn * dU.at(j2, j);
                        nz = true;
                    }
            }
        }
        if (nz)
            out.d[deg] = std::move(m);
    }
    return out;
}

int hom_gen_position(const Complex& a, const Complex& b, int s, int d, int j, int i) {
    int pos = 0;
    for (const auto& [dd, cells] : a.cells) {
        const int tdim = b.dim(dd + s);
        if (!tdim)
            continue;
        if (dd < d) {
            pos += static_cast<int>(cells.size()) * tdim;
        } else if (dd == d) {
            pos += j * tdim + i;
            return pos;
        }
    }
    throw std::invalid_argument("hom_gen_position: no such generator");
}

namespace {

GradedSpace hom_space(const Complex& a, const Complex& b) {
    std::map<int, std::vector<std::string>> basis;
    std::vector<int> shifts;
    for (const auto& [da, ca] : a.cells)
        for (const auto& [db, cb] : b.cells)
            shifts.push_back(db - da);
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    for (int s : shifts) {
        std::vector<std::string> gens;
        for (const auto& [d, ca] : a.cells) {
            const int tdim = b.dim(d + s);
            if (!tdim)
                continue;
            for (int j = 0; j < static_cast<int>(ca.size()); ++j)
                for (int i = 0; i < tdim; ++i)
                    gens.push_back(ca[j] + "_" + b.cells.at(d + s)[i]);
        }
        if (!gens.empty())
            basis[s] = std::move(gens);
    }
    return GradedSpace(std::move(basis));
}

}  // namespace

DgCategory category_of_complexes(Field f,
                                 const std::vector<std::pair<ObjId, Complex>>& objects) {
    DgCategory cat(f);
    for (const auto& [name, cx] : objects)
        cat.add_object(name);
    auto cx_of = [&](const ObjId& x) -> const Complex& {
        for (const auto& [name, cx] : objects)
            if (name == x)
                return cx;
        throw std::invalid_argument("unknown object " + x);
    };
    // homs with differentials: d(e^{(d)}_{j->i}) = sum dW(i2,i) e^{(d)}_{j->i2}
    //                                            - (-1)^s sum dV(j,j2) e^{(d-1)}_{j2->i}
    for (const auto& [xn, vx] : objects)
        for (const auto& [yn, vy] : objects) {
            GradedSpace space = hom_space(vx, vy);
            if (space.total_dim() == 0)
                continue;
            GradedMap diff(1, space, space, f);
            for (int s : space.support()) {
                const int rows = space.dim(s + 1);
                if (!rows)
                    continue;
                Matrix m(rows, space.dim(s), f);
                bool nz = false;
                int col = 0;
                for (const auto& [d, ca] : vx.cells) {
                    const int tdim = vy.dim(d + s);
                    if (!tdim)
                        continue;
                    for (int j = 0; j < static_cast<int>(ca.size()); ++j)
                        for (int i = 0; i < tdim; ++i, ++col) {
                            if (vy.dim(d + s + 1)) {
                                Matrix dW = vy.dmat(d + s, f);
                                for (int i2 = 0; i2 < vy.dim(d + s + 1); ++i2)
                                    if (!dW.at(i2, i).is_zero()) {
                                        m.at(hom_gen_position(vx, vy, s + 1, d, j, i2), col) +=
                                            dW.at(i2, i);
                                        nz = true;
                                    }
                            }
                            if (d - 1 >= -64 && vx.dim(d - 1) && vy.dim(d + s)) {
                                Matrix dV = vx.dmat(d - 1, f);
                                const Scalar sg = (((s % 2) + 2) % 2) ? Scalar::one(f)
                                                                      : -Scalar::one(f);
                                for (int j2 = 0; j2 < vx.dim(d - 1); ++j2)
                                    if (!dV.at(j, j2).is_zero()) {
                                        m.at(hom_gen_position(vx, vy, s + 1, d - 1, j2, i), col) +=
                                            sg * dV.at(j, j2);
                                        nz = true;
                                    }
                            }
                        }
                }
                if (nz)
                    diff.set_block(s, std::move(m));
            }
            cat.set_hom(xn, yn, HomComplex{space, diff});
        }
    // compositions: e^{(d')}_{j'->i'} o e^{(d)}_{j->i} = [d' == d+s_f][j' == i] e^{(d)}_{j->i'}
    for (const auto& [xn, vx] : objects)
        for (const auto& [yn, vy] : objects)
            for (const auto& [zn, vz] : objects) {
                const GradedSpace& sxz = cat.hom(xn, zn).space;
                if (cat.hom(xn, yn).space.total_dim() == 0 ||
                    cat.hom(yn, zn).space.total_dim() == 0 || sxz.total_dim() == 0)
                    continue;
                for (GenRef gr : cat.flat_basis(yn, zn))
                    for (GenRef fr : cat.flat_basis(xn, yn)) {
                        // decode positions back to cell indices
                        // fr: source degree d, j -> i ; gr: source degree d', j' -> i'
                        auto decode = [&](const Complex& a, const Complex& b, GenRef r) {
                            int rem = r.index;
                            for (const auto& [d, ca] : a.cells) {
                                const int tdim = b.dim(d + r.degree);
                                if (!tdim)
                                    continue;
                                const int blockn = static_cast<int>(ca.size()) * tdim;
                                if (rem < blockn)
                                    return std::tuple<int, int, int>(d, rem / tdim, rem % tdim);
                                rem -= blockn;
                            }
                            throw std::logic_error("bad generator index");
                        };
                        auto [d, j, i] = decode(vx, vy, fr);
                        auto [dp, jp, ip] = decode(vy, vz, gr);
                        if (dp != d + fr.degree || jp != i)
                            continue;
                        const int sdeg = gr.degree + fr.degree;
                        Element to = zero_element(sxz, sdeg, f);
                        if (sxz.dim(sdeg)) {
                            to.coeffs[hom_gen_position(vx, vz, sdeg, d, j, ip)] = Scalar::one(f);
                            cat.set_composition(xn, yn, zn, gr, fr, std::move(to));
                        }
                    }
            }
    for (const auto& [xn, vx] : objects) {
        const GradedSpace& sxx = cat.hom(xn, xn).space;
        Element id = zero_element(sxx, 0, f);
        for (const auto& [d, cells] : vx.cells)
            for (int j = 0; j < static_cast<int>(cells.size()); ++j)
                id.coeffs[hom_gen_position(vx, vx, 0, d, j, j)] = Scalar::one(f);
        cat.set_identity(xn, std::move(id));
    }
    return cat;
}

GradedMap tensor_hom_map(const Complex& vx, const Complex& vy, const Complex& u,
                         const GradedSpace& src_space, const GradedSpace& tgt_space, Field f) {
    Complex gx = tensor_product(vx, u, f);
    Complex gy = tensor_product(vy, u, f);
    TensorIndex tix(vx, u), tiy(vy, u);
    GradedMap m(0, src_space, tgt_space, f);
    for (int s : src_space.support()) {
        Matrix block(tgt_space.dim(s), src_space.dim(s), f);
        bool nz = false;
        int col = 0;
        for (const auto& [d, ca] : vx.cells) {
            const int tdim = vy.dim(d + s);
            if (!tdim)
                continue;
            for (int j = 0; j < static_cast<int>(ca.size()); ++j)
                for (int i = 0; i < tdim; ++i, ++col) {
                    for (const auto& [du, uc] : u.cells)
                        for (int k = 0; k < static_cast<int>(uc.size()); ++k) {
                            auto [sdeg, sj] = tix.pos.at({d, j, du, k});
                            auto [tdeg, tii] = tiy.pos.at({d + s, i, du, k});
                            // (f (x) id)(v (x) u) = f(v) (x) u: no Koszul sign, id has degree 0
                            block.at(hom_gen_position(gx, gy, s, sdeg, sj, tii), col) +=
                                Scalar::one(f);
                            nz = true;
                        }
                }
        }
        if (nz)
            m.set_block(s, std::move(block));
    }
    return m;
}

namespace {

Complex random_shape(SplitMix64& rng, const InstanceSpec& spec, int budget,
                     const std::string& prefix, bool force_bar = false) {
    std::vector<Complex> parts;
    Field f = spec.field;
    int cells = 0, idx = 0;
    while (cells < budget) {
        const bool bar = (cells + 2 <= budget) && (force_bar || rng.below(2) == 0);
        force_bar = false;
        if (bar) {
            const int d = static_cast<int>(rng.range(spec.degree_min, spec.degree_max - 1));
            parts.push_back(bar_complex(d, prefix + "b" + std::to_string(idx),
                                        prefix + "t" + std::to_string(idx), f));
            cells += 2;
        } else {
            const int d = static_cast<int>(rng.range(spec.degree_min, spec.degree_max));
            parts.push_back(point_complex(d, prefix + "e" + std::to_string(idx)));
            cells += 1;
        }
        ++idx;
    }
    return direct_sum(parts, f);
}

bool hom_dims_ok(const DgCategory& c, int max_per_degree) {
    for (const ObjId& x : c.objects())
        for (const ObjId& y : c.objects()) {
            const GradedSpace& s = c.hom(x, y).space;
            for (int d : s.support())
                if (s.dim(d) > max_per_degree)
                    return false;
        }
    return true;
}

}  // namespace

DgCategory generate_category(const InstanceSpec& spec) {
    SplitMix64 rng(spec.seed);
    const int nobj = std::max(1, std::min(spec.object_count, 4));
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::pair<ObjId, Complex>> objs;
        for (int k = 0; k < nobj; ++k) {
            const int budget = 1 + static_cast<int>(rng.below(attempt < 32 ? 3 : 1));
            objs.emplace_back("X" + std::to_string(k),
                              random_shape(rng, spec, budget, "x" + std::to_string(k)));
        }
        DgCategory cat = category_of_complexes(spec.field, objs);
        if (hom_dims_ok(cat, spec.max_gens_per_degree))
            return cat;
    }
    // guaranteed-minimal fallback: one point per object
    std::vector<std::pair<ObjId, Complex>> objs;
    for (int k = 0; k < nobj; ++k)
        objs.emplace_back("X" + std::to_string(k),
                          point_complex(0, "x" + std::to_string(k) + "e0"));
    return category_of_complexes(spec.field, objs);
}

namespace {

Instance build_equivalence(const InstanceSpec& spec, bool corrupt) {
    SplitMix64 rng(spec.seed);
    const Field f = spec.field;
    const int nobj = std::max(1, std::min(spec.object_count, 4));

    std::vector<std::pair<ObjId, Complex>> cobjs;
    for (int attempt = 0; attempt < 64; ++attempt) {
        cobjs.clear();
        for (int k = 0; k < nobj; ++k) {
            // the first object always contains a contractible pair, which is
            // what makes the canonical objectwise choices fail to be natural
            const bool force_bar = (k == 0) && attempt < 48;
            const int budget = force_bar ? 2 : ((attempt < 32) ? 1 + static_cast<int>(rng.below(2)) : 1);
            cobjs.emplace_back("X" + std::to_string(k),
                               random_shape(rng, spec, budget, "x" + std::to_string(k), force_bar));
        }
        DgCategory probe = category_of_complexes(f, cobjs);
        bool ok = true;
        for (const ObjId& x : probe.objects())
            for (const ObjId& y : probe.objects()) {
                const GradedSpace& s = probe.hom(x, y).space;
                for (int d : s.support())
                    if (s.dim(d) > spec.max_gens_per_degree)
                        ok = false;
            }
        if (ok)
            break;
    }

    // U = k (+) one bar; a bar based in degree -1 contributes a closed
    // degree-0 cell, which feeds the extra summand of phi
    std::vector<Complex> uparts{point_complex(0, "o")};
    int nbars = 1;
    if (corrupt)
        nbars = std::max(1, nbars);
    std::vector<int> bar_cells_deg0;
    for (int b = 0; b < nbars; ++b) {
        const int d = rng.below(4) == 0 ? 0 : -1;
        uparts.push_back(bar_complex(d, "ub" + std::to_string(b), "ut" + std::to_string(b), f));
        if (d == -1)
            bar_cells_deg0.push_back(b);
    }
    Complex U = direct_sum(uparts, f);
    Complex U_corrupt = U;
    if (corrupt)
        U_corrupt.d.clear();  // kill the bar differentials: U no longer contractible-augmented

    // w: k -> U, degree 0, closed: coefficient 1 on the point cell plus random
    // coefficients on closed degree-0 bar cells
    std::map<std::string, Scalar> wcoef;
    wcoef["o"] = Scalar::one(f);
    for (int b : bar_cells_deg0) {
        long c = rng.range(-2, 2);
        if (c == 0)
            c = 1;
        wcoef["ut" + std::to_string(b)] = Scalar::from_long(c, f);
    }

    Instance inst;
    inst.field = f;
    std::vector<std::pair<ObjId, Complex>> dobjs;
    const Complex& Ug = corrupt ? U_corrupt : U;
    for (const auto& [nm, cx] : cobjs) {
        dobjs.emplace_back("F(" + nm + ")", cx);
        dobjs.emplace_back("G(" + nm + ")", tensor_product(cx, Ug, f));
    }
    auto C = std::make_unique<DgCategory>(category_of_complexes(f, cobjs));
    auto D = std::make_unique<DgCategory>(category_of_complexes(f, dobjs));

    auto F = std::make_unique<DgFunctor>(C.get(), D.get());
    auto G = std::make_unique<DgFunctor>(C.get(), D.get());
    auto cx_of = [&](const ObjId& x) -> const Complex& {
        for (const auto& [nm, cx] : cobjs)
            if (nm == x)
                return cx;
        throw std::logic_error("unknown object");
    };
    for (const auto& [nm, cx] : cobjs) {
        F->map_object(nm, "F(" + nm + ")");
        G->map_object(nm, "G(" + nm + ")");
    }
    for (const auto& [xn, vx] : cobjs)
        for (const auto& [yn, vy] : cobjs) {
            const GradedSpace& s = C->hom(xn, yn).space;
            if (s.total_dim() == 0)
                continue;
            F->set_hom_map(xn, yn, identity_map(s, f));
            G->set_hom_map(xn, yn,
                           tensor_hom_map(vx, vy, Ug, s,
                                          D->hom("G(" + xn + ")", "G(" + yn + ")").space, f));
        }

    auto phi = std::make_unique<Transformation>(F.get(), G.get(), 0, spec.arity);
    for (const auto& [nm, vx] : cobjs) {
        const ObjId fx = "F(" + nm + ")", gx = "G(" + nm + ")";
        const GradedSpace& space = D->hom(fx, gx).space;
        Complex gcx = tensor_product(vx, Ug, f);
        TensorIndex ti(vx, Ug);
        Element e = zero_element(space, 0, f);
        for (const auto& [d, cells] : vx.cells)
            for (int j = 0; j < static_cast<int>(cells.size()); ++j)
                for (const auto& [du, ucells] : Ug.cells) {
                    if (du != 0)
                        continue;
                    for (int k = 0; k < static_cast<int>(ucells.size()); ++k) {
                        auto it = wcoef.find(ucells[k]);
                        if (it == wcoef.end() || it->second.is_zero())
                            continue;
                        auto [tdeg, ti2] = ti.pos.at({d, j, 0, k});
                        e.coeffs[hom_gen_position(vx, gcx, 0, d, j, ti2)] += it->second;
                    }
                }
        phi->set_comp0(nm, std::move(e));
    }

    inst.categories.emplace_back("C", std::move(C));
    inst.categories.emplace_back("D", std::move(D));
    inst.F = std::move(F);
    inst.G = std::move(G);
    inst.phi = std::move(phi);
    inst.F->rebind(inst.categories[0].second.get(), inst.categories[1].second.get());
    inst.G->rebind(inst.categories[0].second.get(), inst.categories[1].second.get());
    inst.phi->rebind(inst.F.get(), inst.G.get());
    return inst;
}

}  // namespace

Instance generate_equivalence(const InstanceSpec& spec) {
    return build_equivalence(spec, false);
}

Instance generate_corrupted_equivalence(const InstanceSpec& spec) {
    return build_equivalence(spec, true);
}

Element random_element(SplitMix64& rng, const GradedSpace& space, int degree, Field f) {
    Element e = zero_element(space, degree, f);
    for (auto& c : e.coeffs)
        c = Scalar::from_long(rng.range(-2, 2), f);
    return e;
}

Transformation random_transformation(SplitMix64& rng, const DgFunctor& F, const DgFunctor& G,
                                     int degree, int arity_bound, int entries_per_arity) {
    Transformation t(&F, &G, degree, arity_bound);
    const DgCategory& C = F.source();
    const DgCategory& D = F.target();
    const Field f = C.field();
    for (const ObjId& x : C.objects()) {
        const GradedSpace& s = D.hom(F.obj(x), G.obj(x)).space;
        if (s.dim(degree) > 0 && rng.below(4) != 0)
            t.set_comp0(x, random_element(rng, s, degree, f));
    }
    for (int l = 1; l <= arity_bound; ++l) {
        std::vector<ObjTuple> tuples = object_tuples(C, l);
        if (tuples.empty())
            continue;
        for (int e = 0; e < entries_per_arity; ++e) {
            const ObjTuple& objs = tuples[rng.below(tuples.size())];
            GenTupleRange range(C, objs);
            const std::size_t total = range.count();
            if (total == 0)
                continue;
            std::size_t pick = rng.below(total);
            GenTuple gens;
            while (range.next(gens))
                if (pick-- == 0)
                    break;
            int degsum = 0;
            for (const GenRef& g : gens)
                degsum += g.degree;
            const GradedSpace& s = D.hom(F.obj(objs.front()), G.obj(objs.back())).space;
            const int want = degree - l + degsum;
            if (s.dim(want) == 0)
                continue;
            t.set_component(l, objs, gens, random_element(rng, s, want, f));
        }
    }
    return t;
}

}  // namespace qinv
