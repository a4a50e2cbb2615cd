#include "qinv/fixtures.hpp"

namespace qinv {

namespace {

Element el(const GradedSpace& s, int degree, Field f,
           std::initializer_list<std::pair<const char*, long>> terms) {
    Element e = zero_element(s, degree, f);
    for (const auto& [name, c] : terms) {
        auto [d, idx] = s.locate(name);
        e.coeffs[idx] = Scalar::from_long(c, f);
    }
    return e;
}

}  // namespace

DgCategory fix_pt(Field f) {
    DgCategory c(f);
    c.add_object("star");
    GradedSpace s(std::map<int, std::vector<std::string>>{{0, {"id"}}});
    c.set_hom("star", "star", HomComplex{s, GradedMap(1, s, s, f)});
    c.set_composition("star", "star", "star", GenRef{0, 0}, GenRef{0, 0},
                      el(s, 0, f, {{"id", 1}}));
    c.set_identity("star", el(s, 0, f, {{"id", 1}}));
    return c;
}

DgCategory fix_arrow(Field f) {
    DgCategory c(f);
    c.add_object("a");
    c.add_object("b");
    GradedSpace sa(std::map<int, std::vector<std::string>>{{0, {"id_a"}}});
    GradedSpace sb(std::map<int, std::vector<std::string>>{{0, {"id_b"}}});
    GradedSpace sab(std::map<int, std::vector<std::string>>{{0, {"u"}}});
    c.set_hom("a", "a", HomComplex{sa, GradedMap(1, sa, sa, f)});
    c.set_hom("b", "b", HomComplex{sb, GradedMap(1, sb, sb, f)});
    c.set_hom("a", "b", HomComplex{sab, GradedMap(1, sab, sab, f)});
    c.set_composition("a", "a", "a", GenRef{0, 0}, GenRef{0, 0}, el(sa, 0, f, {{"id_a", 1}}));
    c.set_composition("b", "b", "b", GenRef{0, 0}, GenRef{0, 0}, el(sb, 0, f, {{"id_b", 1}}));
    c.set_composition("a", "a", "b", GenRef{0, 0}, GenRef{0, 0}, el(sab, 0, f, {{"u", 1}}));
    c.set_composition("a", "b", "b", GenRef{0, 0}, GenRef{0, 0}, el(sab, 0, f, {{"u", 1}}));
    c.set_identity("a", el(sa, 0, f, {{"id_a", 1}}));
    c.set_identity("b", el(sb, 0, f, {{"id_b", 1}}));
    return c;
}

DgCategory fix_contract(Field f) {
    DgCategory c(f);
    c.add_object("A");
    c.add_object("O");
    GradedSpace s(std::map<int, std::vector<std::string>>{
        {-1, {"h_A"}}, {0, {"id_A", "e"}}, {1, {"s"}}});
    GradedMap d(1, s, s, f);
    {
        Matrix m(2, 1, f);  // deg -1 -> deg 0: d(h_A) = -id_A
        m.at(0, 0) = -Scalar::one(f);
        d.set_block(-1, m);
    }
    {
        Matrix m(1, 2, f);  // deg 0 -> deg 1: d(id_A) = 0, d(e) = s
        m.at(0, 1) = Scalar::one(f);
        d.set_block(0, m);
    }
    c.set_hom("A", "A", HomComplex{s, d});

    auto gen = [&](const char* name) {
        auto [deg, idx] = s.locate(name);
        return GenRef{deg, idx};
    };
    auto set = [&](const char* g, const char* fe, int degree,
                   std::initializer_list<std::pair<const char*, long>> result) {
        c.set_composition("A", "A", "A", gen(g), gen(fe), el(s, degree, f, result));
    };
    // products with the identity
    for (const char* x : {"h_A", "id_A", "e", "s"}) {
        auto [dx, ix] = s.locate(x);
        set("id_A", x, dx, {{x, 1}});
        if (std::string(x) != "id_A")
            set(x, "id_A", dx, {{x, 1}});
    }
    set("e", "e", 0, {{"e", 1}});
    set("e", "h_A", -1, {{"h_A", 1}});
    // e o s = 0, h o e = 0, h o h = 0, s o s = 0: absent entries
    set("h_A", "s", 0, {{"e", -1}});
    set("s", "e", 1, {{"s", 1}});
    set("s", "h_A", 0, {{"e", 1}, {"id_A", -1}});
    c.set_identity("A", el(s, 0, f, {{"id_A", 1}}));
    c.set_identity("O", c.zero_elem("O", "O", 0));
    return c;
}

DgCategory fix_iso_target(Field f) {
    Complex a0 = point_complex(0, "a");
    Complex b;
    b.cells[0] = {"x", "y"};
    b.cells[1] = {"z"};
    Matrix d0(1, 2, f);
    d0.at(0, 0) = Scalar::one(f);  // d(x) = z, d(y) = 0
    b.d[0] = d0;
    return category_of_complexes(f, {{"A0", a0}, {"B", b}});
}

namespace {

Instance make_pt_instance(Field f, int arity, const std::string& tgt_name, DgCategory target,
                          const ObjId& fa, const ObjId& ga,
                          std::initializer_list<std::pair<const char*, long>> phi_terms) {
    Instance inst;
    inst.field = f;
    inst.categories.emplace_back("pt", std::make_unique<DgCategory>(fix_pt(f)));
    inst.categories.emplace_back(tgt_name, std::make_unique<DgCategory>(std::move(target)));
    const DgCategory* C = inst.categories[0].second.get();
    const DgCategory* D = inst.categories[1].second.get();
    inst.F = std::make_unique<DgFunctor>(constant_functor(*C, *D, fa));
    inst.G = std::make_unique<DgFunctor>(constant_functor(*C, *D, ga));
    inst.phi = std::make_unique<Transformation>(inst.F.get(), inst.G.get(), 0, arity);
    const GradedSpace& s = D->hom(fa, ga).space;
    if (s.total_dim() > 0) {
        Element e = zero_element(s, 0, f);
        for (const auto& [name, cc] : phi_terms) {
            auto [d, idx] = s.locate(name);
            e.coeffs[idx] = Scalar::from_long(cc, f);
        }
        inst.phi->set_comp0("star", std::move(e));
    }
    return inst;
}

}  // namespace

Instance fix_contract_instance(Field f, int arity) {
    return make_pt_instance(f, arity, "contract", fix_contract(f), "A", "O", {});
}

Instance identity_phi_instance(Field f, int arity) {
    return make_pt_instance(f, arity, "contract", fix_contract(f), "A", "A", {{"id_A", 1}});
}

Instance fix_iso_instance(Field f, int arity) {
    return make_pt_instance(f, arity, "iso", fix_iso_target(f), "A0", "B", {{"a_y", 1}});
}

}  // namespace qinv
