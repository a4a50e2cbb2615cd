#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/fixtures.hpp"

using namespace qinv;

namespace {
const Field Q = Field::rationals();
}

TEST_CASE("fixtures validate") {
    CHECK(validate_category(fix_pt(Q)).valid());
    CHECK(validate_category(fix_arrow(Q)).valid());
    CHECK(validate_category(fix_contract(Q)).valid());
    CHECK(validate_category(fix_iso_target(Q)).valid());
    CHECK(validate_category(fix_contract(Field::prime(32003))).valid());
}

TEST_CASE("tampered unit law is reported") {
    DgCategory c = fix_arrow(Q);
    const GradedSpace& sab = c.hom("a", "b").space;
    Element two_u = basis_element(sab, 0, 0, Q).scaled(Scalar::from_long(2, Q));
    c.set_composition("a", "a", "b", GenRef{0, 0}, GenRef{0, 0}, two_u);  // u o id_a := 2u
    ValidationReport rep = validate_category(c);
    REQUIRE_FALSE(rep.valid());
    bool unit_seen = false;
    for (const auto& v : rep.items)
        if (v.kind == "unit" && v.where.find("u") != std::string::npos)
            unit_seen = true;
    CHECK(unit_seen);
}

TEST_CASE("compose_elements") {
    DgCategory c = fix_contract(Q);
    const GradedSpace& s = c.hom("A", "A").space;
    Element id = c.identity("A");
    Element h = basis_element(s, -1, 0, Q);
    Element e = basis_element(s, 0, 1, Q);
    Element sg = basis_element(s, 1, 0, Q);

    SUBCASE("unit law") {
        CHECK(c.compose_elements("A", "A", "A", id, h) == h);
        CHECK(c.compose_elements("A", "A", "A", sg, id) == sg);
    }
    SUBCASE("bilinearity sends zero to zero") {
        Element zero = zero_element(s, 1, Q);
        CHECK(c.compose_elements("A", "A", "A", zero, h).is_zero());
    }
    SUBCASE("h o h = 0 in this presentation") {
        CHECK(c.compose_elements("A", "A", "A", h, h).is_zero());
    }
    SUBCASE("s o h hits the unit defect") {
        Element want = basis_element(s, 0, 1, Q) - c.identity("A");  // e - id_A
        CHECK(c.compose_elements("A", "A", "A", sg, h) == want);
    }
    SUBCASE("degree additivity enforced at construction") {
        CHECK_THROWS_AS(c.set_composition("A", "A", "A", GenRef{1, 0}, GenRef{-1, 0},
                                          basis_element(s, 1, 0, Q)),
                        std::invalid_argument);
    }
}

TEST_CASE("compose_elements is associative on random elements") {
    SplitMix64 rng(7);
    for (Field f : {Field::rationals(), Field::prime(101)}) {
        DgCategory c = fix_contract(f);
        const GradedSpace& s = c.hom("A", "A").space;
        for (int trial = 0; trial < 40; ++trial) {
            auto rand_el = [&](int d) {
                Element e = zero_element(s, d, f);
                for (auto& x : e.coeffs)
                    x = Scalar::from_long(rng.range(-2, 2), f);
                return e;
            };
            Element x = rand_el(static_cast<int>(rng.range(-1, 1)));
            Element y = rand_el(static_cast<int>(rng.range(-1, 1)));
            Element z = rand_el(static_cast<int>(rng.range(-1, 1)));
            Element a = c.compose_elements("A", "A", "A",
                                           c.compose_elements("A", "A", "A", x, y), z);
            Element b = c.compose_elements("A", "A", "A", x,
                                           c.compose_elements("A", "A", "A", y, z));
            CHECK(a == b);
        }
    }
}

TEST_CASE("functor validation") {
    DgCategory arrow = fix_arrow(Q);
    DgCategory contract = fix_contract(Q);
    DgCategory pt = fix_pt(Q);

    SUBCASE("identity functor is valid") {
        DgFunctor idf = identity_functor(arrow);
        CHECK(validate_functor(idf).valid());
    }
    SUBCASE("constant functor to A is valid") {
        DgFunctor cf = constant_functor(pt, contract, "A");
        CHECK(validate_functor(cf).valid());
        CHECK(cf.apply("star", "star", pt.identity("star")) == contract.identity("A"));
    }
    SUBCASE("constant functor to the zero object is valid") {
        DgFunctor cf = constant_functor(pt, contract, "O");
        CHECK(validate_functor(cf).valid());
    }
    SUBCASE("nonzero shift rejected at construction") {
        DgFunctor f(&arrow, &arrow);
        f.map_object("a", "a");
        f.map_object("b", "b");
        const GradedSpace& s = arrow.hom("a", "b").space;
        CHECK_THROWS_AS(f.set_hom_map("a", "b", GradedMap(1, s, s, Q)), std::invalid_argument);
    }
    SUBCASE("broken composition law reported") {
        DgFunctor f(&contract, &contract);
        f.map_object("A", "A");
        f.map_object("O", "O");
        const GradedSpace& s = contract.hom("A", "A").space;
        GradedMap m = identity_map(s, Q);
        Matrix blk = m.block(0);
        blk.at(1, 1) = Scalar::from_long(2, Q);  // F(e) = 2e breaks F(e o e) = F(e) o F(e)
        m.set_block(0, blk);
        f.set_hom_map("A", "A", m);
        ValidationReport rep = validate_functor(f);
        REQUIRE_FALSE(rep.valid());
        bool comp_seen = false;
        for (const auto& v : rep.items)
            if (v.kind == "composition")
                comp_seen = true;
        CHECK(comp_seen);
    }
}

TEST_CASE("functor application commutes with composition and differential") {
    SplitMix64 rng(11);
    InstanceSpec spec;
    spec.seed = 404;
    spec.object_count = 2;
    spec.field = Q;
    Instance inst = generate_equivalence(spec);
    const DgCategory& C = inst.F->source();
    const DgCategory& D = inst.F->target();
    for (const DgFunctor* fun : {inst.F.get(), inst.G.get()}) {
        for (const ObjId& x : C.objects())
            for (const ObjId& y : C.objects())
                for (const ObjId& z : C.objects()) {
                    const GradedSpace& sxy = C.hom(x, y).space;
                    const GradedSpace& syz = C.hom(y, z).space;
                    for (int trial = 0; trial < 4; ++trial) {
                        auto rand_el = [&](const GradedSpace& s) {
                            auto sup = s.support();
                            int d = sup[rng.below(sup.size())];
                            Element e = zero_element(s, d, Q);
                            for (auto& cc : e.coeffs)
                                cc = Scalar::from_long(rng.range(-2, 2), Q);
                            return e;
                        };
                        if (sxy.total_dim() == 0 || syz.total_dim() == 0)
                            continue;
                        Element fe = rand_el(sxy);
                        Element g = rand_el(syz);
                        Element lhs = fun->apply(x, z, C.compose_elements(x, y, z, g, fe));
                        Element rhs = D.compose_elements(fun->obj(x), fun->obj(y), fun->obj(z),
                                                         fun->apply(y, z, g), fun->apply(x, y, fe));
                        CHECK(lhs == rhs);
                        Element dl = fun->apply(x, y, C.d(x, y, fe));
                        Element dr = D.d(fun->obj(x), fun->obj(y), fun->apply(x, y, fe));
                        CHECK(dl == dr);
                    }
                }
    }
}

TEST_CASE("generated categories validate") {
    for (std::uint64_t seed : {1ull, 42ull, 9001ull}) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.object_count = 3;
        spec.field = Field::prime(32003);
        DgCategory c = generate_category(spec);
        CHECK(validate_category(c).valid());
    }
}
