#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/fixtures.hpp"
#include "qinv/selftest.hpp"

using namespace qinv;

namespace {
const Field Q = Field::rationals();
}

TEST_CASE("category bundle round-trips byte-identically") {
    for (Field f : {Field::rationals(), Field::prime(32003)}) {
        DgCategory contract = fix_contract(f);
        DgCategory pt = fix_pt(f);
        Json j1 = category_bundle_to_json(f, {{"pt", &pt}, {"contract", &contract}});
        Field f2 = Field::rationals();
        auto cats = bundle_from_json(j1, f2);
        CHECK(f2 == f);
        std::vector<std::pair<std::string, const DgCategory*>> back;
        for (const auto& [nm, c] : cats)
            back.emplace_back(nm, c.get());
        Json j2 = category_bundle_to_json(f2, back);
        CHECK(canonical_dump(j1) == canonical_dump(j2));
        for (const auto& [nm, c] : cats)
            CHECK(validate_category(*c).valid());
    }
}

TEST_CASE("instance and certificate round-trip") {
    InstanceSpec spec;
    spec.seed = 11;
    spec.field = Q;
    spec.arity = 3;
    Instance inst = generate_equivalence(spec);
    Json j1 = instance_to_json(inst);
    Instance inst2 = instance_from_json(j1["bundle"], j1["functor_f"], j1["functor_g"], j1["phi"]);
    CHECK(canonical_dump(j1) == canonical_dump(instance_to_json(inst2)));

    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 3);
    Json c1 = certificate_to_json(cert, inst);
    LoadedCertificate lc = certificate_from_json(c1);
    CHECK(canonical_dump(c1) == canonical_dump(certificate_to_json(*lc.cert, lc.instance)));
    CHECK(verify_certificate(*lc.cert).all_pass());
}

TEST_CASE("malformed files produce field diagnostics") {
    CHECK_THROWS_WITH_AS(parse_json("{", "broken.json"),
                         doctest::Contains("broken.json"), ParseError);
    Json bad;
    bad["format"] = "qinv-category/1";
    bad["field"] = "q";
    bad["categories"] = Json::array({Json{{"name", "c"},
                                          {"objects", Json::array({"x"})},
                                          {"homs", Json::array()}}});
    Field f = Field::rationals();
    CHECK_NOTHROW(bundle_from_json(bad, f));
    bad["categories"][0]["homs"].push_back(
        Json{{"source", "x"},
             {"target", "nope"},
             {"basis", Json{{"0", Json::array({"g"})}}}});
    CHECK_THROWS_WITH_AS(bundle_from_json(bad, f), doctest::Contains("unknown object"),
                         ParseError);

    Json el;
    el["format"] = "qinv-category/1";
    CHECK_THROWS_WITH_AS(bundle_from_json(el, f), doctest::Contains("field"), ParseError);
}

TEST_CASE("scalar strings in files are validated") {
    DgCategory contract = fix_contract(Q);
    Json j = category_to_json("c", contract);
    j["identities"]["A"]["id_A"] = "not-a-number";
    Json bundle;
    bundle["format"] = "qinv-category/1";
    bundle["field"] = "q";
    bundle["categories"] = Json::array({j});
    Field f = Field::rationals();
    CHECK_THROWS_AS(bundle_from_json(bundle, f), ParseError);
}

TEST_CASE("generate_category") {
    SUBCASE("degenerate bounds give the point category shape") {
        InstanceSpec spec;
        spec.seed = 0;
        spec.object_count = 1;
        spec.max_gens_per_degree = 1;
        spec.degree_min = spec.degree_max = 0;
        DgCategory c = generate_category(spec);
        REQUIRE(c.objects().size() == 1);
        const ObjId& x = c.objects()[0];
        CHECK(c.hom(x, x).space.total_dim() == 1);
        CHECK(c.hom(x, x).space.dim(0) == 1);
        CHECK(c.identity(x) == basis_element(c.hom(x, x).space, 0, 0, spec.field));
        CHECK(validate_category(c).valid());
    }
    SUBCASE("default bounds validate") {
        InstanceSpec spec;
        spec.seed = 42;
        spec.object_count = 3;
        CHECK(validate_category(generate_category(spec)).valid());
    }
    SUBCASE("same seed gives identical serialization") {
        InstanceSpec spec;
        spec.seed = 99;
        DgCategory a = generate_category(spec);
        DgCategory b = generate_category(spec);
        CHECK(canonical_dump(category_to_json("c", a)) ==
              canonical_dump(category_to_json("c", b)));
    }
    SUBCASE("hom dimension bound respected") {
        for (std::uint64_t s : {1ull, 2ull, 3ull, 50ull}) {
            InstanceSpec spec;
            spec.seed = s;
            spec.object_count = 4;
            spec.max_gens_per_degree = 3;
            DgCategory c = generate_category(spec);
            for (const ObjId& x : c.objects())
                for (const ObjId& y : c.objects())
                    for (int d : c.hom(x, y).space.support())
                        CHECK(c.hom(x, y).space.dim(d) <= 3);
        }
    }
}

TEST_CASE("generate_equivalence post-conditions") {
    for (std::uint64_t s : {7ull, 8ull}) {
        InstanceSpec spec;
        spec.seed = s;
        spec.field = Field::prime(32003);
        Instance inst = generate_equivalence(spec);
        for (const auto& [nm, cat] : inst.categories)
            CHECK(validate_category(*cat).valid());
        CHECK(validate_functor(*inst.F).valid());
        CHECK(validate_functor(*inst.G).valid());
        CHECK(is_dg_natural(*inst.phi).ok);
        CHECK_NOTHROW(solve_homotopy_system(*inst.F, *inst.G, *inst.phi));
    }
}

TEST_CASE("corrupted equivalence fails downstream with cohomology mismatch") {
    InstanceSpec spec;
    spec.seed = 7;
    spec.field = Q;
    Instance bad = generate_corrupted_equivalence(spec);
    const DgCategory& D = *bad.categories[1].second;
    // contractibility is broken: H(G(X0)) differs from H(F(X0))
    const ObjId fx = bad.F->obj("X0"), gx = bad.G->obj("X0");
    bool threw = false;
    try {
        solve_homotopy_system(*bad.F, *bad.G, *bad.phi);
    } catch (const NotObjectwiseHomotopyEquivalence&) {
        threw = true;
    }
    CHECK(threw);
    // the diagnostic is visible in hom-complex cohomology: Hom(FX, GX) has
    // extra cohomology compared to the intact instance
    Instance good = generate_equivalence(spec);
    const DgCategory& Dg = *good.categories[1].second;
    CHECK(cohomology_dims(D.hom(fx, gx)) != cohomology_dims(Dg.hom(fx, gx)));
}

TEST_CASE("selftest battery smoke run") {
    SelftestConfig cfg;
    cfg.seed = 5;
    cfg.cases = 2;
    cfg.arity = 2;
    cfg.field = Field::prime(32003);
    cfg.field_given = true;
    std::vector<CheckResult> results = run_selftest(cfg);
    for (const auto& r : results) {
        INFO(r.name, ": ", r.details);
        CHECK(r.pass);
    }
}

TEST_CASE("audit-signs finds exactly the shipped convention") {
    std::vector<AuditRow> rows = audit_signs(3, 2, Field::prime(32003), 2);
    for (const auto& r : rows) {
        const bool expect = (r.c1 == 1 && r.c2 == 0 && r.c3 == 0);
        INFO("c = (", r.c1, ",", r.c2, ",", r.c3, ")");
        CHECK((r.reductions && r.derivation) == expect);
    }
}
