#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/fixtures.hpp"
#include "qinv/quasi_inverse.hpp"

using namespace qinv;

namespace {
const Field Q = Field::rationals();
}

TEST_CASE("solve_homotopy_system: identity transformation") {
    Instance inst = identity_phi_instance(Q, 4);
    HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
    const DgCategory& D = *inst.categories[1].second;
    CHECK(sys.psi.at("star") == D.identity("A"));
    CHECK(sys.h.at("star").is_zero());
    CHECK(sys.p.at("star").is_zero());
}

TEST_CASE("solve_homotopy_system: contractible object against the zero object") {
    Instance inst = fix_contract_instance(Q, 4);
    HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
    const DgCategory& D = *inst.categories[1].second;
    const GradedSpace& s = D.hom("A", "A").space;
    CHECK(sys.psi.at("star").coeffs.empty());  // Hom(O, A) = 0
    CHECK(sys.p.at("star").coeffs.empty());    // End(O) = 0
    Element want_h = basis_element(s, -1, 0, Q);  // h_A, with d(h_A) = -id_A
    CHECK(sys.h.at("star") == want_h);
}

TEST_CASE("solve_homotopy_system: iso fixture hand values") {
    Instance inst = fix_iso_instance(Q, 4);
    HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
    const DgCategory& D = *inst.categories[1].second;
    const GradedSpace& sba = D.hom("B", "A0").space;
    const GradedSpace& sbb = D.hom("B", "B").space;
    Element want_psi = zero_element(sba, 0, Q);
    want_psi.coeffs[sba.locate("y_a").second] = Scalar::one(Q);
    CHECK(sys.psi.at("star") == want_psi);
    CHECK(sys.h.at("star").is_zero());
    Element want_p = zero_element(sbb, -1, Q);
    want_p.coeffs[sbb.locate("z_x").second] = -Scalar::one(Q);
    CHECK(sys.p.at("star") == want_p);
    // defining identities hold exactly
    Element phi_e = inst.phi->comp0("star");
    Element psiphi = D.compose_elements("A0", "B", "A0", sys.psi.at("star"), phi_e);
    CHECK(psiphi == D.identity("A0"));  // h = 0 forces an exact left inverse
    Element phipsi = D.compose_elements("B", "A0", "B", phi_e, sys.psi.at("star"));
    Element defect = phipsi - D.identity("B");
    CHECK(defect == D.d("B", "B", sys.p.at("star")));
}

TEST_CASE("solve_homotopy_system rejects non-equivalences with diagnostics") {
    InstanceSpec spec;
    spec.seed = 7;
    spec.field = Q;
    Instance good = generate_equivalence(spec);
    CHECK_NOTHROW(solve_homotopy_system(*good.F, *good.G, *good.phi));

    Instance bad = generate_corrupted_equivalence(spec);
    for (const auto& [nm, cat] : bad.categories)
        CHECK(validate_category(*cat).valid());  // corruption keeps the category valid
    CHECK(is_dg_natural(*bad.phi).ok);
    bool threw = false;
    try {
        solve_homotopy_system(*bad.F, *bad.G, *bad.phi);
    } catch (const NotObjectwiseHomotopyEquivalence& e) {
        threw = true;
        CHECK(!e.diagnostics.empty());
        CHECK(e.diagnostics.find("H*") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("obstructions vanish on the contract fixture and identity run") {
    for (auto make : {fix_contract_instance, identity_phi_instance}) {
        Instance inst = make(Q, 3);
        HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
        Transformation psi(inst.G.get(), inst.F.get(), 0, 3);
        Transformation eta(inst.F.get(), inst.F.get(), -1, 3);
        for (const ObjId& x : inst.F->source().objects()) {
            psi.set_comp0(x, sys.psi.at(x));
            eta.set_comp0(x, sys.h.at(x));
        }
        for (int m = 1; m <= 3; ++m) {
            ObstructionPair obs = obstructions(psi, eta, *inst.phi, sys, m, false);
            CHECK(obs.lambda.is_zero());
            CHECK(obs.mu.is_zero());
            ExtensionResult ext = extend_step(obs, sys, *inst.phi);
            CHECK(ext.psi_m.is_zero());
            CHECK(ext.eta_m.is_zero());
            CHECK(ext.provenance.psi == StepVariant::Verbatim);
            CHECK(ext.provenance.eta == StepVariant::Verbatim);
            auto oracle = brute_force_extend(obs, *inst.phi);
            CHECK(oracle.first.is_zero());
            CHECK(oracle.second.is_zero());
        }
    }
}

TEST_CASE("obstruction preconditions are rechecked") {
    Instance inst = fix_contract_instance(Q, 3);
    HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
    Transformation psi(inst.G.get(), inst.F.get(), 0, 3);
    Transformation eta(inst.F.get(), inst.F.get(), -1, 3);
    for (const ObjId& x : inst.F->source().objects())
        psi.set_comp0(x, sys.psi.at(x));
    // wrong eta seed: the arity-0 identity fails (d(0) != psi phi - id = -id_A)
    CHECK_THROWS_AS(obstructions(psi, eta, *inst.phi, sys, 1, false), PreconditionViolated);
}

TEST_CASE("full certificate on the contract fixture matches the hand values") {
    for (Field f : {Field::rationals(), Field::prime(32003)}) {
        Instance inst = fix_contract_instance(f, 4);
        Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 4);
        const DgCategory& D = *inst.categories[1].second;
        CHECK(cert.psi.is_zero());
        CHECK(cert.omega.is_zero());
        Element want_h = basis_element(D.hom("A", "A").space, -1, 0, f);
        CHECK(cert.eta.comp0("star") == want_h);
        for (int l = 1; l <= 4; ++l)
            CHECK(cert.eta.arity(l).empty());
        CHECK(cert.report.all_pass());
        for (const auto& s : cert.report.left_steps) {
            CHECK(s.psi == StepVariant::Verbatim);
            CHECK(s.eta == StepVariant::Verbatim);
        }
        CHECK(verify_certificate(cert).all_pass());
    }
}

TEST_CASE("identity certificate") {
    Instance inst = identity_phi_instance(Q, 4);
    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 4);
    const DgCategory& D = *inst.categories[1].second;
    CHECK(cert.psi.comp0("star") == D.identity("A"));
    for (int l = 1; l <= 4; ++l)
        CHECK(cert.psi.arity(l).empty());
    CHECK(cert.eta.is_zero());
    CHECK(cert.omega.is_zero());
    CHECK(verify_certificate(cert).all_pass());
}

TEST_CASE("iso fixture certificate verifies with per-step oracle cross-check") {
    Instance inst = fix_iso_instance(Q, 4);
    HomotopySystem sys = solve_homotopy_system(*inst.F, *inst.G, *inst.phi);
    Transformation psi(inst.G.get(), inst.F.get(), 0, 4);
    Transformation eta(inst.F.get(), inst.F.get(), -1, 4);
    for (const ObjId& x : inst.F->source().objects()) {
        psi.set_comp0(x, sys.psi.at(x));
        eta.set_comp0(x, sys.h.at(x));
    }
    for (int m = 1; m <= 4; ++m) {
        ObstructionPair obs = obstructions(psi, eta, *inst.phi, sys, m, false);
        ExtensionResult ext = extend_step(obs, sys, *inst.phi);
        auto oracle = brute_force_extend(obs, *inst.phi);
        CHECK(step_contract_holds(obs, ext.psi_m, ext.eta_m, *inst.phi));
        CHECK(step_contract_holds(obs, oracle.first, oracle.second, *inst.phi));
        for (const auto& [objs, rows] : ext.psi_m.arity(m))
            for (const auto& [gens, e] : rows)
                psi.set_component(m, objs, gens, e);
        for (const auto& [objs, rows] : ext.eta_m.arity(m))
            for (const auto& [gens, e] : rows)
                eta.set_component(m, objs, gens, e);
    }
    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 4);
    CHECK(verify_certificate(cert).all_pass());
}

TEST_CASE("verify_certificate flags a tampered certificate at arity 0") {
    Instance inst = fix_contract_instance(Q, 3);
    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 3);
    // replace eta^0 = h by 0: d(0) != psi phi - id = -id_A
    cert.eta = Transformation(inst.F.get(), inst.F.get(), -1, 3);
    CertificateReport rep = verify_certificate(cert);
    CHECK_FALSE(rep.all_pass());
    bool found = false;
    for (const auto& r : rep.identities)
        if (r.name == "psi_phi_minus_id_minus_d_eta" && r.arity == 0 && !r.pass) {
            found = true;
            CHECK(r.detail.find("star") != std::string::npos);  // offending object named
        }
    CHECK(found);
}

TEST_CASE("components above the arity bound are irrelevant to the verdict") {
    Instance inst = fix_iso_instance(Q, 4);
    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 4);
    // strip everything above arity 2 and re-verify at bound 2
    Certificate small = cert;
    small.arity_bound = 2;
    small.phi = truncated(cert.phi, 2);
    small.psi = truncated(cert.psi, 2);
    small.eta = truncated(cert.eta, 2);
    small.omega = truncated(cert.omega, 2);
    small.psi_prime = truncated(cert.psi_prime, 2);
    small.omega_prime = truncated(cert.omega_prime, 2);
    CHECK(verify_certificate(small).all_pass());
}

TEST_CASE("random equivalences: full pipeline with provenance") {
    for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.field = Field::prime(32003);
        spec.arity = 3;
        Instance inst = generate_equivalence(spec);
        Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 3);
        CHECK(cert.report.all_pass());
        CHECK(verify_certificate(cert).all_pass());
        CHECK(cert.report.left_steps.size() == 3);
        CHECK(cert.report.right_steps.size() == 3);
        // psi is a genuine A-infinity natural transformation
        CHECK_FALSE(is_closed_up_to(cert.psi).has_value());
    }
}
