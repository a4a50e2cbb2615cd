#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/parallel.hpp"
#include "qinv/selftest.hpp"

using namespace qinv;

namespace {

struct ThreadGuard {
    ~ThreadGuard() { par::set_thread_count(0); }
};

}  // namespace

TEST_CASE("parallel_for covers every index exactly once") {
    ThreadGuard guard;
    for (int threads : {1, 0, 4}) {
        par::set_thread_count(threads);
        std::vector<int> hits(257, 0);
        par::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits)
            CHECK(h == 1);
    }
}

TEST_CASE("d_infty sweep is bit-identical between serial and parallel paths") {
    ThreadGuard guard;
    InstanceSpec spec;
    spec.seed = 17;
    spec.field = Field::prime(32003);
    Instance inst = generate_equivalence(spec);
    SplitMix64 rng(18);
    Transformation t = random_transformation(rng, *inst.F, *inst.G, 0, 4, 6);

    par::set_thread_count(1);
    Json serial = transformation_to_json(d_infty(t), "F", "G");
    par::set_thread_count(0);
    Json parallel = transformation_to_json(d_infty(t), "F", "G");
    CHECK(canonical_dump(serial) == canonical_dump(parallel));
}

TEST_CASE("certificates are bit-identical between serial and parallel paths") {
    ThreadGuard guard;
    InstanceSpec spec;
    spec.seed = 23;
    spec.field = Field::prime(32003);
    spec.arity = 3;
    Instance inst = generate_equivalence(spec);

    par::set_thread_count(1);
    Certificate a = quasi_inverse(*inst.F, *inst.G, *inst.phi, 3);
    Json ja = certificate_to_json(a, inst);
    par::set_thread_count(0);
    Certificate b = quasi_inverse(*inst.F, *inst.G, *inst.phi, 3);
    Json jb = certificate_to_json(b, inst);
    CHECK(canonical_dump(ja) == canonical_dump(jb));
}

TEST_CASE("selftest battery agrees between serial and parallel paths") {
    ThreadGuard guard;
    SelftestConfig cfg;
    cfg.seed = 9;
    cfg.cases = 3;
    cfg.arity = 2;
    cfg.field = Field::prime(32003);
    cfg.field_given = true;

    par::set_thread_count(1);
    std::vector<CheckResult> serial = run_selftest(cfg);
    par::set_thread_count(0);
    std::vector<CheckResult> parallel = run_selftest(cfg);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].name == parallel[i].name);
        CHECK(serial[i].pass == parallel[i].pass);
        CHECK(serial[i].details == parallel[i].details);
    }
}
