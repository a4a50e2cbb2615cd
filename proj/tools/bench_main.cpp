// Compares the serial reference against the OpenMP path on the two sweep
// kernels: the d_infty closedness sweep and certificate verification.

#include <chrono>
#include <iostream>

#include "qinv/generator.hpp"
#include "qinv/parallel.hpp"
#include "qinv/quasi_inverse.hpp"
#include "qinv/selftest.hpp"

using namespace qinv;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i)
        fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
    int reps = argc > 2 ? std::atoi(argv[2]) : 3;

    InstanceSpec spec;
    spec.seed = seed;
    spec.object_count = 3;
    spec.field = Field::prime(1000003);
    spec.arity = 4;
    Instance inst = generate_equivalence(spec);
    SplitMix64 rng(seed ^ 0xbe);
    Transformation t = random_transformation(rng, *inst.F, *inst.G, 0, 4, 10);
    Certificate cert = quasi_inverse(*inst.F, *inst.G, *inst.phi, 4);

    struct Row {
        const char* name;
        std::function<void()> fn;
    };
    std::vector<Row> rows = {
        {"d_infty sweep (arity 4)", [&] { volatile bool z = d_infty(t).is_zero(); (void)z; }},
        {"d_infty^2 sweep", [&] { volatile bool z = d_infty(d_infty(t)).is_zero(); (void)z; }},
        {"certificate verification", [&] { verify_certificate(cert); }},
        {"selftest pipeline case", [&] {
             SelftestConfig cfg;
             cfg.seed = seed;
             cfg.cases = 4;
             cfg.arity = 3;
             cfg.with_q_pass = false;
             cfg.field_given = true;
             run_selftest(cfg);
         }},
    };

    std::cout << "kernel, serial ms, parallel ms, speedup\n";
    for (auto& row : rows) {
        par::set_thread_count(1);
        const double serial = time_ms(row.fn, reps);
        par::set_thread_count(0);
        const double parallel = time_ms(row.fn, reps);
        std::cout << row.name << ", " << serial << ", " << parallel << ", "
                  << (parallel > 0 ? serial / parallel : 0.0) << "\n";
    }
    return 0;
}
