#pragma once

#include "qinv/fixtures.hpp"
#include "qinv/generator.hpp"

namespace qinv {

struct SelftestConfig {
    std::uint64_t seed = 1;
    int cases = 25;
    Field field = Field::prime(1000003);
    int arity = 4;
    bool with_q_pass = true;  // reduced-count rationals pass when field is prime
    bool field_given = false;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::size_t cases = 0;
    std::string details;
};

/* The property battery: d_infty squared, dg embedding, derivation law,
   composition closedness, the inductive step contracts with the oracle,
   certificates, fixture regressions, round-trips, determinism. */
std::vector<CheckResult> run_selftest(const SelftestConfig& cfg);

bool all_pass(const std::vector<CheckResult>& results);

struct AuditRow {
    int c1 = 0, c2 = 0, c3 = 0;
    bool reductions = false;
    bool derivation = false;
};

/* Convention search for the general-composition sign: tries the affine
   exponent family and reports which variants pass the reduction clauses and
   the derivation law. */
std::vector<AuditRow> audit_signs(std::uint64_t seed, int cases, Field field, int arity);

}  // namespace qinv
