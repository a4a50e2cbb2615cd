#pragma once

#include "qinv/transform.hpp"

namespace qinv {

/* Per-object homotopy data: psi_E in Hom^0(GE,FE), h_E in Hom^{-1}(FE,FE),
   p_E in Hom^{-1}(GE,GE) with  psi phi - id = dh,  phi psi - id = dp,
   d(psi) = 0, for the phi it was solved against. */
struct HomotopySystem {
    std::map<ObjId, Element> psi, h, p;
};

struct NotObjectwiseHomotopyEquivalence : std::runtime_error {
    NotObjectwiseHomotopyEquivalence(const ObjId& obj, std::string diag)
        : std::runtime_error("no homotopy inverse system at object " + obj + "; " + diag),
          object(obj), diagnostics(std::move(diag)) {}
    ObjId object;
    std::string diagnostics;
};

struct VerificationFailed : std::runtime_error {
    VerificationFailed(std::string ident, int ar, std::string tup)
        : std::runtime_error("identity '" + ident + "' fails at arity " + std::to_string(ar) +
                             " on " + tup),
          identity(std::move(ident)), arity(ar), tuple(std::move(tup)) {}
    std::string identity;
    int arity;
    std::string tuple;
};

struct LemmaAssertionFailed : std::runtime_error {
    explicit LemmaAssertionFailed(const std::string& w) : std::runtime_error(w) {}
};

struct ExtensionUnsolvable : std::runtime_error {
    explicit ExtensionUnsolvable(const std::string& w) : std::runtime_error(w) {}
};

struct PreconditionViolated : std::runtime_error {
    explicit PreconditionViolated(const std::string& w) : std::runtime_error(w) {}
};

/* Arity-m obstruction tables, constructed from the partial data and asserted
   to satisfy  d(lambda) = 0  and  d(mu) = lambda . phi  at construction.
   Both are stored as single-arity prenatural transformations so that their
   differential is literally the arity-m component of d_infty. */
struct ObstructionPair {
    int m = 0;
    bool mirror = false;             // false: left induction, true: right induction
    Transformation lambda, mu;       // degrees +1 and 0
};

enum class StepVariant { Verbatim, Corrected, Oracle };

std::string to_string(StepVariant v);

struct StepProvenance {
    int m = 0;
    StepVariant psi = StepVariant::Verbatim;
    StepVariant eta = StepVariant::Verbatim;
    std::string psi_detail, eta_detail;
};

struct IdentityResult {
    std::string name;
    int arity = 0;
    bool pass = true;
    std::string detail;  // first failing tuple when !pass
};

struct CertificateReport {
    std::vector<IdentityResult> identities;
    std::vector<StepProvenance> left_steps, right_steps;
    std::vector<std::string> notes;
    bool all_pass() const {
        for (const auto& r : identities)
            if (!r.pass)
                return false;
        return true;
    }
};

struct Certificate {
    int arity_bound = 0;
    HomotopySystem system;
    Transformation phi, psi, eta, omega, psi_prime, omega_prime;
    CertificateReport report;
};

/* Joint canonical linear solve per object; throws when some object admits
   no homotopy inverse (diagnostics carry cohomology dimensions). */
HomotopySystem solve_homotopy_system(const DgFunctor& F, const DgFunctor& G,
                                     const Transformation& phi);

/* Arity-m obstruction pair of the (possibly mirrored) induction.
   partial_psi / partial_eta hold components < m; the lower identities are
   re-checked, and the two table assertions are enforced. */
ObstructionPair obstructions(const Transformation& partial_psi,
                             const Transformation& partial_eta,
                             const Transformation& phi, const HomotopySystem& sys,
                             int m, bool mirror);

struct ExtensionResult {
    Transformation psi_m, eta_m;  // single-arity tables at arity m
    StepProvenance provenance;
};

/* Recurrent extension step: formula ladder with an Eq.(7)-style acceptance
   check, oracle fallback.  Appends nothing; caller installs the tables. */
ExtensionResult extend_step(const ObstructionPair& obs, const HomotopySystem& sys,
                            const Transformation& phi);

/* Independent oracle: solves the step equations directly as a canonical
   linear system (per object tuple, free variables zeroed). */
std::pair<Transformation, Transformation> brute_force_extend(const ObstructionPair& obs,
                                                             const Transformation& phi);

/* Arity-m component of d_infty of a single-arity-m table; this is the "d"
   of the step assertions. */
Transformation table_differential(const Transformation& single_arity_table, int m);

/* Checks d(psi_m) = -lambda and d(eta_m) = psi_m.phi + mu (or the mirrored
   form) for any candidate pair, independently of how it was produced. */
bool step_contract_holds(const ObstructionPair& obs, const Transformation& psi_m,
                         const Transformation& eta_m, const Transformation& phi);

Certificate quasi_inverse(const DgFunctor& F, const DgFunctor& G, const Transformation& phi,
                          int arity_bound);

/* Recomputes every certificate identity from scratch; never throws on a
   failing identity (failures become report entries). */
CertificateReport verify_certificate(const Certificate& cert);

}  // namespace qinv
