#pragma once

#include <memory>

#include <json.hpp>

#include "qinv/quasi_inverse.hpp"

namespace qinv {

using Json = nlohmann::json;

/* A loaded problem instance; owns its categories and functors so that the
   pointer-linked transformations stay valid. */
struct Instance {
    Field field = Field::rationals();
    std::vector<std::pair<std::string, std::unique_ptr<DgCategory>>> categories;
    std::string f_name = "F", g_name = "G";
    std::unique_ptr<DgFunctor> F, G;
    std::unique_ptr<Transformation> phi;

    Instance() = default;
    Instance(Instance&&) = default;
    Instance& operator=(Instance&&) = default;

    const DgCategory* category(const std::string& name) const;
    DgCategory* category(const std::string& name);
};

std::string canonical_dump(const Json& j);
std::string fnv1a_hex(const std::string& data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);
Json parse_json(const std::string& text, const std::string& what);

/* ---- categories ---- */

Json category_to_json(const std::string& name, const DgCategory& c);
Json category_bundle_to_json(Field f,
                             const std::vector<std::pair<std::string, const DgCategory*>>& cats);
std::unique_ptr<DgCategory> category_from_json(const Json& j, Field f);

/* bundle: { format, field, categories: [...] } */
std::vector<std::pair<std::string, std::unique_ptr<DgCategory>>>
bundle_from_json(const Json& j, Field& field_out);

/* ---- functors / transformations ---- */

Json functor_to_json(const std::string& name, const std::string& src_name,
                     const std::string& tgt_name, const DgFunctor& f);
std::unique_ptr<DgFunctor> functor_from_json(const Json& j, const DgCategory* src,
                                             const DgCategory* tgt);

Json transformation_to_json(const Transformation& t, const std::string& from_functor,
                            const std::string& to_functor);
std::unique_ptr<Transformation> transformation_from_json(const Json& j, const DgFunctor* F,
                                                         const DgFunctor* G);

/* ---- instances ---- */

Instance instance_from_files(const std::string& bundle_path, const std::string& f_path,
                             const std::string& g_path, const std::string& phi_path);
Instance instance_from_json(const Json& bundle, const Json& fj, const Json& gj, const Json& phij);
Json instance_to_json(const Instance& inst);

/* ---- certificates ---- */

Json certificate_to_json(const Certificate& cert, const Instance& inst);

struct LoadedCertificate {
    Instance instance;
    std::unique_ptr<Certificate> cert;
};

LoadedCertificate certificate_from_json(const Json& j);

Json report_to_json(const CertificateReport& rep);

}  // namespace qinv
