#include "qinv/io.hpp"

#include <fstream>
#include <sstream>

namespace qinv {

namespace {

constexpr const char* kCategoryFormat = "qinv-category/1";
constexpr const char* kFunctorFormat = "qinv-functor/1";
constexpr const char* kTransformationFormat = "qinv-transformation/1";
constexpr const char* kCertificateFormat = "qinv-certificate/1";

void expect_format(const Json& j, const char* tag, const std::string& what) {
    if (!j.is_object() || !j.contains("format") || j["format"] != tag)
        throw ParseError(what + ": missing or wrong format tag (expected " + std::string(tag) + ")");
}

const Json& field_of(const Json& j, const char* key, const std::string& what) {
    if (!j.contains(key))
        throw ParseError(what + ": missing field '" + key + "'");
    return j[key];
}

Json element_to_json(const GradedSpace& space, const Element& e) {
    Json out = Json::object();
    const auto& names = space.generators(e.degree);
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        if (!e.coeffs[i].is_zero())
            out[names[i]] = e.coeffs[i].str();
    return out;
}

Element element_from_json(const Json& j, const GradedSpace& space, int degree, Field f,
                          const std::string& what) {
    if (!j.is_object())
        throw ParseError(what + ": element must be an object of coefficients");
    Element e = zero_element(space, degree, f);
    for (const auto& [name, coeff] : j.items()) {
        if (!space.has_generator(name))
            throw ParseError(what + ": unknown generator '" + name + "'");
        auto [d, idx] = space.locate(name);
        if (d != degree)
            throw ParseError(what + ": generator '" + name + "' has degree " + std::to_string(d) +
                             ", expected " + std::to_string(degree));
        if (!coeff.is_string())
            throw ParseError(what + ": coefficient of '" + name + "' must be a string");
        e.coeffs[idx] = Scalar::parse(coeff.get<std::string>(), f);
    }
    return e;
}

GenRef genref_from_name(const GradedSpace& space, const std::string& name,
                        const std::string& what) {
    if (!space.has_generator(name))
        throw ParseError(what + ": unknown generator '" + name + "'");
    auto [d, idx] = space.locate(name);
    return GenRef{d, idx};
}

}  // namespace

const DgCategory* Instance::category(const std::string& name) const {
    for (const auto& [nm, c] : categories)
        if (nm == name)
            return c.get();
    return nullptr;
}

DgCategory* Instance::category(const std::string& name) {
    for (auto& [nm, c] : categories)
        if (nm == name)
            return c.get();
    return nullptr;
}

std::string canonical_dump(const Json& j) {
    return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i)
        os << ((h >> (4 * i)) & 0xf);
    return "fnv1a:" + os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << data;
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

/* ---- categories ---- */

Json category_to_json(const std::string& name, const DgCategory& c) {
    Json j;
    j["name"] = name;
    j["objects"] = c.objects();
    Json homs = Json::array();
    for (const ObjId& x : c.objects())
        for (const ObjId& y : c.objects()) {
            const HomComplex& hc = c.hom(x, y);
            if (hc.space.total_dim() == 0)
                continue;
            Json entry;
            entry["source"] = x;
            entry["target"] = y;
            Json basis = Json::object();
            for (int d : hc.space.support())
                basis[std::to_string(d)] = hc.space.generators(d);
            entry["basis"] = basis;
            Json diff = Json::object();
            for (int d : hc.space.support()) {
                for (int i = 0; i < hc.space.dim(d); ++i) {
                    Element img = hc.d(basis_element(hc.space, d, i, c.field()));
                    if (!img.is_zero())
                        diff[hc.space.generators(d)[i]] = element_to_json(hc.space, img);
                }
            }
            entry["differential"] = diff;
            homs.push_back(entry);
        }
    j["homs"] = homs;

    Json comps = Json::array();
    for (const ObjId& x : c.objects())
        for (const ObjId& y : c.objects())
            for (const ObjId& z : c.objects()) {
                const auto* table = c.composition_table(x, y, z);
                if (!table || table->empty())
                    continue;
                Json entry;
                entry["source"] = x;
                entry["middle"] = y;
                entry["target"] = z;
                Json products = Json::array();
                for (const auto& [key, result] : *table) {
                    if (result.is_zero())
                        continue;
                    Json p;
                    p["g"] = c.gen_name(y, z, key.first);
                    p["f"] = c.gen_name(x, y, key.second);
                    p["to"] = element_to_json(c.hom(x, z).space, result);
                    products.push_back(p);
                }
                if (products.empty())
                    continue;
                entry["products"] = products;
                comps.push_back(entry);
            }
    j["compositions"] = comps;

    Json ids = Json::object();
    for (const ObjId& x : c.objects())
        ids[x] = element_to_json(c.hom(x, x).space, c.identity(x));
    j["identities"] = ids;
    return j;
}

Json category_bundle_to_json(Field f,
                             const std::vector<std::pair<std::string, const DgCategory*>>& cats) {
    Json j;
    j["format"] = kCategoryFormat;
    j["field"] = f.str();
    Json arr = Json::array();
    for (const auto& [name, c] : cats)
        arr.push_back(category_to_json(name, *c));
    j["categories"] = arr;
    return j;
}

std::unique_ptr<DgCategory> category_from_json(const Json& j, Field f) {
    const std::string name = j.value("name", "?");
    const std::string what = "category '" + name + "'";
    auto cat = std::make_unique<DgCategory>(f);
    for (const auto& obj : field_of(j, "objects", what)) {
        if (!obj.is_string())
            throw ParseError(what + ": object names must be strings");
        cat->add_object(obj.get<std::string>());
    }
    struct PendingDiff {
        ObjId x, y;
        Json diff;
    };
    std::vector<PendingDiff> diffs;
    for (const auto& entry : field_of(j, "homs", what)) {
        const ObjId x = field_of(entry, "source", what).get<std::string>();
        const ObjId y = field_of(entry, "target", what).get<std::string>();
        const std::string where = what + ": hom (" + x + "," + y + ")";
        if (!cat->has_object(x) || !cat->has_object(y))
            throw ParseError(where + ": unknown object");
        std::map<int, std::vector<std::string>> basis;
        for (const auto& [dstr, names] : field_of(entry, "basis", where).items()) {
            int d;
            try {
                d = std::stoi(dstr);
            } catch (...) {
                throw ParseError(where + ": bad degree key '" + dstr + "'");
            }
            basis[d] = names.get<std::vector<std::string>>();
        }
        GradedSpace space(std::move(basis));
        GradedMap diff(1, space, space, f);
        HomComplex hc{space, diff};
        cat->set_hom(x, y, hc);
        diffs.push_back({x, y, entry.value("differential", Json::object())});
    }
    // second pass: differentials (need the space registered to parse elements)
    for (const auto& pd : diffs) {
        const std::string where = what + ": differential of hom (" + pd.x + "," + pd.y + ")";
        const GradedSpace& space = cat->hom(pd.x, pd.y).space;
        GradedMap diff(1, space, space, f);
        std::map<int, Matrix> blocks;
        for (const auto& [gen, img] : pd.diff.items()) {
            if (!space.has_generator(gen))
                throw ParseError(where + ": unknown generator '" + gen + "'");
            auto [d, idx] = space.locate(gen);
            Element e = element_from_json(img, space, d + 1, f, where + " at '" + gen + "'");
            auto it = blocks.find(d);
            if (it == blocks.end())
                it = blocks.emplace(d, Matrix(space.dim(d + 1), space.dim(d), f)).first;
            for (std::size_t r = 0; r < e.coeffs.size(); ++r)
                it->second.at(r, idx) = e.coeffs[r];
        }
        for (auto& [d, m] : blocks)
            diff.set_block(d, std::move(m));
        HomComplex hc{space, diff};
        cat->set_hom(pd.x, pd.y, hc);
    }
    for (const auto& entry : j.value("compositions", Json::array())) {
        const ObjId x = field_of(entry, "source", what).get<std::string>();
        const ObjId y = field_of(entry, "middle", what).get<std::string>();
        const ObjId z = field_of(entry, "target", what).get<std::string>();
        const std::string where = what + ": composition (" + x + "," + y + "," + z + ")";
        for (const auto& p : field_of(entry, "products", where)) {
            const std::string gname = field_of(p, "g", where).get<std::string>();
            const std::string fname = field_of(p, "f", where).get<std::string>();
            GenRef g = genref_from_name(cat->hom(y, z).space, gname, where);
            GenRef fr = genref_from_name(cat->hom(x, y).space, fname, where);
            Element to = element_from_json(field_of(p, "to", where), cat->hom(x, z).space,
                                           g.degree + fr.degree, f,
                                           where + " product (" + gname + "," + fname + ")");
            cat->set_composition(x, y, z, g, fr, std::move(to));
        }
    }
    const Json ids = j.value("identities", Json::object());
    for (const auto& [x, idj] : ids.items()) {
        if (!cat->has_object(x))
            throw ParseError(what + ": identity for unknown object '" + x + "'");
        cat->set_identity(x, element_from_json(idj, cat->hom(x, x).space, 0, f,
                                               what + ": identity of " + x));
    }
    return cat;
}

std::vector<std::pair<std::string, std::unique_ptr<DgCategory>>>
bundle_from_json(const Json& j, Field& field_out) {
    expect_format(j, kCategoryFormat, "category bundle");
    field_out = Field::parse(field_of(j, "field", "category bundle").get<std::string>());
    std::vector<std::pair<std::string, std::unique_ptr<DgCategory>>> out;
    for (const auto& cj : field_of(j, "categories", "category bundle")) {
        std::string name = field_of(cj, "name", "category").get<std::string>();
        for (const auto& [nm, c] : out)
            if (nm == name)
                throw ParseError("duplicate category name '" + name + "'");
        out.emplace_back(std::move(name), category_from_json(cj, field_out));
    }
    if (out.empty())
        throw ParseError("category bundle: no categories");
    return out;
}

/* ---- functors ---- */

Json functor_to_json(const std::string& name, const std::string& src_name,
                     const std::string& tgt_name, const DgFunctor& f) {
    Json j;
    j["format"] = kFunctorFormat;
    j["name"] = name;
    j["source"] = src_name;
    j["target"] = tgt_name;
    Json objs = Json::object();
    for (const ObjId& x : f.source().objects())
        objs[x] = f.obj(x);
    j["objects"] = objs;
    Json maps = Json::array();
    for (const ObjId& x : f.source().objects())
        for (const ObjId& y : f.source().objects()) {
            const GradedSpace& s = f.source().hom(x, y).space;
            if (s.total_dim() == 0)
                continue;
            const GradedMap& m = f.hom_map(x, y);
            Json entry;
            entry["source"] = x;
            entry["target"] = y;
            Json blocks = Json::object();
            for (const auto& [d, block] : m.blocks()) {
                Json rows = Json::array();
                for (std::size_t r = 0; r < block.rows(); ++r) {
                    Json row = Json::array();
                    for (std::size_t cidx = 0; cidx < block.cols(); ++cidx)
                        row.push_back(block.at(r, cidx).str());
                    rows.push_back(row);
                }
                blocks[std::to_string(d)] = rows;
            }
            entry["blocks"] = blocks;
            maps.push_back(entry);
        }
    j["hom_maps"] = maps;
    return j;
}

std::unique_ptr<DgFunctor> functor_from_json(const Json& j, const DgCategory* src,
                                             const DgCategory* tgt) {
    expect_format(j, kFunctorFormat, "functor");
    const std::string name = j.value("name", "?");
    const std::string what = "functor '" + name + "'";
    auto fun = std::make_unique<DgFunctor>(src, tgt);
    for (const auto& [x, fx] : field_of(j, "objects", what).items())
        fun->map_object(x, fx.get<std::string>());
    const Field f = src->field();
    for (const auto& entry : j.value("hom_maps", Json::array())) {
        const ObjId x = field_of(entry, "source", what).get<std::string>();
        const ObjId y = field_of(entry, "target", what).get<std::string>();
        const std::string where = what + ": hom map (" + x + "," + y + ")";
        const GradedSpace& s = src->hom(x, y).space;
        const GradedSpace& t = tgt->hom(fun->obj(x), fun->obj(y)).space;
        GradedMap m(0, s, t, f);
        for (const auto& [dstr, rows] : field_of(entry, "blocks", where).items()) {
            int d;
            try {
                d = std::stoi(dstr);
            } catch (...) {
                throw ParseError(where + ": bad degree key '" + dstr + "'");
            }
            Matrix block(t.dim(d), s.dim(d), f);
            if (!rows.is_array() || rows.size() != block.rows())
                throw ParseError(where + ": block at degree " + dstr + " has wrong row count");
            for (std::size_t r = 0; r < block.rows(); ++r) {
                if (!rows[r].is_array() || rows[r].size() != block.cols())
                    throw ParseError(where + ": block at degree " + dstr + " has wrong column count");
                for (std::size_t cc = 0; cc < block.cols(); ++cc)
                    block.at(r, cc) = Scalar::parse(rows[r][cc].get<std::string>(), f);
            }
            m.set_block(d, std::move(block));
        }
        fun->set_hom_map(x, y, std::move(m));
    }
    return fun;
}

/* ---- transformations ---- */

Json transformation_to_json(const Transformation& t, const std::string& from_functor,
                            const std::string& to_functor) {
    Json j;
    j["format"] = kTransformationFormat;
    j["from_functor"] = from_functor;
    j["to_functor"] = to_functor;
    j["degree"] = t.degree();
    j["arity_bound"] = t.arity_bound();
    const DgCategory& D = t.tgt();
    Json c0 = Json::object();
    for (const ObjId& x : t.src().objects()) {
        Element e = t.comp0(x);
        if (!e.is_zero())
            c0[x] = element_to_json(D.hom(t.F().obj(x), t.G().obj(x)).space, e);
    }
    j["comp0"] = c0;
    Json comps = Json::array();
    const DgCategory& C = t.src();
    for (int l = 1; l <= t.arity_bound(); ++l)
        for (const auto& [objs, rows] : t.arity(l))
            for (const auto& [gens, e] : rows) {
                if (e.is_zero())
                    continue;
                Json entry;
                entry["arity"] = l;
                entry["objects"] = objs;
                Json inputs = Json::array();
                for (int k = 0; k < l; ++k)
                    inputs.push_back(C.gen_name(objs[l - k - 1], objs[l - k], gens[k]));
                entry["inputs"] = inputs;
                entry["value"] = element_to_json(
                    D.hom(t.F().obj(objs.front()), t.G().obj(objs.back())).space, e);
                comps.push_back(entry);
            }
    j["components"] = comps;
    return j;
}

std::unique_ptr<Transformation> transformation_from_json(const Json& j, const DgFunctor* F,
                                                         const DgFunctor* G) {
    expect_format(j, kTransformationFormat, "transformation");
    const std::string what = "transformation";
    const int degree = field_of(j, "degree", what).get<int>();
    const int arity = field_of(j, "arity_bound", what).get<int>();
    auto t = std::make_unique<Transformation>(F, G, degree, arity);
    const DgCategory& C = F->source();
    const DgCategory& D = F->target();
    const Field f = C.field();
    const Json c0 = j.value("comp0", Json::object());
    for (const auto& [x, ej] : c0.items()) {
        if (!C.has_object(x))
            throw ParseError(what + ": comp0 at unknown object '" + x + "'");
        t->set_comp0(x, element_from_json(ej, D.hom(F->obj(x), G->obj(x)).space, degree, f,
                                          what + ": comp0 at " + x));
    }
    for (const auto& entry : j.value("components", Json::array())) {
        const int l = field_of(entry, "arity", what).get<int>();
        ObjTuple objs = field_of(entry, "objects", what).get<std::vector<std::string>>();
        if (static_cast<int>(objs.size()) != l + 1)
            throw ParseError(what + ": component object tuple length != arity + 1");
        for (const ObjId& x : objs)
            if (!C.has_object(x))
                throw ParseError(what + ": component at unknown object '" + x + "'");
        const auto& inputs = field_of(entry, "inputs", what);
        if (static_cast<int>(inputs.size()) != l)
            throw ParseError(what + ": component input tuple length != arity");
        GenTuple gens(l);
        int degsum = 0;
        for (int k = 0; k < l; ++k) {
            const std::string nm = inputs[k].get<std::string>();
            gens[k] = genref_from_name(C.hom(objs[l - k - 1], objs[l - k]).space, nm,
                                       what + ": component inputs");
            degsum += gens[k].degree;
        }
        Element e = element_from_json(
            field_of(entry, "value", what),
            D.hom(F->obj(objs.front()), G->obj(objs.back())).space, degree - l + degsum, f,
            what + ": component value");
        t->set_component(l, objs, gens, std::move(e));
    }
    return t;
}

/* ---- instances ---- */

Instance instance_from_json(const Json& bundle, const Json& fj, const Json& gj,
                            const Json& phij) {
    Instance inst;
    inst.categories = bundle_from_json(bundle, inst.field);
    auto resolve = [&](const Json& j, const char* what) {
        const std::string src = field_of(j, "source", what).get<std::string>();
        const std::string tgt = field_of(j, "target", what).get<std::string>();
        const DgCategory* cs = inst.category(src);
        const DgCategory* ct = inst.category(tgt);
        if (!cs || !ct)
            throw ParseError(std::string(what) + ": unknown category '" + (cs ? tgt : src) + "'");
        return std::make_pair(cs, ct);
    };
    auto [fs, ft] = resolve(fj, "functor F");
    inst.F = functor_from_json(fj, fs, ft);
    inst.f_name = fj.value("name", "F");
    auto [gs, gt] = resolve(gj, "functor G");
    if (gs != fs || gt != ft)
        throw ParseError("functors F and G must share source and target categories");
    inst.G = functor_from_json(gj, gs, gt);
    inst.g_name = gj.value("name", "G");
    expect_format(phij, kTransformationFormat, "phi");
    const std::string from = field_of(phij, "from_functor", "phi").get<std::string>();
    const std::string to = field_of(phij, "to_functor", "phi").get<std::string>();
    if (from != inst.f_name || to != inst.g_name)
        throw ParseError("phi must go from functor '" + inst.f_name + "' to '" + inst.g_name +
                         "' (got '" + from + "' => '" + to + "')");
    inst.phi = transformation_from_json(phij, inst.F.get(), inst.G.get());
    return inst;
}

Instance instance_from_files(const std::string& bundle_path, const std::string& f_path,
                             const std::string& g_path, const std::string& phi_path) {
    Json bundle = parse_json(read_file(bundle_path), bundle_path);
    Json fj = parse_json(read_file(f_path), f_path);
    Json gj = parse_json(read_file(g_path), g_path);
    Json phij = parse_json(read_file(phi_path), phi_path);
    return instance_from_json(bundle, fj, gj, phij);
}

Json instance_to_json(const Instance& inst) {
    Json j;
    std::vector<std::pair<std::string, const DgCategory*>> cats;
    for (const auto& [nm, c] : inst.categories)
        cats.emplace_back(nm, c.get());
    std::string src_name, tgt_name;
    for (const auto& [nm, c] : inst.categories) {
        if (c.get() == &inst.F->source())
            src_name = nm;
        if (c.get() == &inst.F->target())
            tgt_name = nm;
    }
    j["bundle"] = category_bundle_to_json(inst.field, cats);
    j["functor_f"] = functor_to_json(inst.f_name, src_name, tgt_name, *inst.F);
    j["functor_g"] = functor_to_json(inst.g_name, src_name, tgt_name, *inst.G);
    j["phi"] = transformation_to_json(*inst.phi, inst.f_name, inst.g_name);
    return j;
}

/* ---- certificates ---- */

Json report_to_json(const CertificateReport& rep) {
    Json j;
    Json ids = Json::array();
    for (const auto& r : rep.identities) {
        Json e;
        e["name"] = r.name;
        e["arity"] = r.arity;
        e["pass"] = r.pass;
        if (!r.pass)
            e["failure"] = r.detail;
        ids.push_back(e);
    }
    j["identities"] = ids;
    auto steps = [](const std::vector<StepProvenance>& v) {
        Json arr = Json::array();
        for (const auto& s : v) {
            Json e;
            e["m"] = s.m;
            e["psi"] = to_string(s.psi);
            e["psi_detail"] = s.psi_detail;
            e["eta"] = to_string(s.eta);
            e["eta_detail"] = s.eta_detail;
            arr.push_back(e);
        }
        return arr;
    };
    j["provenance"] = Json{{"left", steps(rep.left_steps)}, {"right", steps(rep.right_steps)}};
    j["notes"] = rep.notes;
    return j;
}

namespace {

CertificateReport report_from_json(const Json& j) {
    CertificateReport rep;
    for (const auto& e : j.value("identities", Json::array())) {
        IdentityResult r;
        r.name = e.value("name", "?");
        r.arity = e.value("arity", 0);
        r.pass = e.value("pass", false);
        r.detail = e.value("failure", "");
        rep.identities.push_back(r);
    }
    auto steps = [](const Json& arr) {
        std::vector<StepProvenance> out;
        for (const auto& e : arr) {
            StepProvenance s;
            s.m = e.value("m", 0);
            auto parse_variant = [](const std::string& v) {
                if (v == "verbatim") return StepVariant::Verbatim;
                if (v == "corrected") return StepVariant::Corrected;
                if (v == "oracle") return StepVariant::Oracle;
                throw ParseError("unknown provenance variant '" + v + "'");
            };
            s.psi = parse_variant(e.value("psi", "verbatim"));
            s.eta = parse_variant(e.value("eta", "verbatim"));
            s.psi_detail = e.value("psi_detail", "");
            s.eta_detail = e.value("eta_detail", "");
            out.push_back(s);
        }
        return out;
    };
    if (j.contains("provenance")) {
        rep.left_steps = steps(j["provenance"].value("left", Json::array()));
        rep.right_steps = steps(j["provenance"].value("right", Json::array()));
    }
    for (const auto& n : j.value("notes", Json::array()))
        rep.notes.push_back(n.get<std::string>());
    return rep;
}

}  // namespace

Json certificate_to_json(const Certificate& cert, const Instance& inst) {
    Json j;
    j["format"] = kCertificateFormat;
    j["field"] = inst.field.str();
    j["arity_bound"] = cert.arity_bound;
    j["instance"] = instance_to_json(inst);
    const DgCategory& D = cert.phi.tgt();
    Json sys = Json::object();
    for (const ObjId& x : cert.phi.src().objects()) {
        const ObjId fx = cert.phi.F().obj(x), gx = cert.phi.G().obj(x);
        Json e;
        e["psi"] = element_to_json(D.hom(gx, fx).space, cert.system.psi.at(x));
        e["h"] = element_to_json(D.hom(fx, fx).space, cert.system.h.at(x));
        e["p"] = element_to_json(D.hom(gx, gx).space, cert.system.p.at(x));
        sys[x] = e;
    }
    j["system"] = sys;
    j["psi"] = transformation_to_json(cert.psi, inst.g_name, inst.f_name);
    j["eta"] = transformation_to_json(cert.eta, inst.f_name, inst.f_name);
    j["omega"] = transformation_to_json(cert.omega, inst.g_name, inst.g_name);
    j["psi_prime"] = transformation_to_json(cert.psi_prime, inst.g_name, inst.f_name);
    j["omega_prime"] = transformation_to_json(cert.omega_prime, inst.g_name, inst.g_name);
    j["report"] = report_to_json(cert.report);
    Json inst_json = instance_to_json(inst);
    j["input_digests"] = Json{
        {"bundle", fnv1a_hex(canonical_dump(inst_json["bundle"]))},
        {"functor_f", fnv1a_hex(canonical_dump(inst_json["functor_f"]))},
        {"functor_g", fnv1a_hex(canonical_dump(inst_json["functor_g"]))},
        {"phi", fnv1a_hex(canonical_dump(inst_json["phi"]))},
    };
    return j;
}

LoadedCertificate certificate_from_json(const Json& j) {
    expect_format(j, kCertificateFormat, "certificate");
    const Json& ij = field_of(j, "instance", "certificate");
    LoadedCertificate out;
    out.instance = instance_from_json(field_of(ij, "bundle", "certificate instance"),
                                      field_of(ij, "functor_f", "certificate instance"),
                                      field_of(ij, "functor_g", "certificate instance"),
                                      field_of(ij, "phi", "certificate instance"));
    Instance& inst = out.instance;
    const DgCategory& D = inst.F->target();
    const DgCategory& C = inst.F->source();
    const int cert_arity = field_of(j, "arity_bound", "certificate").get<int>();
    auto cert = std::make_unique<Certificate>(Certificate{
        cert_arity,
        HomotopySystem{},
        truncated(*inst.phi, cert_arity),
        Transformation(inst.G.get(), inst.F.get(), 0, 0),
        Transformation(inst.F.get(), inst.F.get(), -1, 0),
        Transformation(inst.G.get(), inst.G.get(), -1, 0),
        Transformation(inst.G.get(), inst.F.get(), 0, 0),
        Transformation(inst.G.get(), inst.G.get(), -1, 0),
        CertificateReport{}});
    const Field f = inst.field;
    for (const auto& [x, e] : field_of(j, "system", "certificate").items()) {
        if (!C.has_object(x))
            throw ParseError("certificate system at unknown object '" + x + "'");
        const ObjId fx = inst.F->obj(x), gx = inst.G->obj(x);
        cert->system.psi[x] = element_from_json(field_of(e, "psi", "system"), D.hom(gx, fx).space,
                                                0, f, "system psi at " + x);
        cert->system.h[x] = element_from_json(field_of(e, "h", "system"), D.hom(fx, fx).space, -1,
                                              f, "system h at " + x);
        cert->system.p[x] = element_from_json(field_of(e, "p", "system"), D.hom(gx, gx).space, -1,
                                              f, "system p at " + x);
    }
    cert->psi = *transformation_from_json(field_of(j, "psi", "certificate"), inst.G.get(),
                                          inst.F.get());
    cert->eta = *transformation_from_json(field_of(j, "eta", "certificate"), inst.F.get(),
                                          inst.F.get());
    cert->omega = *transformation_from_json(field_of(j, "omega", "certificate"), inst.G.get(),
                                            inst.G.get());
    cert->psi_prime = *transformation_from_json(field_of(j, "psi_prime", "certificate"),
                                                inst.G.get(), inst.F.get());
    cert->omega_prime = *transformation_from_json(field_of(j, "omega_prime", "certificate"),
                                                  inst.G.get(), inst.G.get());
    cert->report = report_from_json(j.value("report", Json::object()));
    out.cert = std::move(cert);
    return out;
}

}  // namespace qinv
