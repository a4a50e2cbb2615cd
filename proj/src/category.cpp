#include "qinv/category.hpp"

#include <algorithm>
#include <sstream>

namespace qinv {

bool DgCategory::has_object(const ObjId& x) const {
    return std::find(objects_.begin(), objects_.end(), x) != objects_.end();
}

void DgCategory::add_object(const ObjId& x) {
    if (has_object(x))
        throw std::invalid_argument("duplicate object: " + x);
    objects_.push_back(x);
}

void DgCategory::set_hom(const ObjId& x, const ObjId& y, HomComplex hc) {
    if (!has_object(x) || !has_object(y))
        throw std::invalid_argument("set_hom on unknown object");
    homs_[{x, y}] = std::move(hc);
}

const HomComplex& DgCategory::hom(const ObjId& x, const ObjId& y) const {
    static const HomComplex* zero = nullptr;
    auto it = homs_.find({x, y});
    if (it != homs_.end())
        return it->second;
    if (!zero)
        zero = new HomComplex(zero_complex(field_));
    return *zero;
}

void DgCategory::set_composition(const ObjId& x, const ObjId& y, const ObjId& z,
                                 GenRef g, GenRef f, Element result) {
    const HomComplex& hxz = hom(x, z);
    if (result.degree != g.degree + f.degree)
        throw std::invalid_argument("composition entry not degree-additive");
    if (result.coeffs.size() != static_cast<std::size_t>(hxz.space.dim(result.degree)))
        throw std::invalid_argument("composition entry has wrong dimension");
    if (result.is_zero())
        return;
    comp_[{x, y, z}][{g, f}] = std::move(result);
}

void DgCategory::set_identity(const ObjId& x, Element id) {
    if (id.degree != 0)
        throw std::invalid_argument("identity must have degree 0");
    identities_[x] = std::move(id);
}

Element DgCategory::identity(const ObjId& x) const {
    auto it = identities_.find(x);
    if (it != identities_.end())
        return it->second;
    return zero_elem(x, x, 0);
}

const std::map<std::pair<GenRef, GenRef>, Element>*
DgCategory::composition_table(const ObjId& x, const ObjId& y, const ObjId& z) const {
    auto it = comp_.find(std::make_tuple(x, y, z));
    return it == comp_.end() ? nullptr : &it->second;
}

Element DgCategory::compose_elements(const ObjId& x, const ObjId& y, const ObjId& z,
                                     const Element& g, const Element& f) const {
    const HomComplex& hyz = hom(y, z);
    const HomComplex& hxy = hom(x, y);
    if (g.coeffs.size() != static_cast<std::size_t>(hyz.space.dim(g.degree)) ||
        f.coeffs.size() != static_cast<std::size_t>(hxy.space.dim(f.degree)))
        throw std::invalid_argument("compose_elements: object mismatch");
    Element out = zero_elem(x, z, g.degree + f.degree);
    const auto* table = composition_table(x, y, z);
    if (!table)
        return out;
    for (int i = 0; i < static_cast<int>(g.coeffs.size()); ++i) {
        if (g.coeffs[i].is_zero())
            continue;
        for (int j = 0; j < static_cast<int>(f.coeffs.size()); ++j) {
            if (f.coeffs[j].is_zero())
                continue;
            auto it = table->find({GenRef{g.degree, i}, GenRef{f.degree, j}});
            if (it == table->end())
                continue;
            out.add_scaled(it->second, g.coeffs[i] * f.coeffs[j]);
        }
    }
    return out;
}

std::vector<GenRef> DgCategory::flat_basis(const ObjId& x, const ObjId& y) const {
    std::vector<GenRef> out;
    const GradedSpace& s = hom(x, y).space;
    for (int d : s.support())
        for (int i = 0; i < s.dim(d); ++i)
            out.push_back(GenRef{d, i});
    return out;
}

Element DgCategory::basis_elem(const ObjId& x, const ObjId& y, GenRef r) const {
    return basis_element(hom(x, y).space, r.degree, r.index, field_);
}

Element DgCategory::zero_elem(const ObjId& x, const ObjId& y, int degree) const {
    return zero_element(hom(x, y).space, degree, field_);
}

const std::string& DgCategory::gen_name(const ObjId& x, const ObjId& y, GenRef r) const {
    return hom(x, y).space.generators(r.degree).at(r.index);
}

Element DgCategory::d(const ObjId& x, const ObjId& y, const Element& e) const {
    return hom(x, y).differential.apply(e);
}

namespace {

std::string el_str(const DgCategory& c, const ObjId& x, const ObjId& y, const Element& e) {
    std::ostringstream os;
    bool first = true;
    const auto& names = c.hom(x, y).space.generators(e.degree);
    for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
        if (e.coeffs[i].is_zero())
            continue;
        if (!first)
            os << " + ";
        os << e.coeffs[i].str() << "*" << names[i];
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

}  // namespace

ValidationReport validate_category(const DgCategory& c) {
    ValidationReport rep;
    const Field f = c.field();
    const Scalar minus_one = -Scalar::one(f);

    for (const ObjId& x : c.objects()) {
        for (const ObjId& y : c.objects()) {
            ComplexReport cr = validate_complex(c.hom(x, y));
            for (int d : cr.bad_degrees)
                rep.items.push_back({"d_squared",
                                     "Hom(" + x + "," + y + ") degree " + std::to_string(d)});
        }
    }

    // Leibniz on all basis pairs of all triples
    for (const ObjId& x : c.objects())
        for (const ObjId& y : c.objects())
            for (const ObjId& z : c.objects()) {
                for (GenRef gr : c.flat_basis(y, z))
                    for (GenRef fr : c.flat_basis(x, y)) {
                        Element g = c.basis_elem(y, z, gr);
                        Element fe = c.basis_elem(x, y, fr);
                        Element lhs = c.d(x, z, c.compose_elements(x, y, z, g, fe));
                        Element r1 = c.compose_elements(x, y, z, c.d(y, z, g), fe);
                        Element r2 = c.compose_elements(x, y, z, g, c.d(x, y, fe));
                        const bool odd = ((gr.degree % 2) + 2) % 2 == 1;
                        Element rhs = odd ? r1 - r2 : r1 + r2;
                        if (lhs != rhs)
                            rep.items.push_back(
                                {"leibniz", "triple (" + x + "," + y + "," + z + ") pair (g=" +
                                                c.gen_name(y, z, gr) + ", f=" + c.gen_name(x, y, fr) + ")"});
                    }
            }

    // associativity on all basis triples
    for (const ObjId& w : c.objects())
        for (const ObjId& x : c.objects())
            for (const ObjId& y : c.objects())
                for (const ObjId& z : c.objects()) {
                    for (GenRef hr : c.flat_basis(y, z))
                        for (GenRef gr : c.flat_basis(x, y))
                            for (GenRef fr : c.flat_basis(w, x)) {
                                Element h = c.basis_elem(y, z, hr);
                                Element g = c.basis_elem(x, y, gr);
                                Element fe = c.basis_elem(w, x, fr);
                                Element a = c.compose_elements(
                                    w, x, z, c.compose_elements(x, y, z, h, g), fe);
                                Element b = c.compose_elements(
                                    w, y, z, h, c.compose_elements(w, x, y, g, fe));
                                if (a != b)
                                    rep.items.push_back(
                                        {"associativity",
                                         "(" + w + "," + x + "," + y + "," + z + ") triple (" +
                                             c.gen_name(y, z, hr) + "," + c.gen_name(x, y, gr) +
                                             "," + c.gen_name(w, x, fr) + ")"});
                            }
                }

    // units
    for (const ObjId& x : c.objects()) {
        Element idx = c.identity(x);
        if (!c.d(x, x, idx).is_zero())
            rep.items.push_back({"unit", "d(id_" + x + ") != 0"});
        for (const ObjId& y : c.objects()) {
            for (GenRef ur : c.flat_basis(x, y)) {
                Element u = c.basis_elem(x, y, ur);
                Element right = c.compose_elements(x, x, y, u, idx);
                if (right != u)
                    rep.items.push_back({"unit", c.gen_name(x, y, ur) + " o id_" + x + " = " +
                                                     el_str(c, x, y, right)});
                Element left = c.compose_elements(x, y, y, c.identity(y), u);
                if (left != u)
                    rep.items.push_back({"unit", "id_" + y + " o " + c.gen_name(x, y, ur) + " = " +
                                                     el_str(c, x, y, left)});
            }
        }
    }
    return rep;
}

void DgFunctor::map_object(const ObjId& x, const ObjId& fx) {
    if (!src_->has_object(x) || !tgt_->has_object(fx))
        throw std::invalid_argument("functor object map on unknown object");
    object_map_[x] = fx;
}

void DgFunctor::set_hom_map(const ObjId& x, const ObjId& y, GradedMap m) {
    if (m.shift() != 0)
        throw std::invalid_argument("functor hom map must have shift 0");
    if (m.source() != src_->hom(x, y).space || m.target() != tgt_->hom(obj(x), obj(y)).space)
        throw std::invalid_argument("functor hom map spaces do not match");
    hom_maps_[{x, y}] = std::move(m);
}

const ObjId& DgFunctor::obj(const ObjId& x) const {
    auto it = object_map_.find(x);
    if (it == object_map_.end())
        throw std::invalid_argument("functor not defined on object " + x);
    return it->second;
}

const GradedMap& DgFunctor::hom_map(const ObjId& x, const ObjId& y) const {
    static GradedMap* empty = nullptr;
    auto it = hom_maps_.find({x, y});
    if (it != hom_maps_.end())
        return it->second;
    throw std::invalid_argument("functor has no hom map for (" + x + "," + y + ")");
}

Element DgFunctor::apply(const ObjId& x, const ObjId& y, const Element& e) const {
    auto it = hom_maps_.find({x, y});
    if (it == hom_maps_.end()) {
        // zero hom-complexes need no stored map
        if (src_->hom(x, y).space.total_dim() == 0)
            return tgt_->zero_elem(obj(x), obj(y), e.degree);
        throw std::invalid_argument("functor has no hom map for (" + x + "," + y + ")");
    }
    return it->second.apply(e);
}

ValidationReport validate_functor(const DgFunctor& fun) {
    ValidationReport rep;
    const DgCategory& C = fun.source();
    const DgCategory& D = fun.target();
    for (const ObjId& x : C.objects()) {
        for (const ObjId& y : C.objects()) {
            if (C.hom(x, y).space.total_dim() == 0)
                continue;
            const GradedMap& m = fun.hom_map(x, y);
            GradedMap dm = map_differential(m, C.hom(x, y), D.hom(fun.obj(x), fun.obj(y)));
            if (!dm.is_zero())
                rep.items.push_back({"closedness", "hom map (" + x + "," + y + ") is not closed"});
        }
    }
    for (const ObjId& x : C.objects())
        for (const ObjId& y : C.objects())
            for (const ObjId& z : C.objects())
                for (GenRef gr : C.flat_basis(y, z))
                    for (GenRef fr : C.flat_basis(x, y)) {
                        Element g = C.basis_elem(y, z, gr);
                        Element fe = C.basis_elem(x, y, fr);
                        Element lhs = fun.apply(x, z, C.compose_elements(x, y, z, g, fe));
                        Element rhs = D.compose_elements(fun.obj(x), fun.obj(y), fun.obj(z),
                                                         fun.apply(y, z, g), fun.apply(x, y, fe));
                        if (lhs != rhs)
                            rep.items.push_back(
                                {"composition", "F(g o f) != F(g) o F(f) at (" + x + "," + y + "," +
                                                    z + ") pair (" + C.gen_name(y, z, gr) + "," +
                                                    C.gen_name(x, y, fr) + ")"});
                    }
    for (const ObjId& x : C.objects()) {
        Element lhs = fun.apply(x, x, C.identity(x));
        Element rhs = D.identity(fun.obj(x));
        if (lhs != rhs)
            rep.items.push_back({"unit", "F(id_" + x + ") != id_" + fun.obj(x)});
    }
    return rep;
}

DgFunctor identity_functor(const DgCategory& c) {
    DgFunctor f(&c, &c);
    for (const ObjId& x : c.objects())
        f.map_object(x, x);
    for (const ObjId& x : c.objects())
        for (const ObjId& y : c.objects())
            if (c.hom(x, y).space.total_dim() > 0)
                f.set_hom_map(x, y, identity_map(c.hom(x, y).space, c.field()));
    return f;
}

DgFunctor constant_functor(const DgCategory& src, const DgCategory& tgt, const ObjId& at) {
    DgFunctor f(&src, &tgt);
    for (const ObjId& x : src.objects())
        f.map_object(x, at);
    const Element id_at = tgt.identity(at);
    for (const ObjId& x : src.objects())
        for (const ObjId& y : src.objects()) {
            const GradedSpace& s = src.hom(x, y).space;
            if (s.total_dim() == 0)
                continue;
            GradedMap m(0, s, tgt.hom(at, at).space, src.field());
            if (x == y) {
                // send a generator to its coefficient in id_x, times id_at
                const Element idx = src.identity(x);
                Matrix block(tgt.hom(at, at).space.dim(0), s.dim(0), src.field());
                for (int j = 0; j < s.dim(0); ++j)
                    for (std::size_t i = 0; i < id_at.coeffs.size(); ++i)
                        block.at(i, j) = idx.coeffs[j] * id_at.coeffs[i];
                if (s.dim(0) > 0 && tgt.hom(at, at).space.dim(0) > 0)
                    m.set_block(0, block);
            }
            f.set_hom_map(x, y, m);
        }
    return f;
}

}  // namespace qinv
