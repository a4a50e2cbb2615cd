#include "qinv/graded.hpp"

#include <algorithm>
#include <set>

namespace qinv {

GradedSpace::GradedSpace(std::map<int, std::vector<std::string>> basis) {
    std::set<std::string> seen;
    for (auto& [deg, names] : basis) {
        if (names.empty())
            continue;
        for (const auto& n : names)
            if (!seen.insert(n).second)
                throw std::invalid_argument("duplicate generator name: " + n);
        basis_[deg] = std::move(names);
    }
}

int GradedSpace::dim(int degree) const {
    auto it = basis_.find(degree);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

std::size_t GradedSpace::total_dim() const {
    std::size_t n = 0;
    for (const auto& [d, names] : basis_)
        n += names.size();
    return n;
}

const std::vector<std::string>& GradedSpace::generators(int degree) const {
    static const std::vector<std::string> empty;
    auto it = basis_.find(degree);
    return it == basis_.end() ? empty : it->second;
}

std::vector<int> GradedSpace::support() const {
    std::vector<int> out;
    for (const auto& [d, names] : basis_)
        out.push_back(d);
    return out;
}

std::pair<int, int> GradedSpace::locate(const std::string& name) const {
    for (const auto& [d, names] : basis_) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end())
            return {d, static_cast<int>(it - names.begin())};
    }
    throw std::invalid_argument("unknown generator: " + name);
}

bool GradedSpace::has_generator(const std::string& name) const {
    for (const auto& [d, names] : basis_)
        if (std::find(names.begin(), names.end(), name) != names.end())
            return true;
    return false;
}

bool Element::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero())
            return false;
    return true;
}

Element Element::operator+(const Element& o) const {
    if (degree != o.degree || coeffs.size() != o.coeffs.size())
        throw std::invalid_argument("adding elements of different degrees");
    Element r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        r.coeffs[i] += o.coeffs[i];
    return r;
}

Element Element::operator-(const Element& o) const {
    if (degree != o.degree || coeffs.size() != o.coeffs.size())
        throw std::invalid_argument("subtracting elements of different degrees");
    Element r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        r.coeffs[i] -= o.coeffs[i];
    return r;
}

Element Element::scaled(const Scalar& c) const {
    Element r = *this;
    for (auto& x : r.coeffs)
        x *= c;
    return r;
}

void Element::add_scaled(const Element& o, const Scalar& c) {
    if (degree != o.degree || coeffs.size() != o.coeffs.size())
        throw std::invalid_argument("add_scaled: degree mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (!o.coeffs[i].is_zero()) {
            Scalar t = o.coeffs[i];
            t *= c;
            coeffs[i] += t;
        }
}

Element zero_element(const GradedSpace& space, int degree, Field f) {
    return Element{degree, std::vector<Scalar>(space.dim(degree), Scalar::zero(f))};
}

Element basis_element(const GradedSpace& space, int degree, int index, Field f) {
    Element e = zero_element(space, degree, f);
    e.coeffs.at(index) = Scalar::one(f);
    return e;
}

GradedMap::GradedMap(int shift, GradedSpace source, GradedSpace target, Field f)
    : shift_(shift), source_(std::move(source)), target_(std::move(target)), field_(f) {}

Matrix GradedMap::block(int d) const {
    auto it = blocks_.find(d);
    if (it != blocks_.end())
        return it->second;
    return Matrix(target_.dim(d + shift_), source_.dim(d), field_);
}

void GradedMap::set_block(int d, Matrix m) {
    if (m.rows() != static_cast<std::size_t>(target_.dim(d + shift_)) ||
        m.cols() != static_cast<std::size_t>(source_.dim(d)))
        throw std::invalid_argument("block dimensions do not match the bases");
    if (m.field() != field_)
        throw FieldMismatch("block over a different field");
    if (m.is_zero())
        blocks_.erase(d);
    else
        blocks_[d] = std::move(m);
}

bool GradedMap::is_zero() const {
    for (const auto& [d, m] : blocks_)
        if (!m.is_zero())
            return false;
    return true;
}

bool GradedMap::operator==(const GradedMap& o) const {
    if (shift_ != o.shift_ || source_ != o.source_ || target_ != o.target_)
        return false;
    std::set<int> degs;
    for (const auto& [d, m] : blocks_) degs.insert(d);
    for (const auto& [d, m] : o.blocks_) degs.insert(d);
    for (int d : degs)
        if (block(d) != o.block(d))
            return false;
    return true;
}

Element GradedMap::apply(const Element& e) const {
    if (e.coeffs.size() != static_cast<std::size_t>(source_.dim(e.degree)))
        throw std::invalid_argument("element does not live in the map's source");
    Element out{e.degree + shift_,
                std::vector<Scalar>(target_.dim(e.degree + shift_), Scalar::zero(field_))};
    auto it = blocks_.find(e.degree);
    if (it == blocks_.end())
        return out;
    out.coeffs = it->second.apply(e.coeffs);
    return out;
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
    if (shift_ != o.shift_ || source_ != o.source_ || target_ != o.target_)
        throw std::invalid_argument("graded map sum: space or shift mismatch");
    GradedMap r = *this;
    for (const auto& [d, m] : o.blocks_)
        r.set_block(d, r.block(d) + m);
    return r;
}

GradedMap GradedMap::operator-(const GradedMap& o) const {
    return *this + o.scaled(-Scalar::one(field_));
}

GradedMap GradedMap::scaled(const Scalar& c) const {
    GradedMap r(shift_, source_, target_, field_);
    for (const auto& [d, m] : blocks_)
        r.set_block(d, m.scaled(c));
    return r;
}

GradedMap identity_map(const GradedSpace& space, Field f) {
    GradedMap m(0, space, space, f);
    for (int d : space.support())
        m.set_block(d, Matrix::identity(space.dim(d), f));
    return m;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
    if (g.source() != f.target())
        throw std::invalid_argument("compose: source of g differs from target of f");
    if (g.field() != f.field())
        throw FieldMismatch("compose over different fields");
    GradedMap r(g.shift() + f.shift(), f.source(), g.target(), f.field());
    for (const auto& [d, fb] : f.blocks()) {
        Matrix gb = g.block(d + f.shift());
        if (gb.rows() == 0 || gb.cols() == 0)
            continue;
        Matrix prod = gb * fb;
        if (!prod.is_zero())
            r.set_block(d, r.block(d) + prod);
    }
    return r;
}

HomComplex zero_complex(Field f) {
    GradedSpace s;
    return HomComplex{s, GradedMap(1, s, s, f)};
}

GradedMap map_differential(const GradedMap& f, const HomComplex& src, const HomComplex& tgt) {
    if (src.space != f.source() || tgt.space != f.target())
        throw std::invalid_argument("map_differential: complexes do not match the map");
    GradedMap a = compose(tgt.differential, f);
    GradedMap b = compose(f, src.differential);
    const bool odd = ((f.shift() % 2) + 2) % 2 == 1;
    return odd ? a + b : a - b;
}

ComplexReport validate_complex(const HomComplex& c) {
    ComplexReport rep;
    GradedMap dd = compose(c.differential, c.differential);
    for (const auto& [d, m] : dd.blocks())
        if (!m.is_zero())
            rep.bad_degrees.push_back(d);
    return rep;
}

std::map<int, long> cohomology_dims(const HomComplex& c) {
    if (!validate_complex(c).valid())
        throw std::invalid_argument("cohomology of an invalid complex");
    std::map<int, long> out;
    for (int d : c.space.support()) {
        const long dim_d = c.space.dim(d);
        const Matrix dn = c.differential.block(d);
        const long rank_n = (dn.rows() == 0) ? 0 : static_cast<long>(rank(dn));
        const Matrix dprev = c.differential.block(d - 1);
        const long rank_prev = (dprev.rows() == 0 || dprev.cols() == 0)
                                   ? 0
                                   : static_cast<long>(rank(dprev));
        const long h = dim_d - rank_n - rank_prev;
        if (h != 0)
            out[d] = h;
    }
    return out;
}

}  // namespace qinv
