#include "liebox/models.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace liebox {

namespace {

using json = nlohmann::json;

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial one(int n) { return Polynomial::constant(n, Rational(1)); }

Model heisenberg()
{
    // X1 = dx - y/2 dz, X2 = dy + x/2 dz
    const int n = 3;
    Model m{"heisenberg", "first Heisenberg group, exponential coordinates", n, 2, 2, {}};
    m.fields.push_back(PolyMap({one(n), Polynomial(n), var(n, 1) * Rational(-1, 2)}));
    m.fields.push_back(PolyMap({Polynomial(n), one(n), var(n, 0) * Rational(1, 2)}));
    return m;
}

Model grushin()
{
    // X1 = dx, X2 = x dy
    const int n = 2;
    Model m{"grushin", "Grushin plane, degenerate on x = 0", n, 2, 2, {}};
    m.fields.push_back(PolyMap({one(n), Polynomial(n)}));
    m.fields.push_back(PolyMap({Polynomial(n), var(n, 0)}));
    return m;
}

Model engel()
{
    // X1 = d1, X2 = d2 + x1 d3 + x1^2/2 d4
    const int n = 4;
    Model m{"engel", "Engel group, step 3", n, 2, 3, {}};
    m.fields.push_back(PolyMap({one(n), Polynomial(n), Polynomial(n), Polynomial(n)}));
    m.fields.push_back(PolyMap({Polynomial(n), one(n), var(n, 0), var(n, 0) * var(n, 0) * Rational(1, 2)}));
    return m;
}

Model martinet()
{
    // X1 = dx + y^2/2 dz, X2 = dy
    const int n = 3;
    Model m{"martinet", "Martinet distribution, step 3 on y = 0", n, 2, 3, {}};
    m.fields.push_back(PolyMap({one(n), Polynomial(n), var(n, 1) * var(n, 1) * Rational(1, 2)}));
    m.fields.push_back(PolyMap({Polynomial(n), one(n), Polynomial(n)}));
    return m;
}

Model flat(int n)
{
    Model m{"flat" + std::to_string(n), "Euclidean R^n with coordinate fields", n, n, 1, {}};
    for (int k = 0; k < n; ++k) {
        PolyMap f(n);
        f[k] = one(n);
        m.fields.push_back(f);
    }
    return m;
}

Polynomial parse_component(const json& terms, int n)
{
    Polynomial p(n);
    for (const auto& t : terms) {
        auto exps = t.at("exps").get<std::vector<int>>();
        if (static_cast<int>(exps.size()) != n)
            throw std::invalid_argument("model: exponent vector of length " + std::to_string(exps.size()) +
                                        ", expected " + std::to_string(n));
        for (int e : exps)
            if (e < 0)
                throw std::invalid_argument("model: negative exponent");
        const auto& c = t.at("coeff");
        Rational q = c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>());
        p.add_term(exps, q);
    }
    return p;
}

}  // namespace

std::vector<std::string> builtin_model_names()
{
    return {"heisenberg", "grushin", "engel", "martinet", "flat2", "flat3"};
}

Model builtin_model(std::string_view name)
{
    if (name == "heisenberg")
        return heisenberg();
    if (name == "grushin")
        return grushin();
    if (name == "engel")
        return engel();
    if (name == "martinet")
        return martinet();
    if (name == "flat2")
        return flat(2);
    if (name == "flat3")
        return flat(3);
    throw UnknownModel("unknown model '" + std::string(name) + "'");
}

Model parse_model_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model: ") + e.what());
    }
    try {
        Model m;
        m.name = j.value("name", std::string("custom"));
        m.description = j.value("description", std::string());
        m.n = j.at("n").get<int>();
        m.m = j.at("m").get<int>();
        m.s = j.at("s").get<int>();
        if (m.n < 1 || m.m < 1 || m.s < 1)
            throw std::invalid_argument("model: n, m, s must be positive");
        const auto& fields = j.at("fields");
        if (!fields.is_array() || static_cast<int>(fields.size()) != m.m)
            throw std::invalid_argument("model: expected " + std::to_string(m.m) + " fields");
        for (const auto& f : fields) {
            if (!f.is_array() || static_cast<int>(f.size()) != m.n)
                throw std::invalid_argument("model: each field needs " + std::to_string(m.n) + " components");
            std::vector<Polynomial> comps;
            for (const auto& c : f)
                comps.push_back(parse_component(c, m.n));
            m.fields.emplace_back(std::move(comps));
        }
        return m;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model: ") + e.what());
    }
}

Model load_model_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw UnknownModel("cannot open model file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

std::string model_to_json(const Model& model)
{
    json j;
    j["name"] = model.name;
    if (!model.description.empty())
        j["description"] = model.description;
    j["n"] = model.n;
    j["m"] = model.m;
    j["s"] = model.s;
    json fields = json::array();
    for (const auto& f : model.fields) {
        json comps = json::array();
        for (const auto& c : f.components()) {
            json terms = json::array();
            for (const auto& [e, q] : c.terms())
                terms.push_back({{"exps", e}, {"coeff", to_string(q)}});
            comps.push_back(terms);
        }
        fields.push_back(comps);
    }
    j["fields"] = fields;
    return j.dump(2);
}

Model resolve_model(const std::string& name_or_path)
{
    for (const auto& n : builtin_model_names())
        if (n == name_or_path)
            return builtin_model(n);
    if (name_or_path.find(".json") != std::string::npos || name_or_path.find('/') != std::string::npos)
        return load_model_file(name_or_path);
    throw UnknownModel("unknown model '" + name_or_path + "'");
}

VectorFieldSystem make_system(const Model& model, const FlowOptions& options)
{
    if (static_cast<int>(model.fields.size()) != model.m)
        throw std::invalid_argument("model: field count differs from m");
    return VectorFieldSystem(model.name, model.fields, model.s, options);
}

}  // namespace liebox
