#include "cli.hpp"

#include "criteria.hpp"
#include "parse.hpp"

#include "liebox/ballbox.hpp"
#include "liebox/free_lie.hpp"
#include "liebox/linalg_mp.hpp"
#include "liebox/metric.hpp"
#include "liebox/models.hpp"
#include "liebox/nc_poly.hpp"
#include "liebox/perm_words.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef LIEBOX_VERSION
#define LIEBOX_VERSION "unknown"
#endif

namespace liebox::cli {

namespace {

using json = nlohmann::ordered_json;

// Raised by a command for malformed input that CLI11 cannot see.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string format;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool no_timestamp = false;
    std::string config;
    std::string output;
};

struct Output {
    json result = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool pass = true;
};

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

json to_json(const Eigen::VectorXd& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

json to_json(const Eigen::MatrixXd& m)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        a.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
    return a;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (cell.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": not a number: \"" + cell + "\"");
        }
    }
    return out;
}

Eigen::VectorXd parse_point(const std::string& text, int dim, const char* what)
{
    auto v = parse_list(text, what);
    if (static_cast<int>(v.size()) != dim)
        throw UsageError(std::string(what) + ": expected " + std::to_string(dim) + " coordinates, got " +
                         std::to_string(v.size()));
    return to_vector(v);
}

std::vector<int> parse_indices(const std::string& text, const char* what)
{
    std::vector<int> out;
    for (double d : parse_list(text, what)) {
        if (d != std::floor(d))
            throw UsageError(std::string(what) + ": indices must be integers");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

// Flattens nested JSON into key,value rows for CSV output of commands that
// have no natural table.
void flatten(const json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else if (j.is_string()) {
        rows.push_back({prefix, j.get<std::string>()});
    } else {
        rows.push_back({prefix, j.dump()});
    }
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string utc_timestamp()
{
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json option_echo(const CLI::App* app)
{
    json cfg = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_single_name() == "help" || opt->get_single_name() == "config" || opt->get_single_name() == "output")
            continue;
        const auto& res = opt->results();
        std::string value;
        if (!res.empty()) {
            value = res.back();
        } else {
            value = opt->get_default_str();
        }
        if (opt->get_type_size() == 0)
            cfg[opt->get_single_name()] = opt->count() > 0;
        else
            cfg[opt->get_single_name()] = value;
    }
    return cfg;
}

void emit(const Output& o, const std::string& command, const std::string& format, const Common& common,
          const CLI::App& root, const CLI::App& sub, std::ostream& out)
{
    json cfg = option_echo(&root);
    cfg.update(option_echo(&sub));
    cfg["format"] = format;
    std::ostringstream body;
    if (format == "json") {
        json doc = json::object();
        doc["liebox"] = LIEBOX_VERSION;
        doc["command"] = command;
        doc["config"] = cfg;
        if (!common.no_timestamp)
            doc["timestamp"] = utc_timestamp();
        doc["pass"] = o.pass;
        doc["result"] = o.result;
        body << doc.dump(2) << "\n";
    } else {
        body << "# liebox " << LIEBOX_VERSION << " " << command << " " << cfg.dump();
        if (!common.no_timestamp)
            body << " " << utc_timestamp();
        body << "\n";
        auto header = o.header;
        auto rows = o.rows;
        if (header.empty()) {
            header = {"key", "value"};
            flatten(o.result, "", rows);
        }
        for (std::size_t i = 0; i < header.size(); ++i)
            body << (i ? "," : "") << csv_cell(header[i]);
        body << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                body << (i ? "," : "") << csv_cell(r[i]);
            body << "\n";
        }
    }
    if (common.output.empty()) {
        out << body.str();
    } else {
        std::ofstream f(common.output);
        if (!f)
            throw UsageError("cannot write " + common.output);
        f << body.str();
    }
}

// Config file: a JSON object. Top-level scalar keys apply to every command;
// an object under the command's name applies to that command only. Values
// become flags placed before the user's own, and the last value wins.
std::vector<std::string> config_args(const std::string& path, const std::string& command)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object())
        throw UsageError("config " + path + ": expected a JSON object");
    std::vector<std::string> out;
    auto add = [&out](const std::string& key, const json& v) {
        if (v.is_boolean()) {
            if (v.get<bool>())
                out.push_back("--" + key);
            return;
        }
        std::string value;
        if (v.is_string()) {
            value = v.get<std::string>();
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                value += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
        } else {
            value = v.dump();
        }
        out.push_back("--" + key + "=" + value);
    };
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.value().is_object()) {
            if (it.key() == command)
                for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
                    add(jt.key(), jt.value());
        } else {
            add(it.key(), it.value());
        }
    }
    return out;
}

struct ModelFlags {
    std::string model = "heisenberg";
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double horizon = 10.0;

    void attach(CLI::App* sub)
    {
        sub->add_option("--model", model, "Built-in model name or path to a JSON model file");
        sub->add_option("--abs-tol", abs_tol, "ODE absolute tolerance");
        sub->add_option("--rel-tol", rel_tol, "ODE relative tolerance");
        sub->add_option("--horizon", horizon, "Largest admissible |t| for one flow");
    }
    VectorFieldSystem system() const
    {
        FlowOptions fo;
        fo.abs_tol = abs_tol;
        fo.rel_tol = rel_tol;
        fo.horizon = horizon;
        return make_system(resolve_model(model), fo);
    }
};

json frame_words(const CommutatorFrame& F, const std::vector<int>& indices)
{
    json a = json::array();
    for (int i : indices)
        a.push_back(F.word(i).str());
    return a;
}

std::vector<Word> all_words(int m, int len)
{
    std::vector<Word> out{Word{}};
    for (int k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : out)
            for (int a = 1; a <= m; ++a) {
                auto v = w;
                v.push_back(a);
                next.push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"liebox: nested commutators, identities and sub-Riemannian experiments", "liebox"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(LIEBOX_VERSION));

    Common common;
    app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", common.seed, "Random seed");
    app.add_option("--workers", common.workers, "Worker threads for sampling (0 = all cores)");
    app.add_flag("--no-timestamp", common.no_timestamp, "Leave the timestamp out of reports");
    app.add_option("--config", common.config, "JSON config file; flags given on the command line win");
    app.add_option("--output,-o", common.output, "Write the report to this file instead of stdout");

    std::function<Output()> action;
    std::string default_format = "json";

    // pi-table
    int order = 3, max_order = kDefaultMaxPiOrder;
    auto* pi = app.add_subcommand("pi-table", "Coefficients pi_l(sigma) of the nested commutator expansion");
    pi->add_option("--order", order, "Order l")->required();
    pi->add_option("--max-order", max_order, "Raise the order cap (at most 10)");
    pi->callback([&] {
        default_format = "csv";
        action = [&] {
            Output o;
            const auto& table = pi_table(order, max_order);
            o.header = {"permutation", "coefficient"};
            json rows = json::array();
            int nonzero = 0;
            for (std::size_t r = 0; r < table.size(); ++r) {
                auto sigma = Perm::unrank(order, r);
                int c = table.coefficient_by_rank(r);
                nonzero += c != 0;
                o.rows.push_back({sigma.str(), std::to_string(c)});
                rows.push_back({{"permutation", sigma.str()}, {"coefficient", c}});
            }
            o.result["order"] = order;
            o.result["nonzero"] = nonzero;
            o.result["rows"] = rows;
            return o;
        };
    });

    // identities
    std::string family;
    int max_degree = 4, alphabet = 3, max_exponent_sum = 4;
    auto* ids = app.add_subcommand("identities", "Exhaustive exact checks of the commutator identity families");
    ids->add_option("--family", family, "Identity family")
        ->required()
        ->check(CLI::IsMember({"otto", "j2", "f", "baker", "giochetto", "jacobi", "signed"}));
    ids->add_option("--max-degree", max_degree, "Largest total word length");
    ids->add_option("--alphabet", alphabet, "Alphabet size m");
    ids->add_option("--max-exponent-sum", max_exponent_sum, "Largest b_1 + ... + b_p for the f family");
    ids->callback([&] {
        action = [&] {
            if (alphabet < 1 || max_degree < 1)
                throw UsageError("identities: need --alphabet >= 1 and --max-degree >= 1");
            Output o;
            o.header = {"family", "instance", "pass", "residual_terms"};
            json rows = json::array();
            std::size_t failed = 0;
            auto record = [&](const std::string& instance, const WordSum& r) {
                const bool ok = r.is_zero();
                failed += !ok;
                o.rows.push_back({family, instance, ok ? "1" : "0", std::to_string(r.size())});
                rows.push_back({{"instance", instance}, {"pass", ok}, {"residual_terms", r.size()}});
            };
            if (family == "otto") {
                for (int lv = 1; lv < max_degree; ++lv)
                    for (const auto& v : all_words(alphabet, lv))
                        for (int lw = 1; lv + lw <= max_degree; ++lw)
                            for (const auto& w : all_words(alphabet, lw))
                                record("v=" + v.str() + " w=" + w.str(), check_generalized_jacobi(v, w));
            } else if (family == "j2") {
                for (int len = 2; len <= max_degree; ++len)
                    for (const auto& v : all_words(alphabet, len))
                        record("v=" + v.str(), check_J2(v));
            } else if (family == "jacobi") {
                for (int a = 1; a <= max_degree - 2; ++a)
                    for (int b = 1; a + b <= max_degree - 1; ++b)
                        for (int c = 1; a + b + c <= max_degree; ++c)
                            for (const auto& u : all_words(alphabet, a))
                                for (const auto& v : all_words(alphabet, b))
                                    for (const auto& w : all_words(alphabet, c))
                                        record(u.str() + "," + v.str() + "," + w.str(), check_jacobi(u, v, w));
            } else if (family == "signed") {
                for (int len = 1; len <= max_degree; ++len)
                    for (const auto& v : all_words(alphabet, len))
                        record("v=" + v.str(), signed_expansion(v) - expand_nested(v));
            } else if (family == "baker") {
                if (alphabet < 2)
                    throw UsageError("identities: the baker family needs --alphabet >= 2");
                for (int a = 1; a <= alphabet; ++a)
                    for (int b = 1; b <= alphabet; ++b)
                        if (a != b)
                            for (const auto& r : check_baker(a, b))
                                record(r.name + " a=" + std::to_string(a) + " b=" + std::to_string(b), r.residual);
            } else if (family == "giochetto") {
                for (int len = 2; len < max_degree; ++len)
                    for (const auto& v : all_words(alphabet, len))
                        for (int w = 1; w <= alphabet; ++w)
                            record("v=" + v.str() + " w=" + std::to_string(w), check_giochetto(v, w));
            } else {
                for (int l = 2; l <= max_degree; ++l)
                    for (const auto& v : all_words(alphabet, l))
                        for (int p = 1; p < l; ++p) {
                            // exponent vectors b_1..b_p >= 0 with 1 <= sum <= max_exponent_sum
                            std::vector<int> b(static_cast<std::size_t>(p), 0);
                            while (true) {
                                std::size_t k = 0;
                                while (k < b.size()) {
                                    ++b[k];
                                    int sum = 0;
                                    for (int x : b)
                                        sum += x;
                                    if (sum <= max_exponent_sum)
                                        break;
                                    b[k] = 0;
                                    ++k;
                                }
                                if (k == b.size())
                                    break;
                                std::vector<Word> ws{Word{}};
                                for (int a = 1; a <= alphabet; ++a)
                                    ws.push_back(Word{a});
                                for (const auto& w : ws)
                                    record("v=" + v.str() + " b=" + join(b) + " w=" + w.str(), check_F(b, v, w));
                            }
                        }
            }
            o.pass = failed == 0;
            o.result["family"] = family;
            o.result["instances"] = o.rows.size();
            o.result["failed"] = failed;
            o.result["rows"] = rows;
            return o;
        };
    });

    // witness
    std::string poly_path, expect;
    auto* wit = app.add_subcommand("witness", "Triviality test for a noncommutative polynomial");
    wit->add_option("--poly", poly_path, "JSON file {degree, alphabet, terms: [{word, coeff}]}")->required();
    wit->add_option("--expect", expect, "Fail unless the verdict matches")
        ->check(CLI::IsMember({"trivial", "nontrivial"}));
    wit->callback([&] {
        action = [&] {
            std::ifstream in(poly_path);
            if (!in)
                throw UsageError("cannot open " + poly_path);
            NCPoly q;
            try {
                auto doc = nlohmann::json::parse(in);
                const int p = doc.at("degree").get<int>();
                const int m = doc.at("alphabet").get<int>();
                q = NCPoly(m);
                for (const auto& t : doc.at("terms")) {
                    auto letters = t.at("word").get<std::vector<int>>();
                    if (static_cast<int>(letters.size()) != p)
                        throw UsageError("witness: word length differs from degree");
                    Word w{std::span<const int>(letters)};
                    w.check_alphabet(m);
                    const auto& c = t.at("coeff");
                    q.add(w, c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>()));
                }
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(std::string("witness: ") + e.what());
            }
            auto r = is_trivial(q);
            Output o;
            o.result["polynomial"] = q.str();
            o.result["trivial"] = r.trivial;
            o.result["components"] = r.components;
            o.result["multilinear_evaluations"] = r.multilinear_evaluations;
            if (r.certificate) {
                const auto& c = *r.certificate;
                o.result["certificate"] = {{"component_multidegree", c.component_multidegree},
                                           {"multilinear", c.multilinear.str()},
                                           {"relabel", c.relabel},
                                           {"sigma", c.sigma.str()},
                                           {"coefficient", to_string(c.coefficient)}};
            }
            if (q.is_multilinear() && !q.is_zero()) {
                json coeffs = json::object();
                for (const auto& [sigma, b] : witness_coefficients(q))
                    coeffs[sigma.str()] = to_string(b);
                o.result["witness_coefficients"] = coeffs;
            }
            if (!expect.empty())
                o.pass = (expect == "trivial") == r.trivial;
            return o;
        };
    });

    // bracket
    ModelFlags mf;
    std::string word_text = "12", at_text, psi_text;
    auto* br = app.add_subcommand("bracket", "Exact commutator coefficients f_w and their value at a point");
    mf.attach(br);
    br->add_option("--word", word_text, "Word w, e.g. 12 or 1,2");
    br->add_option("--at", at_text, "Point x, comma separated")->required();
    br->add_option("--psi", psi_text, "Optional test function, e.g. \"x3 + x1*x2\"");
    br->callback([&] {
        action = [&] {
            auto sys = mf.system();
            Word w = Word::parse(word_text);
            w.check_alphabet(sys.fields_count());
            auto x = parse_point(at_text, sys.dim(), "--at");
            PolyMap f = w.size() <= static_cast<std::size_t>(sys.step()) ? sys.commutator_coeffs(w)
                                                                          : commutator_coeffs_uncached(sys.fields(), w);
            Output o;
            json comps = json::array();
            for (const auto& c : f.components())
                comps.push_back(c.str());
            o.result["model"] = sys.name();
            o.result["word"] = w.str();
            o.result["coefficients"] = comps;
            o.result["value"] = to_json(f.evaluate(x));
            if (!psi_text.empty()) {
                auto psi = parse_polynomial(psi_text, sys.dim());
                auto sharp = directional_derivative(f, psi);
                o.result["psi"] = psi.str();
                o.result["sharp_derivative"] = sharp.str();
                o.result["sharp_value"] = sharp.evaluate(x);
                const bool agree = sys.nested_derivative(w, psi) == sharp;
                o.result["iterated_form_agrees"] = agree;
                o.pass = agree;
            }
            return o;
        };
    });

    // flow
    std::string steps_text;
    int field = 1;
    double time = 0.0;
    auto* fl = app.add_subcommand("flow", "Flows e^{tX_j} and their compositions");
    mf.attach(fl);
    fl->add_option("--at", at_text, "Start point")->required();
    fl->add_option("--field", field, "Field index j (negative for -X_j)");
    fl->add_option("--time", time, "Flow time t");
    fl->add_option("--steps", steps_text, "Composition \"j:t,j:t,...\", first entry acts first");
    fl->callback([&] {
        action = [&] {
            auto sys = mf.system();
            auto x = parse_point(at_text, sys.dim(), "--at");
            std::vector<FlowStep> steps;
            if (steps_text.empty()) {
                steps.push_back({field, time});
            } else {
                std::stringstream ss(steps_text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    auto colon = item.find(':');
                    if (colon == std::string::npos)
                        throw UsageError("--steps: expected j:t, got \"" + item + "\"");
                    try {
                        steps.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
                    } catch (const std::logic_error&) {
                        throw UsageError("--steps: bad entry \"" + item + "\"");
                    }
                }
            }
            for (const auto& s : steps)
                if (s.field == 0 || std::abs(s.field) > sys.fields_count())
                    throw UsageError("flow: field index out of range");
            auto end = sys.compose(steps, x);
            auto back = sys.compose(inverse_steps(steps), end);
            Output o;
            json js = json::array();
            for (const auto& s : steps)
                js.push_back({{"field", s.field}, {"time", s.time}});
            o.result["model"] = sys.name();
            o.result["steps"] = js;
            o.result["start"] = to_json(x);
            o.result["end"] = to_json(end);
            o.result["reversal_error"] = (back - x).norm();
            return o;
        };
    });

    // limit-check
    double tmin = 1e-3, tmax = 1e-1, slope_tol = 0.2;
    int samples_t = 8;
    auto* lc = app.add_subcommand("limit-check", "Convergence of the flow quotient to f_w . grad psi");
    mf.attach(lc);
    lc->add_option("--word", word_text, "Word w");
    lc->add_option("--psi", psi_text, "Test function, e.g. x3")->required();
    lc->add_option("--at", at_text, "Point x")->required();
    lc->add_option("--tmin", tmin, "Smallest t");
    lc->add_option("--tmax", tmax, "Largest t");
    lc->add_option("--samples", samples_t, "Geometric t samples (at least 6)");
    lc->add_option("--slope-tol", slope_tol, "Accepted deviation of the log-log slope from 1");
    lc->callback([&] {
        action = [&] {
            auto sys = mf.system();
            Word w = Word::parse(word_text);
            w.check_alphabet(sys.fields_count());
            auto x = parse_point(at_text, sys.dim(), "--at");
            auto psi = parse_polynomial(psi_text, sys.dim());
            if (samples_t < 6 || !(tmin > 0 && tmax > tmin))
                throw UsageError("limit-check: need --samples >= 6 and 0 < tmin < tmax");
            auto ts = geometric_samples(tmin, tmax, samples_t);
            auto fit = bracket_limit_fit(sys, w, psi, x, ts);
            Output o;
            o.header = {"t", "quotient", "error"};
            json rows = json::array();
            double max_err = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                o.rows.push_back({num(ts[i]), num(fit.values[i]), num(fit.errors[i])});
                rows.push_back({{"t", ts[i]}, {"quotient", fit.values[i]}, {"error", fit.errors[i]}});
                max_err = std::max(max_err, fit.errors[i]);
            }
            const bool slope_ok = std::abs(fit.slope - 1.0) <= slope_tol;
            o.result["exact"] = fit.exact;
            o.result["slope"] = finite_or_null(fit.slope);
            o.result["slope_ok"] = slope_ok;
            o.result["roundoff_limited"] = max_err < 1e-12 * std::max(1.0, std::abs(fit.exact));
            o.result["rows"] = rows;
            o.pass = slope_ok;
            return o;
        };
    });

    // emap
    std::string frame_text, center_text, h_text;
    double radius = 0.5;
    auto* em = app.add_subcommand("emap", "Almost exponential map E_{I,x,r}(h) and its Jacobian");
    mf.attach(em);
    em->add_option("--frame", frame_text, "Frame indices I (default: the maximal frame)");
    em->add_option("--center", center_text, "Center x")->required();
    em->add_option("--radius", radius, "Scale r");
    em->add_option("--coords", h_text, "Box coordinates h (default 0)");
    em->callback([&] {
        action = [&] {
            CommutatorFrame F(mf.system());
            auto x = parse_point(center_text, F.dim(), "--center");
            std::vector<int> I = frame_text.empty() ? select_maximal(F, x, radius).indices
                                                    : parse_indices(frame_text, "--frame");
            if (static_cast<int>(I.size()) != F.dim())
                throw UsageError("emap: the frame needs n indices");
            for (int i : I)
                if (i < 1 || i > F.size())
                    throw UsageError("emap: frame index out of range");
            std::vector<double> h = h_text.empty() ? std::vector<double>(static_cast<std::size_t>(F.dim()), 0.0)
                                                   : parse_list(h_text, "--h");
            if (static_cast<int>(h.size()) != F.dim())
                throw UsageError("emap: --coords needs n coordinates");
            auto J = jacobian_e(F, I, x, radius, h);
            std::vector<int> degrees;
            for (int i : I)
                degrees.push_back(F.degree(i));
            Output o;
            o.result["frame"] = I;
            o.result["words"] = frame_words(F, I);
            o.result["point"] = to_json(J.point);
            o.result["jacobian"] = to_json(J.jacobian);
            o.result["det"] = J.det;
            o.result["box_norm"] = box_norm(h, degrees);
            o.result["lambda_scaled"] = lambda_I(F, I, x) * std::pow(radius, F.degree(I));
            return o;
        };
    });

    // ballbox
    double eta = 0.5;
    InclusionOptions inc;
    auto* bb = app.add_subcommand("ballbox", "Maximal frame selection and the ball-box inclusion experiment");
    mf.attach(bb);
    bb->add_option("--center", center_text, "Center x")->required();
    bb->add_option("--radius", radius, "Radius r");
    bb->add_option("--eta", eta, "Maximality threshold");
    bb->add_option("--eps", inc.eps, "Box size epsilon");
    bb->add_option("--c", inc.c, "Ball constant c in rho < c eps^s r");
    bb->add_option("--samples", inc.samples, "Inclusion targets");
    bb->callback([&] {
        action = [&] {
            CommutatorFrame F(mf.system());
            auto x = parse_point(center_text, F.dim(), "--center");
            auto tri = select_maximal(F, x, radius, eta);
            inc.seed = common.seed;
            Output o;
            o.result["frame"] = tri.indices;
            o.result["words"] = frame_words(F, tri.indices);
            o.result["lambda"] = tri.lambda;
            o.result["score"] = tri.score;
            o.result["max_score"] = tri.max_score;
            o.result["runner_up"] = tri.runner_up;
            o.result["certified"] = tri.certified;
            json lam = json::array();
            for (const auto& e : lambda_vector(F, x, radius, 10))
                lam.push_back({{"frame", e.indices}, {"lambda", e.lambda}, {"scaled", e.scaled}});
            o.result["top_lambda"] = lam;
            auto rep = inclusion_check(F, tri, inc);
            o.result["inclusion"] = {{"targets", rep.targets},
                                     {"solved", rep.solved},
                                     {"diverged", rep.diverged},
                                     {"solve_fraction", rep.solve_fraction},
                                     {"max_residual", rep.max_residual},
                                     {"max_box_norm", rep.max_box_norm},
                                     {"rho_bound", rep.rho_bound},
                                     {"collisions", rep.collisions},
                                     {"min_separation_ratio", rep.min_separation_ratio}};
            o.pass = tri.certified && rep.solve_fraction == 1.0;
            return o;
        };
    });

    // distance
    std::string kind_text = "cc", from_text, to_text;
    DistanceOptions dopt;
    auto* di = app.add_subcommand("distance", "Upper-bound estimates of the fl, cc and rho distances");
    mf.attach(di);
    di->add_option("--kind", kind_text, "fl, cc or rho")->check(CLI::IsMember({"fl", "cc", "rho"}));
    di->add_option("--from", from_text, "Point x")->required();
    di->add_option("--to", to_text, "Point y")->required();
    di->add_option("--segments", dopt.budget, "Segment budget");
    di->add_option("--starts", dopt.starts, "Random restarts per feasibility test");
    di->add_option("--bisection-iterations", dopt.bisection_iterations, "Bisection steps on r");
    di->callback([&] {
        action = [&] {
            CommutatorFrame F(mf.system());
            auto x = parse_point(from_text, F.dim(), "--from");
            auto y = parse_point(to_text, F.dim(), "--to");
            if (dopt.budget < 1)
                throw UsageError("distance: --segments must be positive");
            dopt.seed = common.seed;
            auto kind = parse_distance_kind(kind_text);
            auto e = distance(kind, F, x, y, dopt);
            Output o;
            o.result["kind"] = to_string(kind);
            o.result["value"] = finite_or_null(e.value);
            o.result["status"] = to_string(e.status);
            o.result["residual"] = e.residual;
            json path = {{"r", e.path.r}};
            if (kind == DistanceKind::fl) {
                json segs = json::array();
                for (std::size_t i = 0; i < e.path.times.size(); ++i)
                    segs.push_back({{"field", e.path.fields[i]}, {"time", e.path.times[i]}});
                path["segments"] = segs;
            } else {
                json pieces = json::array();
                for (std::size_t i = 0; i < e.path.durations.size(); ++i)
                    pieces.push_back({{"duration", e.path.durations[i]}, {"control", to_json(e.path.controls[i])}});
                path["pieces"] = pieces;
            }
            o.result["path"] = path;
            json trace = json::array();
            for (const auto& t : e.trace)
                trace.push_back({{"r", t.r}, {"feasible", t.feasible}});
            o.result["trace"] = trace;
            json pb = json::array();
            for (double v : e.per_budget)
                pb.push_back(finite_or_null(v));
            o.result["per_budget"] = pb;
            o.pass = e.status != DistanceStatus::budget_exhausted;
            return o;
        };
    });

    // doubling
    std::size_t mc_samples = 1000000;
    double expect_ratio = 0.0, ratio_tol = 0.15;
    auto* db = app.add_subcommand("doubling", "Monte Carlo |B(x,2r)| / |B(x,r)| for rho balls");
    mf.attach(db);
    db->add_option("--center", center_text, "Center x")->required();
    db->add_option("--radius", radius, "Radius r");
    db->add_option("--samples", mc_samples, "Monte Carlo samples");
    db->add_option("--expect", expect_ratio, "Fail unless the ratio is within --rel-tol of this value");
    db->add_option("--ratio-tol", ratio_tol, "Relative tolerance for --expect");
    db->callback([&] {
        action = [&] {
            CommutatorFrame F(mf.system());
            auto x = parse_point(center_text, F.dim(), "--center");
            DoublingOptions d;
            d.samples = mc_samples;
            d.seed = common.seed;
            d.workers = common.workers;
            auto e = doubling_ratio(F, x, radius, d);
            Output o;
            o.result["samples"] = e.samples;
            o.result["inner"] = e.inner;
            o.result["outer"] = e.outer;
            o.result["box_lo"] = to_json(e.box_lo);
            o.result["box_hi"] = to_json(e.box_hi);
            o.result["box_volume"] = e.box_volume;
            o.result["volume_r"] = e.volume_r;
            o.result["volume_2r"] = e.volume_2r;
            o.result["ratio"] = e.ratio;
            o.result["ci"] = {e.ci_low, e.ci_high};
            o.result["box_touched"] = e.box_touched;
            o.pass = !e.box_touched;
            if (expect_ratio > 0)
                o.pass = o.pass && std::abs(e.ratio - expect_ratio) <= ratio_tol * expect_ratio;
            return o;
        };
    });

    // poincare
    std::vector<std::string> f_texts;
    double enlarge = 2.0;
    std::size_t p_samples = 200000;
    auto* pc = app.add_subcommand("poincare", "Monte Carlo Poincare ratios on rho balls");
    mf.attach(pc);
    pc->add_option("--center", center_text, "Center x")->required();
    pc->add_option("--radius", radius, "Radius r");
    pc->add_option("--samples", p_samples, "Monte Carlo samples");
    pc->add_option("--enlarge", enlarge, "Enlargement C of the right-hand ball");
    pc->add_option("--f", f_texts, "Test polynomial (repeatable); default is the fixed suite")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    pc->callback([&] {
        action = [&] {
            CommutatorFrame F(mf.system());
            auto x = parse_point(center_text, F.dim(), "--center");
            std::vector<Polynomial> fs;
            for (const auto& t : f_texts)
                fs.push_back(parse_polynomial(t, F.dim()));
            if (fs.empty())
                fs = poincare_suite(F.dim());
            PoincareOptions p;
            p.samples = p_samples;
            p.seed = common.seed;
            p.workers = common.workers;
            p.enlarge = enlarge;
            auto res = poincare_check(F, fs, x, radius, p);
            Output o;
            o.header = {"f", "lhs", "rhs", "ratio"};
            json rows = json::array();
            double c = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const auto& r = res[i];
                o.rows.push_back({fs[i].str(), num(r.lhs), num(r.rhs), num(r.ratio)});
                rows.push_back({{"f", fs[i].str()}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", finite_or_null(r.ratio)}});
                finite = finite && std::isfinite(r.ratio);
                if (std::isfinite(r.ratio))
                    c = std::max(c, r.ratio);
            }
            o.result["inner"] = res.empty() ? 0 : res.front().inner;
            o.result["outer"] = res.empty() ? 0 : res.front().outer;
            o.result["empirical_C"] = c;
            o.result["rows"] = rows;
            o.pass = finite;
            return o;
        };
    });

    // pinv
    std::string matrix_path, rhs_path;
    double lambda = 0.0, lambda_min = 1e-6, lambda_max = 1e-2;
    int lambda_points = 9;
    bool sweep = false;
    auto* pv = app.add_subcommand("pinv", "Minimum-norm solutions and their Tychonoff approximation");
    pv->add_option("--matrix", matrix_path, "CSV file with A")->required();
    pv->add_option("--rhs", rhs_path, "CSV file with b (one column or one row)")->required();
    pv->add_option("--lambda", lambda, "Also report x_lambda for this lambda");
    pv->add_flag("--lambda-sweep", sweep, "Report (lambda, error) over a geometric sweep");
    pv->add_option("--lambda-min", lambda_min, "Sweep start");
    pv->add_option("--lambda-max", lambda_max, "Sweep end");
    pv->add_option("--points", lambda_points, "Sweep points");
    pv->callback([&] {
        action = [&] {
            Eigen::MatrixXd A = read_csv_matrix(matrix_path);
            Eigen::MatrixXd B = read_csv_matrix(rhs_path);
            Eigen::VectorXd b = B.cols() == 1 ? Eigen::VectorXd(B.col(0)) : Eigen::VectorXd(B.row(0).transpose());
            if (b.size() != A.rows())
                throw UsageError("pinv: b has " + std::to_string(b.size()) + " entries, A has " +
                                 std::to_string(A.rows()) + " rows");
            auto mn = min_norm_solve(A, b);
            Output o;
            o.result["rank"] = mn.rank;
            o.result["threshold"] = mn.threshold;
            o.result["residual"] = mn.residual;
            o.result["x"] = to_json(mn.x);
            if (lambda > 0)
                o.result["x_lambda"] = to_json(tychonoff_solve(A, b, lambda));
            if (sweep) {
                if (!(lambda_min > 0 && lambda_max > lambda_min) || lambda_points < 2)
                    throw UsageError("pinv: need 0 < lambda-min < lambda-max and at least two points");
                auto lams = geometric_samples(lambda_min, lambda_max, lambda_points);
                std::vector<double> errs;
                o.header = {"lambda", "error"};
                json rows = json::array();
                for (double l : lams) {
                    const double e = (mn.x - tychonoff_solve(A, b, l)).norm();
                    errs.push_back(e);
                    o.rows.push_back({num(l), num(e)});
                    rows.push_back({{"lambda", l}, {"error", e}});
                }
                o.result["sweep"] = rows;
                o.result["slope"] = finite_or_null(loglog_fit(lams, errs).first);
            }
            return o;
        };
    });

    // suite
    std::string only;
    criteria::Settings cs;
    auto* su = app.add_subcommand("suite", "Run the acceptance set");
    su->add_option("--only", only, "Comma separated criterion ids");
    su->add_option("--doubling-samples", cs.doubling_samples, "Samples per doubling estimate");
    su->add_option("--poincare-samples", cs.poincare_samples, "Samples per Poincare run");
    su->add_option("--distance-pairs", cs.distance_pairs, "Sampled pairs for the ordering check");
    su->callback([&] {
        action = [&] {
            cs.seed = common.seed;
            cs.workers = common.workers;
            std::vector<int> which = only.empty() ? criteria::ids() : parse_indices(only, "--only");
            Output o;
            o.header = {"id", "name", "pass", "seconds", "limit_seconds", "detail"};
            json rows = json::array();
            for (int id : which) {
                if (id < 1 || id > static_cast<int>(criteria::ids().size()))
                    throw UsageError("suite: no criterion " + std::to_string(id));
                auto r = criteria::run(id, cs);
                err << criteria::format_line(r) << "\n";
                o.pass = o.pass && r.pass;
                // timings vary between runs, so they stay out of the deterministic report
                o.rows.push_back({std::to_string(r.id), r.name, r.pass ? "1" : "0", num(std::round(r.seconds)),
                                  num(r.limit_seconds), r.detail});
                rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            }
            o.result["criteria"] = rows;
            return o;
        };
    });

    // The config file's values go right after the command name so that flags
    // typed by the user come later and win.
    std::vector<std::string> args = args_in;
    try {
        std::string config_path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size())
                config_path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0)
                config_path = args[i].substr(9);
        }
        if (!config_path.empty()) {
            auto pos = std::find_if(args.begin(), args.end(), [&app](const std::string& a) {
                return a.rfind("-", 0) != 0 && app.get_subcommand_no_throw(a) != nullptr;
            });
            if (pos != args.end()) {
                auto extra = config_args(config_path, *pos);
                args.insert(pos + 1, extra.begin(), extra.end());
            }
        }
        try {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::ParseError& e) {
            return app.exit(e, out, err) == 0 ? 0 : 2;
        }
        const CLI::App* sub = app.get_subcommands().front();
        const std::string format = common.format.empty() ? default_format : common.format;
        Output o = action();
        emit(o, sub->get_name(), format, common, app, *sub, out);
        return o.pass ? 0 : 1;
    } catch (const UnknownModel& e) {
        err << "liebox: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "liebox: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "liebox: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "liebox: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace liebox::cli
