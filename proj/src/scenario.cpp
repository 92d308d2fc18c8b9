#include "advecta/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "advecta/errors.hpp"
#include "advecta/expr.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {

using nlohmann::json;

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {"t",   "pi",  "e",    "sin", "cos", "tan",
                                                "exp", "log", "sqrt", "abs", "min", "max"};
    return words;
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
    fail(ErrorKind::SchemaError, what + " at " + pointer);
}

const json& require(const json& doc, const char* key) {
    if (!doc.contains(key)) schema_error("/" + std::string(key), "missing required field");
    return doc.at(key);
}

double require_number(const json& doc, const char* key) {
    const json& v = require(doc, key);
    if (!v.is_number()) schema_error("/" + std::string(key), "expected a number");
    return v.get<double>();
}

int require_int(const json& doc, const char* key) {
    const json& v = require(doc, key);
    if (!v.is_number_integer()) schema_error("/" + std::string(key), "expected an integer");
    return v.get<int>();
}

double optional_number(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number()) schema_error("/" + std::string(key), "expected a number");
    return doc.at(key).get<double>();
}

int optional_int(const json& doc, const char* key, int fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number_integer()) schema_error("/" + std::string(key), "expected an integer");
    return doc.at(key).get<int>();
}

std::string entry_location(std::size_t term, int row, int col) {
    return "terms[" + std::to_string(term) + "].A[" + std::to_string(row) + "][" +
           std::to_string(col) + "]";
}

void parse_expressions_or_rethrow(const Scenario& sc) {
    for (std::size_t j = 0; j < sc.terms.size(); ++j) {
        const auto& term = sc.terms[j];
        for (int r = 0; r < sc.n; ++r) {
            for (int c = 0; c < sc.n; ++c) {
                const std::string& text = term.coefficients[static_cast<std::size_t>(r) * sc.n + c];
                try {
                    Expression::parse(text);
                } catch (const Error& e) {
                    fail(ErrorKind::SyntaxError,
                         entry_location(j, r, c) + " = \"" + text + "\": " + e.what());
                }
            }
        }
        try {
            Expression::parse(term.advance);
        } catch (const Error& e) {
            fail(ErrorKind::SyntaxError,
                 "terms[" + std::to_string(j) + "].h = \"" + term.advance + "\": " + e.what());
        }
    }
}

void check_advance_signs(const Scenario& sc) {
    // Coarse sampling of the reporting window; the grid build rechecks at dt.
    for (std::size_t j = 0; j < sc.terms.size(); ++j) {
        const Expression h = Expression::parse(sc.terms[j].advance);
        const int samples = 256;
        for (int k = 0; k <= samples; ++k) {
            const double t = sc.t0 + (sc.T - sc.t0) * static_cast<double>(k) / samples;
            const double v = h.eval(t);
            if (v < -1e-12) {
                fail(ErrorKind::NegativeAdvance,
                     "terms[" + std::to_string(j) + "].h is " + format_double(v) + " at t=" +
                         format_double(t));
            }
        }
    }
}

}  // namespace

AdvancedSystem Scenario::system() const {
    std::vector<Term> parsed;
    parsed.reserve(terms.size());
    for (const TermSpec& spec : terms) {
        Term term{{}, Expression::parse(spec.advance)};
        term.coefficients.reserve(spec.coefficients.size());
        for (const std::string& text : spec.coefficients) {
            term.coefficients.push_back(Expression::parse(text));
        }
        parsed.push_back(std::move(term));
    }
    return AdvancedSystem(n, t0, std::move(parsed));
}

Horizon Scenario::horizon() const {
    return Horizon{T, dt, lookahead_depth, extension};
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("", "scenario document must be a JSON object");

    if (doc.contains("schema_version")) {
        if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != 1) {
            schema_error("/schema_version", "unsupported schema version");
        }
    }

    static const std::set<std::string> known_keys = {
        "schema_version", "name", "n",   "t0",       "T",        "dt",    "lookahead_depth",
        "extension",      "terms", "x0", "L",        "tol",      "max_iter", "phi_threshold",
        "sweep"};
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys.count(key)) schema_error("/" + key, "unknown field");
    }

    Scenario sc;
    const json& name = require(doc, "name");
    if (!name.is_string() || name.get<std::string>().empty()) {
        schema_error("/name", "expected a non-empty string");
    }
    sc.name = name.get<std::string>();

    sc.n = require_int(doc, "n");
    if (sc.n < 1) schema_error("/n", "dimension must be at least 1");

    sc.t0 = require_number(doc, "t0");
    sc.T = require_number(doc, "T");
    if (sc.T < sc.t0) schema_error("/T", "horizon must not precede t0");
    sc.dt = require_number(doc, "dt");
    if (sc.dt <= 0.0) schema_error("/dt", "dt must be positive");
    const double ratio = (sc.T - sc.t0) / sc.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6) {
        schema_error("/dt", "(T - t0)/dt must be an integer");
    }

    sc.lookahead_depth = optional_int(doc, "lookahead_depth", 3);
    if (sc.lookahead_depth < 0) schema_error("/lookahead_depth", "must be nonnegative");

    if (doc.contains("extension")) {
        const json& ext = doc.at("extension");
        if (ext == "hold") {
            sc.extension = ExtensionPolicy::HoldLastValue;
        } else if (ext == "zero") {
            sc.extension = ExtensionPolicy::Zero;
        } else {
            schema_error("/extension", "expected \"hold\" or \"zero\"");
        }
    }

    const json& terms = require(doc, "terms");
    if (!terms.is_array() || terms.empty()) schema_error("/terms", "expected a non-empty array");
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const std::string base = "/terms/" + std::to_string(j);
        const json& t = terms.at(j);
        if (!t.is_object()) schema_error(base, "expected an object");
        if (!t.contains("A")) schema_error(base + "/A", "missing required field");
        if (!t.contains("h")) schema_error(base + "/h", "missing required field");
        for (const auto& [key, value] : t.items()) {
            if (key != "A" && key != "h") schema_error(base + "/" + key, "unknown field");
        }

        const json& rows = t.at("A");
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(sc.n)) {
            schema_error(base + "/A", "expected " + std::to_string(sc.n) + " rows");
        }
        Scenario::TermSpec spec;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const json& row = rows.at(r);
            if (!row.is_array() || row.size() != static_cast<std::size_t>(sc.n)) {
                schema_error(base + "/A/" + std::to_string(r),
                             "expected " + std::to_string(sc.n) + " entries");
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (!row.at(c).is_string()) {
                    schema_error(base + "/A/" + std::to_string(r) + "/" + std::to_string(c),
                                 "expected an expression string");
                }
                spec.coefficients.push_back(row.at(c).get<std::string>());
            }
        }
        if (!t.at("h").is_string()) schema_error(base + "/h", "expected an expression string");
        spec.advance = t.at("h").get<std::string>();
        sc.terms.push_back(std::move(spec));
    }

    const json& x0 = require(doc, "x0");
    if (!x0.is_array() || x0.size() != static_cast<std::size_t>(sc.n)) {
        schema_error("/x0", "expected " + std::to_string(sc.n) + " numbers");
    }
    for (std::size_t i = 0; i < x0.size(); ++i) {
        if (!x0.at(i).is_number()) schema_error("/x0/" + std::to_string(i), "expected a number");
        sc.x0.push_back(x0.at(i).get<double>());
    }

    sc.L = optional_number(doc, "L", 1.0);
    if (sc.L <= 0.0) schema_error("/L", "ball radius must be positive");
    sc.tol = optional_number(doc, "tol", 1e-8);
    if (sc.tol <= 0.0) schema_error("/tol", "tolerance must be positive");
    sc.max_iter = optional_int(doc, "max_iter", 200);
    if (sc.max_iter < 1) schema_error("/max_iter", "must be at least 1");
    sc.phi_threshold = optional_number(doc, "phi_threshold", 1e-6);
    if (sc.phi_threshold <= 0.0) schema_error("/phi_threshold", "must be positive");

    if (doc.contains("sweep")) {
        const json& sweep = doc.at("sweep");
        if (!sweep.is_object()) schema_error("/sweep", "expected an object of value arrays");
        for (const auto& [key, values] : sweep.items()) {
            if (reserved_words().count(key)) {
                schema_error("/sweep/" + key, "name collides with a builtin identifier");
            }
            if (!values.is_array()) schema_error("/sweep/" + key, "expected an array of numbers");
            std::vector<double> vs;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!values.at(i).is_number()) {
                    schema_error("/sweep/" + key + "/" + std::to_string(i), "expected a number");
                }
                vs.push_back(values.at(i).get<double>());
            }
            sc.sweep.emplace_back(key, std::move(vs));
        }
    }

    if (sc.has_sweep()) {
        // Expressions must parse once the variables are bound; validate with
        // each variable set to its first value (or zero for an empty range).
        std::vector<std::pair<std::string, double>> probe;
        for (const auto& [key, values] : sc.sweep) {
            probe.emplace_back(key, values.empty() ? 0.0 : values.front());
        }
        const Scenario bound = substitute(sc, probe);
        parse_expressions_or_rethrow(bound);
    } else {
        parse_expressions_or_rethrow(sc);
        check_advance_signs(sc);
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open scenario file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, path.string() + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(doc);
}

namespace {

std::string substitute_tokens(const std::string& text, const std::string& name, double value) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_')) {
                ++j;
            }
            const std::string_view ident(text.data() + i, j - i);
            if (ident == name) {
                out += '(';
                out += format_double(value);
                out += ')';
            } else {
                out.append(ident);
            }
            i = j;
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

}  // namespace

Scenario substitute(const Scenario& base,
                    const std::vector<std::pair<std::string, double>>& bindings) {
    Scenario out = base;
    out.sweep.clear();
    for (auto& term : out.terms) {
        for (auto& entry : term.coefficients) {
            for (const auto& [name, value] : bindings) {
                entry = substitute_tokens(entry, name, value);
            }
        }
        for (const auto& [name, value] : bindings) {
            term.advance = substitute_tokens(term.advance, name, value);
        }
    }
    return out;
}

}  // namespace advecta
