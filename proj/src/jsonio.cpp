#include "msf/jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace msf {

namespace {

using nlohmann::json;

json parse_checked(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw JsonFormatError("malformed JSON");
    return j;
}

DenseMatrix matrix_from_array(const json& arr, std::size_t r, const std::string& what) {
    if (!arr.is_array() || arr.size() != r * r)
        throw JsonFormatError(what + " must be a flat row-major array of " +
                              std::to_string(r * r) + " numbers");
    DenseMatrix m(r, r);
    for (std::size_t i = 0; i < r * r; ++i) {
        if (!arr[i].is_number()) throw JsonFormatError(what + " has a non-numeric entry");
        m.data()[i] = arr[i].get<double>();
    }
    return m;
}

json matrix_to_array(const DenseMatrix& m) {
    json arr = json::array();
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) arr.push_back(m.data()[i]);
    return arr;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SolveStatus status_from_string(const std::string& s) {
    if (s == "converged") return SolveStatus::Converged;
    if (s == "max-iterations") return SolveStatus::MaxIterations;
    if (s == "stalled") return SolveStatus::Stalled;
    if (s == "indefinite-breakdown") return SolveStatus::IndefiniteBreakdown;
    throw JsonFormatError("unknown status '" + s + "'");
}

RateClass rate_class_from_string(const std::string& s) {
    if (s == "quadratic") return RateClass::Quadratic;
    if (s == "linear") return RateClass::Linear;
    if (s == "sublinear") return RateClass::Sublinear;
    if (s == "stalled") return RateClass::Stalled;
    if (s == "inconclusive") return RateClass::Inconclusive;
    throw JsonFormatError("unknown rate class '" + s + "'");
}

SurdMatrix surd_matrix_from_json(const json& j, const char* key, std::size_t r) {
    if (!j.contains(key)) throw JsonFormatError(std::string("missing field '") + key + "'");
    const json& arr = j[key];
    if (!arr.is_array() || arr.size() != r * r)
        throw JsonFormatError(std::string(key) + " must hold " + std::to_string(r * r) +
                              " expression strings");
    std::vector<std::string> entries;
    entries.reserve(r * r);
    for (const json& e : arr) {
        if (!e.is_string()) throw JsonFormatError(std::string(key) + " has a non-string entry");
        entries.push_back(e.get<std::string>());
    }
    return SurdMatrix::parse(r, r, entries);
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw JsonFormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MatLaurentPoly laurent_from_json(const std::string& text) {
    const json j = parse_checked(text);
    if (!j.is_object() || !j.contains("r") || !j.contains("coeffs"))
        throw JsonFormatError("polynomial needs fields 'r' and 'coeffs'");
    if (!j["r"].is_number_unsigned() || j["r"].get<std::size_t>() == 0)
        throw JsonFormatError("'r' must be a positive integer");
    const std::size_t r = j["r"].get<std::size_t>();
    const json& coeffs = j["coeffs"];
    if (!coeffs.is_object() || coeffs.empty())
        throw JsonFormatError("'coeffs' must be a nonempty object");

    bool has_negative = false;
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it)
        if (!it.key().empty() && it.key()[0] == '-') has_negative = true;
    const bool mirror = j.contains("mirror") ? j["mirror"].get<bool>() : !has_negative;
    if (mirror && has_negative)
        throw JsonFormatError("mirrored polynomial must not list negative indices");

    MatLaurentPoly p(r);
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw JsonFormatError("coefficient key '" + it.key() + "' is not an integer");
        }
        const DenseMatrix c = matrix_from_array(it.value(), r, "coefficient " + it.key());
        p.set(k, c);
        if (mirror && k > 0) p.set(-k, c.t());
    }
    if (j.contains("m") && j["m"].is_number_integer() &&
        j["m"].get<int>() != p.degree())
        throw JsonFormatError("declared degree 'm' disagrees with the coefficients");
    return p;
}

MatLaurentPoly load_laurent(const std::string& path) {
    return laurent_from_json(read_text_file(path));
}

std::string laurent_to_json(const MatLaurentPoly& p, bool mirror) {
    json j;
    j["r"] = p.dim();
    j["m"] = p.degree();
    j["mirror"] = mirror;
    json coeffs = json::object();
    for (const auto& [k, c] : p.table()) {
        if (mirror && k < 0) continue;
        if (norm_max(c) == 0.0 && k != 0) continue;
        coeffs[std::to_string(k)] = matrix_to_array(c);
    }
    j["coeffs"] = std::move(coeffs);
    return j.dump(2);
}

std::string run_report_to_json(const RunReport& rep) {
    json j;
    j["label"] = rep.label;
    j["method"] = rep.method;
    j["status"] = to_string(rep.status);
    j["iterations"] = rep.iterations;
    j["final_eps_P"] = rep.final_eps_p;
    if (rep.final_eps_h >= 0.0)
        j["final_eps_H"] = rep.final_eps_h;
    else
        j["final_eps_H"] = nullptr;
    if (rep.has_rate) {
        j["rate"] = {{"class", to_string(rep.rate.cls)},
                     {"factor", rep.rate.factor},
                     {"power", rep.rate.power},
                     {"n_first", rep.rate.n_first},
                     {"n_last", rep.rate.n_last},
                     {"points", rep.rate.points},
                     {"fit_residual", rep.rate.fit_residual}};
    } else {
        j["rate"] = nullptr;
    }
    if (!rep.factors.empty()) {
        json h = json::object();
        for (std::size_t k = 0; k < rep.factors.size(); ++k)
            h[std::to_string(k)] = matrix_to_array(rep.factors[k]);
        j["factors"] = {{"r", rep.factors[0].rows()},
                        {"count", rep.factors.size()},
                        {"h", std::move(h)}};
    } else {
        j["factors"] = nullptr;
    }
    if (rep.has_singularity) {
        json pts = json::array();
        for (const ComplexPair& ev : rep.singularity.eigenvalues)
            pts.push_back({{"re", ev.re}, {"im", ev.im}});
        j["singularity"] = {{"eigenvalues", std::move(pts)},
                            {"max_modulus", rep.singularity.max_modulus},
                            {"inside", rep.singularity.inside},
                            {"on_circle", rep.singularity.on_circle},
                            {"outside", rep.singularity.outside},
                            {"p_estimate", rep.singularity.p_estimate}};
    } else {
        j["singularity"] = nullptr;
    }
    return j.dump(2);
}

RunReport run_report_from_json(const std::string& text) {
    const json j = parse_checked(text);
    RunReport rep;
    try {
        rep.label = j.at("label").get<std::string>();
        rep.method = j.at("method").get<std::string>();
        rep.status = status_from_string(j.at("status").get<std::string>());
        rep.iterations = j.at("iterations").get<long>();
        rep.final_eps_p = j.at("final_eps_P").get<double>();
        rep.final_eps_h =
            j.at("final_eps_H").is_null() ? -1.0 : j["final_eps_H"].get<double>();
        if (!j.at("rate").is_null()) {
            rep.has_rate = true;
            const json& r = j["rate"];
            rep.rate.cls = rate_class_from_string(r.at("class").get<std::string>());
            rep.rate.factor = r.at("factor").get<double>();
            rep.rate.power = r.at("power").get<double>();
            rep.rate.n_first = r.at("n_first").get<long>();
            rep.rate.n_last = r.at("n_last").get<long>();
            rep.rate.points = r.at("points").get<std::size_t>();
            rep.rate.fit_residual = r.at("fit_residual").get<double>();
        }
        if (!j.at("factors").is_null()) {
            const json& f = j["factors"];
            const std::size_t r = f.at("r").get<std::size_t>();
            const std::size_t count = f.at("count").get<std::size_t>();
            for (std::size_t k = 0; k < count; ++k)
                rep.factors.push_back(
                    matrix_from_array(f.at("h").at(std::to_string(k)), r, "factor"));
        }
        if (!j.at("singularity").is_null()) {
            rep.has_singularity = true;
            const json& s = j["singularity"];
            for (const json& e : s.at("eigenvalues"))
                rep.singularity.eigenvalues.push_back(
                    {e.at("re").get<double>(), e.at("im").get<double>()});
            rep.singularity.max_modulus = s.at("max_modulus").get<double>();
            rep.singularity.inside = s.at("inside").get<std::size_t>();
            rep.singularity.on_circle = s.at("on_circle").get<std::size_t>();
            rep.singularity.outside = s.at("outside").get<std::size_t>();
            rep.singularity.p_estimate = s.at("p_estimate").get<int>();
        }
    } catch (const json::exception& e) {
        throw JsonFormatError(std::string("run report: ") + e.what());
    }
    return rep;
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
    os << "n,eps_P,eps_H,step_norm\n";
    for (const TraceRecord& r : trace.records) {
        os << r.n << ',' << g17(r.eps_p) << ',';
        if (r.eps_h >= 0.0) os << g17(r.eps_h);
        os << ',' << g17(r.step_norm) << '\n';
    }
}

std::string trace_csv(const IterationTrace& trace) {
    std::ostringstream ss;
    write_trace_csv(ss, trace);
    return ss.str();
}

ExactInput exact_input_from_json(const std::string& text) {
    const json j = parse_checked(text);
    if (!j.is_object() || !j.contains("r") || !j["r"].is_number_unsigned())
        throw JsonFormatError("exact input needs a positive integer field 'r'");
    const std::size_t r = j["r"].get<std::size_t>();
    if (r == 0) throw JsonFormatError("'r' must be positive");
    ExactInput in;
    in.p0 = surd_matrix_from_json(j, "p0", r);
    in.p1 = surd_matrix_from_json(j, "p1", r);
    in.x = surd_matrix_from_json(j, "x", r);
    in.h0 = surd_matrix_from_json(j, "h0", r);
    in.h1 = surd_matrix_from_json(j, "h1", r);
    return in;
}

}  // namespace msf
