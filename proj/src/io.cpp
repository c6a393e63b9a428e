#include "khess/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "khess/errors.hpp"

namespace khess {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

double as_number(const Json& j, const char* what) {
    if (!j.is_number()) throw DomainError(std::string("expected a number for ") + what);
    return j.get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_cell(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError(fmt::format("line {}: cannot parse '{}'", line, s));
    }
    if (used != s.size()) throw DomainError(fmt::format("line {}: cannot parse '{}'", line, s));
    return v;
}

// Numeric rows of a CSV file with the given header (header row optional).
std::vector<std::vector<double>> read_rows(std::istream& is, const std::vector<std::string>& header) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (rows.empty() && cells == header) continue;
        if (cells.size() != header.size()) {
            throw DomainError(fmt::format("line {}: expected {} columns", lineno, header.size()));
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_cell(c, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    return in;
}

Json parse_json(const std::string& path) {
    auto in = open_in(path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

std::vector<double> number_list(const Json& j, const char* what) {
    if (!j.is_array()) throw DomainError(std::string("expected an array for ") + what);
    std::vector<double> out;
    for (const auto& x : j) out.push_back(as_number(x, what));
    return out;
}

}  // namespace

SymMatrix matrix_from_json(const Json& j) {
    const Json* entries = &j;
    std::optional<int> n;
    if (j.is_object()) {
        if (!j.contains("entries")) throw DomainError("matrix JSON needs an 'entries' field");
        entries = &j.at("entries");
        if (j.contains("n")) {
            if (!j.at("n").is_number_integer()) throw DomainError("matrix 'n' must be an integer");
            n = j.at("n").get<int>();
        }
    }
    if (!entries->is_array() || entries->empty()) throw DomainError("matrix entries must be a non-empty array");
    std::vector<double> flat;
    if ((*entries)[0].is_array()) {
        const auto rows = static_cast<int>(entries->size());
        if (n && *n != rows) throw DomainError("matrix row count does not match n");
        n = rows;
        for (const auto& row : *entries) {
            auto v = number_list(row, "matrix row");
            if (static_cast<int>(v.size()) != rows) throw DomainError("matrix must be square");
            flat.insert(flat.end(), v.begin(), v.end());
        }
    } else {
        flat = number_list(*entries, "matrix entries");
        if (!n) {
            const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
            n = side;
        }
        if (static_cast<std::size_t>(*n) * static_cast<std::size_t>(*n) != flat.size()) {
            throw DomainError("flat matrix entries must have n*n values");
        }
    }
    return SymMatrix(*n, std::move(flat));
}

SymMatrix read_matrix_file(const std::string& path) { return matrix_from_json(parse_json(path)); }

Json matrix_to_json(const SymMatrix& a) {
    Json rows = Json::array();
    for (int i = 0; i < a.size(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < a.size(); ++j) row.push_back(a(i, j));
        rows.push_back(row);
    }
    return {{"n", a.size()}, {"entries", rows}};
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    os << "r,h,hp,hpp\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.r[i], p.h[i], p.hp[i], p.hpp[i]);
    }
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    write_profile_csv(out, p);
}

RadialProfile read_profile_csv(std::istream& is, int dim, int k) {
    const auto rows = read_rows(is, {"r", "h", "hp", "hpp"});
    RadialProfile p;
    p.dim = dim;
    p.order = k;
    for (const auto& row : rows) {
        p.r.push_back(row[0]);
        p.h.push_back(row[1]);
        p.hp.push_back(row[2]);
        p.hpp.push_back(row[3]);
    }
    p.radius = p.r.empty() ? 0.0 : p.r.back();
    p.validate();
    p.k_convex = profile_is_k_convex(p, 1e-8);
    return p;
}

RadialProfile read_profile_csv(const std::string& path, int dim, int k) {
    auto in = open_in(path);
    return read_profile_csv(in, dim, k);
}

Json profile_to_json(const RadialProfile& p) {
    return {{"radius", p.radius}, {"dim", p.dim}, {"order", p.order}, {"k_convex", p.k_convex},
            {"r", p.r},           {"h", p.h},     {"hp", p.hp},       {"hpp", p.hpp}};
}

RadialProfile profile_from_json(const Json& j) {
    try {
        RadialProfile p;
        p.radius = j.at("radius").get<double>();
        p.dim = j.at("dim").get<int>();
        p.order = j.at("order").get<int>();
        p.r = j.at("r").get<std::vector<double>>();
        p.h = j.at("h").get<std::vector<double>>();
        p.hp = j.at("hp").get<std::vector<double>>();
        p.hpp = j.at("hpp").get<std::vector<double>>();
        p.validate();
        p.k_convex = j.value("k_convex", false);
        return p;
    } catch (const Json::exception& e) {
        throw DomainError(std::string("malformed profile JSON: ") + e.what());
    }
}

SourceTerm read_source_csv(std::istream& is) {
    const auto rows = read_rows(is, {"r", "f"});
    std::vector<double> r;
    std::vector<double> f;
    for (const auto& row : rows) {
        r.push_back(row[0]);
        f.push_back(row[1]);
    }
    return SourceTerm::sampled(std::move(r), std::move(f));
}

SourceTerm read_source_csv(const std::string& path) {
    auto in = open_in(path);
    return read_source_csv(in);
}

CurvatureField field_from_json(const Json& j) {
    const Json* list = &j;
    std::optional<int> dim;
    if (j.is_object()) {
        if (!j.contains("samples")) throw DomainError("curvature field JSON needs 'samples'");
        list = &j.at("samples");
        if (j.contains("dim")) dim = j.at("dim").get<int>();
    }
    if (!list->is_array() || list->empty()) throw DomainError("curvature field needs a non-empty sample list");
    std::vector<CurvatureSample> samples;
    for (const auto& s : *list) {
        if (!s.is_object() || !s.contains("kappa")) throw DomainError("each sample needs a 'kappa' array");
        CurvatureSample cs;
        cs.kappa = number_list(s.at("kappa"), "kappa");
        if (s.contains("point")) cs.point = number_list(s.at("point"), "point");
        samples.push_back(std::move(cs));
    }
    const int n = dim.value_or(static_cast<int>(samples.front().kappa.size()) + 1);
    return CurvatureField(n, std::move(samples));
}

CurvatureField read_field_file(const std::string& path) { return field_from_json(parse_json(path)); }

Json field_to_json(const CurvatureField& f) {
    Json samples = Json::array();
    for (const auto& s : f.samples()) samples.push_back({{"point", s.point}, {"kappa", s.kappa}});
    return {{"dim", f.dim()}, {"samples", samples}};
}

Json estimate_to_json(const SpectralEstimate& e, const std::string& profile_ref) {
    Json probes = Json::array();
    for (const auto& p : e.probes) {
        probes.push_back({{"lambda", p.lambda},
                          {"status", to_string(p.status)},
                          {"iterations", p.iterations},
                          {"sup_norm", p.sup_norm},
                          {"growth_ratio", p.growth_ratio}});
    }
    Json j = {{"N", e.dim},
              {"k", e.order},
              {"R", e.radius},
              {"lambda_lo", e.lambda_lo},
              {"lambda_hi", e.lambda_hi},
              {"lambda_best", e.lambda_best},
              {"bounds", {{"lower", e.lower}, {"upper", e.upper}}},
              {"bisect_tol", e.bisect_tol},
              {"rayleigh", e.rayleigh},
              {"residual_max", e.residual_max},
              {"profile_ref", profile_ref},
              {"probes", probes},
              {"log", e.log}};
    if (e.holder) j["holder_seminorm"] = *e.holder;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace khess
