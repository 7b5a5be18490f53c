#pragma once

// Text formats: demand files in, policy/profile/certificate/experiment
// documents out. Floats are written with 12 significant digits.

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/experiment.hpp"
#include "psp/profile.hpp"
#include "psp/region.hpp"
#include "psp/scheduler.hpp"

namespace psp::io {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Value that JSON output will print with at most 12 significant digits.
inline double round12(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

inline Json number(double x) { return round12(x); }

inline Json numbers(const std::vector<double>& xs) {
    Json arr = Json::array();
    for (double x : xs) {
        arr.push_back(number(x));
    }
    return arr;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        lines.push_back(current);
    }
    return lines;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_row(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

inline double parse_double(const std::string& cell, std::string_view what) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw ParameterError("malformed " + std::string(what) + ": '" + cell + "'");
    }
    return v;
}

inline long long parse_integer(const std::string& cell, std::string_view what) {
    char* end = nullptr;
    const long long v = std::strtoll(cell.c_str(), &end, 10);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw ParameterError("malformed " + std::string(what) + ": '" + cell + "'");
    }
    return v;
}

} // namespace detail

// CSV with header `id,energy`, or a JSON array of numbers or of
// {"id", "energy"} objects.
inline DemandSet parse_demands(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        throw EmptyInputError("demand input is empty");
    }
    std::vector<Demand> demands;
    if (text[first] == '[') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::exception& e) {
            throw ParameterError(std::string("malformed demand JSON: ") + e.what());
        }
        DemandId next = 1;
        for (const Json& item : doc) {
            if (item.is_number()) {
                demands.push_back({next++, item.get<double>()});
            } else if (item.is_object() && item.contains("energy")) {
                const DemandId id = item.contains("id") ? item.at("id").get<DemandId>() : next;
                demands.push_back({id, item.at("energy").get<double>()});
                next = id + 1;
            } else {
                throw ParameterError("demand JSON entries must be numbers or {id, energy} objects");
            }
        }
        return DemandSet(std::move(demands));
    }

    const auto lines = detail::split_lines(text);
    if (lines.empty() || detail::split_csv_row(lines.front()) != std::vector<std::string>{"id", "energy"}) {
        throw ParameterError("demand CSV must start with the header 'id,energy'");
    }
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (detail::trim(lines[k]).empty()) {
            continue;
        }
        const auto cells = detail::split_csv_row(lines[k]);
        if (cells.size() != 2) {
            throw ParameterError("demand CSV line " + std::to_string(k + 1) + " needs two columns");
        }
        demands.push_back({detail::parse_integer(cells[0], "id"), detail::parse_double(cells[1], "energy")});
    }
    return DemandSet(std::move(demands));
}

inline DemandSet read_demands(const std::filesystem::path& path) { return parse_demands(read_text_file(path)); }

inline std::string demands_to_csv(const DemandSet& demands) {
    std::string out = "id,energy\n";
    for (const Demand& d : demands) {
        out += std::to_string(d.id) + "," + format_number(d.energy) + "\n";
    }
    return out;
}

// One row per breakpoint; the final row (t = 1) repeats the last level.
inline std::string profile_to_csv(const StepFunction& f) {
    std::string out = "t,power\n";
    const auto& bp = f.breakpoints();
    const auto& vals = f.values();
    for (std::size_t k = 0; k < bp.size(); ++k) {
        out += format_number(bp[k]) + "," + format_number(vals[std::min(k, vals.size() - 1)]) + "\n";
    }
    return out;
}

inline StepFunction profile_from_csv(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty() || detail::split_csv_row(lines.front()) != std::vector<std::string>{"t", "power"}) {
        throw ParameterError("profile CSV must start with the header 't,power'");
    }
    std::vector<double> bp;
    std::vector<double> vals;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto cells = detail::split_csv_row(lines[k]);
        if (cells.size() != 2) {
            throw ParameterError("profile CSV rows need two columns");
        }
        bp.push_back(detail::parse_double(cells[0], "time"));
        vals.push_back(detail::parse_double(cells[1], "power"));
    }
    if (!vals.empty()) {
        vals.pop_back();
    }
    return StepFunction(std::move(bp), std::move(vals));
}

inline Json assignments_to_json(const std::vector<Assignment>& assignments) {
    Json arr = Json::array();
    for (const Assignment& a : assignments) {
        Json obj;
        obj["id"] = a.demand_id;
        obj["tau"] = number(a.tau);
        obj["s"] = number(a.s);
        obj["d"] = number(a.d);
        obj["slot"] = a.slot ? Json(*a.slot) : Json(nullptr);
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline Json policy_to_json(const Policy& policy) { return assignments_to_json(policy.assignments); }

inline std::vector<Assignment> assignments_from_json(const Json& arr) {
    if (!arr.is_array()) {
        throw ParameterError("policy JSON must be an array");
    }
    std::vector<Assignment> out;
    for (const Json& obj : arr) {
        Assignment a;
        a.demand_id = obj.at("id").get<DemandId>();
        a.tau = obj.at("tau").get<double>();
        a.s = obj.at("s").get<double>();
        a.d = obj.at("d").get<double>();
        if (obj.contains("slot") && !obj.at("slot").is_null()) {
            a.slot = obj.at("slot").get<std::size_t>();
        }
        out.push_back(a);
    }
    return out;
}

inline Json plan_to_json(const SlotPlan& plan, bool in_good_region) {
    Json obj;
    obj["case"] = std::string(to_string(plan.instance_case));
    obj["k0"] = plan.k0;
    obj["s0"] = number(plan.s0);
    obj["z_star"] = number(plan.z_star);
    obj["good_region"] = in_good_region;
    return obj;
}

inline Json certificate_to_json(const BoundCertificate& cert) {
    Json obj;
    obj["a_bar"] = number(cert.a_bar);
    obj["upper"] = number(cert.upper);
    if (cert.achieved_peak) {
        obj["achieved_peak"] = number(*cert.achieved_peak);
        obj["within"] = cert.within;
    }
    return obj;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
    Json obj;
    obj["ell"] = cfg.ell;
    obj["r"] = cfg.r;
    obj["n_values"] = cfg.n_values;
    obj["reps"] = cfg.reps;
    obj["seed"] = cfg.seed;
    Json algos = Json::array();
    for (Algorithm a : cfg.algorithms) {
        algos.push_back(std::string(to_string(a)));
    }
    obj["algorithms"] = std::move(algos);
    return obj;
}

inline ExperimentConfig config_from_json(const Json& obj) {
    try {
        ExperimentConfig cfg;
        cfg.ell = obj.at("ell").get<double>();
        cfg.r = obj.at("r").get<double>();
        cfg.n_values = obj.at("n_values").get<std::vector<std::size_t>>();
        cfg.reps = obj.value("reps", std::size_t{30});
        cfg.seed = obj.value("seed", std::uint64_t{1});
        if (obj.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const Json& name : obj.at("algorithms")) {
                const auto a = algorithm_from_string(name.get<std::string>());
                if (!a) {
                    throw ParameterError("unknown algorithm " + name.dump());
                }
                cfg.algorithms.push_back(*a);
            }
        }
        cfg.validate();
        return cfg;
    } catch (const Json::exception& e) {
        throw ParameterError(std::string("malformed experiment config: ") + e.what());
    }
}

inline Json result_to_json(const ExperimentResult& result) {
    Json obj;
    obj["config"] = config_to_json(result.config);
    Json series = Json::array();
    for (const Series& s : result.series) {
        Json item;
        item["n"] = s.n;
        item["algorithm"] = std::string(to_string(s.algorithm));
        item["mean_peak"] = number(s.mean_peak);
        item["std_peak"] = number(s.std_peak);
        item["ci_half_width"] = number(s.ci_half_width);
        item["peaks"] = numbers(s.peaks);
        item["a_bar"] = numbers(s.a_bar);
        item["upper"] = numbers(s.upper);
        item["slot_bound"] = numbers(s.slot_bound);
        series.push_back(std::move(item));
    }
    obj["series"] = std::move(series);
    return obj;
}

inline ExperimentResult result_from_json(const Json& obj) {
    try {
        ExperimentResult result;
        result.config = config_from_json(obj.at("config"));
        for (const Json& item : obj.at("series")) {
            Series s;
            s.n = item.at("n").get<std::size_t>();
            const auto a = algorithm_from_string(item.at("algorithm").get<std::string>());
            if (!a) {
                throw ParameterError("unknown algorithm in result");
            }
            s.algorithm = *a;
            s.mean_peak = item.at("mean_peak").get<double>();
            s.std_peak = item.at("std_peak").get<double>();
            s.ci_half_width = item.at("ci_half_width").get<double>();
            s.peaks = item.at("peaks").get<std::vector<double>>();
            s.a_bar = item.at("a_bar").get<std::vector<double>>();
            s.upper = item.at("upper").get<std::vector<double>>();
            s.slot_bound = item.at("slot_bound").get<std::vector<double>>();
            result.series.push_back(std::move(s));
        }
        return result;
    } catch (const Json::exception& e) {
        throw ParameterError(std::string("malformed experiment result: ") + e.what());
    }
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// Columns: n, mean_peak_psp, ci_psp, mean_peak_greedy, ci_greedy, mean_bound.
// Cells for an algorithm that was not run are left empty.
inline std::string curve_csv(const ExperimentResult& result) {
    std::string out = "n,mean_peak_psp,ci_psp,mean_peak_greedy,ci_greedy,mean_bound\n";
    for (std::size_t n : result.config.n_values) {
        const Series* psp = result.find(n, Algorithm::PspFill);
        const Series* greedy = result.find(n, Algorithm::Greedy);
        const Series* any = psp ? psp : greedy;
        double bound_sum = 0.0;
        for (double u : any->upper) {
            bound_sum += u;
        }
        out += std::to_string(n) + ",";
        out += psp ? format_number(psp->mean_peak) + "," + format_number(psp->ci_half_width) + "," : ",,";
        out += greedy ? format_number(greedy->mean_peak) + "," + format_number(greedy->ci_half_width) + "," : ",,";
        out += format_number(bound_sum / static_cast<double>(any->upper.size())) + "\n";
    }
    return out;
}

} // namespace psp::io
