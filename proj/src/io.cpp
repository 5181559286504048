#include "robstaff/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "robstaff/error.hpp"

namespace robstaff {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kInvalidInput, msg); }

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        bad(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return get<T>(j, key);
}

void read_range(const json& j, double& lo, double& hi) {
    const auto r = get<std::vector<double>>(j, "initial_range");
    if (r.size() != 2) bad("initial_range must have two entries");
    lo = r[0];
    hi = r[1];
}

Station read_station(const json& j) {
    Station st;
    read_range(j, st.lo0, st.hi0);
    st.error_bounds = get<std::vector<double>>(j, "error_bounds");
    st.under_cost = get_or<double>(j, "under_cost", 1.0);
    st.over_cost = get_or<double>(j, "over_cost", 1.0);
    return st;
}

json base_json(const Instance& inst) {
    return {{"n_pools", inst.n_pools},
            {"horizon", inst.horizon},
            {"pool_sizes", inst.pool_sizes},
            {"availability", inst.availability},
            {"initial_range", {inst.lo0, inst.hi0}},
            {"error_bounds", inst.error_bounds},
            {"inconsistency", inst.inconsistency},
            {"under_cost", inst.under_cost},
            {"over_cost", inst.over_cost}};
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) bad("instance file must hold a JSON object");

    ProblemFile pf;
    Instance& inst = pf.base;
    inst.n_pools = get<int>(j, "n_pools");
    inst.horizon = get<int>(j, "horizon");
    inst.pool_sizes = get<std::vector<double>>(j, "pool_sizes");
    inst.availability = get<Matrix>(j, "availability");
    inst.error_bounds = get_or<std::vector<double>>(j, "error_bounds", {});
    inst.inconsistency = get_or<std::vector<double>>(j, "inconsistency", {});
    inst.under_cost = get_or<double>(j, "under_cost", 1.0);
    inst.over_cost = get_or<double>(j, "over_cost", 1.0);

    if (j.contains("stations")) {
        MultiStationInstance msi;
        msi.base = inst;
        if (!j.at("stations").is_array()) bad("stations must be an array");
        for (const auto& s : j.at("stations")) msi.stations.push_back(read_station(s));
        const auto obj = get_or<std::string>(j, "objective", "max");
        if (obj == "max")
            msi.objective = StationObjective::kMax;
        else if (obj == "sum")
            msi.objective = StationObjective::kSum;
        else
            bad("objective must be 'max' or 'sum'");
        pf.multi = validate_instance(msi);
        // without a top-level range the base view is the first station
        if (!j.contains("initial_range")) {
            inst = validate_instance(pf.multi->station_instance(0));
            return pf;
        }
    }

    read_range(j, inst.lo0, inst.hi0);
    inst = validate_instance(inst);

    const bool release = j.contains("budget") || j.contains("wages") || j.contains("epoch_breaks") ||
                         j.contains("release_fees") || j.contains("pre_hires");
    if (release) {
        ReleaseInstance ri;
        ri.base = inst;
        if (j.contains("budget") && !j.at("budget").is_null()) ri.budget = get<double>(j, "budget");
        ri.wages = get_or<Matrix>(j, "wages", {});
        ri.epoch_breaks = get_or<std::vector<int>>(j, "epoch_breaks", {});
        if (j.contains("release_fees")) {
            for (const auto& q : j.at("release_fees")) {
                if (q.is_null())
                    ri.release_fees.push_back(ReleaseFee::infinite());
                else if (q.is_number())
                    ri.release_fees.push_back(ReleaseFee::finite(q.get<double>()));
                else
                    bad("release_fees entries must be numbers or null");
            }
        }
        ri.pre_hires = get_or<std::vector<double>>(j, "pre_hires", {});
        pf.release = validate_instance(ri);
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string to_json(const Instance& inst) { return base_json(inst).dump(2); }

std::string to_json(const MultiStationInstance& msi) {
    json j = base_json(msi.base);
    j.erase("initial_range");
    j.erase("error_bounds");
    j.erase("under_cost");
    j.erase("over_cost");
    j["objective"] = msi.objective == StationObjective::kMax ? "max" : "sum";
    j["stations"] = json::array();
    for (const auto& st : msi.stations)
        j["stations"].push_back({{"initial_range", {st.lo0, st.hi0}},
                                 {"error_bounds", st.error_bounds},
                                 {"under_cost", st.under_cost},
                                 {"over_cost", st.over_cost}});
    return j.dump(2);
}

std::string to_json(const ReleaseInstance& ri) {
    json j = base_json(ri.base);
    j["budget"] = ri.budget ? json(*ri.budget) : json(nullptr);
    j["wages"] = ri.wages;
    j["epoch_breaks"] = ri.epoch_breaks;
    j["release_fees"] = json::array();
    for (const auto& q : ri.release_fees) j["release_fees"].push_back(q.forbidden ? json(nullptr) : json(q.value));
    j["pre_hires"] = ri.pre_hires;
    return j.dump(2);
}

void save_json(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) bad("cannot write " + path);
    out << text << '\n';
}

std::vector<PredictionInterval> read_sequence_csv(std::istream& in) {
    std::vector<PredictionInterval> out;
    std::string line;
    if (!std::getline(in, line)) bad("empty sequence file");
    int expect = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) bad("bad row: " + line);
        try {
            if (std::stoi(a) != expect) bad("sequence days must be 1, 2, ... in order");
            PredictionInterval p{std::stod(b), std::stod(c)};
            if (p.lo > p.hi) bad("interval with lo > hi on day " + a);
            out.push_back(p);
        } catch (const std::logic_error&) {
            bad("bad number in row: " + line);
        }
        ++expect;
    }
    return out;
}

std::vector<PredictionInterval> load_sequence_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    return read_sequence_csv(in);
}

void write_sequence_csv(std::ostream& out, const std::vector<PredictionInterval>& seq) {
    const auto prec = out.precision(17);
    out << "day,lo,hi\n";
    for (size_t t = 0; t < seq.size(); ++t) out << t + 1 << ',' << seq[t].lo << ',' << seq[t].hi << '\n';
    out.precision(prec);
}

}  // namespace robstaff
