#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robstaff/model.hpp"

namespace robstaff {

// An instance file. Station and release fields are optional; their presence
// selects the multi-station or release view of the same base instance.
struct ProblemFile {
    Instance base;
    std::optional<MultiStationInstance> multi;
    std::optional<ReleaseInstance> release;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

std::string to_json(const Instance& inst);
std::string to_json(const MultiStationInstance& msi);
std::string to_json(const ReleaseInstance& ri);
void save_json(const std::string& path, const std::string& text);

// CSV with header day,lo,hi
std::vector<PredictionInterval> read_sequence_csv(std::istream& in);
std::vector<PredictionInterval> load_sequence_csv(const std::string& path);
void write_sequence_csv(std::ostream& out, const std::vector<PredictionInterval>& seq);

}  // namespace robstaff
