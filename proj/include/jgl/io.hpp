#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jgl/datagen.hpp"
#include "jgl/matrix.hpp"
#include "jgl/screening.hpp"
#include "jgl/solver.hpp"
#include "jgl/validation.hpp"

namespace jgl::io {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// Matrix text: "p", then p rows of p numbers.
SymMatrix read_matrix(const fs::path& path);
void write_matrix(const fs::path& path, const SymMatrix& m);
std::string format_matrix(const SymMatrix& m);

// Sample text: "n p", then n rows of p numbers.
SampleMatrix read_samples(const fs::path& path);
void write_samples(const fs::path& path, const SampleMatrix& x);

void write_text(const fs::path& path, const std::string& text);
// Pretty-printed with sorted keys and a trailing newline.
void write_json(const fs::path& path, const Json& doc);
Json read_json(const fs::path& path);

Json to_json(const Partition& part);
Json to_json(const PartitionFamily& family);
// Accepts either {"classes": [{"components": ...}, ...]} or a bare array of
// component lists per class.
PartitionFamily family_from_json(const Json& doc, Index p);

Json to_json(const DatagenConfig& cfg);
Json to_json(const GroundTruth& truth, const DatagenConfig& cfg);
Json to_json(const SolveReport& report);
Json to_json(const ConditionReport& report);

}  // namespace jgl::io
