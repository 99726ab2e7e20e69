#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdwb/ball.hpp"
#include "rdwb/best_constant.hpp"
#include "rdwb/decomposition.hpp"
#include "rdwb/envelope.hpp"
#include "rdwb/polynomial.hpp"
#include "rdwb/proof_chain.hpp"
#include "rdwb/star.hpp"
#include "rdwb/tmap.hpp"

namespace rdwb {

using Json = nlohmann::ordered_json;

inline constexpr int kReportPrecision = 12;

// Rounds to 12 significant digits so the serialized form is fixed.
double fixed_precision(double v);
std::string format_number(double v);

Json to_json(const GroupModel& model, const Element& e);
Json to_json(const LinearEnvelope& env);
Json to_json(const PolynomialBound& p);
Json to_json(const BallIndex& ball);
Json to_json(const GroupModel& model, const StarReport& report);
Json to_json(const GroupModel& model, const CountBoundFit& fit);
Json to_json(const RdProfile& profile);
Json to_json(const GroupModel& model, const ChainReport& report);
Json to_json(const GroupModel& model, const TMapReport& report);

// A table with a fixed header; cells are already formatted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable to_csv(const RdProfile& profile);
CsvTable to_csv(const GroupModel& model, const TMapReport& report);

std::string dump(const Json& j);
// Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rdwb
