#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ixdrl/clustering.hpp"
#include "ixdrl/gbdt.hpp"
#include "ixdrl/importance.hpp"
#include "ixdrl/interestingness.hpp"
#include "json.hpp"

namespace ixdrl {

// CSV helpers. Fields containing a comma, quote or newline are quoted.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

/// trace_id, t, then one column per frame variable; rows in trace order then t.
std::string frame_to_csv(const InterestingnessFrame& frame);
/// Inverse of frame_to_csv. v01 is not part of the export and comes back empty.
InterestingnessFrame frame_from_csv(std::string_view text);

std::string distance_matrix_to_csv(const DistanceMatrix& dm);
DistanceMatrix distance_matrix_from_csv(std::string_view text);
std::string partition_to_csv(const Partition& p, const std::vector<std::string>& trace_ids);
nlohmann::json ranking_to_json(const PartitionSelection& sel);
nlohmann::json dendrogram_to_json(const Dendrogram& dend);
std::string profiles_to_csv(const ProfileTable& table);
ProfileTable profiles_from_csv(std::string_view text);

std::string importance_to_csv(const GlobalImportance& gi);
std::string density_to_csv(const GlobalImportance& gi);
nlohmann::json local_explanations_to_json(const std::vector<LocalExplanation>& items);
nlohmann::json metrics_to_json(const ModelMetrics& m);

/// Per-timestep mean across the traces still running at t, with the 95%
/// normal-approximation half-width 1.96 sd / sqrt(n) (sample sd; 0 when n = 1).
struct MeanOverTime {
  std::vector<std::string> variables;
  std::vector<std::size_t> counts;         // traces alive at t
  std::vector<std::vector<double>> mean;   // [t][variable]
  std::vector<std::vector<double>> ci95;   // [t][variable]
};

MeanOverTime mean_over_time(const InterestingnessFrame& frame);
std::string mean_over_time_to_csv(const MeanOverTime& m);

/// Static line chart of the base dimensions with their CI bands.
std::string mean_over_time_svg(const MeanOverTime& m);
/// Grouped bar chart of a profile table.
std::string profiles_svg(const ProfileTable& table);

/// JSON text with a trailing newline; doubles keep their shortest round-trip form.
std::string dump_json(const nlohmann::json& j);

}  // namespace ixdrl
