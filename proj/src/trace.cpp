#include "ixdrl/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ixdrl/common.hpp"
#include "json.hpp"

namespace ixdrl {

using nlohmann::json;

namespace {

constexpr double kDistTolerance = 1e-6;
// Sums this close to 1 are left untouched so load(write(d)) stays bit-exact.
constexpr double kRenormalizeSlack = 1e-12;

struct StepIssue {
  ErrorCode code;
  std::string message;
};

std::optional<StepIssue> check_step(const Manifest& m, Step& s) {
  if (s.features.size() != m.feature_count()) {
    return StepIssue{ErrorCode::ManifestMismatch,
                     "expected " + std::to_string(m.feature_count()) + " features, got " +
                         std::to_string(s.features.size())};
  }
  for (double f : s.features) {
    if (!std::isfinite(f)) return StepIssue{ErrorCode::MalformedRecord, "non-finite feature value"};
  }
  if (s.action.size() != m.factor_count()) {
    return StepIssue{ErrorCode::ManifestMismatch,
                     "expected " + std::to_string(m.factor_count()) + " actions, got " +
                         std::to_string(s.action.size())};
  }
  if (s.dists.size() != m.factor_count()) {
    return StepIssue{ErrorCode::ManifestMismatch,
                     "expected " + std::to_string(m.factor_count()) + " dists, got " +
                         std::to_string(s.dists.size())};
  }
  for (std::size_t f = 0; f < m.factor_count(); ++f) {
    const std::size_t n = m.actions_per_factor[f].size();
    if (s.dists[f].size() != n) {
      return StepIssue{ErrorCode::ManifestMismatch, "dist for factor '" + m.factor_names[f] +
                                                        "' has length " +
                                                        std::to_string(s.dists[f].size()) +
                                                        ", expected " + std::to_string(n)};
    }
    if (s.action[f] < 0 || static_cast<std::size_t>(s.action[f]) >= n) {
      return StepIssue{ErrorCode::MalformedRecord,
                       "action index out of range for factor '" + m.factor_names[f] + "'"};
    }
    if (auto msg = check_and_normalize_dist(s.dists[f]); !msg.empty()) {
      return StepIssue{ErrorCode::MalformedRecord, "factor '" + m.factor_names[f] + "': " + msg};
    }
  }
  if (!std::isfinite(s.value)) return StepIssue{ErrorCode::MalformedRecord, "non-finite value"};
  if (!std::isfinite(s.reward)) return StepIssue{ErrorCode::MalformedRecord, "non-finite reward"};
  return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MalformedRecord, where + ": missing key '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, where + ": bad type for '" + key + "'");
  }
}

void append_double_array(std::string& out, const std::vector<double>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  out += ']';
}

}  // namespace

void Manifest::validate() const {
  if (factor_names.empty()) throw Error(ErrorCode::InvalidArgument, "manifest needs at least one factor");
  if (actions_per_factor.size() != factor_names.size()) {
    throw Error(ErrorCode::InvalidArgument, "actions_per_factor must list one entry per factor");
  }
  for (std::size_t f = 0; f < actions_per_factor.size(); ++f) {
    if (actions_per_factor[f].empty()) {
      throw Error(ErrorCode::InvalidArgument, "factor '" + factor_names[f] + "' has no actions");
    }
  }
  std::set<std::string> seen(feature_names.begin(), feature_names.end());
  if (seen.size() != feature_names.size()) throw Error(ErrorCode::InvalidArgument, "duplicate feature names");
  if (!(discount >= 0.0 && discount <= 1.0)) throw Error(ErrorCode::InvalidArgument, "discount must lie in [0,1]");
  if (reward_range_override && !(reward_range_override->first <= reward_range_override->second)) {
    throw Error(ErrorCode::InvalidArgument, "reward_range must be (min, max) with min <= max");
  }
}

std::size_t Dataset::step_count() const {
  std::size_t n = 0;
  for (const auto& tr : traces) n += tr.steps.size();
  return n;
}

std::string check_and_normalize_dist(std::vector<double>& dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) return "probabilities must be finite and non-negative";
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistTolerance) {
    return "probabilities sum to " + format_double(sum) + ", not 1";
  }
  if (std::abs(sum - 1.0) > kRenormalizeSlack) {
    for (double& p : dist) p /= sum;
  }
  return {};
}

void validate_dataset(Dataset& dataset) {
  dataset.manifest.validate();
  if (dataset.traces.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no traces");
  std::unordered_set<std::string> ids;
  for (auto& tr : dataset.traces) {
    if (!ids.insert(tr.trace_id).second) {
      throw Error(ErrorCode::MalformedRecord, "duplicate trace id '" + tr.trace_id + "'");
    }
    if (tr.steps.empty()) throw Error(ErrorCode::MalformedRecord, "trace '" + tr.trace_id + "' is empty");
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
      Step& s = tr.steps[i];
      const std::string where = "trace '" + tr.trace_id + "' t=" + std::to_string(s.t);
      if (s.trace_id != tr.trace_id) throw Error(ErrorCode::MalformedRecord, where + ": step trace_id mismatch");
      if (s.t != i) throw Error(ErrorCode::NonContiguousTimesteps, where + ": expected t=" + std::to_string(i));
      if (s.done && i + 1 != tr.steps.size()) {
        throw Error(ErrorCode::MalformedRecord, where + ": done set before the final step");
      }
      if (auto issue = check_step(dataset.manifest, s)) throw Error(issue->code, where + ": " + issue->message);
    }
  }
}

std::filesystem::path sidecar_manifest_path(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p.replace_extension(".manifest.json");
  return p;
}

Manifest load_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRecord, "manifest " + path.string() + ": " + e.what());
  }
  const std::string where = "manifest " + path.string();
  if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, where + ": not a JSON object");
  Manifest m;
  m.schema_version = required<std::string>(j, "schema_version", where);
  if (m.schema_version != "1") {
    throw Error(ErrorCode::MalformedRecord, where + ": unsupported schema_version '" + m.schema_version + "'");
  }
  m.factor_names = required<std::vector<std::string>>(j, "factor_names", where);
  m.actions_per_factor = required<std::vector<std::vector<std::string>>>(j, "actions_per_factor", where);
  m.feature_names = required<std::vector<std::string>>(j, "feature_names", where);
  m.discount = required<double>(j, "discount", where);
  if (auto it = j.find("reward_range"); it != j.end() && !it->is_null()) {
    auto rr = required<std::vector<double>>(j, "reward_range", where);
    if (rr.size() != 2) throw Error(ErrorCode::MalformedRecord, where + ": reward_range must have 2 entries");
    m.reward_range_override = std::make_pair(rr[0], rr[1]);
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
  }
  return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = m.schema_version;
  j["factor_names"] = m.factor_names;
  j["actions_per_factor"] = m.actions_per_factor;
  j["feature_names"] = m.feature_names;
  j["discount"] = m.discount;
  if (m.reward_range_override) {
    j["reward_range"] = {m.reward_range_override->first, m.reward_range_override->second};
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& trace_path, const std::filesystem::path& manifest_path) {
  Dataset ds;
  ds.manifest = load_manifest(manifest_path);

  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + trace_path.string());

  std::unordered_set<std::string> finished;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const std::string where = trace_path.filename().string() + ":" + std::to_string(line_no);

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::MalformedRecord, where + ": invalid JSON");
    }
    if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, where + ": record is not an object");

    Step s;
    s.trace_id = required<std::string>(j, "trace_id", where);
    const auto& tj = j.find("t");
    if (tj == j.end() || !tj->is_number_integer() || tj->get<long long>() < 0) {
      throw Error(ErrorCode::MalformedRecord, where + ": 't' must be a non-negative integer");
    }
    s.t = tj->get<std::size_t>();
    s.features = required<std::vector<double>>(j, "features", where);
    s.action = required<std::vector<int>>(j, "action", where);
    s.dists = required<std::vector<std::vector<double>>>(j, "dists", where);
    s.value = required<double>(j, "value", where);
    s.reward = required<double>(j, "reward", where);
    s.done = required<bool>(j, "done", where);
    std::optional<std::string> tag;
    if (auto it = j.find("outcome_tag"); it != j.end() && !it->is_null()) {
      tag = required<std::string>(j, "outcome_tag", where);
    }

    if (auto issue = check_step(ds.manifest, s)) throw Error(issue->code, where + ": " + issue->message);

    if (ds.traces.empty() || ds.traces.back().trace_id != s.trace_id) {
      if (!ds.traces.empty()) finished.insert(ds.traces.back().trace_id);
      if (finished.count(s.trace_id)) {
        throw Error(ErrorCode::MalformedRecord, where + ": steps of trace '" + s.trace_id + "' are not contiguous");
      }
      ds.traces.push_back(Trace{s.trace_id, {}, tag});
    }
    Trace& tr = ds.traces.back();
    if (s.t != tr.steps.size()) {
      throw Error(ErrorCode::NonContiguousTimesteps, where + ": expected t=" + std::to_string(tr.steps.size()) +
                                                         ", got t=" + std::to_string(s.t));
    }
    if (!tr.steps.empty() && tr.steps.back().done) {
      throw Error(ErrorCode::MalformedRecord, where + ": step follows a done step");
    }
    if (tag != tr.outcome_tag) throw Error(ErrorCode::MalformedRecord, where + ": outcome_tag changes within trace");
    tr.steps.push_back(std::move(s));
  }
  if (ds.traces.empty()) throw Error(ErrorCode::EmptyDataset, trace_path.string() + " holds no records");
  return ds;
}

std::string step_to_jsonl(const Step& s, const std::optional<std::string>& outcome_tag) {
  std::string out;
  out.reserve(256);
  out += "{\"trace_id\":";
  out += json(s.trace_id).dump();
  out += ",\"t\":" + std::to_string(s.t);
  out += ",\"features\":";
  append_double_array(out, s.features);
  out += ",\"action\":[";
  for (std::size_t i = 0; i < s.action.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.action[i]);
  }
  out += "],\"dists\":[";
  for (std::size_t i = 0; i < s.dists.size(); ++i) {
    if (i) out += ',';
    append_double_array(out, s.dists[i]);
  }
  out += "],\"value\":" + format_double(s.value);
  out += ",\"reward\":" + format_double(s.reward);
  out += ",\"done\":";
  out += s.done ? "true" : "false";
  if (outcome_tag) {
    out += ",\"outcome_tag\":";
    out += json(*outcome_tag).dump();
  }
  out += '}';
  return out;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& trace_path,
                   const std::filesystem::path& manifest_path) {
  if (ds.traces.empty()) throw Error(ErrorCode::EmptyDataset, "refusing to write a dataset with no traces");
  std::ofstream out(trace_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + trace_path.string());
  for (const auto& tr : ds.traces) {
    for (const auto& s : tr.steps) out << step_to_jsonl(s, tr.outcome_tag) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + trace_path.string());
  write_manifest(ds.manifest, manifest_path);
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  st.trace_count = ds.traces.size();
  bool first = true;
  for (const auto& tr : ds.traces) {
    for (const auto& s : tr.steps) {
      if (first) {
        st.value_min = st.value_max = s.value;
        st.reward_min = st.reward_max = s.reward;
        first = false;
        continue;
      }
      st.value_min = std::min(st.value_min, s.value);
      st.value_max = std::max(st.value_max, s.value);
      st.reward_min = std::min(st.reward_min, s.reward);
      st.reward_max = std::max(st.reward_max, s.reward);
    }
  }
  if (ds.manifest.reward_range_override) {
    st.reward_min = ds.manifest.reward_range_override->first;
    st.reward_max = ds.manifest.reward_range_override->second;
  }
  if (st.trace_count > 0) {
    double sum = 0.0;
    for (const auto& tr : ds.traces) sum += static_cast<double>(tr.length());
    st.length_mean = sum / static_cast<double>(st.trace_count);
    double var = 0.0;
    for (const auto& tr : ds.traces) {
      const double d = static_cast<double>(tr.length()) - st.length_mean;
      var += d * d;
    }
    st.length_std = std::sqrt(var / static_cast<double>(st.trace_count));
  }
  return st;
}

}  // namespace ixdrl
