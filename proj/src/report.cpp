#include "ixdrl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ixdrl/common.hpp"

namespace ixdrl {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::MalformedRecord, where + ": bad number '" + s + "'");
  return v;
}

std::size_t parse_index(const std::string& s, const std::string& where) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedRecord, where + ": bad integer '" + s + "'");
  }
  return v;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
  return out;
}

// Fixed-precision coordinates keep SVG output short and stable.
std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string frame_to_csv(const InterestingnessFrame& frame) {
  std::string out = "trace_id,t";
  for (const auto& v : frame.variables) out += "," + csv_escape(v);
  out += '\n';
  const std::size_t nv = frame.variable_count();
  for (const auto& tr : frame.traces) {
    const std::string id = csv_escape(tr.trace_id);
    for (std::size_t t = 0; t < tr.length; ++t) {
      out += id;
      out += ',';
      out += std::to_string(t);
      for (std::size_t v = 0; v < nv; ++v) {
        out += ',';
        out += format_double(tr.at(t, v, nv));
      }
      out += '\n';
    }
  }
  return out;
}

InterestingnessFrame frame_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedRecord, "interestingness CSV is empty");
  const auto header = csv_split(lines[0]);
  if (header.size() < 3 || header[0] != "trace_id" || header[1] != "t") {
    throw Error(ErrorCode::MalformedRecord, "interestingness CSV must start with trace_id,t");
  }
  InterestingnessFrame frame;
  frame.variables.assign(header.begin() + 2, header.end());
  const std::size_t nv = frame.variables.size();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string where = "interestingness CSV line " + std::to_string(li + 1);
    const auto cells = csv_split(lines[li]);
    if (cells.size() != nv + 2) throw Error(ErrorCode::MalformedRecord, where + ": wrong column count");
    const std::size_t t = parse_index(cells[1], where);
    if (frame.traces.empty() || frame.traces.back().trace_id != cells[0]) {
      frame.traces.push_back(TraceInterestingness{cells[0], 0, {}, {}});
    }
    auto& tr = frame.traces.back();
    if (t != tr.length) throw Error(ErrorCode::NonContiguousTimesteps, where + ": expected t=" + std::to_string(tr.length));
    for (std::size_t v = 0; v < nv; ++v) tr.values.push_back(parse_double(cells[v + 2], where));
    ++tr.length;
  }
  return frame;
}

std::string distance_matrix_to_csv(const DistanceMatrix& dm) {
  std::string out = join_row(dm.trace_ids);
  for (std::size_t i = 0; i < dm.n; ++i) {
    for (std::size_t j = 0; j < dm.n; ++j) {
      if (j) out += ',';
      out += format_double(dm(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix distance_matrix_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedRecord, "distance matrix CSV is empty");
  DistanceMatrix dm(csv_split(lines[0]).size());
  dm.trace_ids = csv_split(lines[0]);
  if (lines.size() != dm.n + 1) throw Error(ErrorCode::MalformedRecord, "distance matrix CSV is not square");
  for (std::size_t i = 0; i < dm.n; ++i) {
    const auto cells = csv_split(lines[i + 1]);
    if (cells.size() != dm.n) throw Error(ErrorCode::MalformedRecord, "distance matrix CSV is not square");
    for (std::size_t j = 0; j < dm.n; ++j) dm.d[i * dm.n + j] = parse_double(cells[j], "distance matrix");
  }
  return dm;
}

std::string partition_to_csv(const Partition& p, const std::vector<std::string>& trace_ids) {
  std::string out = "trace_id,cluster\n";
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    out += csv_escape(trace_ids.at(i)) + "," + std::to_string(p.labels[i]) + "\n";
  }
  return out;
}

json ranking_to_json(const PartitionSelection& sel) {
  json arr = json::array();
  for (std::size_t r = 0; r < sel.ranking.size(); ++r) {
    const auto& p = sel.ranking[r];
    arr.push_back(json{{"k", p.k},
                       {"silhouette", p.silhouette},
                       {"smallest_cluster", p.smallest_cluster},
                       {"rank", p.rank},
                       {"chosen", r == sel.chosen}});
  }
  return arr;
}

json dendrogram_to_json(const Dendrogram& dend) {
  json merges = json::array();
  for (const auto& m : dend.merges) merges.push_back(json{{"a", m.a}, {"b", m.b}, {"height", m.height}, {"size", m.size}});
  return json{{"leaves", dend.leaves}, {"merges", std::move(merges)}};
}

std::string profiles_to_csv(const ProfileTable& table) {
  std::string out = "cluster,count";
  for (const auto& d : table.dimensions) out += "," + d;
  out += '\n';
  for (const auto& row : table.rows) {
    out += std::to_string(row.cluster) + "," + std::to_string(row.trace_count);
    for (double m : row.means) out += "," + format_double(m);
    out += '\n';
  }
  return out;
}

ProfileTable profiles_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedRecord, "profile CSV is empty");
  const auto header = csv_split(lines[0]);
  if (header.size() < 2 || header[0] != "cluster" || header[1] != "count") {
    throw Error(ErrorCode::MalformedRecord, "profile CSV must start with cluster,count");
  }
  ProfileTable table;
  table.dimensions.assign(header.begin() + 2, header.end());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = csv_split(lines[li]);
    if (cells.size() != header.size()) throw Error(ErrorCode::MalformedRecord, "profile CSV: wrong column count");
    ClusterProfile row;
    row.cluster = parse_index(cells[0], "profile CSV");
    row.trace_count = parse_index(cells[1], "profile CSV");
    for (std::size_t c = 2; c < cells.size(); ++c) row.means.push_back(parse_double(cells[c], "profile CSV"));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string importance_to_csv(const GlobalImportance& gi) {
  std::string out = "feature,mean_abs_shap,rank\n";
  for (const auto& f : gi.ranking) {
    out += csv_escape(f.feature) + "," + format_double(f.mean_abs_shap) + "," + std::to_string(f.rank) + "\n";
  }
  return out;
}

std::string density_to_csv(const GlobalImportance& gi) {
  std::string out = "feature,row_id,shap,feature_value\n";
  for (const auto& p : gi.density) {
    out += csv_escape(p.feature) + "," + std::to_string(p.row_id) + "," + format_double(p.shap) + "," +
           format_double(p.feature_value) + "\n";
  }
  return out;
}

json local_explanations_to_json(const std::vector<LocalExplanation>& items) {
  json arr = json::array();
  for (const auto& e : items) {
    json contribs = json::array();
    for (const auto& c : e.contributions) contribs.push_back(json{{"feature", c.feature}, {"value", c.value}, {"phi", c.phi}});
    arr.push_back(json{{"trace_id", e.outlier.trace_id},
                       {"t", e.outlier.t},
                       {"dimension", e.outlier.dimension},
                       {"value", e.outlier.value},
                       {"direction", std::string(to_string(e.outlier.direction))},
                       {"fences", {e.outlier.lower, e.outlier.upper}},
                       {"base_value", e.base_value},
                       {"prediction", e.prediction},
                       {"contributions", std::move(contribs)},
                       {"remainder", e.remainder}});
  }
  return arr;
}

json metrics_to_json(const ModelMetrics& m) {
  return json{{"mae", m.mae}, {"rmse", m.rmse}, {"gate_mae", m.threshold}, {"gated_in", m.gated_in}};
}

MeanOverTime mean_over_time(const InterestingnessFrame& frame) {
  MeanOverTime out;
  out.variables = frame.variables;
  std::size_t horizon = 0;
  for (const auto& tr : frame.traces) horizon = std::max(horizon, tr.length);
  const std::size_t nv = frame.variable_count();
  out.counts.assign(horizon, 0);
  out.mean.assign(horizon, std::vector<double>(nv, 0.0));
  out.ci95.assign(horizon, std::vector<double>(nv, 0.0));
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<double> sum(nv, 0.0);
    std::size_t n = 0;
    for (const auto& tr : frame.traces) {
      if (t >= tr.length) continue;
      ++n;
      for (std::size_t v = 0; v < nv; ++v) sum[v] += tr.at(t, v, nv);
    }
    out.counts[t] = n;
    for (std::size_t v = 0; v < nv; ++v) out.mean[t][v] = sum[v] / static_cast<double>(n);
    if (n < 2) continue;
    std::vector<double> sq(nv, 0.0);
    for (const auto& tr : frame.traces) {
      if (t >= tr.length) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        const double d = tr.at(t, v, nv) - out.mean[t][v];
        sq[v] += d * d;
      }
    }
    for (std::size_t v = 0; v < nv; ++v) {
      const double sd = std::sqrt(sq[v] / static_cast<double>(n - 1));
      out.ci95[t][v] = 1.96 * sd / std::sqrt(static_cast<double>(n));
    }
  }
  return out;
}

std::string mean_over_time_to_csv(const MeanOverTime& m) {
  std::string out = "t,n";
  for (const auto& v : m.variables) out += "," + v + "_mean," + v + "_ci95";
  out += '\n';
  for (std::size_t t = 0; t < m.counts.size(); ++t) {
    out += std::to_string(t) + "," + std::to_string(m.counts[t]);
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
      out += "," + format_double(m.mean[t][v]) + "," + format_double(m.ci95[t][v]);
    }
    out += '\n';
  }
  return out;
}

std::string mean_over_time_svg(const MeanOverTime& m) {
  constexpr double W = 720, H = 360, left = 50, right = 160, top = 20, bottom = 40;
  const double pw = W - left - right, ph = H - top - bottom;
  const std::size_t horizon = m.counts.size();
  auto px = [&](double t) { return left + (horizon > 1 ? t / static_cast<double>(horizon - 1) : 0.5) * pw; };
  auto py = [&](double v) { return top + (1.0 - (std::clamp(v, -1.0, 1.0) + 1.0) / 2.0) * ph; };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"360\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"720\" height=\"360\" fill=\"white\"/>\n";
  s += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(py(0)) + "\" x2=\"" + svg_num(left + pw) + "\" y2=\"" +
       svg_num(py(0)) + "\" stroke=\"#bbb\"/>\n";
  s += "<rect x=\"" + svg_num(left) + "\" y=\"" + svg_num(top) + "\" width=\"" + svg_num(pw) + "\" height=\"" +
       svg_num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  s += "<text x=\"" + svg_num(left - 8) + "\" y=\"" + svg_num(py(1) + 4) + "\" text-anchor=\"end\">1</text>\n";
  s += "<text x=\"" + svg_num(left - 8) + "\" y=\"" + svg_num(py(-1) + 4) + "\" text-anchor=\"end\">-1</text>\n";
  s += "<text x=\"" + svg_num(left + pw / 2) + "\" y=\"" + svg_num(H - 10) + "\" text-anchor=\"middle\">timestep</text>\n";

  std::size_t series = 0;
  for (auto name : dim::kBase) {
    const auto it = std::find(m.variables.begin(), m.variables.end(), name);
    if (it == m.variables.end() || horizon == 0) continue;
    const auto v = static_cast<std::size_t>(it - m.variables.begin());
    const char* color = kPalette[series % std::size(kPalette)];
    std::string band, line;
    for (std::size_t t = 0; t < horizon; ++t) band += svg_num(px(double(t))) + "," + svg_num(py(m.mean[t][v] + m.ci95[t][v])) + " ";
    for (std::size_t t = horizon; t-- > 0;) band += svg_num(px(double(t))) + "," + svg_num(py(m.mean[t][v] - m.ci95[t][v])) + " ";
    for (std::size_t t = 0; t < horizon; ++t) line += svg_num(px(double(t))) + "," + svg_num(py(m.mean[t][v])) + " ";
    s += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 14.0 * static_cast<double>(series) + 8;
    s += "<rect x=\"" + svg_num(left + pw + 12) + "\" y=\"" + svg_num(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    s += "<text x=\"" + svg_num(left + pw + 26) + "\" y=\"" + svg_num(ly + 1) + "\">" + std::string(name) + "</text>\n";
    ++series;
  }
  s += "</svg>\n";
  return s;
}

std::string profiles_svg(const ProfileTable& table) {
  constexpr double W = 720, H = 360, left = 50, right = 160, top = 20, bottom = 40;
  const double pw = W - left - right, ph = H - top - bottom;
  auto py = [&](double v) { return top + (1.0 - (std::clamp(v, -1.0, 1.0) + 1.0) / 2.0) * ph; };
  const std::size_t groups = table.rows.size();
  const std::size_t bars = table.dimensions.size();

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"360\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"720\" height=\"360\" fill=\"white\"/>\n";
  s += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(py(0)) + "\" x2=\"" + svg_num(left + pw) + "\" y2=\"" +
       svg_num(py(0)) + "\" stroke=\"#333\"/>\n";
  if (groups > 0 && bars > 0) {
    const double gw = pw / static_cast<double>(groups);
    const double bw = gw * 0.8 / static_cast<double>(bars);
    for (std::size_t g = 0; g < groups; ++g) {
      const double gx = left + gw * static_cast<double>(g) + gw * 0.1;
      for (std::size_t b = 0; b < bars; ++b) {
        const double v = table.rows[g].means[b];
        const double y0 = py(std::max(v, 0.0)), y1 = py(std::min(v, 0.0));
        s += "<rect x=\"" + svg_num(gx + bw * static_cast<double>(b)) + "\" y=\"" + svg_num(y0) + "\" width=\"" +
             svg_num(bw) + "\" height=\"" + svg_num(y1 - y0) + "\" fill=\"" + kPalette[b % std::size(kPalette)] + "\"/>\n";
      }
      s += "<text x=\"" + svg_num(gx + gw * 0.4) + "\" y=\"" + svg_num(H - 20) + "\" text-anchor=\"middle\">cluster " +
           std::to_string(table.rows[g].cluster) + " (n=" + std::to_string(table.rows[g].trace_count) + ")</text>\n";
    }
  }
  for (std::size_t b = 0; b < bars; ++b) {
    const double ly = top + 14.0 * static_cast<double>(b) + 8;
    s += "<rect x=\"" + svg_num(left + pw + 12) + "\" y=\"" + svg_num(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
         kPalette[b % std::size(kPalette)] + "\"/>\n";
    s += "<text x=\"" + svg_num(left + pw + 26) + "\" y=\"" + svg_num(ly + 1) + "\">" + table.dimensions[b] + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace ixdrl
