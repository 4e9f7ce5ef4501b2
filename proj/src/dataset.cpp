#include "gpnas/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gpnas/error.hpp"

namespace gpnas {

using json = nlohmann::json;

const char* to_string(LabelKind kind) { return kind == LabelKind::Rank ? "rank" : "score"; }

LabelKind label_kind_from_string(const std::string& s) {
  if (s == "rank") return LabelKind::Rank;
  if (s == "score") return LabelKind::Score;
  fail(ErrorKind::Data, "unknown label kind '" + s + "' (expected rank or score)");
}

bool TaskDataset::has_labels() const {
  return !records.empty() && std::all_of(records.begin(), records.end(), [](const auto& r) { return r.label.has_value(); });
}

MatrixXd TaskDataset::feature_matrix() const {
  MatrixXd X(size(), dim());
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < dim(); ++j) X(i, j) = records[i].features[j];
  return X;
}

VectorXd TaskDataset::labels() const {
  VectorXd y(size());
  for (Index i = 0; i < size(); ++i) {
    if (!records[i].label) fail(ErrorKind::Data, "record " + std::to_string(i) + " has no label");
    y[i] = *records[i].label;
  }
  return y;
}

VectorXd TaskDataset::goodness() const {
  VectorXd y = labels();
  if (label_kind == LabelKind::Rank) y = -y;
  return y;
}

TaskDataset TaskDataset::subset(const std::vector<Index>& indices) const {
  TaskDataset out;
  out.task_id = task_id;
  out.cardinalities = cardinalities;
  out.label_kind = label_kind;
  out.records.reserve(indices.size());
  for (Index i : indices) {
    if (i < 0 || i >= size()) fail(ErrorKind::Usage, "subset index out of range");
    out.records.push_back(records[i]);
  }
  return out;
}

void validate(const TaskDataset& ds) {
  if (ds.records.empty()) fail(ErrorKind::Data, "dataset is empty");
  const auto d = ds.cardinalities.size();
  for (std::size_t j = 0; j < d; ++j)
    if (ds.cardinalities[j] < 1) fail(ErrorKind::Data, "cardinality of column " + std::to_string(j) + " must be >= 1");
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    if (r.features.size() != d)
      fail(ErrorKind::Data, "record " + std::to_string(i) + " has " + std::to_string(r.features.size()) +
                                " features, expected " + std::to_string(d));
    for (std::size_t j = 0; j < d; ++j) {
      const int v = r.features[j];
      if (v < 0 || v >= ds.cardinalities[j])
        fail(ErrorKind::Data, "record " + std::to_string(i) + " column " + std::to_string(j) + ": value " +
                                  std::to_string(v) + " outside [0, " + std::to_string(ds.cardinalities[j]) + ")");
    }
    if (r.label) {
      const double y = *r.label;
      if (!std::isfinite(y)) fail(ErrorKind::Data, "record " + std::to_string(i) + ": non-finite label");
      if (ds.label_kind == LabelKind::Rank && (y < 1.0 || y != std::floor(y)))
        fail(ErrorKind::Data, "record " + std::to_string(i) + ": rank labels must be integers >= 1");
    }
  }
}

namespace {

std::vector<int> observed_cardinalities(const std::vector<ArchRecord>& records, std::size_t d) {
  std::vector<int> card(d, 1);
  for (const auto& r : records)
    for (std::size_t j = 0; j < d && j < r.features.size(); ++j) card[j] = std::max(card[j], r.features[j] + 1);
  return card;
}

void finish(TaskDataset& ds, std::size_t d, const std::optional<std::vector<int>>& declared) {
  if (ds.records.empty()) fail(ErrorKind::Data, "dataset is empty");
  if (declared) {
    if (declared->size() != d)
      fail(ErrorKind::Data, "declared cardinalities have " + std::to_string(declared->size()) + " columns, data has " +
                                std::to_string(d));
    ds.cardinalities = *declared;
  } else {
    ds.cardinalities = observed_cardinalities(ds.records, d);
  }
  validate(ds);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int parse_int_cell(const std::string& cell, std::size_t line_no) {
  int v = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty())
    fail(ErrorKind::Data, "line " + std::to_string(line_no) + ": malformed integer '" + cell + "'");
  return v;
}

double parse_double_cell(const std::string& cell, std::size_t line_no) {
  double v = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty())
    fail(ErrorKind::Data, "line " + std::to_string(line_no) + ": malformed number '" + cell + "'");
  return v;
}

}  // namespace

TaskDataset parse_csv_dataset(const std::string& text, const DatasetSchema& schema) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_cells(line);
      break;
    }
  }
  if (header.empty()) fail(ErrorKind::Data, "CSV has no header row");
  const bool has_label_col = header.back() == "label";
  const std::size_t d = header.size() - (has_label_col ? 1 : 0);
  for (std::size_t j = 0; j < d; ++j)
    if (header[j] != "f" + std::to_string(j))
      fail(ErrorKind::Data, "CSV header column " + std::to_string(j) + " is '" + header[j] + "', expected 'f" +
                                std::to_string(j) + "'");

  TaskDataset ds;
  ds.task_id = schema.task_id;
  ds.label_kind = schema.label_kind;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (cells.size() != header.size())
      fail(ErrorKind::Data, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                                " cells, got " + std::to_string(cells.size()));
    ArchRecord rec;
    rec.features.reserve(d);
    for (std::size_t j = 0; j < d; ++j) rec.features.push_back(parse_int_cell(cells[j], line_no));
    if (has_label_col && !cells.back().empty()) {
      std::string cell = cells.back();
      // Tolerate "rank=3" / "score=0.7" label cells.
      if (const auto eq = cell.find('='); eq != std::string::npos) {
        const auto kind = label_kind_from_string(trim(cell.substr(0, eq)));
        if (kind != ds.label_kind)
          fail(ErrorKind::Data, "line " + std::to_string(line_no) + ": label tagged '" + to_string(kind) +
                                    "' in a " + to_string(ds.label_kind) + "-labelled dataset");
        cell = trim(cell.substr(eq + 1));
      }
      rec.label = parse_double_cell(cell, line_no);
    }
    ds.records.push_back(std::move(rec));
  }
  finish(ds, d, schema.cardinalities);
  return ds;
}

TaskDataset parse_json_dataset(const std::string& text, const DatasetSchema& schema) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Data, std::string("malformed dataset JSON: ") + e.what());
  }
  try {
    TaskDataset ds;
    ds.task_id = doc.value("task_id", schema.task_id);
    ds.label_kind = doc.contains("label_kind") ? label_kind_from_string(doc.at("label_kind").get<std::string>())
                                               : schema.label_kind;
    for (const auto& r : doc.at("records")) {
      ArchRecord rec;
      rec.features = r.at("features").get<std::vector<int>>();
      if (r.contains("label") && !r.at("label").is_null()) rec.label = r.at("label").get<double>();
      ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) fail(ErrorKind::Data, "dataset is empty");
    const std::size_t d = ds.records.front().features.size();
    std::optional<std::vector<int>> declared = schema.cardinalities;
    if (!declared && doc.contains("cardinalities")) declared = doc.at("cardinalities").get<std::vector<int>>();
    finish(ds, d, declared);
    return ds;
  } catch (const json::exception& e) {
    fail(ErrorKind::Data, std::string("dataset JSON does not match schema: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Data, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::Data, "write failed for '" + path.string() + "'");
}

TaskDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") return parse_json_dataset(text, schema);
  return parse_csv_dataset(text, schema);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string to_csv(const TaskDataset& ds) {
  std::string out;
  for (Index j = 0; j < ds.dim(); ++j) out += "f" + std::to_string(j) + ",";
  out += "label\n";
  for (const auto& r : ds.records) {
    for (int v : r.features) out += std::to_string(v) + ",";
    if (r.label) out += format_double(*r.label);
    out += "\n";
  }
  return out;
}

std::string to_json(const TaskDataset& ds) {
  json doc;
  doc["task_id"] = ds.task_id;
  doc["label_kind"] = to_string(ds.label_kind);
  doc["cardinalities"] = ds.cardinalities;
  json records = json::array();
  for (const auto& r : ds.records) {
    json jr;
    jr["features"] = r.features;
    jr["label"] = r.label ? json(*r.label) : json(nullptr);
    records.push_back(std::move(jr));
  }
  doc["records"] = std::move(records);
  return doc.dump(1) + "\n";
}

void save_dataset(const TaskDataset& ds, const std::filesystem::path& path) {
  write_text_file(path, path.extension() == ".json" ? to_json(ds) : to_csv(ds));
}

SplitPlan split(Index n, double fraction, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::Data, "split needs at least 2 records");
  if (!(fraction > 0.0 && fraction < 1.0)) fail(ErrorKind::Usage, "split fraction must lie in (0, 1)");
  const auto n_train = static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n)
    fail(ErrorKind::Usage, "split fraction " + format_double(fraction) + " leaves one side empty for n = " +
                               std::to_string(n));

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates so the permutation does not depend on the standard library's shuffle.
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  SplitPlan plan;
  plan.seed = seed;
  plan.train_indices.assign(order.begin(), order.begin() + n_train);
  plan.validation_indices.assign(order.begin() + n_train, order.end());
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.validation_indices.begin(), plan.validation_indices.end());
  return plan;
}

SplitPlan split(const TaskDataset& ds, double fraction, std::uint64_t seed) { return split(ds.size(), fraction, seed); }

}  // namespace gpnas
