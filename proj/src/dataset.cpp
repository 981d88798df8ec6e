#include "fsor/dataset.hpp"

#include "fsor/logging.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <unordered_map>

namespace fsor {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trimmed(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trimmed(cur));
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (*first == '+') ++first;  // from_chars rejects a leading '+'
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_index(const std::string& tok, std::size_t& out) {
  if (tok.empty()) return false;
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), last, out);
  return ec == std::errc() && ptr == last;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void Dataset::validate() const {
  const Eigen::Index dd = features.rows();
  const Eigen::Index nn = features.cols();
  if (dd < 1) throw DataError("dataset: needs at least one feature");
  if (nn < 2) throw DataError("dataset: needs at least two samples");
  if (static_cast<Eigen::Index>(labels.size()) != nn)
    throw DataError("dataset: label count does not match sample count");
  if (!features.allFinite())
    throw DataError("dataset: features contain non-finite values");
  const int kk = k();
  if (kk < 2) throw DataError("dataset: needs at least two classes");
  std::vector<bool> seen(static_cast<std::size_t>(kk), false);
  for (int lab : labels) {
    if (lab < 0 || lab >= kk)
      throw DataError("dataset: label out of range 0..k-1");
    seen[static_cast<std::size_t>(lab)] = true;
  }
  for (int c = 0; c < kk; ++c)
    if (!seen[static_cast<std::size_t>(c)])
      throw DataError("dataset: class " + std::to_string(c) + " has no samples");
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != dd)
    throw DataError("dataset: feature_names length does not match d");
}

Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names,
                     std::vector<std::string> label_names) {
  Dataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.feature_names = std::move(feature_names);
  if (label_names.empty()) {
    int kk = 0;
    for (int lab : ds.labels) kk = std::max(kk, lab + 1);
    for (int c = 0; c < kk; ++c) label_names.push_back(std::to_string(c));
  }
  ds.label_names = std::move(label_names);
  ds.validate();
  return ds;
}

void SynthSpec::validate() const {
  if (n_samples < 1 || n_features < 1 || n_informative < 1 || n_classes < 1)
    throw std::invalid_argument("synth spec: counts must be positive");
  if (n_informative > n_features)
    throw std::invalid_argument("synth spec: n_informative exceeds n_features");
  if (n_classes > n_samples)
    throw std::invalid_argument("synth spec: n_classes exceeds n_samples");
  if (!(class_separation > 0.0))
    throw std::invalid_argument("synth spec: class_separation must be positive");
  if (noise_std < 0.0)
    throw std::invalid_argument("synth spec: noise_std must be nonnegative");
}

LabelMatrix one_hot(const std::vector<int>& labels, int k) {
  if (k < 1) throw std::invalid_argument("one_hot: k must be positive");
  Matrix y = Matrix::Zero(k, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int lab = labels[i];
    if (lab < 0 || lab >= k)
      throw std::invalid_argument("one_hot: label " + std::to_string(lab) +
                                  " outside 0.." + std::to_string(k - 1));
    y(lab, static_cast<Eigen::Index>(i)) = 1.0;
  }
  return LabelMatrix{std::move(y)};
}

Matrix centering_matrix(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("centering_matrix: n must be >= 1");
  return Matrix::Identity(n, n) -
         Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

Matrix center_rows(const Matrix& m) {
  Matrix c = m;
  c.colwise() -= m.rowwise().mean();
  return c;
}

Dataset synthesize(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.n_samples, d = spec.n_features, k = spec.n_classes;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // round-robin labels guarantee every class is populated
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % k;

  // each informative feature gets its own class-to-level assignment so the
  // informative block is not a set of duplicated columns
  std::vector<std::vector<int>> level(static_cast<std::size_t>(spec.n_informative));
  for (auto& perm : level) {
    perm.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) perm[static_cast<std::size_t>(c)] = c;
    std::shuffle(perm.begin(), perm.end(), rng);
  }

  Matrix x(d, n);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < n; ++i) {
      double v = spec.noise_std * gauss(rng);
      if (j < spec.n_informative) {
        const int lvl = level[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        v += spec.class_separation * static_cast<double>(lvl);
      }
      x(j, i) = v;
    }
  }

  std::vector<std::string> fnames;
  for (int j = 0; j < d; ++j) fnames.push_back("f" + std::to_string(j));
  std::vector<std::string> lnames;
  for (int c = 0; c < k; ++c) lnames.push_back(std::to_string(c));
  return make_dataset(std::move(x), std::move(labels), std::move(fnames),
                      std::move(lnames));
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw DataError("empty file: " + path);

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (has_header) {
    header = rows.front();
    first_data = 1;
  }
  if (first_data >= rows.size())
    throw DataError("no data rows in: " + path);

  const std::size_t ncols =
      has_header ? header.size() : rows[first_data].size();
  if (ncols < 2)
    throw DataError("need at least one feature column and a label column");
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    if (rows[r].size() != ncols)
      throw DataError("ragged row " + std::to_string(r + 1) + ": expected " +
                      std::to_string(ncols) + " fields, got " +
                      std::to_string(rows[r].size()));
  }

  std::size_t label_idx = ncols;  // sentinel
  if (has_header) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == label_column) {
        label_idx = c;
        break;
      }
  }
  if (label_idx == ncols) {
    std::size_t parsed = 0;
    if (parse_index(label_column, parsed) && parsed < ncols)
      label_idx = parsed;
  }
  if (label_idx == ncols)
    throw DataError("label column '" + label_column + "' not found");

  const std::size_t n = rows.size() - first_data;
  const std::size_t d = ncols - 1;
  Matrix features(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  std::vector<int> labels(n);
  std::vector<std::string> label_names;
  std::unordered_map<std::string, int> label_ids;

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + first_data];
    std::size_t fi = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c == label_idx) continue;
      double v = 0.0;
      if (!parse_double(row[c], v))
        throw DataError("non-numeric value '" + row[c] + "' at row " +
                        std::to_string(r + first_data + 1) + ", column " +
                        std::to_string(c + 1));
      features(static_cast<Eigen::Index>(fi++), static_cast<Eigen::Index>(r)) = v;
    }
    const std::string& lab = row[label_idx];
    auto it = label_ids.find(lab);
    if (it == label_ids.end()) {
      it = label_ids.emplace(lab, static_cast<int>(label_names.size())).first;
      label_names.push_back(lab);
    }
    labels[r] = it->second;
  }

  std::vector<std::string> fnames;
  if (has_header) {
    for (std::size_t c = 0; c < ncols; ++c)
      if (c != label_idx) fnames.push_back(header[c]);
  }
  return make_dataset(std::move(features), std::move(labels),
                      std::move(fnames), std::move(label_names));
}

void save_csv(const Dataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (Eigen::Index i = 0; i < ds.d(); ++i) {
    if (ds.feature_names.empty())
      out << "f" << i;
    else
      out << ds.feature_names[static_cast<std::size_t>(i)];
    out << ',';
  }
  out << "label\n";
  for (Eigen::Index j = 0; j < ds.n(); ++j) {
    for (Eigen::Index i = 0; i < ds.d(); ++i)
      out << shortest(ds.features(i, j)) << ',';
    out << ds.label_names[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(j)])]
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

Dataset zscore_features(const Dataset& ds) {
  Dataset out = ds;
  const double n = static_cast<double>(ds.n());
  for (Eigen::Index i = 0; i < ds.d(); ++i) {
    const double mean = ds.features.row(i).mean();
    out.features.row(i).array() -= mean;
    const double var = out.features.row(i).squaredNorm() / n;
    if (var > 0.0) out.features.row(i) /= std::sqrt(var);
  }
  return out;
}

}  // namespace fsor
