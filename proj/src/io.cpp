#include "lietrans/io.hpp"

#include "lietrans/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lietrans::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  return out;
}

void write_rows(std::ostream& out, const Matrix& m) {
  std::string line;
  for (Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line.push_back(',');
      line += format_double(m(i, j));
    }
    line.push_back('\n');
    out << line;
  }
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  return std::string(buf, ptr);
}

void write_csv(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_rows(out, m);
}

void write_csv(const fs::path& path, const Matrix& m, const std::vector<std::string>& header) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  write_rows(out, m);
}

Matrix read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    auto fields = split(sv, ',');
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t j = 0; j < fields.size() && ok; ++j) ok = parse_double(fields[j], row[j]);
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidInput(path.string() + ": malformed number on row " + std::to_string(rows.size() + 1));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput(path.string() + ": ragged row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput(path.string() + ": no data rows");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_pgm(const fs::path& path,
               const Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic>& pixels) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << pixels.cols() << ' ' << pixels.rows() << "\n255\n";
  for (Index r = 0; r < pixels.rows(); ++r)
    for (Index c = 0; c < pixels.cols(); ++c) out.put(static_cast<char>(pixels(r, c)));
}

Matrix read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    char ch;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(ch);
    }
    return tok;
  };
  const std::string magic = next_token();
  if (magic != "P5" && magic != "P2") throw InvalidInput(path.string() + ": not a PGM file");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw InvalidInput(path.string() + ": malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw InvalidInput(path.string() + ": unsupported PGM geometry");
  }
  Matrix img(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (magic == "P5") {
        char ch;
        if (!in.get(ch)) throw InvalidInput(path.string() + ": truncated PGM");
        img(r, c) = static_cast<unsigned char>(ch);
      } else {
        img(r, c) = std::stoi(next_token());
      }
    }
  }
  return img;
}

Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic> to_gray(const Matrix& img, double lo,
                                                                     double hi) {
  Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic> out(img.rows(), img.cols());
  const double span = hi > lo ? hi - lo : 1.0;
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      const double v = std::round(255.0 * (img(r, c) - lo) / span);
      out(r, c) = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
    }
  }
  return out;
}

Matrix as_image(const Eigen::Ref<const Vector>& row, int side) {
  if (row.size() != Index(side) * side) throw InvalidInput("as_image: length is not side²");
  Matrix img(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) img(r, c) = row(Index(r) * side + c);
  return img;
}

namespace {

TransformSpec kind_from_json(const nlohmann::json& j) {
  TransformSpec t;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "rotation2d") t.kind = TransformKind::rotation2d;
    else if (s == "image_rotation") t.kind = TransformKind::image_rotation;
    else if (s == "translate_h") t.kind = TransformKind::translate_h;
    else if (s == "translate_v") t.kind = TransformKind::translate_v;
    else throw InvalidInput("unknown transform kind '" + s + "'");
    return t;
  }
  if (j.is_object() && j.contains("custom")) {
    const auto& rows = j.at("custom");
    if (!rows.is_array() || rows.empty()) throw InvalidInput("custom generator must be a matrix");
    const auto d = static_cast<Index>(rows.size());
    t.kind = TransformKind::custom;
    t.custom.resize(d, d);
    for (Index r = 0; r < d; ++r) {
      if (!rows[r].is_array() || static_cast<Index>(rows[r].size()) != d) {
        throw InvalidInput("custom generator must be square");
      }
      for (Index c = 0; c < d; ++c) t.custom(r, c) = rows[r][c].get<double>();
    }
    return t;
  }
  throw InvalidInput("transform kind must be a name or {\"custom\": matrix}");
}

nlohmann::json kind_to_json(const TransformSpec& t) {
  if (t.kind != TransformKind::custom) return to_string(t.kind);
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < t.custom.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < t.custom.cols(); ++c) row.push_back(t.custom(r, c));
    rows.push_back(row);
  }
  return {{"custom", rows}};
}

}  // namespace

SyntheticSpec spec_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InvalidInput("synthetic spec must be a JSON object");
    static const std::vector<std::string> known = {"kind",   "side", "strength_low", "strength_high",
                                                   "K",      "n",    "seed",         "exactness"};
    for (const auto& [key, _] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw InvalidInput("unknown synthetic spec field '" + key + "'");
      }
    }
    SyntheticSpec s;
    const auto& kind = j.at("kind");
    if (kind.is_array()) {
      for (const auto& k : kind) s.kind.push_back(kind_from_json(k));
    } else {
      s.kind.push_back(kind_from_json(kind));
    }
    s.side = j.value("side", 0);
    s.strength_low = j.value("strength_low", 0.05);
    s.strength_high = j.value("strength_high", 0.2);
    s.K = j.value("K", static_cast<int>(s.kind.size()));
    s.n = j.at("n").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    const auto ex = j.value("exactness", std::string("first_order"));
    if (ex == "exponential") s.exactness = Exactness::exponential;
    else if (ex == "first_order") s.exactness = Exactness::first_order;
    else throw InvalidInput("exactness must be 'exponential' or 'first_order'");
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("synthetic spec: ") + e.what());
  }
}

nlohmann::json spec_to_json(const SyntheticSpec& spec) {
  nlohmann::json kinds = nlohmann::json::array();
  for (const auto& k : spec.kind) kinds.push_back(kind_to_json(k));
  return {{"kind", kinds},
          {"side", spec.side},
          {"strength_low", spec.strength_low},
          {"strength_high", spec.strength_high},
          {"K", spec.K},
          {"n", spec.n},
          {"seed", spec.seed},
          {"exactness", to_string(spec.exactness)}};
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_generators(const fs::path& dir, const GeneratorSet& gens, const std::string& prefix) {
  for (std::size_t k = 0; k < gens.K(); ++k) {
    write_csv(dir / (prefix + "_" + std::to_string(k + 1) + ".csv"), gens[k]);
  }
}

GeneratorSet read_generators(const fs::path& dir) {
  for (const std::string prefix : {"gen", "truth"}) {
    std::vector<Matrix> gens;
    for (int k = 1;; ++k) {
      const auto p = dir / (prefix + "_" + std::to_string(k) + ".csv");
      if (!fs::exists(p)) break;
      gens.push_back(read_csv(p));
    }
    if (!gens.empty()) return GeneratorSet(std::move(gens));
  }
  throw InvalidInput("no generator files (gen_k.csv or truth_k.csv) in " + dir.string());
}

}  // namespace lietrans::io
