#include "statbundle/cli/io.hpp"

#include <cstdio>
#include <sstream>

namespace statbundle::cli {

namespace {

template <typename T>
T get(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorKind::Parse, std::string("missing field \"") + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("field \"") + key + "\": " + e.what());
  }
}

std::vector<double> flatten(const Table& table, std::size_t rows, std::size_t cols,
                            const char* what) {
  if (table.size() != rows) {
    std::ostringstream os;
    os << what << ": expected " << rows << " rows, got " << table.size();
    throw Error(ErrorKind::SizeMismatch, os.str());
  }
  std::vector<double> flat;
  flat.reserve(rows * cols);
  for (std::size_t x = 0; x < rows; ++x) {
    if (table[x].size() != cols) {
      std::ostringstream os;
      os << what << ": row " << x << " has " << table[x].size() << " entries, expected " << cols;
      throw Error(ErrorKind::SizeMismatch, os.str());
    }
    flat.insert(flat.end(), table[x].begin(), table[x].end());
  }
  return flat;
}

ProductSpace parse_product(const Json& doc) {
  return ProductSpace(parse_space(get<Json>(doc, "left")), parse_space(get<Json>(doc, "right")));
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

SampleSpace parse_space(const Json& doc) {
  return SampleSpace(get<std::vector<double>>(doc, "weights"));
}

Density parse_density(const Json& doc) {
  return Density(parse_space(get<Json>(doc, "space")), get<std::vector<double>>(doc, "values"));
}

JointDensity parse_joint(const Json& doc) {
  ProductSpace space = parse_product(doc);
  std::vector<double> flat = flatten(get<Table>(doc, "values"), space.rows(), space.cols(), "joint");
  return JointDensity(std::move(space), std::move(flat));
}

FiberVector parse_joint_velocity(const Json& doc, const JointDensity& q12) {
  std::vector<double> flat =
      flatten(get<Table>(doc, "values"), q12.rows(), q12.cols(), "velocity");
  return FiberVector(q12.flat(), std::move(flat), Polarity::Exponential);
}

ExpFamily parse_family(const Json& doc) {
  const ProductSpace space = parse_product(doc);
  Density p1(space.left(), get<std::vector<double>>(doc, "base1"));
  Density p2(space.right(), get<std::vector<double>>(doc, "base2"));
  std::vector<std::vector<double>> stats;
  for (const Table& t : get<std::vector<Table>>(doc, "stats")) {
    stats.push_back(flatten(t, space.rows(), space.cols(), "statistic"));
  }
  return ExpFamily(std::move(p1), std::move(p2), std::move(stats));
}

Json space_json(const SampleSpace& space) {
  return Json{{"weights", std::vector<double>(space.weights().begin(), space.weights().end())}};
}

Json density_json(const Density& q) {
  return Json{{"space", space_json(q.space())},
              {"values", std::vector<double>(q.values().begin(), q.values().end())}};
}

Json joint_json(const ProductSpace& space, const Table& values) {
  return Json{{"left", space_json(space.left())},
              {"right", space_json(space.right())},
              {"values", values}};
}

Json velocity_json(const Table& values) { return Json{{"values", values}}; }

Json family_json(const ProductSpace& space, const std::vector<double>& base1,
                 const std::vector<double>& base2, const std::vector<Table>& stats) {
  return Json{{"left", space_json(space.left())},
              {"right", space_json(space.right())},
              {"base1", base1},
              {"base2", base2},
              {"stats", stats}};
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path) {
  if (!out_) throw Error(ErrorKind::Io, "cannot write " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error(ErrorKind::Io, "write failed on " + path_.string());
}

}  // namespace statbundle::cli
