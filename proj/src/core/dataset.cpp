#include "dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "text_io.hpp"

namespace tgp {

void Dataset::validate() const {
  const int k = tensor.order();
  if (k < 1) throw validation_error("dataset: tensor order must be >= 1");
  if (design.rows() != tensor.dim(k - 1))
    throw validation_error("dataset: design_points has " + std::to_string(design.rows()) +
                           " rows but the last mode has size " +
                           std::to_string(tensor.dim(k - 1)));
  if (design.cols() < 1) throw validation_error("dataset: design_dim must be >= 1");
}

namespace {

bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read dataset file " + path);

  Dataset ds;
  std::vector<int> dims;
  int design_dim = -1;
  std::vector<std::vector<double>> design_rows;
  std::vector<double> body;
  enum { Header, DesignPoints, Data } section = Header;

  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(line.substr(1, eq - 1));
        if (!key.empty()) ds.meta[key] = trim(line.substr(eq + 1));
      }
      continue;
    }
    const std::string where = path + ":" + std::to_string(lineno);
    if (section == Header) {
      auto cells = split(line, ',');
      if (cells[0] == "dims") {
        for (size_t i = 1; i < cells.size(); ++i) dims.push_back(std::stoi(trim(cells[i])));
      } else if (cells[0] == "design_dim") {
        if (cells.size() != 2) throw validation_error(where + ": bad design_dim line");
        design_dim = std::stoi(trim(cells[1]));
      } else if (cells[0] == "design_points") {
        if (dims.empty()) throw validation_error(where + ": dims must come before design_points");
        if (design_dim < 1)
          throw validation_error(where + ": design_dim must come before design_points");
        section = DesignPoints;
      } else if (cells[0] == "data") {
        throw validation_error(path + ": missing design_points table before data");
      } else {
        throw validation_error(where + ": unknown header field '" + cells[0] + "'");
      }
    } else if (section == DesignPoints) {
      if (line == "data") {
        section = Data;
        continue;
      }
      auto cells = split(line, ',');
      if (static_cast<int>(cells.size()) != design_dim)
        throw validation_error(where + ": design point has " + std::to_string(cells.size()) +
                               " coordinates, expected " + std::to_string(design_dim));
      std::vector<double> row;
      for (const auto& c : cells) {
        const std::string t = trim(c);
        row.push_back(t == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(t));
      }
      design_rows.push_back(std::move(row));
    } else {
      body.push_back(std::stod(line));
    }
  }
  if (dims.empty()) throw validation_error(path + ": missing dims header field");
  if (section == Header)
    throw validation_error(path + ": missing design_points table");
  if (section == DesignPoints) throw validation_error(path + ": missing data section");

  ds.tensor = TensorK(dims, std::move(body));
  ds.design = Matrix(static_cast<int>(design_rows.size()), design_dim);
  for (size_t i = 0; i < design_rows.size(); ++i)
    for (int c = 0; c < design_dim; ++c) ds.design(static_cast<int>(i), c) = design_rows[i][c];
  ds.validate();
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write dataset file " + path);
  f << "# tensorgp dataset v1\n";
  for (const auto& [k, v] : ds.meta) f << "# " << k << "=" << v << "\n";
  f << "dims";
  for (int j = 0; j < ds.tensor.order(); ++j) f << "," << ds.tensor.dim(j);
  f << "\ndesign_dim," << ds.design.cols() << "\n";
  f << "design_points\n";
  for (int i = 0; i < ds.design.rows(); ++i) {
    for (int c = 0; c < ds.design.cols(); ++c) {
      if (c) f << ",";
      const double v = ds.design(i, c);
      f << (std::isnan(v) ? std::string("nan") : fmt_double(v));
    }
    f << "\n";
  }
  f << "data\n";
  for (double v : ds.tensor.data()) f << fmt_double(v) << "\n";
  if (!f) throw io_error("failed writing dataset file " + path);
}

constexpr char kBinMagic[8] = {'T', 'G', 'P', 'B', 'I', 'N', '0', '1'};

void write_u32(std::ofstream& f, uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); }

uint32_t read_u32(std::ifstream& f, const std::string& path) {
  uint32_t v = 0;
  if (!f.read(reinterpret_cast<char*>(&v), 4)) throw io_error(path + ": truncated binary dataset");
  return v;
}

Dataset read_dataset_bin(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot read dataset file " + path);
  char magic[8];
  if (!f.read(magic, 8) || std::memcmp(magic, kBinMagic, 8) != 0)
    throw validation_error(path + ": not a tensorgp binary dataset (bad magic)");
  const uint32_t k = read_u32(f, path);
  if (k == 0 || k > 16) throw validation_error(path + ": implausible tensor order");
  std::vector<int> dims(k);
  for (auto& d : dims) d = static_cast<int>(read_u32(f, path));
  const uint32_t d = read_u32(f, path);
  const uint32_t meta_len = read_u32(f, path);

  Dataset ds;
  if (meta_len > 0) {
    std::string meta(meta_len, '\0');
    if (!f.read(meta.data(), meta_len)) throw io_error(path + ": truncated meta block");
    for (const auto& line : split(meta, '\n')) {
      auto eq = line.find('=');
      if (eq != std::string::npos) ds.meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  const int n = dims.back();
  ds.design = Matrix(n, static_cast<int>(d));
  if (!f.read(reinterpret_cast<char*>(ds.design.data().data()),
              static_cast<std::streamsize>(sizeof(double)) * n * d))
    throw io_error(path + ": truncated design-point table");
  size_t total = 1;
  for (int m : dims) total *= static_cast<size_t>(m);
  std::vector<double> body(total);
  if (!f.read(reinterpret_cast<char*>(body.data()),
              static_cast<std::streamsize>(sizeof(double) * total)))
    throw io_error(path + ": truncated data block");
  ds.tensor = TensorK(dims, std::move(body));
  ds.validate();
  return ds;
}

void write_dataset_bin(const Dataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot write dataset file " + path);
  f.write(kBinMagic, 8);
  write_u32(f, static_cast<uint32_t>(ds.tensor.order()));
  for (int j = 0; j < ds.tensor.order(); ++j)
    write_u32(f, static_cast<uint32_t>(ds.tensor.dim(j)));
  write_u32(f, static_cast<uint32_t>(ds.design.cols()));
  std::string meta;
  for (const auto& [k, v] : ds.meta) meta += k + "=" + v + "\n";
  write_u32(f, static_cast<uint32_t>(meta.size()));
  f.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  f.write(reinterpret_cast<const char*>(ds.design.data().data()),
          static_cast<std::streamsize>(sizeof(double)) * ds.design.rows() * ds.design.cols());
  f.write(reinterpret_cast<const char*>(ds.tensor.data().data()),
          static_cast<std::streamsize>(sizeof(double) * ds.tensor.size()));
  if (!f) throw io_error("failed writing dataset file " + path);
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  return has_suffix(path, ".bin") ? read_dataset_bin(path) : read_dataset_csv(path);
}

void write_dataset(const Dataset& ds, const std::string& path) {
  ds.validate();
  if (has_suffix(path, ".bin"))
    write_dataset_bin(ds, path);
  else
    write_dataset_csv(ds, path);
}

void split_last_slice(const Dataset& ds, Dataset& train, Dataset& test) {
  const int k = ds.tensor.order();
  const int n = ds.tensor.dim(k - 1);
  if (n < 2) throw validation_error("split_last_slice: need at least 2 slices");

  std::vector<int> tdims = ds.tensor.dims();
  tdims[k - 1] = n - 1;
  train.tensor = TensorK(tdims);
  for (int i = 0; i < n - 1; ++i)
    set_slice(train.tensor, {k - 1, i}, get_slice(ds.tensor, {k - 1, i}));
  train.design = Matrix(n - 1, ds.design.cols());
  for (int i = 0; i < n - 1; ++i)
    for (int c = 0; c < ds.design.cols(); ++c) train.design(i, c) = ds.design(i, c);
  train.meta = ds.meta;

  std::vector<int> sdims = ds.tensor.dims();
  sdims[k - 1] = 1;
  test.tensor = TensorK(sdims, get_slice(ds.tensor, {k - 1, n - 1}).data());
  test.design = Matrix(1, ds.design.cols(), std::numeric_limits<double>::quiet_NaN());
  test.meta = ds.meta;
}

}  // namespace tgp
